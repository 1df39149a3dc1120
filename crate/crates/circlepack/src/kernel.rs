//! Scalar kernel of the packing potential.
//!
//! `value(z)` is the antiderivative of `arctan(e^t)`, i.e. the inverse tangent
//! integral `Ti2(e^z)`. The potential minimized by the solver is a sum of this
//! kernel over edge log-radius differences, so `slope` and `curvature` are the
//! pieces the gradient and Hessian are assembled from.
//!
//! Evaluation strategy for `value`:
//! - `z >= 0` reduces to `z < 0` through `Ti2(y) = (pi/2) ln y + Ti2(1/y)`,
//!   i.e. `value(z) = (pi/2) z + value(-z)`.
//! - `|z| <= 0.5` uses the Maclaurin series of `Ti2(e^z)` (the alternating
//!   `Ti2` series degenerates as `e^z -> 1`).
//! - `z < -0.5` uses the alternating series `Ti2(y) = sum (-1)^k y^(2k+1) /
//!   (2k+1)^2` with `y = e^z < 1`.

// Table entries keep their full decimal expansions even past f64 precision.
#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Catalan's constant: `value(0) = Ti2(1)`.
pub const CATALAN: f64 = 0.915_965_594_177_219_0;

/// Maclaurin coefficients of `Ti2(e^z) - CATALAN - (pi/4) z` in `z^(2n+2)`,
/// `n = 0..`. These are `E_2n / (2 (2n)! (2n+1) (2n+2))` with `E_2n` the Euler
/// numbers; the tail after n = 15 is below 2e-19 for `|z| <= 0.5`.
const SECH_SERIES: [f64; 16] = [
    0.25,
    -0.020833333333333333,
    0.0034722222222222222,
    -0.00075644841269841270,
    0.00019083443562610229,
    -5.2735731989204211e-5,
    1.5501364862723990e-5,
    -4.7642064482600610e-6,
    1.5144002081330422e-6,
    -4.9424096559551908e-7,
    1.6475575997616517e-7,
    -5.5886093186322939e-8,
    1.9234890468814806e-8,
    -6.7025725671772661e-9,
    2.3605016780785634e-9,
    -8.3901966488307862e-10,
];

/// `Ti2(e^z)`, full f64 accuracy for any finite argument.
pub fn value(z: f64) -> f64 {
    if z > 0.0 {
        FRAC_PI_2 * z + value_nonpositive(-z)
    } else {
        value_nonpositive(z)
    }
}

fn value_nonpositive(z: f64) -> f64 {
    debug_assert!(z <= 0.0);
    if z >= -0.5 {
        let z2 = z * z;
        let mut acc = 0.0;
        for &c in SECH_SERIES.iter().rev() {
            acc = acc * z2 + c;
        }
        CATALAN + FRAC_PI_4 * z + acc * z2
    } else {
        // Alternating Ti2 series in y = e^z; y < 0.607 so ~35 terms suffice.
        let y = z.exp();
        let y2 = y * y;
        let mut term = y;
        let mut k = 0u32;
        let mut acc = 0.0;
        loop {
            let odd = (2 * k + 1) as f64;
            let contrib = term / (odd * odd);
            acc += if k % 2 == 0 { contrib } else { -contrib };
            term *= y2;
            k += 1;
            if contrib <= f64::EPSILON * acc || term == 0.0 {
                break;
            }
        }
        acc
    }
}

/// Derivative `arctan(e^z)`, overflow-guarded for large `z`.
pub fn slope(z: f64) -> f64 {
    if z > 0.0 {
        FRAC_PI_2 - (-z).exp().atan()
    } else {
        z.exp().atan()
    }
}

/// Second derivative `e^z / (e^2z + 1) = 1 / (2 cosh z)`, evaluated as
/// `e^-|z| / (1 + e^-2|z|)` so it underflows gracefully instead of
/// overflowing.
pub fn curvature(z: f64) -> f64 {
    let e = (-z.abs()).exp();
    e / (1.0 + e * e)
}
