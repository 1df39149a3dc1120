//! Solution files: circles, certification report, and provenance.
//!
//! Solutions are JSON (`circlepack-solution/1`). Every float is written
//! with exactly 17 significant digits in scientific notation, which is
//! enough to reproduce any f64 bit-for-bit on parse and makes the output a
//! pure function of the input: two runs with the same instance and config
//! produce byte-identical files.

use circlepack::solver::{LinearSolver, Mode};
use circlepack::verify::PackingReport;
use serde::{Deserialize, Serialize};

pub const SOLUTION_FORMAT: &str = "circlepack-solution/1";

/// One circle of the packing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub label: String,
    pub radius: f64,
    pub x: f64,
    pub y: f64,
}

/// Configuration echo so a solution can be reproduced from its own file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub instance_format: String,
    pub command: String,
    pub mode: Mode,
    pub linear_solver: LinearSolver,
    pub tol: f64,
    pub max_iter: usize,
    /// Edge-classification tolerance the layout ran with.
    pub layout_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format: String,
    /// Circles of the input graph's vertices.
    pub primal: Vec<Circle>,
    /// Circles of the bounded faces; empty when the reduction discards
    /// them (`pack`).
    pub dual: Vec<Circle>,
    /// Circle of the unbounded face: the unit circle inscribed in the
    /// outer triangle.
    pub outer_circle: Circle,
    pub report: PackingReport,
    pub provenance: Provenance,
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn serialize_solution(sol: &SolutionFile) -> String {
    let mut out = to_json_17(sol);
    out.push('\n');
    out
}

/// Serialize to JSON with every f64 printed as 17 significant digits.
pub fn to_json_17<T: Serialize>(value: &T) -> String {
    struct SigFig17;
    impl serde_json::ser::Formatter for SigFig17 {
        fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
        where
            W: ?Sized + std::io::Write,
        {
            write!(writer, "{value:.16e}")
        }
    }

    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFig17);
    value.serialize(&mut ser).expect("serialization cannot fail");
    String::from_utf8(buf).expect("serializer emits UTF-8")
}
