//! Primal-dual circle packing of planar graphs.
//!
//! Given a planar triangulation with a chosen outer face, computes radii and
//! positions for one circle per vertex and one per bounded face so that
//! primal circles are tangent along primal edges, dual circles along dual
//! edges, and each primal/dual pair crosses orthogonally; the outer face is
//! normalized to an equilateral triangle with unit inscribed circle. General
//! 2-connected plane graphs are handled by star-triangulating first and
//! discarding the helper circles afterwards.
//!
//! Radii come from minimizing a smooth strictly convex potential over
//! log-radii ([`objective`], [`solver`]); positions from a kite traversal of
//! the vertex-face incidence structure ([`layout`]); [`verify`] re-checks the
//! result geometrically. File formats, drivers, and rendering live in the
//! companion `circlepack-cli` crate.

pub mod kernel;
pub mod angle_graph;
pub mod layout;
pub mod linsolve;
pub mod objective;
pub mod plane_graph;
pub mod solver;
pub mod verify;
