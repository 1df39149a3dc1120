//! Instance files: a plane graph with its embedding, on disk.
//!
//! The canonical format is JSON (`circlepack-instance/1`): vertex labels,
//! one counterclockwise adjacency list per vertex, and the outer face as a
//! vertex cycle. A whitespace text format is accepted for hand-written
//! fixtures and is detected by the absence of a leading `{`:
//!
//! ```text
//! # comment
//! 4              vertex count
//! 1 3 2          counterclockwise neighbors of vertex 0
//! 2 3 0          ... of vertex 1
//! 0 3 1
//! 2 0 1
//! outer 0 1 2
//! ```
//!
//! Text instances get their indices as labels. Parsing always ends in full
//! graph validation, so a file that parses yields a usable embedding.

use circlepack::plane_graph::{build_faces, find_face, GraphError, PlaneGraph, Vertex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const INSTANCE_FORMAT: &str = "circlepack-instance/1";

/// On-disk shape of the JSON instance format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format: String,
    pub labels: Vec<String>,
    /// Counterclockwise neighbor list per vertex, indices into `labels`.
    pub rotations: Vec<Vec<Vertex>>,
    /// Outer face as a vertex cycle.
    pub outer: Vec<Vertex>,
    /// Optional assertion; when present and true, parsing fails unless the
    /// graph really is a triangulation.
    #[serde(default)]
    pub triangulation: Option<bool>,
}

/// A parsed and validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: PlaneGraph,
    pub outer: Vec<Vertex>,
    pub labels: Vec<String>,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error("unsupported format id {found:?} (expected {INSTANCE_FORMAT:?})")]
    Format { found: String },
    #[error("{0} labels for {1} vertices")]
    LabelCount(usize, usize),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("outer cycle {0:?} is not a face of the embedding")]
    OuterNotAFace(Vec<Vertex>),
    #[error("instance declares a triangulation but face {0} has {1} sides")]
    NotATriangulation(usize, usize),
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let file = if text.trim_start().starts_with('{') {
        serde_json::from_str::<InstanceFile>(text)?
    } else {
        parse_text(text)?
    };
    validate(file)
}

fn parse_text(text: &str) -> Result<InstanceFile, InstanceError> {
    let fail = |line: usize, message: String| InstanceError::Text { line, message };
    // meaningful lines with their 1-based source line numbers
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, head) = lines.next().ok_or_else(|| fail(1, "empty instance".into()))?;
    let n: usize =
        head.parse().map_err(|_| fail(ln, format!("expected a vertex count, got {head:?}")))?;

    let mut rotations = Vec::with_capacity(n);
    for v in 0..n {
        let (ln, line) =
            lines.next().ok_or_else(|| fail(ln, format!("missing adjacency list {v} of {n}")))?;
        let row: Result<Vec<Vertex>, _> = line.split_whitespace().map(str::parse).collect();
        rotations.push(row.map_err(|_| fail(ln, format!("bad adjacency entry in {line:?}")))?);
    }

    let (ln, line) = lines.next().ok_or_else(|| fail(ln, "missing `outer` line".into()))?;
    let outer = line
        .strip_prefix("outer")
        .ok_or_else(|| fail(ln, format!("expected `outer v0 v1 ...`, got {line:?}")))?;
    let outer: Vec<Vertex> = outer
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| fail(ln, format!("bad outer cycle in {line:?}")))?;
    if let Some((ln, line)) = lines.next() {
        return Err(fail(ln, format!("trailing content {line:?}")));
    }

    Ok(InstanceFile {
        format: INSTANCE_FORMAT.to_owned(),
        labels: (0..n).map(|v| v.to_string()).collect(),
        rotations,
        outer,
        triangulation: None,
    })
}

fn validate(file: InstanceFile) -> Result<Instance, InstanceError> {
    if file.format != INSTANCE_FORMAT {
        return Err(InstanceError::Format { found: file.format });
    }
    if file.labels.len() != file.rotations.len() {
        return Err(InstanceError::LabelCount(file.labels.len(), file.rotations.len()));
    }
    let mut seen = std::collections::HashSet::new();
    for label in &file.labels {
        if !seen.insert(label.as_str()) {
            return Err(InstanceError::DuplicateLabel(label.clone()));
        }
    }
    let graph = PlaneGraph::new(file.rotations)?;
    let dual = build_faces(&graph)?;
    if find_face(&graph, &dual, &file.outer).is_none() {
        return Err(InstanceError::OuterNotAFace(file.outer));
    }
    if file.triangulation == Some(true) {
        if let Some((f, walk)) = dual.faces.iter().enumerate().find(|(_, w)| w.len() != 3) {
            return Err(InstanceError::NotATriangulation(f, walk.len()));
        }
    }
    Ok(Instance { graph, outer: file.outer, labels: file.labels })
}

/// Instance file for an in-memory graph, labels defaulting to the indices.
pub fn instance_file(graph: &PlaneGraph, outer: &[Vertex], labels: Option<Vec<String>>) -> InstanceFile {
    let n = graph.n_vertices();
    InstanceFile {
        format: INSTANCE_FORMAT.to_owned(),
        labels: labels.unwrap_or_else(|| (0..n).map(|v| v.to_string()).collect()),
        rotations: graph.rotations().to_vec(),
        outer: outer.to_vec(),
        triangulation: None,
    }
}

pub fn serialize_instance(file: &InstanceFile) -> String {
    let mut out = crate::solution::to_json_17(file);
    out.push('\n');
    out
}
