//! Plane graphs as rotation systems, their faces, and star-triangulation.
//!
//! # Conventions (fixed once; everything downstream relies on them)
//!
//! - `rotations[v]` lists the neighbors of `v` in counterclockwise order as
//!   drawn in the plane.
//! - Face walks follow "reverse, then counterclockwise predecessor": after the
//!   directed edge (u, v) comes (v, w) where w immediately precedes u in v's
//!   rotation. Each face then lies to the LEFT of its directed edges, bounded
//!   faces are walked counterclockwise, and the outer face clockwise.
//!
//! A directed edge (half-edge) is identified by a dense index; `twin` swaps
//! the two directions of an undirected edge.

use std::collections::HashMap;

use thiserror::Error;

/// Vertex handle: index into the rotation table.
pub type Vertex = usize;
/// Face handle: index into [`DualGraph::faces`].
pub type FaceId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("plane graphs need at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("self loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {v} lists neighbor {w} more than once (parallel edge)")]
    DuplicateNeighbor { v: Vertex, w: Vertex },
    #[error("vertex {v} lists neighbor {w} but not vice versa")]
    AsymmetricAdjacency { v: Vertex, w: Vertex },
    #[error("graph is disconnected (vertex {0} unreachable from 0)")]
    Disconnected(Vertex),
    #[error("rotation system is not planar: V={vertices} E={edges} F={faces} violates Euler's formula")]
    EulerCheckFailed { vertices: usize, edges: usize, faces: usize },
    #[error("outer face {0:?} does not match any face walk")]
    OuterFaceNotFound(Vec<Vertex>),
    #[error("outer face has {0} sides, expected a triangle")]
    OuterFaceNotTriangle(usize),
    #[error("face {face} has {size} sides; input is not a triangulation")]
    NotATriangulation { face: FaceId, size: usize },
    #[error("edge ({u}, {v}) is a bridge; input is not 2-connected")]
    Bridge { u: Vertex, v: Vertex },
    #[error("vertex {0} is a cut vertex; input is not 2-connected")]
    CutVertex(Vertex),
}

/// A connected simple graph embedded in the plane, stored as one
/// counterclockwise neighbor list per vertex plus derived half-edge tables.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    rotations: Vec<Vec<Vertex>>,
    /// Directed edge e lives at index `offsets[tail] + k` where k is the
    /// position of its head in the tail's rotation.
    offsets: Vec<usize>,
    tails: Vec<Vertex>,
    heads: Vec<Vertex>,
    twin: Vec<usize>,
    /// (tail, head) -> directed edge index.
    index: HashMap<(Vertex, Vertex), usize>,
}

impl PlaneGraph {
    /// Validates structure (simple, symmetric, connected) and builds the
    /// half-edge tables. Planarity of the rotation system itself is only
    /// established by the Euler check in [`build_faces`].
    pub fn new(rotations: Vec<Vec<Vertex>>) -> Result<Self, GraphError> {
        let n = rotations.len();
        if n < 3 {
            return Err(GraphError::TooFewVertices(n));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut tails = Vec::new();
        let mut heads = Vec::new();
        let mut index = HashMap::new();
        offsets.push(0);
        for (v, rot) in rotations.iter().enumerate() {
            for &w in rot {
                if w == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if w >= n {
                    return Err(GraphError::AsymmetricAdjacency { v, w });
                }
                let e = heads.len();
                tails.push(v);
                heads.push(w);
                if index.insert((v, w), e).is_some() {
                    return Err(GraphError::DuplicateNeighbor { v, w });
                }
            }
            offsets.push(heads.len());
        }
        let mut twin = vec![usize::MAX; heads.len()];
        for e in 0..heads.len() {
            match index.get(&(heads[e], tails[e])) {
                Some(&r) => twin[e] = r,
                None => {
                    return Err(GraphError::AsymmetricAdjacency { v: tails[e], w: heads[e] })
                }
            }
        }
        let g = PlaneGraph { rotations, offsets, tails, heads, twin, index };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let n = self.n_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.rotations[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(GraphError::Disconnected(v)),
            None => Ok(()),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.rotations.len()
    }

    /// Undirected edge count.
    pub fn n_edges(&self) -> usize {
        self.heads.len() / 2
    }

    pub fn n_directed_edges(&self) -> usize {
        self.heads.len()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotations[v].len()
    }

    /// Counterclockwise neighbor list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rotations
    }

    pub fn tail(&self, e: usize) -> Vertex {
        self.tails[e]
    }

    pub fn head(&self, e: usize) -> Vertex {
        self.heads[e]
    }

    pub fn twin(&self, e: usize) -> usize {
        self.twin[e]
    }

    /// Directed edge index for (u, v), if adjacent.
    pub fn directed_edge(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.index.get(&(u, v)).copied()
    }

    /// Directed edges leaving `v`, in rotation order.
    pub fn out_edges(&self, v: Vertex) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// The next directed edge along the face to the left of `e`: reverse,
    /// then counterclockwise predecessor around the head.
    pub fn next_in_face(&self, e: usize) -> usize {
        let v = self.heads[e];
        let deg = self.degree(v);
        let k = self.twin[e] - self.offsets[v];
        self.offsets[v] + (k + deg - 1) % deg
    }
}

/// Faces of a plane graph and the induced dual structure. Primal undirected
/// edges and dual edges are in bijection via [`DualGraph::dual_pair`].
#[derive(Debug, Clone)]
pub struct DualGraph {
    /// Vertex walk of each face (counterclockwise for bounded faces).
    pub faces: Vec<Vec<Vertex>>,
    /// Directed edge index -> face on its left.
    pub face_left: Vec<FaceId>,
    /// Canonical undirected edge list: (u, v) with u < v, sorted.
    pub edges: Vec<(Vertex, Vertex)>,
    /// Per undirected edge, the dual endpoints (face left of u->v, face left
    /// of v->u).
    pub dual_pairs: Vec<(FaceId, FaceId)>,
}

impl DualGraph {
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_size(&self, f: FaceId) -> usize {
        self.faces[f].len()
    }

    /// Face to the left of directed edge (u, v).
    pub fn face_of(&self, g: &PlaneGraph, u: Vertex, v: Vertex) -> Option<FaceId> {
        g.directed_edge(u, v).map(|e| self.face_left[e])
    }

    /// Dual endpoints of primal edge {u, v}.
    pub fn dual_pair(&self, k: usize) -> (FaceId, FaceId) {
        self.dual_pairs[k]
    }
}

/// Traces every face walk, returning the dual structure. Fails the Euler
/// check `V - E + F = 2` when the rotation system is not a sphere embedding.
pub fn build_faces(g: &PlaneGraph) -> Result<DualGraph, GraphError> {
    let m = g.n_directed_edges();
    let mut face_left = vec![usize::MAX; m];
    let mut faces = Vec::new();
    for start in 0..m {
        if face_left[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut walk = Vec::new();
        let mut e = start;
        loop {
            face_left[e] = id;
            walk.push(g.tail(e));
            e = g.next_in_face(e);
            if e == start {
                break;
            }
        }
        faces.push(walk);
    }
    let (v, ne, nf) = (g.n_vertices(), g.n_edges(), faces.len());
    if v + nf != ne + 2 {
        return Err(GraphError::EulerCheckFailed { vertices: v, edges: ne, faces: nf });
    }
    let mut edges = Vec::with_capacity(ne);
    for e in 0..m {
        let (u, w) = (g.tail(e), g.head(e));
        if u < w {
            edges.push((u, w));
        }
    }
    edges.sort_unstable();
    let dual_pairs = edges
        .iter()
        .map(|&(u, w)| {
            let e = g.directed_edge(u, w).expect("edge came from the graph");
            (face_left[e], face_left[g.twin(e)])
        })
        .collect();
    Ok(DualGraph { faces, face_left, edges, dual_pairs })
}

/// Locates the face whose walk matches `cycle` up to rotation and reversal.
pub fn find_face(g: &PlaneGraph, dual: &DualGraph, cycle: &[Vertex]) -> Option<FaceId> {
    if cycle.len() < 3 {
        return None;
    }
    // A face of that walk must have (cycle[0], cycle[1]) or its reverse as a
    // boundary edge; checking those two candidates suffices.
    for (a, b) in [(cycle[0], cycle[1]), (cycle[1], cycle[0])] {
        if let Some(f) = dual.face_of(g, a, b) {
            if cycles_equal(&dual.faces[f], cycle) {
                return Some(f);
            }
        }
    }
    None
}

fn cycles_equal(a: &[Vertex], b: &[Vertex]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    let rev: Vec<Vertex> = b.iter().rev().copied().collect();
    (0..n).any(|s| (0..n).all(|i| a[(s + i) % n] == b[i]))
        || (0..n).any(|s| (0..n).all(|i| a[(s + i) % n] == rev[i]))
}

/// True when every face (outer included) is a triangle. Simplicity and
/// connectivity are already guaranteed by [`PlaneGraph::new`].
pub fn is_triangulation(dual: &DualGraph) -> bool {
    dual.faces.iter().all(|f| f.len() == 3)
}

/// Rejects inputs that are not 2-connected: a face walk using both directions
/// of an edge exposes a bridge, a face walk revisiting a vertex a cut vertex.
pub fn check_two_connected(dual: &DualGraph) -> Result<(), GraphError> {
    for walk in &dual.faces {
        let n = walk.len();
        for i in 0..n {
            let (u, v) = (walk[i], walk[(i + 1) % n]);
            for j in i + 1..n {
                let (x, y) = (walk[j], walk[(j + 1) % n]);
                if (x, y) == (v, u) {
                    return Err(GraphError::Bridge { u: u.min(v), v: u.max(v) });
                }
            }
        }
        let mut sorted: Vec<Vertex> = walk.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::CutVertex(w[0]));
        }
    }
    Ok(())
}

/// Result of [`star_triangulate`]: original vertices keep their ids; each
/// face of size > 3 gained one star vertex (ids from `n_original` up, in
/// face-id order).
#[derive(Debug, Clone)]
pub struct Starred {
    pub graph: PlaneGraph,
    /// Outer face of the triangulation, as a vertex cycle.
    pub outer: Vec<Vertex>,
    pub n_original: usize,
    /// Per original face, the star vertex added inside it (None for
    /// triangles).
    pub star_of_face: Vec<Option<Vertex>>,
}

/// Triangulates a 2-connected plane graph by placing one vertex inside every
/// face of size > 3 (the outer face included) and joining it to the face's
/// boundary. If the outer face was starred, the new outer face is the first
/// triangle along the original outer walk, which keeps two original vertices
/// on the outer cycle.
pub fn star_triangulate(
    g: &PlaneGraph,
    dual: &DualGraph,
    outer: FaceId,
) -> Result<Starred, GraphError> {
    check_two_connected(dual)?;
    let n = g.n_vertices();
    let mut rotations = g.rotations().to_vec();
    let mut star_of_face = vec![None; dual.n_faces()];
    let mut next = n;
    for (f, walk) in dual.faces.iter().enumerate() {
        let k = walk.len();
        if k <= 3 {
            continue;
        }
        let star = next;
        next += 1;
        star_of_face[f] = Some(star);
        rotations.push(walk.clone());
        for i in 0..k {
            let w = walk[i];
            let enter = walk[(i + k - 1) % k];
            let leave = walk[(i + 1) % k];
            // The corner of this face at w sits between `leave` and `enter`
            // (consecutive counterclockwise); the star vertex splits it.
            let pos = rotations[w]
                .iter()
                .position(|&x| x == enter)
                .expect("walk vertex adjacency");
            debug_assert_eq!(rotations[w][(pos + rotations[w].len() - 1) % rotations[w].len()], leave);
            rotations[w].insert(pos, star);
        }
    }
    let outer_cycle = match star_of_face[outer] {
        None => dual.faces[outer].clone(),
        Some(star) => {
            let walk = &dual.faces[outer];
            vec![walk[0], walk[1], star]
        }
    };
    let graph = PlaneGraph::new(rotations)?;
    Ok(Starred { graph, outer: outer_cycle, n_original: n, star_of_face })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Triangle: smallest triangulation, faces = inner + outer.
    pub fn triangle() -> PlaneGraph {
        PlaneGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    /// K4 drawn with vertex 3 inside triangle (0, 1, 2); outer walk (0, 2, 1).
    pub fn k4() -> PlaneGraph {
        PlaneGraph::new(vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![2, 0, 1]]).unwrap()
    }

    /// Cube graph: outer square (0,1,2,3), inner square (4,5,6,7), spokes.
    pub fn cube() -> PlaneGraph {
        PlaneGraph::new(vec![
            vec![1, 4, 3],
            vec![2, 5, 0],
            vec![3, 6, 1],
            vec![0, 7, 2],
            vec![5, 7, 0],
            vec![6, 4, 1],
            vec![2, 7, 5],
            vec![6, 3, 4],
        ])
        .unwrap()
    }

    /// 4-cycle; both faces are quadrilaterals.
    pub fn c4() -> PlaneGraph {
        PlaneGraph::new(vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap()
    }

    /// Icosahedron: 12 vertices, 30 edges, 20 triangular faces. Poles 0 and
    /// 11, upper ring 1-5, lower ring 6-10.
    pub fn icosahedron() -> PlaneGraph {
        PlaneGraph::new(vec![
            vec![1, 2, 3, 4, 5],
            vec![0, 5, 10, 6, 2],
            vec![0, 1, 6, 7, 3],
            vec![0, 2, 7, 8, 4],
            vec![0, 3, 8, 9, 5],
            vec![0, 4, 9, 10, 1],
            vec![2, 1, 10, 11, 7],
            vec![3, 2, 6, 11, 8],
            vec![4, 3, 7, 11, 9],
            vec![5, 4, 8, 11, 10],
            vec![1, 5, 9, 11, 6],
            vec![10, 9, 8, 7, 6],
        ])
        .unwrap()
    }
}
