//! The reduced vertex-face incidence graph of a triangulation.
//!
//! For a triangulation G with outer face (s1, s2, s3), this graph H has one
//! vertex per vertex of G (same ids) and one per bounded face, with an edge
//! for each incidence. The outer face is omitted. Radii are computed per
//! H-vertex; the three outer vertices are pinned. H inherits a rotation
//! system from the embedding, its bounded faces are the quadrilaterals
//! (u, f, v, g) whose diagonals are a primal edge {u, v} and its dual
//! {f, g}, and its outer face is the 6-cycle (s1, t1, s2, t2, s3, t3) where
//! t_i is the bounded face sharing edge {s_i, s_i+1} with the outer face.

use crate::plane_graph::{build_faces, DualGraph, FaceId, GraphError, PlaneGraph, Vertex};

#[derive(Debug, Clone)]
pub struct AngleGraph {
    /// H itself, as a plane graph: ids `0..n_primal` are vertices of G,
    /// the rest bounded faces of G (in face-id order).
    pub graph: PlaneGraph,
    pub n_primal: usize,
    /// H id of each face of G (None for the outer face).
    pub h_of_face: Vec<Option<Vertex>>,
    /// Original face id of each H face-vertex, indexed by `h - n_primal`.
    pub face_of_h: Vec<FaceId>,
    /// Outer cycle of G in counterclockwise drawn order; these three
    /// vertices have pinned radius sqrt(3).
    pub pinned: [Vertex; 3],
    /// t_i: H id of the bounded face sharing edge `{pinned[i], pinned[i+1]}`
    /// with the outer face. Not necessarily distinct (the triangle
    /// triangulation has a single bounded face).
    pub boundary_faces: [Vertex; 3],
    /// Bounded faces of H in counterclockwise walk order: (u, f, v, g) with
    /// u < v primal; walking counterclockwise around the crossing point of
    /// {u, v} and its dual puts the face left of (v, u) right after u, so
    /// f = face left of (v, u) and g = face left of (u, v).
    pub quads: Vec<[Vertex; 4]>,
    /// Free (non-pinned) H vertices, ascending; the coordinate order of the
    /// optimization.
    pub free: Vec<Vertex>,
    /// H id -> position in `free`, None for pinned.
    pub free_index: Vec<Option<usize>>,
}

impl AngleGraph {
    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    pub fn is_pinned(&self, h: Vertex) -> bool {
        self.free_index[h].is_none()
    }

    pub fn is_primal(&self, h: Vertex) -> bool {
        h < self.n_primal
    }
}

/// Builds the incidence structure for a triangulation with the given outer
/// face. Rotations: around a vertex of G, the incident bounded faces in
/// rotation order (anchored at t_i for the pinned vertices); around a face,
/// its boundary in walk order.
pub fn build_angle_graph(
    g: &PlaneGraph,
    dual: &DualGraph,
    outer: FaceId,
) -> Result<AngleGraph, GraphError> {
    if let Some(f) = (0..dual.n_faces()).find(|&f| dual.face_size(f) != 3) {
        return Err(GraphError::NotATriangulation { face: f, size: dual.face_size(f) });
    }
    let n = g.n_vertices();
    let outer_walk = &dual.faces[outer];
    // The outer walk runs clockwise; reversing gives the drawn
    // counterclockwise order (s1, s2, s3).
    let pinned = [outer_walk[0], outer_walk[2], outer_walk[1]];

    let mut h_of_face = vec![None; dual.n_faces()];
    let mut face_of_h = Vec::with_capacity(dual.n_faces() - 1);
    for f in 0..dual.n_faces() {
        if f != outer {
            h_of_face[f] = Some(n + face_of_h.len());
            face_of_h.push(f);
        }
    }
    let boundary_faces = [0, 1, 2].map(|i| {
        let e = g
            .directed_edge(pinned[i], pinned[(i + 1) % 3])
            .expect("outer cycle edges exist");
        h_of_face[dual.face_left[e]].expect("face inside the outer cycle is bounded")
    });

    let mut rotations: Vec<Vec<Vertex>> = Vec::with_capacity(n + face_of_h.len());
    for v in 0..n {
        let mut fan: Vec<Vertex> = g
            .out_edges(v)
            .filter_map(|e| h_of_face[dual.face_left[e]])
            .collect();
        if let Some(i) = (0..3).find(|&i| pinned[i] == v) {
            let t = boundary_faces[i];
            let at = fan.iter().position(|&h| h == t).expect("t_i is incident to s_i");
            fan.rotate_left(at);
        }
        rotations.push(fan);
    }
    for &f in &face_of_h {
        rotations.push(dual.faces[f].clone());
    }
    let graph = PlaneGraph::new(rotations)?;
    let h_dual = build_faces(&graph)?;

    let outer_h = {
        let e = graph
            .directed_edge(boundary_faces[0], pinned[0])
            .expect("t1 is adjacent to s1 in H");
        h_dual.face_left[e]
    };
    let mut quads = Vec::with_capacity(h_dual.n_faces() - 1);
    for (f, walk) in h_dual.faces.iter().enumerate() {
        if f == outer_h {
            continue;
        }
        debug_assert_eq!(walk.len(), 4, "bounded faces of H are quadrilaterals");
        let at = match (walk[0] < n, walk[0] < walk[2]) {
            (true, true) => 0,
            (true, false) => 2,
            _ => {
                if walk[1] < walk[3] {
                    1
                } else {
                    3
                }
            }
        };
        quads.push([walk[at], walk[(at + 1) % 4], walk[(at + 2) % 4], walk[(at + 3) % 4]]);
    }
    quads.sort_unstable();

    let mut free_index = vec![None; graph.n_vertices()];
    let mut free = Vec::with_capacity(graph.n_vertices() - 3);
    for h in 0..graph.n_vertices() {
        if !pinned.contains(&h) {
            free_index[h] = Some(free.len());
            free.push(h);
        }
    }

    Ok(AngleGraph {
        graph,
        n_primal: n,
        h_of_face,
        face_of_h,
        pinned,
        boundary_faces,
        quads,
        free,
        free_index,
    })
}

#[cfg(test)]
pub(crate) fn angle_graph_of(g: &PlaneGraph, outer_cycle: &[Vertex]) -> AngleGraph {
    let dual = build_faces(g).unwrap();
    let outer = crate::plane_graph::find_face(g, &dual, outer_cycle).unwrap();
    build_angle_graph(g, &dual, outer).unwrap()
}
