//! Test-instance generators.
//!
//! Stacked triangulations start from K4 and repeatedly drop a new vertex
//! into a bounded face, joining it to the three corners. The random
//! variant picks the face uniformly; the deep variant always splits the
//! newest face, which drives the radius spread up exponentially with
//! depth and stresses the solver's dependence on log R. A fixed seed
//! reproduces the instance bit for bit.
//!
//! The 2-connected generator erodes a stacked triangulation by deleting
//! interior edges whose two sides are distinct faces meeting only along
//! that edge, which keeps the graph 2-connected and the embedding simple.

use circlepack::plane_graph::{build_faces, find_face, PlaneGraph, Vertex};
use rand_chacha::ChaCha8Rng;
use rand::{Rng, SeedableRng};

use crate::instance::Instance;

const K4_ROTATIONS: [&[Vertex]; 4] = [&[1, 3, 2], &[2, 3, 0], &[0, 3, 1], &[2, 0, 1]];
const K4_OUTER: [Vertex; 3] = [0, 1, 2];

/// Counterclockwise walks of K4's bounded faces under the rotations above.
fn k4_bounded_faces() -> Vec<[Vertex; 3]> {
    vec![[0, 1, 3], [1, 2, 3], [0, 3, 2]]
}

struct Stacker {
    rotations: Vec<Vec<Vertex>>,
    /// Bounded faces as counterclockwise corner walks.
    faces: Vec<[Vertex; 3]>,
}

impl Stacker {
    fn new() -> Self {
        Stacker {
            rotations: K4_ROTATIONS.iter().map(|r| r.to_vec()).collect(),
            faces: k4_bounded_faces(),
        }
    }

    /// Split face `f` three ways with a fresh vertex.
    fn stack(&mut self, f: usize) {
        let [a, b, c] = self.faces.swap_remove(f);
        let v = self.rotations.len();
        // around v the corners appear in walk order; around each corner v
        // slides in between the walk-successor and walk-predecessor
        self.rotations.push(vec![a, b, c]);
        for (x, succ, pred) in [(a, b, c), (b, c, a), (c, a, b)] {
            let rot = &mut self.rotations[x];
            let i = rot.iter().position(|&y| y == succ).expect("face corner adjacency");
            debug_assert_eq!(rot[(i + 1) % rot.len()], pred);
            rot.insert(i + 1, v);
        }
        self.faces.push([a, b, v]);
        self.faces.push([b, c, v]);
        self.faces.push([c, a, v]);
    }

    fn finish(self) -> Instance {
        let n = self.rotations.len();
        let graph = PlaneGraph::new(self.rotations).expect("stacking preserves validity");
        Instance {
            graph,
            outer: K4_OUTER.to_vec(),
            labels: (0..n).map(|v| v.to_string()).collect(),
        }
    }
}

/// Random stacked triangulation on `n_v >= 4` vertices.
pub fn generate_stacked(n_v: usize, seed: u64) -> Instance {
    assert!(n_v >= 4, "stacked triangulations start at K4");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Stacker::new();
    while s.rotations.len() < n_v {
        let f = rng.random_range(0..s.faces.len());
        s.stack(f);
    }
    s.finish()
}

/// Stacked triangulation that always splits the newest face.
pub fn generate_stacked_deep(n_v: usize) -> Instance {
    assert!(n_v >= 4, "stacked triangulations start at K4");
    let mut s = Stacker::new();
    while s.rotations.len() < n_v {
        let newest = s.faces.len() - 1;
        s.stack(newest);
    }
    s.finish()
}

/// Random 2-connected plane graph: a stacked triangulation minus up to
/// `deletions` interior edges. Every deletion keeps the outer face intact
/// and merges two faces that share only the deleted edge.
pub fn generate_two_connected(n_v: usize, deletions: usize, seed: u64) -> Instance {
    let mut inst = generate_stacked(n_v, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut removed = 0;
    let mut stale = 0;
    while removed < deletions && stale < 8 * deletions + 32 {
        let g = &inst.graph;
        let e = rng.random_range(0..2 * g.n_edges());
        let (u, w) = (g.tail(e), g.head(e));
        if let Some(rotations) = deletable(&inst, u, w) {
            inst.graph = PlaneGraph::new(rotations).expect("deletion preserves validity");
            removed += 1;
        } else {
            stale += 1;
        }
    }
    inst
}

/// Rotations after deleting {u, w}, when that is safe.
fn deletable(inst: &Instance, u: Vertex, w: Vertex) -> Option<Vec<Vec<Vertex>>> {
    let g = &inst.graph;
    if g.degree(u) <= 2 || g.degree(w) <= 2 {
        return None;
    }
    let dual = build_faces(g).ok()?;
    let outer = find_face(g, &dual, &inst.outer).expect("outer face stays a face");
    let e = g.directed_edge(u, w)?;
    let f1 = dual.face_left[e];
    let f2 = dual.face_left[g.twin(e)];
    if f1 == f2 || f1 == outer || f2 == outer {
        return None;
    }
    // the merged walk is simple iff the two faces meet only along {u, w}
    let shared = dual.faces[f1].iter().filter(|v| dual.faces[f2].contains(v)).count();
    if shared != 2 {
        return None;
    }
    let mut rotations = g.rotations().to_vec();
    rotations[u].retain(|&x| x != w);
    rotations[w].retain(|&x| x != u);
    Some(rotations)
}
