//! Plane cubic graphs stored as rotation systems.
//!
//! A vertex's rotation is the counterclockwise cyclic order of its three
//! neighbours. Faces are traced from darts (directed edges): after arriving at
//! `v` from `u`, leave along the neighbour that follows `u` in the rotation of
//! `v`. Every dart lies on exactly one face and there is no distinguished
//! outer face.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

/// Errors raised while building an embedding from a rotation listing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("vertex {vertex} is not cubic: {reason}")]
    NotCubic { vertex: usize, reason: String },
    #[error("vertex {vertex} lists neighbour {neighbor}, which is out of range")]
    UnknownVertex { vertex: usize, neighbor: usize },
    #[error("vertex {u} lists {v} but {v} does not list {u}")]
    Asymmetric { u: usize, v: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("rotation system is not a sphere embedding: n - m + f = {n} - {m} + {f} != 2")]
    EulerViolation { n: usize, m: usize, f: usize },
}

/// Errors raised when an embedded graph is not a (4,6)-fullerene.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FullereneError {
    #[error("face {face} has length {len}; only squares and hexagons are allowed")]
    WrongFaceSizes { face: usize, len: usize },
    #[error("face {face} repeats a vertex")]
    DegenerateFace { face: usize },
    #[error("expected 6 square faces, found {found}")]
    WrongSquareCount { found: usize },
    #[error("hexagon count {by_faces} disagrees with (n - 8) / 2 = {by_order}")]
    HexagonCountMismatch { by_faces: usize, by_order: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("h = 1 is impossible for a (4,6)-fullerene")]
    ForbiddenH,
    #[error("faces {first} and {second} share {shared} edges")]
    SharedEdgePair { first: usize, second: usize, shared: usize },
}

/// A connected plane cubic graph given by its rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    rotation: Vec<[usize; 3]>,
    edges: Vec<(usize, usize)>,
    // Indexed by dart `3 * v + slot`.
    dart_edge: Vec<usize>,
    dart_face: Vec<usize>,
    faces: Vec<Vec<usize>>,
}

impl EmbeddedGraph {
    /// Builds the embedding from per-vertex counterclockwise neighbour rows.
    pub fn from_rotation<R: AsRef<[usize]>>(listing: &[R]) -> Result<Self, BuildError> {
        let n = listing.len();
        let mut rotation = Vec::with_capacity(n);
        for (v, row) in listing.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != 3 {
                return Err(BuildError::NotCubic {
                    vertex: v,
                    reason: format!("{} neighbours listed", row.len()),
                });
            }
            if let Some(&w) = row.iter().find(|&&w| w >= n) {
                return Err(BuildError::UnknownVertex { vertex: v, neighbor: w });
            }
            if row.contains(&v) {
                return Err(BuildError::NotCubic { vertex: v, reason: "self-loop".into() });
            }
            if row[0] == row[1] || row[1] == row[2] || row[0] == row[2] {
                return Err(BuildError::NotCubic { vertex: v, reason: "repeated neighbour".into() });
            }
            rotation.push([row[0], row[1], row[2]]);
        }
        for (u, row) in rotation.iter().enumerate() {
            for &v in row {
                if !rotation[v].contains(&u) {
                    return Err(BuildError::Asymmetric { u, v });
                }
            }
        }
        if !is_connected(&rotation) {
            return Err(BuildError::Disconnected);
        }

        let mut edges: Vec<(usize, usize)> = rotation
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        edges.sort_unstable();
        let mut dart_edge = vec![0; 3 * n];
        for (u, row) in rotation.iter().enumerate() {
            for (slot, &v) in row.iter().enumerate() {
                let key = (u.min(v), u.max(v));
                dart_edge[3 * u + slot] = edges.binary_search(&key).expect("edge listed");
            }
        }

        const UNSEEN: usize = usize::MAX;
        let mut dart_face = vec![UNSEEN; 3 * n];
        let mut faces = Vec::new();
        for start in 0..3 * n {
            if dart_face[start] != UNSEEN {
                continue;
            }
            let face_id = faces.len();
            let mut walk = Vec::new();
            let mut dart = start;
            loop {
                dart_face[dart] = face_id;
                let (u, slot) = (dart / 3, dart % 3);
                walk.push(u);
                let v = rotation[u][slot];
                let back = slot_of(&rotation[v], u);
                dart = 3 * v + (back + 1) % 3;
                if dart == start {
                    break;
                }
                if dart_face[dart] != UNSEEN {
                    // The successor map is a permutation, so this cannot happen.
                    unreachable!("face tracing re-entered a traced dart");
                }
            }
            faces.push(walk);
        }

        let (m, f) = (edges.len(), faces.len());
        if n + f != m + 2 {
            return Err(BuildError::EulerViolation { n, m, f });
        }
        Ok(EmbeddedGraph { rotation, edges, dart_edge, dart_face, faces })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Counterclockwise neighbour order at `v`.
    pub fn rotation(&self, v: usize) -> [usize; 3] {
        self.rotation[v]
    }

    pub fn rotations(&self) -> &[[usize; 3]] {
        &self.rotation
    }

    pub fn neighbors(&self, v: usize) -> &[usize; 3] {
        &self.rotation[v]
    }

    /// Edges as `(min, max)` pairs in ascending order; edge ids index this slice.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.rotation[u].contains(&v)
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation[u].iter().position(|&w| w == v).map(|slot| self.dart_edge[3 * u + slot])
    }

    /// Faces as closed walks of vertices.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// The face on which the dart `u -> v` lies.
    pub fn face_of_dart(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation[u].iter().position(|&w| w == v).map(|slot| self.dart_face[3 * u + slot])
    }

    /// The three faces around `v`, in rotation order.
    pub fn faces_at(&self, v: usize) -> [usize; 3] {
        [self.dart_face[3 * v], self.dart_face[3 * v + 1], self.dart_face[3 * v + 2]]
    }

    /// Edge ids along the boundary of face `f`, in walk order.
    pub fn face_edges(&self, f: usize) -> Vec<usize> {
        let walk = &self.faces[f];
        (0..walk.len())
            .map(|i| {
                let (u, v) = (walk[i], walk[(i + 1) % walk.len()]);
                self.edge_id(u, v).expect("consecutive face vertices are adjacent")
            })
            .collect()
    }

    /// A copy with vertex `v` renamed to `perm[v]`; rotations keep their order.
    pub fn relabel(&self, perm: &[usize]) -> EmbeddedGraph {
        assert_eq!(perm.len(), self.vertex_count(), "permutation length");
        let mut listing = vec![[0usize; 3]; perm.len()];
        for (v, row) in self.rotation.iter().enumerate() {
            listing[perm[v]] = row.map(|w| perm[w]);
        }
        EmbeddedGraph::from_rotation(&listing).expect("relabelling preserves validity")
    }
}

fn slot_of(row: &[usize; 3], v: usize) -> usize {
    row.iter().position(|&w| w == v).expect("symmetric adjacency")
}

fn is_connected(rotation: &[[usize; 3]]) -> bool {
    if rotation.is_empty() {
        return false;
    }
    let mut seen = vec![false; rotation.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &rotation[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == rotation.len()
}

/// Facts established by [`validate_fullerene`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullereneProfile {
    pub n: usize,
    pub m: usize,
    /// Number of hexagonal faces.
    pub h: usize,
    pub squares: Vec<usize>,
    pub hexagons: Vec<usize>,
    pub bipartition: [Vec<usize>; 2],
}

/// Checks the (4,6)-fullerene axioms and returns the resulting profile.
///
/// Besides face sizes, this verifies `n = 2h + 8`, `m = 3h + 12`, `h != 1`,
/// bipartiteness and that no two faces share more than one edge.
pub fn validate_fullerene(g: &EmbeddedGraph) -> Result<FullereneProfile, FullereneError> {
    let mut squares = Vec::new();
    let mut hexagons = Vec::new();
    for (f, walk) in g.faces().iter().enumerate() {
        match walk.len() {
            4 => squares.push(f),
            6 => hexagons.push(f),
            len => return Err(FullereneError::WrongFaceSizes { face: f, len }),
        }
        let mut sorted = walk.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(FullereneError::DegenerateFace { face: f });
        }
    }
    if squares.len() != 6 {
        return Err(FullereneError::WrongSquareCount { found: squares.len() });
    }
    let (n, m) = (g.vertex_count(), g.edge_count());
    let h = hexagons.len();
    check_hexagon_count(n, m, h)?;

    let bipartition = two_colour(g).ok_or(FullereneError::NotBipartite)?;

    // Two faces share an edge exactly when the edge's two darts lie on them.
    let mut shared: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for &(u, v) in g.edges() {
        let a = g.face_of_dart(u, v).expect("edge");
        let b = g.face_of_dart(v, u).expect("edge");
        *shared.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    if let Some((&(first, second), &count)) = shared.iter().find(|(_, &c)| c >= 2) {
        return Err(FullereneError::SharedEdgePair { first, second, shared: count });
    }

    Ok(FullereneProfile { n, m, h, squares, hexagons, bipartition })
}

/// Cross-checks the face census against the vertex and edge counts.
pub(crate) fn check_hexagon_count(n: usize, m: usize, h: usize) -> Result<(), FullereneError> {
    let by_order = n.saturating_sub(8) / 2;
    if n < 8 || !(n - 8).is_multiple_of(2) || by_order != h || m != 3 * h + 12 {
        return Err(FullereneError::HexagonCountMismatch { by_faces: h, by_order });
    }
    if h == 1 {
        return Err(FullereneError::ForbiddenH);
    }
    Ok(())
}

fn two_colour(g: &EmbeddedGraph) -> Option<[Vec<usize>; 2]> {
    let n = g.vertex_count();
    let mut colour = vec![u8::MAX; n];
    colour[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if colour[v] == u8::MAX {
                colour[v] = 1 - colour[u];
                queue.push_back(v);
            } else if colour[v] == colour[u] {
                return None;
            }
        }
    }
    let mut classes = [Vec::new(), Vec::new()];
    for (v, &c) in colour.iter().enumerate() {
        classes[c as usize].push(v);
    }
    Some(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_listing() -> Vec<[usize; 3]> {
        // Bit-vector cube; the rotation sense flips with vertex parity.
        (0..8usize)
            .map(|v| if v.count_ones() % 2 == 0 { [v ^ 1, v ^ 2, v ^ 4] } else { [v ^ 1, v ^ 4, v ^ 2] })
            .collect()
    }

    #[test]
    fn cube_counts() {
        let g = EmbeddedGraph::from_rotation(&cube_listing()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (8, 12, 6));
        let p = validate_fullerene(&g).unwrap();
        assert_eq!((p.n, p.m, p.h), (8, 12, 0));
        assert_eq!(p.bipartition[0].len(), 4);
    }

    #[test]
    fn every_dart_on_one_face() {
        let g = EmbeddedGraph::from_rotation(&cube_listing()).unwrap();
        let total: usize = g.faces().iter().map(Vec::len).sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn repeated_neighbour_is_not_cubic() {
        let mut rows = cube_listing();
        rows[0] = [1, 1, 2];
        assert!(matches!(
            EmbeddedGraph::from_rotation(&rows),
            Err(BuildError::NotCubic { vertex: 0, .. })
        ));
    }

    #[test]
    fn short_row_is_not_cubic() {
        let rows: Vec<Vec<usize>> = vec![vec![1, 2], vec![0, 2, 3]];
        assert!(matches!(EmbeddedGraph::from_rotation(&rows), Err(BuildError::NotCubic { .. })));
    }

    #[test]
    fn asymmetric_listing() {
        let mut rows = cube_listing();
        rows[0] = [1, 2, 7];
        assert!(matches!(EmbeddedGraph::from_rotation(&rows), Err(BuildError::Asymmetric { .. })));
    }

    #[test]
    fn out_of_range_neighbour() {
        let mut rows = cube_listing();
        rows[0] = [1, 2, 8];
        assert!(matches!(
            EmbeddedGraph::from_rotation(&rows),
            Err(BuildError::UnknownVertex { vertex: 0, neighbor: 8 })
        ));
    }

    #[test]
    fn two_disjoint_cubes() {
        let mut rows = cube_listing();
        rows.extend(cube_listing().iter().map(|r| r.map(|w| w + 8)));
        assert_eq!(EmbeddedGraph::from_rotation(&rows), Err(BuildError::Disconnected));
    }

    #[test]
    fn non_spherical_rotation() {
        // Flipping one vertex of the cube turns the embedding toroidal-like.
        let mut rows = cube_listing();
        rows[0] = [1, 4, 2];
        assert!(matches!(
            EmbeddedGraph::from_rotation(&rows),
            Err(BuildError::EulerViolation { .. })
        ));
    }

    #[test]
    fn k4_has_triangles() {
        let rows = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
        let g = EmbeddedGraph::from_rotation(&rows).unwrap();
        assert_eq!(g.face_count(), 4);
        assert_eq!(validate_fullerene(&g), Err(FullereneError::WrongFaceSizes { face: 0, len: 3 }));
    }

    #[test]
    fn forbidden_h() {
        assert_eq!(check_hexagon_count(10, 15, 1), Err(FullereneError::ForbiddenH));
        assert!(check_hexagon_count(12, 18, 2).is_ok());
        assert!(check_hexagon_count(12, 18, 3).is_err());
    }

    #[test]
    fn relabel_keeps_faces() {
        let g = EmbeddedGraph::from_rotation(&cube_listing()).unwrap();
        let perm = [3, 0, 6, 1, 7, 2, 5, 4];
        let r = g.relabel(&perm);
        assert_eq!(r.face_count(), g.face_count());
        assert!(validate_fullerene(&r).is_ok());
    }
}
