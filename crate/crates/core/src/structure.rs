//! 6-cycles, square adjacency and the global structure class.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::plane_graph::EmbeddedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("6-cycle {0:?} fits none of the known shapes")]
    UnclassifiableCycle([usize; 6]),
    #[error("inconsistent structure: {0}")]
    InconsistentStructure(String),
    #[error("{class}: enumerated {found} 6-cycles but the count formula gives {expected}")]
    FormulaMismatch { class: String, expected: usize, found: usize },
}

/// Shape of a 6-cycle in a (4,6)-fullerene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SixCycleKind {
    HexFace,
    DualSquare,
    SquareCap,
    /// Boundary of a square-cap wrapped in `k >= 1` hexagon-layers.
    CappedTube(usize),
}

/// All 6-cycles of `g`, each as a vertex sequence starting at its smallest
/// vertex and oriented so the second vertex is smaller than the last.
pub fn enumerate_six_cycles(g: &EmbeddedGraph) -> Vec<[usize; 6]> {
    let mut out = Vec::new();
    let mut path = [0usize; 6];
    for start in 0..g.vertex_count() {
        path[0] = start;
        extend_cycle(g, &mut path, 1, &mut out);
    }
    out.sort_unstable();
    out
}

fn extend_cycle(g: &EmbeddedGraph, path: &mut [usize; 6], len: usize, out: &mut Vec<[usize; 6]>) {
    let start = path[0];
    let last = path[len - 1];
    for &v in g.neighbors(last) {
        if v <= start || path[1..len].contains(&v) {
            continue;
        }
        path[len] = v;
        if len == 5 {
            if path[1] < v && g.is_edge(v, start) {
                out.push(*path);
            }
        } else {
            extend_cycle(g, path, len + 1, out);
        }
    }
}

/// Decides the shape of one 6-cycle from local evidence.
///
/// Checks run in order: a chord means a dual-square, a facial cycle is a
/// hexagonal face, an outside vertex adjacent to alternating cycle vertices
/// is a square-cap centre, and anything else must separate a capped tube.
pub fn classify_six_cycle(g: &EmbeddedGraph, c: &[usize; 6]) -> Result<SixCycleKind, StructureError> {
    for i in 0..6 {
        for j in i + 2..6 {
            if !(i == 0 && j == 5) && g.is_edge(c[i], c[j]) {
                return Ok(SixCycleKind::DualSquare);
            }
        }
    }

    let mut key = *c;
    key.sort_unstable();
    let facial = g.faces().iter().filter(|f| f.len() == 6).any(|f| {
        let mut fk = [0; 6];
        fk.copy_from_slice(f);
        fk.sort_unstable();
        fk == key
    });
    if facial {
        return Ok(SixCycleKind::HexFace);
    }

    for offset in 0..2 {
        let a = c[offset];
        let centre = g
            .neighbors(a)
            .iter()
            .find(|&&w| !c.contains(&w) && g.is_edge(w, c[offset + 2]) && g.is_edge(w, c[offset + 4]));
        if centre.is_some() {
            return Ok(SixCycleKind::SquareCap);
        }
    }

    capped_tube_layers(g, c)
        .map(SixCycleKind::CappedTube)
        .ok_or(StructureError::UnclassifiableCycle(*c))
}

// The smaller side of a capped-tube boundary holds a cap centre and k rings
// of six vertices.
fn capped_tube_layers(g: &EmbeddedGraph, c: &[usize; 6]) -> Option<usize> {
    let mut removed = vec![false; g.vertex_count()];
    for &v in c {
        removed[v] = true;
    }
    let mut sides = Vec::new();
    for root in 0..g.vertex_count() {
        if removed[root] {
            continue;
        }
        let mut side = vec![root];
        removed[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if !removed[v] {
                    removed[v] = true;
                    side.push(v);
                    queue.push_back(v);
                }
            }
        }
        sides.push(side);
    }
    if sides.len() != 2 {
        return None;
    }
    let inner = sides.iter().min_by_key(|s| s.len())?;
    let caps = detect_square_caps(g);
    let k = (inner.len() - 1) / 6;
    let well_formed = (inner.len() - 1) % 6 == 0 && k >= 1 && inner.iter().any(|v| caps.contains(v));
    well_formed.then_some(k)
}

/// Per-kind tally of the 6-cycles of a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SixCycleCensus {
    pub hex_face: usize,
    pub dual_square: usize,
    pub square_cap: usize,
    pub capped_tube: usize,
}

impl SixCycleCensus {
    pub fn total(&self) -> usize {
        self.hex_face + self.dual_square + self.square_cap + self.capped_tube
    }
}

pub fn six_cycle_census(g: &EmbeddedGraph) -> Result<SixCycleCensus, StructureError> {
    let mut census = SixCycleCensus::default();
    for c in enumerate_six_cycles(g) {
        match classify_six_cycle(g, &c)? {
            SixCycleKind::HexFace => census.hex_face += 1,
            SixCycleKind::DualSquare => census.dual_square += 1,
            SixCycleKind::SquareCap => census.square_cap += 1,
            SixCycleKind::CappedTube(_) => census.capped_tube += 1,
        }
    }
    Ok(census)
}

fn square_faces(g: &EmbeddedGraph) -> Vec<usize> {
    (0..g.face_count()).filter(|&f| g.faces()[f].len() == 4).collect()
}

fn face_across(g: &EmbeddedGraph, face: usize, edge: usize) -> usize {
    let (u, v) = g.edges()[edge];
    let a = g.face_of_dart(u, v).expect("edge");
    if a == face {
        g.face_of_dart(v, u).expect("edge")
    } else {
        a
    }
}

/// Unordered pairs of square faces sharing an edge.
pub fn dual_square_count(g: &EmbeddedGraph) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| {
            let a = g.face_of_dart(u, v).expect("edge");
            let b = g.face_of_dart(v, u).expect("edge");
            g.faces()[a].len() == 4 && g.faces()[b].len() == 4
        })
        .count()
}

/// Vertices whose three incident faces are all squares.
pub fn detect_square_caps(g: &EmbeddedGraph) -> Vec<usize> {
    (0..g.vertex_count())
        .filter(|&v| g.faces_at(v).iter().all(|&f| g.faces()[f].len() == 4))
        .collect()
}

/// A maximal run of squares in a line: consecutive squares share an edge
/// and each inner square is entered and left through opposite edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareChain {
    /// Face ids in line order.
    pub squares: Vec<usize>,
    pub cyclic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareAdjacencyProfile {
    /// Dual-square count.
    pub y: usize,
    pub x0: usize,
    pub x1: usize,
    pub x2: usize,
    /// Squares with three or more square neighbours (only the cube has any).
    pub x_more: usize,
    /// Chains of two or more squares.
    pub chains: Vec<SquareChain>,
}

impl SquareAdjacencyProfile {
    pub fn longest_chain(&self) -> usize {
        self.chains.iter().map(|c| c.squares.len()).max().unwrap_or(1)
    }

    /// `(x0, x1, x2, y)`.
    pub fn tuple(&self) -> (usize, usize, usize, usize) {
        (self.x0, self.x1, self.x2, self.y)
    }
}

pub fn square_adjacency_profile(g: &EmbeddedGraph) -> SquareAdjacencyProfile {
    let squares = square_faces(g);
    let is_square = |f: usize| g.faces()[f].len() == 4;
    let mut degree_total = 0;
    let (mut x0, mut x1, mut x2, mut x_more) = (0, 0, 0, 0);
    for &s in &squares {
        let degree = g.face_edges(s).iter().filter(|&&e| is_square(face_across(g, s, e))).count();
        degree_total += degree;
        match degree {
            0 => x0 += 1,
            1 => x1 += 1,
            2 => x2 += 1,
            _ => x_more += 1,
        }
    }

    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut chains = Vec::new();
    for &s in &squares {
        let edges = g.face_edges(s);
        for axis in 0..2 {
            if !seen.insert((s, axis)) {
                continue;
            }
            let (forward, closed) = walk_line(g, s, edges[axis], &mut seen);
            let mut line: Vec<usize> = Vec::new();
            if !closed {
                let (backward, _) = walk_line(g, s, edges[axis + 2], &mut seen);
                line.extend(backward.into_iter().rev());
            }
            line.push(s);
            line.extend(forward);
            if line.len() >= 2 {
                chains.push(SquareChain { squares: line, cyclic: closed });
            }
        }
    }
    chains.sort_by(|a, b| b.squares.len().cmp(&a.squares.len()).then_with(|| a.squares.cmp(&b.squares)));

    SquareAdjacencyProfile { y: degree_total / 2, x0, x1, x2, x_more, chains }
}

// Follows a line of squares out of `start` across `edge`; reports whether it
// closed up into a ring.
fn walk_line(
    g: &EmbeddedGraph,
    start: usize,
    mut edge: usize,
    seen: &mut HashSet<(usize, usize)>,
) -> (Vec<usize>, bool) {
    let mut line = Vec::new();
    let mut here = start;
    for _ in 0..g.face_count() {
        let next = face_across(g, here, edge);
        if g.faces()[next].len() != 4 {
            return (line, false);
        }
        if next == start {
            return (line, true);
        }
        let edges = g.face_edges(next);
        let at = edges.iter().position(|&e| e == edge).expect("shared edge");
        seen.insert((next, at % 2));
        line.push(next);
        here = next;
        edge = edges[(at + 2) % 4];
    }
    unreachable!("square line longer than the face count")
}

/// The five global shapes a (4,6)-fullerene can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureKind {
    Cube,
    HexagonalPrism,
    Tubular { t: usize },
    Lantern,
    Dispersive,
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureKind::Cube => f.write_str("Cube"),
            StructureKind::HexagonalPrism => f.write_str("HexagonalPrism"),
            StructureKind::Tubular { t } => write!(f, "Tubular t={t}"),
            StructureKind::Lantern => f.write_str("Lantern"),
            StructureKind::Dispersive => f.write_str("Dispersive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureClass {
    pub kind: StructureKind,
    pub h: usize,
    pub profile: SquareAdjacencyProfile,
    pub cap_centres: Vec<usize>,
}

impl StructureClass {
    pub fn y(&self) -> usize {
        self.profile.y
    }
}

/// Places `g` in one of the five structure classes.
///
/// The class is decided locally: no hexagons means the cube, a square-cap
/// centre means a tube, a line of four or more squares means the hexagonal
/// prism, a line of exactly three means a lantern, and everything else is
/// dispersive. The square profile is then checked against the class.
pub fn classify_structure(g: &EmbeddedGraph) -> Result<StructureClass, StructureError> {
    let h = g.faces().iter().filter(|f| f.len() == 6).count();
    let profile = square_adjacency_profile(g);
    let cap_centres = detect_square_caps(g);
    let inconsistent = |what: String| Err(StructureError::InconsistentStructure(what));

    let kind = if h == 0 {
        StructureKind::Cube
    } else if !cap_centres.is_empty() {
        StructureKind::Tubular { t: h / 3 }
    } else if profile.longest_chain() >= 4 {
        StructureKind::HexagonalPrism
    } else if profile.longest_chain() == 3 {
        StructureKind::Lantern
    } else {
        StructureKind::Dispersive
    };

    let (x0, x1, x2, y) = profile.tuple();
    if kind != StructureKind::Cube && profile.x_more != 0 {
        return inconsistent(format!("{kind}: {} squares touch three or more squares", profile.x_more));
    }
    match kind {
        StructureKind::Cube => {
            if g.vertex_count() != 8 || y != 12 {
                return inconsistent(format!("cube with n={} y={y}", g.vertex_count()));
            }
        }
        StructureKind::Tubular { t } => {
            if h % 3 != 0 || cap_centres.len() != 2 || (x0, x1, x2, y) != (0, 0, 6, 6) {
                return inconsistent(format!(
                    "tube with h={h}, {} cap centres, profile {:?}",
                    cap_centres.len(),
                    profile.tuple()
                ));
            }
            debug_assert_eq!(3 * t, h);
        }
        StructureKind::HexagonalPrism => {
            if h != 2 || (x0, x1, x2, y) != (0, 0, 6, 6) {
                return inconsistent(format!("prism with h={h}, profile {:?}", profile.tuple()));
            }
        }
        StructureKind::Lantern => {
            let lines_of_three = profile.chains.iter().filter(|c| c.squares.len() == 3).count();
            if (x0, x1, x2, y) != (0, 4, 2, 4) || lines_of_three != 2 {
                return inconsistent(format!(
                    "lantern with profile {:?} and {lines_of_three} lines of three",
                    profile.tuple()
                ));
            }
        }
        StructureKind::Dispersive => {
            if x2 != 0 || y > 3 || x0 != 6 - 2 * y || x1 != 2 * y {
                return inconsistent(format!("dispersive with profile {:?}", profile.tuple()));
            }
        }
    }
    Ok(StructureClass { kind, h, profile, cap_centres })
}

/// Number of 6-cycles a graph of this class must have.
pub fn predicted_six_cycles(class: &StructureClass) -> usize {
    match class.kind {
        StructureKind::Cube => 16,
        StructureKind::Tubular { t } => 4 * t + 7,
        _ => class.h + class.y(),
    }
}

/// Enumerates the 6-cycles and checks the total against [`predicted_six_cycles`].
pub fn six_cycle_count(g: &EmbeddedGraph, class: &StructureClass) -> Result<usize, StructureError> {
    let found = enumerate_six_cycles(g).len();
    let expected = predicted_six_cycles(class);
    if found != expected {
        return Err(StructureError::FormulaMismatch { class: class.kind.to_string(), expected, found });
    }
    Ok(found)
}

/// Vertex sets of the hexagonal faces, sorted; handy for reports.
pub fn hexagon_vertex_sets(g: &EmbeddedGraph) -> BTreeSet<Vec<usize>> {
    g.faces()
        .iter()
        .filter(|f| f.len() == 6)
        .map(|f| {
            let mut k = f.clone();
            k.sort_unstable();
            k
        })
        .collect()
}
