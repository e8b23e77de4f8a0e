//! Named (4,6)-fullerene families and the `bnf-graph` text format.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plane_graph::{BuildError, EmbeddedGraph};

/// A graph family understood by [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GraphKind {
    Cube,
    HexagonalPrism,
    /// Two square-caps joined by `t` concentric hexagon-layers; `Tube(0)` is a cube.
    Tube(usize),
    LanternA,
    LanternB,
    TruncatedOctahedron,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Cube => f.write_str("cube"),
            GraphKind::HexagonalPrism => f.write_str("prism"),
            GraphKind::Tube(t) => write!(f, "tube:{t}"),
            GraphKind::LanternA => f.write_str("lantern-a"),
            GraphKind::LanternB => f.write_str("lantern-b"),
            GraphKind::TruncatedOctahedron => f.write_str("truncated-octahedron"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown graph kind `{0}` (expected cube, prism, tube:T, lantern-a, lantern-b or truncated-octahedron)")]
pub struct UnknownKind(pub String);

impl FromStr for GraphKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "cube" => GraphKind::Cube,
            "prism" | "hexagonal-prism" => GraphKind::HexagonalPrism,
            "lantern-a" | "lantern_a" | "lanterna" => GraphKind::LanternA,
            "lantern-b" | "lantern_b" | "lanternb" => GraphKind::LanternB,
            "truncated-octahedron" | "truncated_octahedron" | "to" => GraphKind::TruncatedOctahedron,
            other => {
                let t = other
                    .strip_prefix("tube:")
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| UnknownKind(s.to_string()))?;
                GraphKind::Tube(t)
            }
        };
        Ok(kind)
    }
}

impl From<GraphKind> for String {
    fn from(kind: GraphKind) -> String {
        kind.to_string()
    }
}

impl TryFrom<String> for GraphKind {
    type Error = UnknownKind;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// The corpus every verification run covers by default.
pub fn default_corpus() -> Vec<GraphKind> {
    vec![
        GraphKind::Cube,
        GraphKind::HexagonalPrism,
        GraphKind::Tube(1),
        GraphKind::Tube(2),
        GraphKind::Tube(3),
        GraphKind::LanternA,
        GraphKind::LanternB,
        GraphKind::TruncatedOctahedron,
    ]
}

/// Builds the named graph. All families are valid (4,6)-fullerenes.
pub fn generate(kind: GraphKind) -> EmbeddedGraph {
    let listing = match kind {
        GraphKind::Cube => cube(),
        GraphKind::HexagonalPrism => hexagonal_prism(),
        GraphKind::Tube(t) => tube(t),
        GraphKind::LanternA => lantern(false),
        GraphKind::LanternB => lantern(true),
        GraphKind::TruncatedOctahedron => truncated_octahedron(),
    };
    EmbeddedGraph::from_rotation(&listing).expect("generator produced an invalid rotation system")
}

fn cube() -> Vec<[usize; 3]> {
    let corners: Vec<[i64; 3]> = (0..8)
        .map(|v| [bit_sign(v, 0), bit_sign(v, 1), bit_sign(v, 2)])
        .collect();
    let mut edges = Vec::new();
    for u in 0..8usize {
        for b in 0..3 {
            let v = u ^ (1 << b);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    rotation_from_solid(&corners, &edges)
}

fn bit_sign(v: usize, bit: usize) -> i64 {
    if v >> bit & 1 == 1 {
        1
    } else {
        -1
    }
}

/// Outer hexagon `0..6`, inner hexagon `6..12`, spokes `j -- 6 + j`.
fn hexagonal_prism() -> Vec<[usize; 3]> {
    let mut rows = vec![[0; 3]; 12];
    for j in 0..6 {
        let (prev, next) = ((j + 5) % 6, (j + 1) % 6);
        rows[j] = [6 + j, prev, next];
        rows[6 + j] = [j, 6 + next, 6 + prev];
    }
    rows
}

/// Tube with `t` hexagon-layers, numbered layer by layer.
///
/// Vertex 0 is the inner cap centre, ring `i` (for `0 <= i <= t`) holds
/// vertices `1 + 6i .. 7 + 6i` in counterclockwise order, and the last
/// vertex is the outer cap centre. Ring `i` links inward at positions of
/// parity `i % 2` and outward at the other three positions.
fn tube(t: usize) -> Vec<[usize; 3]> {
    let ring = |i: usize, j: usize| 1 + 6 * i + j % 6;
    let outer = 6 * (t + 1) + 1;
    let mut rows = vec![[0; 3]; outer + 1];
    rows[0] = [ring(0, 0), ring(0, 2), ring(0, 4)];
    for i in 0..=t {
        for j in 0..6 {
            let (prev, next) = (ring(i, j + 5), ring(i, j + 1));
            rows[ring(i, j)] = if j % 2 == i % 2 {
                let inward = if i == 0 { 0 } else { ring(i - 1, j) };
                [inward, prev, next]
            } else {
                let outward = if i == t { outer } else { ring(i + 1, j) };
                [outward, next, prev]
            };
        }
    }
    // Seen from the far side of the sphere the outer rotation runs clockwise.
    let p = 1 - t % 2;
    rows[outer] = [ring(t, p), ring(t, p + 4), ring(t, p + 2)];
    rows
}

/// The two lantern examples, transcribed from their plane drawings.
fn lantern(larger: bool) -> Vec<[usize; 3]> {
    let mut coords: Vec<(i64, i64)> = vec![
        (-15, 5),
        (-5, 5),
        (5, 5),
        (15, 5),
        (15, -5),
        (5, -5),
        (-5, -5),
        (-15, -5),
        (23, 13),
        (31, 18),
        (31, -18),
        (23, -13),
        (-23, 13),
        (-31, 18),
        (-31, -18),
        (-23, -13),
    ];
    let mut edges = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (6, 7),
        (7, 0),
        (1, 6),
        (2, 5),
        (3, 8),
        (8, 9),
        (9, 10),
        (10, 11),
        (11, 4),
        (0, 12),
        (12, 13),
        (13, 14),
        (14, 15),
        (15, 7),
        (12, 8),
        (15, 11),
    ];
    if larger {
        coords.extend([(41, 25), (41, -25), (-41, 25), (-41, -25)]);
        edges.extend([(9, 16), (17, 10), (13, 18), (19, 14), (16, 18), (17, 19), (18, 19), (16, 17)]);
    } else {
        edges.extend([(9, 13), (10, 14)]);
    }
    rotation_from_drawing(&coords, &edges)
}

/// Vertices are the permutations of `(0, ±1, ±2)`; edges join points at distance √2.
fn truncated_octahedron() -> Vec<[usize; 3]> {
    let mut points = Vec::new();
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        for s1 in [-1i64, 1] {
            for s2 in [-1i64, 1] {
                let base = [0i64, s1, 2 * s2];
                points.push([base[perm[0]], base[perm[1]], base[perm[2]]]);
            }
        }
    }
    points.sort_unstable();
    let mut edges = Vec::new();
    for u in 0..points.len() {
        for v in u + 1..points.len() {
            let d: i64 = (0..3).map(|k| (points[u][k] - points[v][k]).pow(2)).sum();
            if d == 2 {
                edges.push((u, v));
            }
        }
    }
    rotation_from_solid(&points, &edges)
}

fn neighbour_lists(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

fn to_rows(adj: Vec<Vec<usize>>) -> Vec<[usize; 3]> {
    adj.into_iter()
        .map(|nb| nb.try_into().expect("construction is cubic"))
        .collect()
}

/// Rotation system of a straight-line plane drawing: neighbours sorted by angle.
pub(crate) fn rotation_from_drawing(coords: &[(i64, i64)], edges: &[(usize, usize)]) -> Vec<[usize; 3]> {
    let mut adj = neighbour_lists(coords.len(), edges);
    for (v, nb) in adj.iter_mut().enumerate() {
        let (x, y) = coords[v];
        nb.sort_by(|&a, &b| {
            let da = (coords[a].0 - x, coords[a].1 - y);
            let db = (coords[b].0 - x, coords[b].1 - y);
            compare_angle(da, db)
        });
    }
    to_rows(adj)
}

fn compare_angle(a: (i64, i64), b: (i64, i64)) -> Ordering {
    let half = |(x, y): (i64, i64)| if y > 0 || (y == 0 && x > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| (b.0 * a.1).cmp(&(a.0 * b.1)))
}

/// Rotation system of a convex polyhedron centred at the origin, viewed from outside.
pub(crate) fn rotation_from_solid(points: &[[i64; 3]], edges: &[(usize, usize)]) -> Vec<[usize; 3]> {
    let adj = neighbour_lists(points.len(), edges);
    let mut rows = to_rows(adj);
    for (v, row) in rows.iter_mut().enumerate() {
        let p = points[v];
        let a = sub(points[row[0]], p);
        let b = sub(points[row[1]], p);
        if det(a, b, p) < 0 {
            row.swap(1, 2);
        }
    }
    rows
}

fn sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn det(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Errors from [`parse_graph`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error(transparent)]
    Build(#[from] BuildError),
}

const HEADER: &str = "bnf-graph 1";

/// Writes `g` in the `bnf-graph` v1 format.
pub fn serialize_graph(g: &EmbeddedGraph) -> String {
    let mut out = String::with_capacity(16 * g.vertex_count() + 32);
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("n {}\n", g.vertex_count()));
    for (v, [a, b, c]) in g.rotations().iter().enumerate() {
        out.push_str(&format!("{v}: {a} {b} {c}\n"));
    }
    out
}

/// Reads a `bnf-graph` v1 document.
pub fn parse_graph(text: &str) -> Result<EmbeddedGraph, ParseError> {
    let syntax = |line: usize, col: usize, message: String| ParseError::Syntax { line, col, message };

    // (line number, column offset, content) of every non-blank line.
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_end();
        let start = trimmed.len() - trimmed.trim_start().len();
        (!trimmed.trim().is_empty()).then(|| (i + 1, start + 1, trimmed.trim()))
    });

    let eof_line = text.lines().count() + 1;
    let (line, col, header) = lines.next().ok_or_else(|| syntax(1, 1, "empty document".into()))?;
    if header != HEADER {
        return Err(syntax(line, col, format!("expected `{HEADER}`, found `{header}`")));
    }
    let (line, col, count_line) = lines
        .next()
        .ok_or_else(|| syntax(eof_line, 1, "missing vertex count line".into()))?;
    let n = count_line
        .strip_prefix("n ")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| syntax(line, col, format!("expected `n <count>`, found `{count_line}`")))?;

    let mut rows = Vec::with_capacity(n);
    for expected in 0..n {
        let (line, col, row) = lines.next().ok_or_else(|| {
            syntax(eof_line, 1, format!("expected {n} vertex rows, found {expected}"))
        })?;
        let (id, rest) = row
            .split_once(':')
            .ok_or_else(|| syntax(line, col, "expected `<id>: <a> <b> <c>`".into()))?;
        let id: usize = id
            .trim()
            .parse()
            .map_err(|_| syntax(line, col, format!("invalid vertex id `{}`", id.trim())))?;
        if id != expected {
            return Err(syntax(line, col, format!("expected vertex {expected}, found {id}")));
        }
        let neighbours = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| syntax(line, col, format!("invalid neighbour `{tok}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(neighbours);
    }
    if let Some((line, col, extra)) = lines.next() {
        return Err(syntax(line, col, format!("unexpected content after {n} rows: `{extra}`")));
    }
    Ok(EmbeddedGraph::from_rotation(&rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::validate_fullerene;

    #[test]
    fn family_sizes() {
        let cases = [
            (GraphKind::Cube, 8, 0),
            (GraphKind::HexagonalPrism, 12, 2),
            (GraphKind::Tube(0), 8, 0),
            (GraphKind::Tube(1), 14, 3),
            (GraphKind::Tube(3), 26, 9),
            (GraphKind::LanternA, 16, 4),
            (GraphKind::LanternB, 20, 6),
            (GraphKind::TruncatedOctahedron, 24, 8),
        ];
        for (kind, n, h) in cases {
            let g = generate(kind);
            let p = validate_fullerene(&g).unwrap_or_else(|e| panic!("{kind}: {e}"));
            assert_eq!((p.n, p.h, p.m), (n, h, 3 * h + 12), "{kind}");
        }
    }

    #[test]
    fn tubes_up_to_six() {
        for t in 0..=6 {
            let p = validate_fullerene(&generate(GraphKind::Tube(t))).unwrap();
            assert_eq!(p.h, 3 * t);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in default_corpus() {
            assert_eq!(kind.to_string().parse::<GraphKind>().unwrap(), kind);
        }
        assert_eq!("tube:12".parse::<GraphKind>().unwrap(), GraphKind::Tube(12));
        assert!("tube:".parse::<GraphKind>().is_err());
        assert!("dodecahedron".parse::<GraphKind>().is_err());
    }

    #[test]
    fn serialize_cube() {
        let text = serialize_graph(&generate(GraphKind::Cube));
        assert_eq!(text.lines().count(), 10);
        assert!(text.starts_with("bnf-graph 1\nn 8\n0: "));
        assert_eq!(parse_graph(&text).unwrap(), generate(GraphKind::Cube));
    }

    #[test]
    fn tube_round_trip_revalidates() {
        let g = parse_graph(&serialize_graph(&generate(GraphKind::Tube(1)))).unwrap();
        assert_eq!(validate_fullerene(&g).unwrap().h, 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a cube\nbnf-graph 1  # header\n\nn 8\n".to_string()
            + &serialize_graph(&generate(GraphKind::Cube))
                .lines()
                .skip(2)
                .map(|l| format!("  {l} # row\n"))
                .collect::<String>();
        assert_eq!(parse_graph(&text).unwrap(), generate(GraphKind::Cube));
    }

    #[test]
    fn too_few_rows() {
        let text: String = serialize_graph(&generate(GraphKind::Cube)).lines().take(9).map(|l| format!("{l}\n")).collect();
        match parse_graph(&text) {
            Err(ParseError::Syntax { line, message, .. }) => {
                assert_eq!(line, 10);
                assert!(message.contains("found 7"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_positions() {
        let err = parse_graph("bnf-graph 2\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, col: 1, .. }));
        let err = parse_graph("bnf-graph 1\nn 2\n0: 1 2 3\n  2: 0 1 2\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 4, col: 3, .. }), "{err:?}");
        let err = parse_graph("bnf-graph 1\nn 1\n0: 1 x 3\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }));
        let err = parse_graph("bnf-graph 1\nn 1\n0: 0 0 0\n1: 0 0 0\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 4, .. }));
    }

    #[test]
    fn build_errors_pass_through() {
        let err = parse_graph("bnf-graph 1\nn 2\n0: 1 1 1\n1: 0 0 0\n").unwrap_err();
        assert!(matches!(err, ParseError::Build(BuildError::NotCubic { vertex: 0, .. })));
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in default_corpus() {
            assert_eq!(serialize_graph(&generate(kind)), serialize_graph(&generate(kind)));
        }
    }
}
