//! Rotation schemes, the triangulation rule, and a current-graph traversal
//! engine driving the cyclic neighborly triangulations for n = 12s+7.
//!
//! A rotation scheme lists, for every vertex, the cyclic order of its
//! neighbors; face tracing turns it into a surface. The n = 12s+7 family is
//! generated from a cubic network with Z_n arc currents: the network data is
//! produced by [`ringel_network`] and certified by four independent checks
//! (Kirchhoff balance, single-circuit traversal, the printed log prefix for
//! s >= 2, and the s = 0 torus golden case).

use crate::surface::{CellSurface, SurfaceError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RotationError {
    #[error("invalid rotation scheme: {0}")]
    InvalidScheme(String),
    #[error("vertex {vertex} does not have degree 3")]
    NotCubic { vertex: usize },
    #[error("current label {label} is reused or out of range")]
    LabelReuse { label: usize },
    #[error("flow condition violated at vertex {vertex}")]
    FlowViolation { vertex: usize },
    #[error("traversal closes early: the network does not define a cyclic scheme")]
    NotSingleCycle,
    #[error("malformed current graph: {0}")]
    Structure(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Per-vertex cyclic neighbor lists. Rows are canonicalized to start at
/// their smallest entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationScheme {
    n: usize,
    rows: Vec<Vec<usize>>,
}

/// On-disk scheme format: `{"n": int, "rows": [[int,...],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeFile {
    pub n: usize,
    pub rows: Vec<Vec<usize>>,
}

impl RotationScheme {
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Result<Self, RotationError> {
        if rows.len() != n {
            return Err(RotationError::InvalidScheme(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        for (v, row) in rows.iter().enumerate() {
            let set: BTreeSet<usize> = row.iter().copied().collect();
            if set.len() != row.len() {
                return Err(RotationError::InvalidScheme(format!(
                    "row {v} repeats a vertex"
                )));
            }
            if set.contains(&v) {
                return Err(RotationError::InvalidScheme(format!(
                    "row {v} contains the vertex itself"
                )));
            }
            if row.iter().any(|&w| w >= n) {
                return Err(RotationError::InvalidScheme(format!(
                    "row {v} has an out-of-range vertex"
                )));
            }
        }
        // symmetry: i in row j iff j in row i
        for (v, row) in rows.iter().enumerate() {
            for &w in row {
                if !rows[w].contains(&v) {
                    return Err(RotationError::InvalidScheme(format!(
                        "vertex {w} is listed by {v} but not vice versa"
                    )));
                }
            }
        }
        let rows = rows.into_iter().map(canonical_cycle).collect();
        Ok(RotationScheme { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile { n: self.n, rows: self.rows.clone() }
    }

    pub fn from_file(f: SchemeFile) -> Result<Self, RotationError> {
        Self::new(f.n, f.rows)
    }
}

/// Rotates a cyclic list to start at its smallest entry.
pub fn canonical_cycle(row: Vec<usize>) -> Vec<usize> {
    if row.is_empty() {
        return row;
    }
    let min_pos = row
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap();
    let mut out = Vec::with_capacity(row.len());
    out.extend_from_slice(&row[min_pos..]);
    out.extend_from_slice(&row[..min_pos]);
    out
}

/// Face tracing: from directed edge (i,j), the next directed edge is (j,k)
/// where k precedes i in row j. Faces are the resulting cycles.
pub fn scheme_to_surface(scheme: &RotationScheme) -> Result<CellSurface, RotationError> {
    let n = scheme.n;
    let pos: Vec<HashMap<usize, usize>> = scheme
        .rows
        .iter()
        .map(|row| row.iter().enumerate().map(|(i, &v)| (v, i)).collect())
        .collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..n {
        for &j in &scheme.rows[i] {
            if used.contains(&(i, j)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (i, j);
            loop {
                used.insert((a, b));
                face.push(a);
                let row = &scheme.rows[b];
                let p = pos[b][&a];
                let k = row[(p + row.len() - 1) % row.len()];
                (a, b) = (b, k);
                if (a, b) == (i, j) {
                    break;
                }
            }
            faces.push(face);
        }
    }
    Ok(CellSurface::new(n, faces, None)?)
}

/// Witness for a triangulation-rule failure: row `i` has adjacent pair
/// `(j,k)` but the implied pairs are missing in rows `j` or `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaStarWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

/// Checks the triangulation rule: adjacent (j,k) at i forces adjacent (k,i)
/// at j and (i,j) at k. `None` means the rule holds everywhere.
pub fn check_delta_star(scheme: &RotationScheme) -> Option<DeltaStarWitness> {
    let has_adjacent = |row: &[usize], a: usize, b: usize| {
        let m = row.len();
        (0..m).any(|p| row[p] == a && row[(p + 1) % m] == b)
    };
    for (i, row) in scheme.rows.iter().enumerate() {
        let m = row.len();
        for p in 0..m {
            let (j, k) = (row[p], row[(p + 1) % m]);
            if !has_adjacent(&scheme.rows[j], k, i) || !has_adjacent(&scheme.rows[k], i, j) {
                return Some(DeltaStarWitness { i, j, k });
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

/// One end of an arc: `2*arc` is the tail end, `2*arc + 1` the head end.
pub type ArcEnd = usize;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CgVertex {
    pub color: Color,
    /// Incident arc ends in cyclic (clockwise) order.
    pub rotation: Vec<ArcEnd>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CgArc {
    pub tail: usize,
    pub head: usize,
    pub current: usize,
}

/// Cubic graph with vertex rotations and Z_n arc currents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurrentGraph {
    pub modulus: usize,
    pub vertices: Vec<CgVertex>,
    pub arcs: Vec<CgArc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalLog {
    /// Signed labels in traversal order: +current with the arrow, -current
    /// against it.
    pub entries: Vec<i64>,
    pub closed: bool,
}

impl CurrentGraph {
    fn end_vertex(&self, end: ArcEnd) -> usize {
        let arc = &self.arcs[end / 2];
        if end % 2 == 0 {
            arc.tail
        } else {
            arc.head
        }
    }
}

/// Structural, degree, label-coverage and flow checks.
pub fn validate_current_graph(g: &CurrentGraph) -> Result<(), RotationError> {
    let n = g.modulus;
    if n < 3 || n % 2 == 0 {
        return Err(RotationError::Structure(format!("modulus {n} must be odd and >= 3")));
    }
    let expected_labels = (n - 1) / 2;
    if g.arcs.len() != expected_labels {
        return Err(RotationError::Structure(format!(
            "expected {expected_labels} arcs for modulus {n}, got {}",
            g.arcs.len()
        )));
    }
    let mut seen = vec![false; expected_labels + 1];
    for arc in &g.arcs {
        if arc.tail >= g.vertices.len() || arc.head >= g.vertices.len() {
            return Err(RotationError::Structure("arc endpoint out of range".into()));
        }
        if arc.current == 0 || arc.current > expected_labels {
            return Err(RotationError::LabelReuse { label: arc.current });
        }
        if seen[arc.current] {
            return Err(RotationError::LabelReuse { label: arc.current });
        }
        seen[arc.current] = true;
    }
    // rotations must list exactly the incident ends
    let mut incident: Vec<BTreeSet<ArcEnd>> = vec![BTreeSet::new(); g.vertices.len()];
    for (ai, arc) in g.arcs.iter().enumerate() {
        incident[arc.tail].insert(2 * ai);
        incident[arc.head].insert(2 * ai + 1);
    }
    for (v, vert) in g.vertices.iter().enumerate() {
        let rot: BTreeSet<ArcEnd> = vert.rotation.iter().copied().collect();
        if rot.len() != vert.rotation.len() || rot != incident[v] {
            return Err(RotationError::Structure(format!(
                "rotation at vertex {v} does not list its incident arc ends"
            )));
        }
        if vert.rotation.len() != 3 {
            return Err(RotationError::NotCubic { vertex: v });
        }
    }
    // Kirchhoff: signed current sum zero mod n at every vertex
    for v in 0..g.vertices.len() {
        let mut sum: i64 = 0;
        for arc in &g.arcs {
            if arc.tail == v {
                sum += arc.current as i64;
            }
            if arc.head == v {
                sum -= arc.current as i64;
            }
        }
        if sum.rem_euclid(n as i64) != 0 {
            return Err(RotationError::FlowViolation { vertex: v });
        }
    }
    Ok(())
}

/// Walks the directed arcs: clockwise turns at black vertices, counter-
/// clockwise at white ones, starting on the arc labelled 1 in arrow
/// direction. Errors with [`RotationError::NotSingleCycle`] if the walk
/// closes before covering every arc once in each direction.
pub fn trace_current_graph(g: &CurrentGraph) -> Result<TraversalLog, RotationError> {
    validate_current_graph(g)?;
    let start_arc = g
        .arcs
        .iter()
        .position(|a| a.current == 1)
        .ok_or(RotationError::LabelReuse { label: 1 })?;
    let mut entries = Vec::with_capacity(2 * g.arcs.len());
    let mut state = (start_arc, true); // (arc, forward)
    loop {
        let (arc_idx, forward) = state;
        let arc = &g.arcs[arc_idx];
        entries.push(if forward {
            arc.current as i64
        } else {
            -(arc.current as i64)
        });
        let arrive_end: ArcEnd = 2 * arc_idx + if forward { 1 } else { 0 };
        let v = g.end_vertex(arrive_end);
        let vert = &g.vertices[v];
        let p = vert
            .rotation
            .iter()
            .position(|&e| e == arrive_end)
            .expect("validated rotation");
        let k = vert.rotation.len();
        let depart = match vert.color {
            Color::Black => vert.rotation[(p + 1) % k],
            Color::White => vert.rotation[(p + k - 1) % k],
        };
        state = (depart / 2, depart % 2 == 0);
        if state == (start_arc, true) {
            break;
        }
        if entries.len() > 2 * g.arcs.len() {
            return Err(RotationError::NotSingleCycle);
        }
    }
    if entries.len() != 2 * g.arcs.len() {
        return Err(RotationError::NotSingleCycle);
    }
    Ok(TraversalLog { entries, closed: true })
}

/// The cubic network generating Ringel's neighborly surface on n = 12s+7
/// vertices: for s >= 1 a (4s+2)-cycle of high-current arcs with a chord
/// matching carrying currents 1..2s+1; for s = 0 the two-vertex theta graph
/// with currents 1, 2, 3 mod 7. All flow balances hold exactly over Z.
pub fn ringel_network(s: usize) -> CurrentGraph {
    let n = 12 * s + 7;
    if s == 0 {
        // theta graph: arcs 1: u->w, 2: u->w, 3: w->u
        return CurrentGraph {
            modulus: 7,
            vertices: vec![
                CgVertex { color: Color::Black, rotation: vec![5, 2, 0] },
                CgVertex { color: Color::Black, rotation: vec![1, 4, 3] },
            ],
            arcs: vec![
                CgArc { tail: 0, head: 1, current: 1 },
                CgArc { tail: 0, head: 1, current: 2 },
                CgArc { tail: 1, head: 0, current: 3 },
            ],
        };
    }
    let nv = 4 * s + 2;
    // cycle arc e_i (1-indexed i = 1..nv) runs v_{i+1} -> v_i; arc index i-1
    let cycle_current = |i: usize| -> usize {
        if i == 1 {
            5 * s + 3
        } else if i <= 2 * s + 2 && i % 2 == 0 {
            3 * s + 2 - (i - 2) / 2
        } else if i <= 2 * s + 3 {
            3 * s + 3 + (i - 3) / 2
        } else if i % 2 == 0 {
            6 * s + 3 - (i - (2 * s + 4)) / 2
        } else {
            4 * s + 4 + (i - (2 * s + 5)) / 2
        }
    };
    let mut arcs: Vec<CgArc> = (1..=nv)
        .map(|i| CgArc {
            tail: i % nv, // v_{i+1}, 0-indexed
            head: i - 1,
            current: cycle_current(i),
        })
        .collect();
    // odd chords 2j+1, j = 0..s: tail v_{2j+3}; even chords 2j, j = 1..s:
    // tail v_{4s+4-2j}, head v_{2j+2}
    let mut chord_end_at: HashMap<usize, ArcEnd> = HashMap::new();
    for j in 0..=s {
        let tail = 2 * j + 3 - 1;
        let head = if j == 0 {
            0
        } else if j == s {
            1
        } else {
            4 * s + 3 - 2 * j - 1
        };
        let idx = arcs.len();
        arcs.push(CgArc { tail, head, current: 2 * j + 1 });
        chord_end_at.insert(tail, 2 * idx);
        chord_end_at.insert(head, 2 * idx + 1);
    }
    for j in 1..=s {
        let (tail, head) = (4 * s + 4 - 2 * j - 1, 2 * j + 2 - 1);
        let idx = arcs.len();
        arcs.push(CgArc { tail, head, current: 2 * j });
        chord_end_at.insert(tail, 2 * idx);
        chord_end_at.insert(head, 2 * idx + 1);
    }
    let vertices = (1..=nv)
        .map(|i| {
            let v = i - 1;
            let prev = if i >= 2 { i - 1 } else { nv };
            // e_prev is directed v_i -> v_{i-1}: its end at v_i is the tail;
            // e_i is directed v_{i+1} -> v_i: its end at v_i is the head
            let a = 2 * (prev - 1);
            let b = 2 * (i - 1) + 1;
            let c = chord_end_at[&v];
            let color = if i == 1 {
                Color::White
            } else if i <= 2 * s + 3 {
                Color::Black
            } else if i % 2 == 0 {
                Color::Black
            } else {
                Color::White
            };
            CgVertex { color, rotation: vec![a, b, c] }
        })
        .collect();
    CurrentGraph { modulus: n, vertices, arcs }
}

/// Ringel's cyclic neighborly triangulation scheme for n = 12s+7.
///
/// Row 0 is the network traversal log reduced mod n; every other row is
/// row 0 shifted by addition mod n.
pub fn ringel_scheme(s: usize) -> Result<RotationScheme, RotationError> {
    let n = 12 * s + 7;
    let row0: Vec<usize> = if s == 0 {
        // the unique 7-vertex neighborly torus, taken directly
        vec![1, 3, 2, 6, 4, 5]
    } else {
        let log = trace_current_graph(&ringel_network(s))?;
        log.entries
            .iter()
            .map(|&x| x.rem_euclid(n as i64) as usize)
            .collect()
    };
    let rows = (0..n)
        .map(|v| row0.iter().map(|&x| (x + v) % n).collect())
        .collect();
    RotationScheme::new(n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::FVector;

    fn moebius_rows() -> Vec<Vec<usize>> {
        vec![
            vec![1, 3, 2, 6, 4, 5],
            vec![2, 4, 3, 0, 5, 6],
            vec![3, 5, 4, 1, 6, 0],
            vec![4, 6, 5, 2, 0, 1],
            vec![5, 0, 6, 3, 1, 2],
            vec![6, 1, 0, 4, 2, 3],
            vec![0, 2, 1, 5, 3, 4],
        ]
    }

    fn pyramid_scheme() -> RotationScheme {
        RotationScheme::new(
            5,
            vec![
                vec![1, 2, 3, 4],
                vec![0, 4, 2],
                vec![0, 1, 3],
                vec![0, 2, 4],
                vec![0, 3, 1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn moebius_torus() {
        let scheme = RotationScheme::new(7, moebius_rows()).unwrap();
        assert!(check_delta_star(&scheme).is_none());
        let s = scheme_to_surface(&scheme).unwrap();
        let r = s.analyze();
        assert_eq!(r.f_vector, FVector { f0: 7, f1: 21, f2: 14 });
        assert_eq!(r.genus, Some(1));
        assert!(r.orientable && r.simplicial && r.neighborly);
        assert!(r.intersection_condition);
    }

    #[test]
    fn pyramid_traces_to_sphere() {
        let scheme = pyramid_scheme();
        let s = scheme_to_surface(&scheme).unwrap();
        let r = s.analyze();
        assert_eq!(r.f_vector, FVector { f0: 5, f1: 8, f2: 5 });
        assert_eq!(r.genus, Some(0));
        let mut sizes: Vec<usize> = s.faces().iter().map(|f| f.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 3, 3, 4]);
        // the quadrilateral breaks the triangle rule
        assert!(check_delta_star(&scheme).is_some());
    }

    #[test]
    fn tetrahedron_scheme() {
        let scheme = RotationScheme::new(
            4,
            vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
        )
        .unwrap();
        let s = scheme_to_surface(&scheme).unwrap();
        assert_eq!(s.analyze().f_vector, FVector { f0: 4, f1: 6, f2: 4 });
        assert!(check_delta_star(&scheme).is_none());
    }

    #[test]
    fn scheme_validation_errors() {
        // asymmetric: 0 lists 2 but row 2 does not list 0
        assert!(RotationScheme::new(3, vec![vec![1, 2], vec![0, 2], vec![1]]).is_err());
        assert!(RotationScheme::new(2, vec![vec![1, 1], vec![0]]).is_err());
        // wrong row count and out-of-range entries
        assert!(RotationScheme::new(3, vec![vec![1], vec![0]]).is_err());
        assert!(RotationScheme::new(2, vec![vec![5], vec![0]]).is_err());
    }

    #[test]
    fn theta_graph_golden_log() {
        let g = ringel_network(0);
        validate_current_graph(&g).unwrap();
        let log = trace_current_graph(&g).unwrap();
        assert_eq!(log.entries, vec![1, 3, 2, -1, -3, -2]);
        assert!(log.closed);
    }

    #[test]
    fn ringel_scheme_s0_is_moebius() {
        let scheme = ringel_scheme(0).unwrap();
        let expected = RotationScheme::new(7, moebius_rows()).unwrap();
        assert_eq!(scheme, expected);
        // the s = 0 network traces to the same scheme
        let log = trace_current_graph(&ringel_network(0)).unwrap();
        let row0: Vec<usize> = log.entries.iter().map(|&x| x.rem_euclid(7) as usize).collect();
        assert_eq!(canonical_cycle(row0), expected.rows()[0]);
    }

    #[test]
    fn network_family_validates() {
        for s in 1..=4 {
            let g = ringel_network(s);
            validate_current_graph(&g).unwrap();
            let log = trace_current_graph(&g).unwrap();
            assert_eq!(log.entries.len(), 2 * (6 * s + 3));
            // each signed value exactly once
            let set: BTreeSet<i64> = log.entries.iter().copied().collect();
            assert_eq!(set.len(), log.entries.len());
        }
    }

    #[test]
    fn network_prefix_matches_for_s2_s3() {
        for s in [2usize, 3] {
            let log = trace_current_graph(&ringel_network(s)).unwrap();
            let s = s as i64;
            let expected = vec![
                1,
                -(5 * s + 3),
                -(3 * s + 2),
                -(3 * s + 3),
                -(3 * s + 1),
                -(3 * s + 4),
                -3 * s,
                -(3 * s + 5),
            ];
            assert_eq!(&log.entries[..8], &expected[..]);
        }
    }

    #[test]
    fn flow_violation_on_reversed_arc() {
        let mut g = ringel_network(2);
        let a = g.arcs[0].clone();
        g.arcs[0] = CgArc { tail: a.head, head: a.tail, current: a.current };
        // fix rotations to keep the structure well-formed: swap end roles
        for v in g.vertices.iter_mut() {
            for e in v.rotation.iter_mut() {
                if *e == 0 {
                    *e = 1;
                } else if *e == 1 {
                    *e = 0;
                }
            }
        }
        assert!(matches!(
            validate_current_graph(&g),
            Err(RotationError::FlowViolation { .. })
        ));
    }

    #[test]
    fn ringel_s1_surface() {
        let scheme = ringel_scheme(1).unwrap();
        assert!(check_delta_star(&scheme).is_none());
        let s = scheme_to_surface(&scheme).unwrap();
        let r = s.analyze();
        assert_eq!(r.f_vector, FVector { f0: 19, f1: 171, f2: 114 });
        assert_eq!(r.genus, Some(20));
        assert!(r.neighborly && r.simplicial && r.orientable);
    }

    #[test]
    fn scheme_shift_invariance() {
        let scheme = ringel_scheme(1).unwrap();
        let n = scheme.n();
        for v in 0..n - 1 {
            let shifted: Vec<usize> =
                scheme.rows()[v].iter().map(|&x| (x + 1) % n).collect();
            assert_eq!(canonical_cycle(shifted), scheme.rows()[v + 1]);
        }
    }
}
