//! Combinatorial closed-surface data model.
//!
//! A surface is given by its 2-cells as cyclic vertex walks; edges and vertex
//! links are always derived from the face list, never stored. Validation
//! enforces the closed-2-manifold conditions, `analyze` computes the f-vector,
//! Euler characteristic, orientability and genus, and the intersection
//! condition ("any two faces meet in a common face") is a separate check with
//! an explicit witness on failure.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("face {face} is irregular (repeated vertex or fewer than 3 vertices)")]
    IrregularFace { face: usize },
    #[error("vertex {vertex} in face {face} is out of range for n={n}")]
    VertexOutOfRange { face: usize, vertex: usize, n: usize },
    #[error("edge ({u},{v}) lies in {count} faces, expected 2")]
    EdgeDegree { u: usize, v: usize, count: usize },
    #[error("link of vertex {vertex} is not a single closed cycle")]
    BrokenLink { vertex: usize },
    #[error("edge graph is not connected")]
    Disconnected,
    #[error("empty face list")]
    EmptyFaceList,
    #[error("{0}")]
    Domain(String),
}

/// A validated closed surface: 2-cells as cyclic vertex sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSurface {
    n_vertices: usize,
    faces: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    pub f0: u64,
    pub f1: u64,
    pub f2: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub f_vector: FVector,
    pub euler_characteristic: i64,
    /// `None` for non-orientable surfaces, where only the Euler
    /// characteristic is reported.
    pub genus: Option<i64>,
    pub orientable: bool,
    pub simplicial: bool,
    pub neighborly: bool,
    pub intersection_condition: bool,
}

/// Witness for an intersection-condition failure: two faces whose shared
/// vertex set is not a common subface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionWitness {
    pub face_a: usize,
    pub face_b: usize,
    pub shared: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenusBound {
    pub bound: i64,
    /// Equality forces a neighborly triangulation, possible only for
    /// n = 0, 3, 4, 7 (mod 12).
    pub equality_requires_neighborly: bool,
}

/// On-disk surface format: `{"n": int, "faces": [[int,...],...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub n: usize,
    pub faces: Vec<Vec<usize>>,
}

/// Validates a face list as a closed surface.
pub fn validate_surface(n_vertices: usize, faces: Vec<Vec<usize>>) -> Result<CellSurface, SurfaceError> {
    CellSurface::new(n_vertices, faces, None)
}

impl CellSurface {
    pub fn new(
        n_vertices: usize,
        faces: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, SurfaceError> {
        if faces.is_empty() {
            return Err(SurfaceError::EmptyFaceList);
        }
        for (fi, face) in faces.iter().enumerate() {
            if face.len() < 3 {
                return Err(SurfaceError::IrregularFace { face: fi });
            }
            let mut seen = face.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(SurfaceError::IrregularFace { face: fi });
            }
            if let Some(&v) = face.iter().find(|&&v| v >= n_vertices) {
                return Err(SurfaceError::VertexOutOfRange { face: fi, vertex: v, n: n_vertices });
            }
        }
        let s = CellSurface { n_vertices, faces, labels };
        s.check_edge_degrees()?;
        s.check_links()?;
        s.check_connected()?;
        Ok(s)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Undirected edges with the number of face incidences (2 on valid input).
    pub fn edge_multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut edges = BTreeMap::new();
        for face in &self.faces {
            for i in 0..face.len() {
                let (a, b) = (face[i], face[(i + 1) % face.len()]);
                let key = (a.min(b), a.max(b));
                *edges.entry(key).or_insert(0) += 1;
            }
        }
        edges
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edge_multiplicities().into_keys().collect()
    }

    fn check_edge_degrees(&self) -> Result<(), SurfaceError> {
        for ((u, v), count) in self.edge_multiplicities() {
            if count != 2 {
                return Err(SurfaceError::EdgeDegree { u, v, count });
            }
        }
        Ok(())
    }

    fn check_links(&self) -> Result<(), SurfaceError> {
        // corner (a, v, b) in a face contributes link edge {a, b} at v
        let mut link_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n_vertices];
        for face in &self.faces {
            let k = face.len();
            for i in 0..k {
                let v = face[i];
                let a = face[(i + k - 1) % k];
                let b = face[(i + 1) % k];
                link_edges[v].push((a, b));
            }
        }
        for v in 0..self.n_vertices {
            let edges = &link_edges[v];
            if edges.is_empty() {
                continue; // caught as Disconnected later
            }
            // each neighbor must meet exactly two link edges, and the edges
            // must form one closed walk (multigraph-aware)
            let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
            for (ei, &(a, b)) in edges.iter().enumerate() {
                incident.entry(a).or_default().push(ei);
                incident.entry(b).or_default().push(ei);
            }
            if incident.values().any(|l| l.len() != 2) {
                return Err(SurfaceError::BrokenLink { vertex: v });
            }
            // degree-2 everywhere means the link is a disjoint union of
            // cycles; walk the cycle through edge 0 and require full coverage
            let mut count = 1usize;
            let mut cur_edge = 0usize;
            let mut cur_vertex = edges[0].1;
            loop {
                let inc = &incident[&cur_vertex];
                let next = if inc[0] == cur_edge { inc[1] } else { inc[0] };
                if next == 0 {
                    break;
                }
                count += 1;
                let (a, b) = edges[next];
                cur_vertex = if cur_vertex == a { b } else { a };
                cur_edge = next;
                if count > edges.len() {
                    break;
                }
            }
            if count != edges.len() {
                return Err(SurfaceError::BrokenLink { vertex: v });
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<(), SurfaceError> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n_vertices];
        for &(u, v) in self.edges().iter() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(SurfaceError::Disconnected)
        }
    }

    /// Consistent orientation flags (face reversed or not), or `None` if the
    /// surface is non-orientable. Propagates over the face-adjacency graph.
    pub fn orientation(&self) -> Option<Vec<bool>> {
        // usages of each undirected edge: (face, traversed low->high?)
        let mut usages: HashMap<(usize, usize), Vec<(usize, bool)>> = HashMap::new();
        for (fi, face) in self.faces.iter().enumerate() {
            for i in 0..face.len() {
                let (a, b) = (face[i], face[(i + 1) % face.len()]);
                usages
                    .entry((a.min(b), a.max(b)))
                    .or_default()
                    .push((fi, a < b));
            }
        }
        let mut flip: Vec<Option<bool>> = vec![None; self.faces.len()];
        for start in 0..self.faces.len() {
            if flip[start].is_some() {
                continue;
            }
            flip[start] = Some(false);
            let mut stack = vec![start];
            while let Some(f) = stack.pop() {
                let ff = flip[f].unwrap();
                for i in 0..self.faces[f].len() {
                    let (a, b) = (
                        self.faces[f][i],
                        self.faces[f][(i + 1) % self.faces[f].len()],
                    );
                    let key = (a.min(b), a.max(b));
                    for &(g, gdir) in &usages[&key] {
                        if g == f {
                            // regular faces never repeat an edge, so this is
                            // always the current usage itself
                            continue;
                        }
                        let fdir = a < b;
                        // consistent orientation: the two usages must be
                        // antiparallel after applying flips
                        let need = fdir == gdir; // same raw direction -> flips differ
                        let want = ff ^ need;
                        match flip[g] {
                            None => {
                                flip[g] = Some(want);
                                stack.push(g);
                            }
                            Some(x) if x != want => return None,
                            _ => {}
                        }
                    }
                }
            }
        }
        Some(flip.into_iter().map(|x| x.unwrap()).collect())
    }

    pub fn f_vector(&self) -> FVector {
        FVector {
            f0: self.n_vertices as u64,
            f1: self.edges().len() as u64,
            f2: self.faces.len() as u64,
        }
    }

    /// Returns `None` if the intersection condition holds, otherwise a witness.
    pub fn intersection_condition_witness(&self) -> Option<IntersectionWitness> {
        // count shared vertices per face pair via vertex->face incidences
        let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); self.n_vertices];
        for (fi, face) in self.faces.iter().enumerate() {
            for &v in face {
                at_vertex[v].push(fi);
            }
        }
        let mut shared: HashMap<(usize, usize), u32> = HashMap::new();
        for v in 0..self.n_vertices {
            let fs = &at_vertex[v];
            for i in 0..fs.len() {
                for j in (i + 1)..fs.len() {
                    *shared.entry((fs[i], fs[j])).or_insert(0) += 1;
                }
            }
        }
        let mut worst: Option<IntersectionWitness> = None;
        for (&(fa, fb), &count) in &shared {
            if count < 2 {
                continue;
            }
            let sa: Vec<usize> = {
                let mut s: Vec<usize> = self.faces[fa]
                    .iter()
                    .filter(|v| self.faces[fb].contains(v))
                    .copied()
                    .collect();
                s.sort_unstable();
                s
            };
            let bad = if count > 2 {
                true
            } else {
                // exactly two shared vertices: must be an edge of both faces
                !(consecutive_in(&self.faces[fa], sa[0], sa[1])
                    && consecutive_in(&self.faces[fb], sa[0], sa[1]))
            };
            if bad {
                let w = IntersectionWitness { face_a: fa, face_b: fb, shared: sa };
                if worst.as_ref().map_or(true, |b| w.shared.len() > b.shared.len()) {
                    worst = Some(w);
                }
            }
        }
        worst
    }

    /// Full report: f-vector, Euler characteristic, genus, orientability,
    /// simpliciality, neighborliness and the intersection condition.
    pub fn analyze(&self) -> SurfaceReport {
        let f = self.f_vector();
        let chi = f.f0 as i64 - f.f1 as i64 + f.f2 as i64;
        let orientable = self.orientation().is_some();
        SurfaceReport {
            f_vector: f,
            euler_characteristic: chi,
            genus: if orientable { Some((2 - chi) / 2) } else { None },
            orientable,
            simplicial: 3 * f.f2 == 2 * f.f1,
            neighborly: f.f1 == f.f0 * (f.f0 - 1) / 2,
            intersection_condition: self.intersection_condition_witness().is_none(),
        }
    }

    pub fn to_file(&self) -> SurfaceFile {
        SurfaceFile { n: self.n_vertices, faces: self.faces.clone() }
    }

    pub fn from_file(file: SurfaceFile) -> Result<Self, SurfaceError> {
        validate_surface(file.n, file.faces)
    }

    /// Applies a vertex relabeling permutation (`perm[old] = new`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, SurfaceError> {
        assert_eq!(perm.len(), self.n_vertices);
        let faces = self
            .faces
            .iter()
            .map(|f| f.iter().map(|&v| perm[v]).collect())
            .collect();
        CellSurface::new(self.n_vertices, faces, None)
    }
}

fn consecutive_in(cycle: &[usize], a: usize, b: usize) -> bool {
    let k = cycle.len();
    (0..k).any(|i| {
        let (x, y) = (cycle[i], cycle[(i + 1) % k]);
        (x == a && y == b) || (x == b && y == a)
    })
}

/// `⌊(n−3)(n−4)/12⌋`, the upper bound for the genus of an n-vertex surface.
pub fn max_genus_bound(n: usize) -> Result<GenusBound, SurfaceError> {
    if n < 4 {
        return Err(SurfaceError::Domain(format!("need n >= 4, got {n}")));
    }
    let n = n as i64;
    Ok(GenusBound {
        bound: (n - 3) * (n - 4) / 12,
        equality_requires_neighborly: matches!(n % 12, 0 | 3 | 4 | 7),
    })
}

/// The six quadrilaterals bounding the 3-cube, vertices coded 0..7 by bits.
pub fn cube_boundary() -> CellSurface {
    let faces = vec![
        vec![0, 2, 3, 1], // x=0
        vec![4, 5, 7, 6], // x=1
        vec![0, 1, 5, 4], // y=0
        vec![2, 6, 7, 3], // y=1
        vec![0, 4, 6, 2], // z=0
        vec![1, 3, 7, 5], // z=1
    ];
    validate_surface(8, faces).expect("cube boundary is a valid surface")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_is_a_sphere() {
        let cube = cube_boundary();
        let r = cube.analyze();
        assert_eq!(r.f_vector, FVector { f0: 8, f1: 12, f2: 6 });
        assert_eq!(r.euler_characteristic, 2);
        assert_eq!(r.genus, Some(0));
        assert!(r.orientable);
        assert!(!r.simplicial);
        assert!(!r.neighborly);
        assert!(r.intersection_condition);
    }

    #[test]
    fn square_pyramid() {
        let faces = vec![
            vec![1, 2, 3, 4],
            vec![0, 2, 1],
            vec![0, 3, 2],
            vec![0, 4, 3],
            vec![0, 1, 4],
        ];
        let s = validate_surface(5, faces).unwrap();
        let r = s.analyze();
        assert_eq!(r.f_vector, FVector { f0: 5, f1: 8, f2: 5 });
        assert_eq!(r.genus, Some(0));
        assert!(r.intersection_condition);
    }

    #[test]
    fn double_triangle_is_a_sphere() {
        let s = validate_surface(3, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        let r = s.analyze();
        assert_eq!(r.f_vector, FVector { f0: 3, f1: 3, f2: 2 });
        assert_eq!(r.genus, Some(0));
        assert!(r.orientable);
        // the two faces share all three vertices, so the intersection
        // condition fails even though the surface itself is valid
        assert!(!r.intersection_condition);
    }

    #[test]
    fn error_paths() {
        // single triangle: every edge in one face
        assert!(matches!(
            validate_surface(3, vec![vec![0, 1, 2]]),
            Err(SurfaceError::EdgeDegree { count: 1, .. })
        ));
        // repeated vertex in a cycle
        assert!(matches!(
            validate_surface(4, vec![vec![0, 1, 0, 2]]),
            Err(SurfaceError::IrregularFace { face: 0 })
        ));
        // 2-gon
        assert!(matches!(
            validate_surface(2, vec![vec![0, 1], vec![0, 1]]),
            Err(SurfaceError::IrregularFace { face: 0 })
        ));
        // two tetrahedra sharing one vertex: broken link at the shared vertex
        let tet = |o: usize, a: usize, b: usize, c: usize, d: usize| {
            let _ = o;
            vec![vec![a, c, b], vec![a, b, d], vec![b, c, d], vec![a, d, c]]
        };
        let mut faces = tet(0, 0, 1, 2, 3);
        faces.extend(tet(0, 0, 4, 5, 6));
        assert!(matches!(
            validate_surface(7, faces),
            Err(SurfaceError::BrokenLink { vertex: 0 })
        ));
        // two disjoint tetrahedra
        let mut faces = tet(0, 0, 1, 2, 3);
        faces.extend(tet(0, 4, 5, 6, 7));
        assert!(matches!(validate_surface(8, faces), Err(SurfaceError::Disconnected)));
        // out of range
        assert!(matches!(
            validate_surface(3, vec![vec![0, 1, 5]]),
            Err(SurfaceError::VertexOutOfRange { vertex: 5, .. })
        ));
        assert!(matches!(validate_surface(4, vec![]), Err(SurfaceError::EmptyFaceList)));
    }

    #[test]
    fn intersection_witness_two_nonadjacent_shared_vertices() {
        // octahedron with two opposite faces: fine; construct a failure by a
        // quadrangulated sphere where two quads share two opposite vertices
        // of a square: take the cube and merge is not possible while staying
        // valid, so test the witness path on the double triangle instead
        let s = validate_surface(3, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        let w = s.intersection_condition_witness().unwrap();
        assert_eq!(w.shared, vec![0, 1, 2]);
    }

    #[test]
    fn genus_bound_values() {
        assert_eq!(max_genus_bound(7).unwrap().bound, 1);
        assert_eq!(max_genus_bound(12).unwrap().bound, 6);
        assert_eq!(max_genus_bound(4).unwrap().bound, 0);
        assert!(max_genus_bound(7).unwrap().equality_requires_neighborly);
        assert!(!max_genus_bound(9).unwrap().equality_requires_neighborly);
        assert!(max_genus_bound(3).is_err());
    }

    #[test]
    fn tetrahedron_orientable() {
        let faces = vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3], vec![0, 3, 2]];
        let s = validate_surface(4, faces).unwrap();
        let r = s.analyze();
        assert_eq!(r.f_vector, FVector { f0: 4, f1: 6, f2: 4 });
        assert!(r.orientable && r.simplicial && r.neighborly);
        assert_eq!(r.genus, Some(0));
    }
}
