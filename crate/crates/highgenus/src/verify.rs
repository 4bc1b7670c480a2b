//! Exact certification that a mesh in R^3 is an embedded polyhedral
//! surface: every face a planar strictly convex polygon, and every face
//! pair meeting in exactly its combinatorial shared subface (nothing, a
//! shared vertex, or a shared edge). All predicates are exact rational;
//! there are no tolerances.

use crate::linalg::dot;
use crate::mirror::build_qm;
use crate::rational::Rat;
use crate::schlegel::EmbeddedMesh;
use crate::surface::CellSurface;
use num::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("mesh is malformed: {0}")]
    Malformed(String),
}

/// A concrete defect: which face (pair) fails and how.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectWitness {
    pub face_a: usize,
    pub face_b: Option<usize>,
    pub kind: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingCertificate {
    pub planar_ok: bool,
    pub convex_ok: bool,
    pub pairwise_ok: bool,
    pub combinatorics_ok: bool,
    pub genus_from_mesh: Option<i64>,
    pub failures: Vec<DefectWitness>,
}

impl EmbeddingCertificate {
    pub fn ok(&self) -> bool {
        self.planar_ok && self.convex_ok && self.pairwise_ok && self.combinatorics_ok
    }
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Supporting plane (n, d) with n . x = d on the face, n = the cross
/// product of the first two independent edge vectors. `None` if all
/// vertices are collinear.
fn face_plane(verts: &[&Vec<Rat>]) -> Option<(Vec<Rat>, Rat)> {
    let base = verts[0];
    let mut first: Option<Vec<Rat>> = None;
    for v in &verts[1..] {
        let d = sub(v, base);
        if is_zero_vec(&d) {
            continue;
        }
        match &first {
            None => first = Some(d),
            Some(f) => {
                let n = cross(f, &d);
                if !is_zero_vec(&n) {
                    let off = dot(&n, base);
                    return Some((n, off));
                }
            }
        }
    }
    None
}

/// Planarity and strict convexity of every face. Returns the first defect
/// or `None`.
pub fn check_planarity_convexity(mesh: &EmbeddedMesh) -> Option<DefectWitness> {
    for (fi, face) in mesh.faces.iter().enumerate() {
        let witness = |kind: &str| DefectWitness {
            face_a: fi,
            face_b: None,
            kind: kind.to_string(),
        };
        if face.len() < 3 {
            return Some(witness("face has fewer than three vertices"));
        }
        let pts: Vec<&Vec<Rat>> = face.iter().map(|&v| &mesh.vertices[v]).collect();
        for i in 0..pts.len() {
            for j in 0..i {
                if pts[i] == pts[j] {
                    return Some(witness("face has coincident vertices"));
                }
            }
        }
        let Some((n, d)) = face_plane(&pts) else {
            return Some(witness("face is collinear"));
        };
        if pts.iter().any(|p| dot(&n, p) != d) {
            return Some(witness("face is not planar"));
        }
        // strict convexity: every cyclic triple turns the same way, with
        // no straight angles (sufficient for simplicity of triangles and
        // quads, the only face sizes this pipeline emits)
        let k = pts.len();
        for i in 0..k {
            let (a, b, c) = (pts[i], pts[(i + 1) % k], pts[(i + 2) % k]);
            let t = cross(&sub(b, a), &sub(c, b));
            if !dot(&t, &n).is_positive() {
                return Some(witness("face is not strictly convex"));
            }
        }
    }
    None
}

/// What two convex polygons share geometrically.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Overlap {
    Empty,
    Point(Vec<Rat>),
    Segment(Vec<Rat>, Vec<Rat>),
    Region,
}

/// Clips the line x = p + t u against a convex polygon lying in a plane
/// with normal n (the polygon's own orientation normal); the line is
/// assumed to lie in that plane. Returns the parameter interval.
fn clip_line_to_polygon(
    p: &[Rat],
    u: &[Rat],
    poly: &[&Vec<Rat>],
    n: &[Rat],
) -> Option<(Rat, Rat)> {
    let k = poly.len();
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for i in 0..k {
        let (a, b) = (poly[i], poly[(i + 1) % k]);
        let e = sub(b, a);
        // inside(x) = cross(e, x - a) . n >= 0; affine in t
        let c0 = dot(&cross(&e, &sub(p, a)), n);
        let c1 = dot(&cross(&e, u), n);
        if c1.is_zero() {
            if c0.is_negative() {
                return None;
            }
        } else {
            let bound = -c0 / c1.clone();
            if c1.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
    }
    let (lo, hi) = (lo?, hi?);
    (lo <= hi).then_some((lo, hi))
}

fn point_on_line(p: &[Rat], u: &[Rat], t: &Rat) -> Vec<Rat> {
    p.iter()
        .zip(u)
        .map(|(a, b)| a + t.clone() * b.clone())
        .collect()
}

/// 2-d convex clipping of polygon `a` by polygon `b`, both coplanar with
/// normal n; coordinates are taken in the two axes where n is not the
/// dominant component.
fn coplanar_overlap(a: &[&Vec<Rat>], b: &[&Vec<Rat>], n: &[Rat]) -> Overlap {
    let j = (0..3).find(|&i| !n[i].is_zero()).expect("nonzero normal");
    let (i1, i2) = match j {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let to2 = |p: &Vec<Rat>| vec![p[i1].clone(), p[i2].clone()];
    let lift = |p: &[Rat]| -> Vec<Rat> {
        // solve the dropped coordinate from the plane equation
        let d = dot(n, a[0]);
        let mut out = vec![Rat::zero(); 3];
        out[i1] = p[0].clone();
        out[i2] = p[1].clone();
        out[j] = (d - n[i1].clone() * p[0].clone() - n[i2].clone() * p[1].clone())
            / n[j].clone();
        out
    };
    let cross2 = |o: &[Rat], p: &[Rat], q: &[Rat]| -> Rat {
        (p[0].clone() - o[0].clone()) * (q[1].clone() - o[1].clone())
            - (p[1].clone() - o[1].clone()) * (q[0].clone() - o[0].clone())
    };
    let a2: Vec<Vec<Rat>> = a.iter().map(|p| to2(p)).collect();
    let mut b2: Vec<Vec<Rat>> = b.iter().map(|p| to2(p)).collect();
    // orient b counter-clockwise in the 2-d chart
    let area2: Rat = (0..b2.len())
        .map(|i| {
            let (p, q) = (&b2[i], &b2[(i + 1) % b2.len()]);
            p[0].clone() * q[1].clone() - q[0].clone() * p[1].clone()
        })
        .sum();
    if area2.is_negative() {
        b2.reverse();
    }
    // Sutherland-Hodgman: clip a2 by each edge of b2
    let mut poly = a2;
    let k = b2.len();
    for i in 0..k {
        if poly.is_empty() {
            break;
        }
        let (ca, cb) = (b2[i].clone(), b2[(i + 1) % k].clone());
        let mut next: Vec<Vec<Rat>> = Vec::new();
        let inside = |p: &[Rat]| !cross2(&ca, &cb, p).is_negative();
        let np = poly.len();
        for s in 0..np {
            let (p, q) = (&poly[s], &poly[(s + 1) % np]);
            let (ip, iq) = (inside(p), inside(q));
            if ip {
                next.push(p.clone());
            }
            if ip != iq {
                // edge crosses the clip line: solve for the crossing
                let fp = cross2(&ca, &cb, p);
                let fq = cross2(&ca, &cb, q);
                let t = fp.clone() / (fp - fq);
                next.push(vec![
                    p[0].clone() + t.clone() * (q[0].clone() - p[0].clone()),
                    p[1].clone() + t.clone() * (q[1].clone() - p[1].clone()),
                ]);
            }
        }
        poly = next;
        poly.dedup();
        if poly.len() > 1 && poly.first() == poly.last() {
            poly.pop();
        }
    }
    let distinct: Vec<Vec<Rat>> = {
        let mut d: Vec<Vec<Rat>> = Vec::new();
        for p in &poly {
            if !d.contains(p) {
                d.push(p.clone());
            }
        }
        d
    };
    match distinct.len() {
        0 => Overlap::Empty,
        1 => Overlap::Point(lift(&distinct[0])),
        _ => {
            let collinear = distinct[2..]
                .iter()
                .all(|p| cross2(&distinct[0], &distinct[1], p).is_zero());
            if collinear {
                // extreme points along the segment direction
                let dir = [
                    distinct[1][0].clone() - distinct[0][0].clone(),
                    distinct[1][1].clone() - distinct[0][1].clone(),
                ];
                let param = |p: &Vec<Rat>| -> Rat {
                    (p[0].clone() - distinct[0][0].clone()) * dir[0].clone()
                        + (p[1].clone() - distinct[0][1].clone()) * dir[1].clone()
                };
                let lo = distinct.iter().min_by_key(|p| param(p)).unwrap();
                let hi = distinct.iter().max_by_key(|p| param(p)).unwrap();
                if lo == hi {
                    Overlap::Point(lift(lo))
                } else {
                    Overlap::Segment(lift(lo), lift(hi))
                }
            } else {
                Overlap::Region
            }
        }
    }
}

/// Exact intersection of two planar strictly convex polygons in R^3.
fn polygon_overlap(a: &[&Vec<Rat>], b: &[&Vec<Rat>]) -> Overlap {
    let (na, da) = face_plane(a).expect("convex face");
    let (nb, db) = face_plane(b).expect("convex face");
    let dir = cross(&na, &nb);
    if is_zero_vec(&dir) {
        // parallel planes: coplanar iff the offsets agree under the scale
        let j = (0..3).find(|&i| !na[i].is_zero()).unwrap();
        let lam = nb[j].clone() / na[j].clone();
        if db != lam * da {
            return Overlap::Empty;
        }
        return coplanar_overlap(a, b, &na);
    }
    // line of intersection of the two planes
    let rows = vec![na.clone(), nb.clone()];
    let rhs = vec![da, db];
    let p = crate::linalg::solve(&rows, &rhs).expect("planes intersect");
    let ia = clip_line_to_polygon(&p, &dir, a, &na);
    let ib = clip_line_to_polygon(&p, &dir, b, &nb);
    let (Some((lo_a, hi_a)), Some((lo_b, hi_b))) = (ia, ib) else {
        return Overlap::Empty;
    };
    let lo = lo_a.max(lo_b);
    let hi = hi_a.min(hi_b);
    if lo > hi {
        Overlap::Empty
    } else if lo == hi {
        Overlap::Point(point_on_line(&p, &dir, &lo))
    } else {
        Overlap::Segment(point_on_line(&p, &dir, &lo), point_on_line(&p, &dir, &hi))
    }
}

/// What the combinatorics says faces `a` and `b` may share.
fn expected_overlap(mesh: &EmbeddedMesh, a: usize, b: usize) -> Result<Overlap, String> {
    let sa: BTreeSet<usize> = mesh.faces[a].iter().copied().collect();
    let shared: Vec<usize> = mesh.faces[b]
        .iter()
        .copied()
        .filter(|v| sa.contains(v))
        .collect();
    match shared.len() {
        0 => Ok(Overlap::Empty),
        1 => Ok(Overlap::Point(mesh.vertices[shared[0]].clone())),
        2 => {
            let consecutive = |face: &[usize]| {
                let k = face.len();
                (0..k).any(|i| {
                    let (u, v) = (face[i], face[(i + 1) % k]);
                    (u == shared[0] && v == shared[1]) || (u == shared[1] && v == shared[0])
                })
            };
            if consecutive(&mesh.faces[a]) && consecutive(&mesh.faces[b]) {
                Ok(Overlap::Segment(
                    mesh.vertices[shared[0]].clone(),
                    mesh.vertices[shared[1]].clone(),
                ))
            } else {
                Err("two shared vertices are not a shared edge".into())
            }
        }
        n => Err(format!("faces share {n} vertices")),
    }
}

fn same_overlap(found: &Overlap, expected: &Overlap) -> bool {
    match (found, expected) {
        (Overlap::Segment(a1, a2), Overlap::Segment(b1, b2)) => {
            (a1 == b1 && a2 == b2) || (a1 == b2 && a2 == b1)
        }
        _ => found == expected,
    }
}

fn thread_count(jobs: usize) -> usize {
    let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = std::env::var("HIGHGENUS_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(hw);
    cap.min(jobs).max(1)
}

/// Checks every unordered face pair: the exact geometric intersection must
/// equal the combinatorial shared subface. Returns all defects found.
pub fn check_pairwise(mesh: &EmbeddedMesh) -> Vec<DefectWitness> {
    let nf = mesh.faces.len();
    let pairs: Vec<(usize, usize)> = (0..nf)
        .flat_map(|a| (a + 1..nf).map(move |b| (a, b)))
        .collect();
    if pairs.is_empty() {
        return vec![];
    }
    let workers = thread_count(pairs.len());
    let chunk = pairs.len().div_ceil(workers);
    let mut failures: Vec<DefectWitness> = std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|slice| {
                scope.spawn(move || {
                    let mut local = Vec::new();
                    for &(a, b) in slice {
                        let pa: Vec<&Vec<Rat>> =
                            mesh.faces[a].iter().map(|&v| &mesh.vertices[v]).collect();
                        let pb: Vec<&Vec<Rat>> =
                            mesh.faces[b].iter().map(|&v| &mesh.vertices[v]).collect();
                        match expected_overlap(mesh, a, b) {
                            Err(kind) => local.push(DefectWitness {
                                face_a: a,
                                face_b: Some(b),
                                kind,
                            }),
                            Ok(expected) => {
                                let found = polygon_overlap(&pa, &pb);
                                if !same_overlap(&found, &expected) {
                                    let kind = match found {
                                        Overlap::Region => {
                                            "faces overlap in a 2-dimensional region".into()
                                        }
                                        other => format!(
                                            "intersection {} does not match combinatorics",
                                            match other {
                                                Overlap::Empty => "is empty but",
                                                Overlap::Point(_) => "is a point that",
                                                Overlap::Segment(..) => "is a segment that",
                                                Overlap::Region => unreachable!(),
                                            }
                                        ),
                                    };
                                    local.push(DefectWitness {
                                        face_a: a,
                                        face_b: Some(b),
                                        kind,
                                    });
                                }
                            }
                        }
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verifier worker panicked"))
            .collect()
    });
    failures.sort_by_key(|w| (w.face_a, w.face_b));
    failures
}

/// The mesh combinatorics must reproduce Q_m exactly when provenance codes
/// are present: each quad code carries one quad (or its two triangles)
/// over precisely the code's cube vertices.
fn check_combinatorics(mesh: &EmbeddedMesh) -> bool {
    if mesh.provenance.is_empty() {
        return true;
    }
    let m = mesh.provenance[0].m();
    let Ok(q) = build_qm(m) else {
        return false;
    };
    if mesh.vertices.len() != 1 << m {
        return false;
    }
    let expected: BTreeSet<String> = q.quads().iter().map(|c| c.to_string()).collect();
    let mut seen: Vec<String> = Vec::new();
    for (face, code) in mesh.faces.iter().zip(&mesh.provenance) {
        if !expected.contains(&code.to_string()) {
            return false;
        }
        let cv: BTreeSet<usize> = code.vertices().into_iter().collect();
        if !face.iter().all(|v| cv.contains(v)) {
            return false;
        }
        seen.push(code.to_string());
    }
    let per_code = mesh.faces.len() / expected.len();
    if !(per_code == 1 || per_code == 2) {
        return false;
    }
    let mut counts = std::collections::BTreeMap::new();
    for s in seen {
        *counts.entry(s).or_insert(0usize) += 1;
    }
    counts.len() == expected.len() && counts.values().all(|&c| c == per_code)
}

/// Runs every check and recomputes the genus from the mesh combinatorics.
pub fn certify(mesh: &EmbeddedMesh) -> EmbeddingCertificate {
    let mut failures = Vec::new();
    let planar_convex = check_planarity_convexity(mesh);
    let (planar_ok, convex_ok) = match &planar_convex {
        None => (true, true),
        Some(w) => {
            let planar = !w.kind.contains("planar") && !w.kind.contains("collinear");
            failures.push(w.clone());
            (planar, !w.kind.contains("convex"))
        }
    };
    let pairwise = if planar_convex.is_none() {
        check_pairwise(mesh)
    } else {
        vec![] // geometry of degenerate faces is not meaningful to compare
    };
    let pairwise_ok = planar_convex.is_none() && pairwise.is_empty();
    failures.extend(pairwise);
    let combinatorics_ok = check_combinatorics(mesh);
    let genus_from_mesh = CellSurface::new(mesh.vertices.len(), mesh.faces.clone(), None)
        .ok()
        .and_then(|s| s.analyze().genus);
    EmbeddingCertificate {
        planar_ok,
        convex_ok,
        pairwise_ok,
        combinatorics_ok,
        genus_from_mesh,
        failures,
    }
}
