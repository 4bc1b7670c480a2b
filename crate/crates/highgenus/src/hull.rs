//! Exact incremental convex hull in R^4 with non-simplicial facets.
//!
//! Facets are stored as an outward hyperplane (normal . x <= offset for
//! every hull point) together with the set of input points lying on it, so
//! degenerate (merged) facets come out directly instead of being stitched
//! from simplices. All predicates are exact rational signs.

use crate::linalg::{dot, nullspace_vector, rank, rank_basis};
use crate::rational::Rat;
use num::bigint::BigInt;
use num::{Integer, One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HullError {
    #[error("input points span an affine subspace of rank < 4")]
    DegenerateSpan,
    #[error("input contains duplicate points (indices {0} and {1})")]
    DuplicatePoint(usize, usize),
}

/// One facet: `normal . x <= offset` for all hull points, with equality
/// exactly on `vertices` (sorted input indices).
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Polytope4 {
    points: Vec<Vec<Rat>>,
    facets: Vec<Facet>,
}

/// Affine rank (dimension of the affine hull) of a point set.
pub fn affine_rank(points: &[&Vec<Rat>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

/// Primitive-integer form of (normal, offset) under positive scaling only,
/// used as an orientation-preserving dedup key.
fn canonical_key(normal: &[Rat], offset: &Rat) -> Vec<BigInt> {
    let mut v: Vec<Rat> = normal.to_vec();
    v.push(offset.clone());
    let mut denom_lcm = BigInt::one();
    for x in &v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Hyperplane through an affinely rank-3 point set, or `None` if the rank
/// is not 3.
fn hyperplane_through(points: &[&Vec<Rat>]) -> Option<(Vec<Rat>, Rat)> {
    if points.is_empty() {
        return None;
    }
    let base = points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(a, b)| a - b).collect())
        .collect();
    let (r, basis) = rank_basis(&diffs);
    if r != 3 {
        return None;
    }
    let span: Vec<Vec<Rat>> = basis.iter().map(|&i| diffs[i].clone()).collect();
    let normal = nullspace_vector(&span)?;
    let offset = dot(&normal, base);
    Some((normal, offset))
}

impl Polytope4 {
    pub fn points(&self) -> &[Vec<Rat>] {
        &self.points
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// A point is a hull vertex iff the normals of its tight facets have
    /// rank 4.
    pub fn is_vertex(&self, i: usize) -> bool {
        let normals: Vec<Vec<Rat>> = self
            .facets
            .iter()
            .filter(|f| f.vertices.binary_search(&i).is_ok())
            .map(|f| f.normal.clone())
            .collect();
        rank(&normals) == 4
    }

    /// Indices of the facets containing point `i`.
    pub fn facets_of(&self, i: usize) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| self.facets[f].vertices.binary_search(&i).is_ok())
            .collect()
    }

    /// Two hull vertices span an edge iff the facets tight at both have
    /// normals of rank 3.
    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        let normals: Vec<Vec<Rat>> = self
            .facets
            .iter()
            .filter(|f| {
                f.vertices.binary_search(&u).is_ok() && f.vertices.binary_search(&v).is_ok()
            })
            .map(|f| f.normal.clone())
            .collect();
        rank(&normals) == 3
    }
}

pub fn hull4(points: &[Vec<Rat>]) -> Result<Polytope4, HullError> {
    assert!(points.iter().all(|p| p.len() == 4));
    for i in 0..points.len() {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(HullError::DuplicatePoint(j, i));
            }
        }
    }
    // greedy affinely independent seed of five points, in input order
    let mut seed: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        let mut trial: Vec<&Vec<Rat>> = seed.iter().map(|&s| &points[s]).collect();
        trial.push(&points[i]);
        if affine_rank(&trial) == trial.len() - 1 {
            seed.push(i);
            if seed.len() == 5 {
                break;
            }
        }
    }
    if seed.len() < 5 {
        return Err(HullError::DegenerateSpan);
    }
    let interior: Vec<Rat> = (0..4)
        .map(|c| {
            seed.iter().map(|&s| points[s][c].clone()).sum::<Rat>() / Rat::from(BigInt::from(5))
        })
        .collect();
    let orient = |mut normal: Vec<Rat>, mut offset: Rat| {
        if dot(&normal, &interior) > offset {
            for x in normal.iter_mut() {
                *x = -x.clone();
            }
            offset = -offset;
        }
        (normal, offset)
    };

    let mut processed: Vec<usize> = seed.clone();
    let mut facets: Vec<Facet> = Vec::new();
    for skip in 0..5 {
        let pts: Vec<&Vec<Rat>> = seed
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &s)| &points[s])
            .collect();
        let (normal, offset) = hyperplane_through(&pts).expect("seed is independent");
        let (normal, offset) = orient(normal, offset);
        let mut verts: Vec<usize> = seed
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &s)| s)
            .collect();
        verts.sort_unstable();
        facets.push(Facet { normal, offset, vertices: verts });
    }

    let seed_set: BTreeSet<usize> = seed.iter().copied().collect();
    for p in 0..points.len() {
        if seed_set.contains(&p) {
            continue;
        }
        let pt = &points[p];
        let mut beyond = Vec::new();
        let mut on = Vec::new();
        for (fi, f) in facets.iter().enumerate() {
            let v = dot(&f.normal, pt);
            if v > f.offset {
                beyond.push(fi);
            } else if v == f.offset {
                on.push(fi);
            }
        }
        if beyond.is_empty() {
            for &fi in &on {
                facets[fi].vertices.push(p);
                facets[fi].vertices.sort_unstable();
            }
            processed.push(p);
            continue;
        }
        // horizon ridges: tight-set intersections of a beyond facet with a
        // kept facet that form a 2-dimensional face
        let beyond_set: BTreeSet<usize> = beyond.iter().copied().collect();
        let mut new_planes: Vec<(Vec<Rat>, Rat)> = Vec::new();
        for &bf in &beyond {
            for (kf, keep) in facets.iter().enumerate() {
                if beyond_set.contains(&kf) {
                    continue;
                }
                let common: Vec<usize> = facets[bf]
                    .vertices
                    .iter()
                    .copied()
                    .filter(|v| keep.vertices.binary_search(v).is_ok())
                    .collect();
                let common_pts: Vec<&Vec<Rat>> = common.iter().map(|&v| &points[v]).collect();
                if affine_rank(&common_pts) != 2 {
                    continue;
                }
                let mut span = common_pts;
                span.push(pt);
                if let Some((normal, offset)) = hyperplane_through(&span) {
                    new_planes.push(orient(normal, offset));
                }
            }
        }
        processed.push(p);
        // drop beyond facets, then dedup and attach the new planes
        let mut kept: Vec<Facet> = facets
            .into_iter()
            .enumerate()
            .filter(|(fi, _)| !beyond_set.contains(fi))
            .map(|(_, f)| f)
            .collect();
        // "on" facets absorb p
        for f in kept.iter_mut() {
            if dot(&f.normal, pt) == f.offset {
                f.vertices.push(p);
                f.vertices.sort_unstable();
            }
        }
        let mut keys: BTreeSet<Vec<BigInt>> = kept
            .iter()
            .map(|f| canonical_key(&f.normal, &f.offset))
            .collect();
        for (normal, offset) in new_planes {
            let key = canonical_key(&normal, &offset);
            if !keys.insert(key) {
                continue;
            }
            let mut vertices: Vec<usize> = processed
                .iter()
                .copied()
                .filter(|&q| dot(&normal, &points[q]) == offset)
                .collect();
            vertices.sort_unstable();
            kept.push(Facet { normal, offset, vertices });
        }
        facets = kept;
    }

    // final sanity pass: complete tight sets, containment, facet dimension
    for f in facets.iter_mut() {
        let mut verts = Vec::new();
        for (q, pt) in points.iter().enumerate() {
            let v = dot(&f.normal, pt);
            assert!(v <= f.offset, "hull invariant violated: point outside facet");
            if v == f.offset {
                verts.push(q);
            }
        }
        let vp: Vec<&Vec<Rat>> = verts.iter().map(|&v| &points[v]).collect();
        assert_eq!(affine_rank(&vp), 3, "facet is not 3-dimensional");
        f.vertices = verts;
    }
    facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(Polytope4 { points: points.to_vec(), facets })
}
