//! The deformed m-cube D_m^eps and the strictly-preserved-face machinery.
//!
//! D_m^eps is cut out by 2m inequalities: pair k reads
//! `+-eps x_k + 2 x_{k-1} - 7 x_{k-2} + 7 x_{k-3} - 2 x_{k-4} <= b_k`
//! with b_k = (6/eps)^{k-1}. For 0 < eps < 1/2 this is combinatorially an
//! m-cube, and a face survives the projection to the last four coordinates
//! exactly when the restricted normals of its tight facets are positively
//! dependent and span R^{m-4} — certified here by an exact LP plus a rank
//! computation.

use crate::linalg::{dot, nonnegative_solution, rank_basis};
use crate::mirror::CubeFaceCode;
use crate::rational::{rat, rat_int, Rat};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("epsilon must satisfy 0 < eps < 1/2")]
    EpsilonOutOfRange,
    #[error("{0}")]
    Domain(String),
    #[error("face `{face}` is not strictly preserved by the projection")]
    NotPreserved { face: String },
}

/// The 2m inequality rows `rows[i] . x <= rhs[i]`. Row `2k` is the +eps
/// member of pair k+1 (tight at sign/bit 1), row `2k+1` the -eps member
/// (tight at sign/bit 0).
#[derive(Debug, Clone)]
pub struct DeformedCube {
    m: usize,
    eps: Rat,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
}

/// A cube vertex selected by a sign per coordinate pair (true = +).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedVertex {
    pub signs: Vec<bool>,
    pub coords: Vec<Rat>,
}

/// Exact witness that a face is strictly preserved under projection to the
/// last four coordinates: positive coefficients lambda >= 1 with
/// sum lambda_F n'_F = 0, and a subset of tight rows whose restricted
/// normals form a basis of R^{m-4}.
#[derive(Debug, Clone)]
pub struct PreservationCertificate {
    pub face: String,
    pub tight_rows: Vec<usize>,
    pub lambda: Vec<Rat>,
    pub rank_witness: Vec<usize>,
}

fn band_row(m: usize, k: usize, eps: &Rat) -> Vec<Rat> {
    // pair k (1-indexed) with +eps at column k; negate eps for the twin
    let mut row = vec![Rat::zero(); m];
    row[k - 1] = eps.clone();
    for (off, c) in [(1usize, 2i64), (2, -7), (3, 7), (4, -2)] {
        if k > off {
            row[k - 1 - off] = rat_int(c);
        }
    }
    row
}

fn build_unchecked(m: usize, eps: Rat) -> DeformedCube {
    let base = rat_int(6) / eps.clone();
    let mut rows = Vec::with_capacity(2 * m);
    let mut rhs = Vec::with_capacity(2 * m);
    let mut b = Rat::one();
    for k in 1..=m {
        let plus = band_row(m, k, &eps);
        let mut minus = plus.clone();
        minus[k - 1] = -eps.clone();
        rows.push(plus);
        rows.push(minus);
        rhs.push(b.clone());
        rhs.push(b.clone());
        b *= base.clone();
    }
    DeformedCube { m, eps, rows, rhs }
}

pub fn build_deformed_cube(m: usize, eps: Rat) -> Result<DeformedCube, GeomError> {
    if m < 4 {
        return Err(GeomError::Domain(format!("m must be >= 4, got {m}")));
    }
    if !eps.is_positive() || eps >= rat(1, 2) {
        return Err(GeomError::EpsilonOutOfRange);
    }
    Ok(build_unchecked(m, eps))
}

/// Constructor bypassing the epsilon range check, for exercising the
/// failure mode of [`verify_cube_combinatorics`] on oversized epsilon.
pub fn build_deformed_cube_for_test(m: usize, eps: Rat) -> DeformedCube {
    build_unchecked(m, eps)
}

impl DeformedCube {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eps(&self) -> &Rat {
        &self.eps
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[Rat] {
        &self.rhs
    }

    /// Row index tight at the vertex side `positive` of pair `k` (1-indexed).
    pub fn row_index(&self, k: usize, positive: bool) -> usize {
        2 * (k - 1) + usize::from(!positive)
    }
}

/// Forward substitution: x_k = sign_k (1/eps)(b_k - 2x_{k-1} + 7x_{k-2}
/// - 7x_{k-3} + 2x_{k-4}), with x_j = 0 for j <= 0.
pub fn cube_vertex(c: &DeformedCube, signs: &[bool]) -> SignedVertex {
    assert_eq!(signs.len(), c.m);
    let mut x: Vec<Rat> = Vec::with_capacity(c.m);
    let get = |x: &Vec<Rat>, k: i64| -> Rat {
        if k >= 1 {
            x[(k - 1) as usize].clone()
        } else {
            Rat::zero()
        }
    };
    for k in 1..=c.m as i64 {
        let b = c.rhs[2 * (k as usize - 1)].clone();
        let mag = (b - rat_int(2) * get(&x, k - 1) + rat_int(7) * get(&x, k - 2)
            - rat_int(7) * get(&x, k - 3)
            + rat_int(2) * get(&x, k - 4))
            / c.eps.clone();
        x.push(if signs[k as usize - 1] { mag } else { -mag });
    }
    SignedVertex { signs: signs.to_vec(), coords: x }
}

/// Exhaustive certification that the 2m inequalities carve out a
/// combinatorial m-cube: all 2^m sign vertices distinct and feasible,
/// tight exactly on their m selected rows, never on both rows of a pair,
/// every row tight at exactly 2^{m-1} vertices, and the inductive bound
/// |x_k| < (1/3)(6/eps)^k at every vertex. Returns `None` on success or a
/// human-readable witness of the first failure.
pub fn verify_cube_combinatorics(c: &DeformedCube) -> Option<String> {
    let m = c.m;
    assert!(m <= 16, "2^m enumeration");
    let mut seen: Vec<Vec<Rat>> = Vec::with_capacity(1 << m);
    let mut tight_count = vec![0usize; 2 * m];
    let base = rat_int(6) / c.eps.clone();
    for v in 0..1usize << m {
        let signs: Vec<bool> = (0..m).map(|i| v >> i & 1 == 1).collect();
        let vert = cube_vertex(c, &signs);
        let mut bound = rat(1, 3);
        for k in 0..m {
            bound *= base.clone();
            if vert.coords[k].abs() >= bound {
                return Some(format!(
                    "vertex {v}: |x_{}| exceeds (1/3)(6/eps)^{}",
                    k + 1,
                    k + 1
                ));
            }
        }
        for r in 0..2 * m {
            let val = dot(&c.rows[r], &vert.coords);
            let should_be_tight = r == c.row_index(r / 2 + 1, signs[r / 2]);
            if val > c.rhs[r] {
                return Some(format!("vertex {v} violates row {r}"));
            }
            if (val == c.rhs[r]) != should_be_tight {
                return Some(format!(
                    "vertex {v}: row {r} tightness does not match its sign vector"
                ));
            }
            if val == c.rhs[r] {
                tight_count[r] += 1;
            }
        }
        if seen.contains(&vert.coords) {
            return Some(format!("vertex {v} coincides with an earlier vertex"));
        }
        seen.push(vert.coords);
    }
    for (r, &count) in tight_count.iter().enumerate() {
        if count != 1 << (m - 1) {
            return Some(format!(
                "row {r} is tight at {count} vertices, expected {}",
                1 << (m - 1)
            ));
        }
    }
    None
}

/// The matrix A'_m: the band rows at eps = 0, restricted to the first
/// m - 4 columns (one row per pair; the two pair members coincide).
pub fn a_prime_rows(m: usize) -> Vec<Vec<Rat>> {
    (1..=m)
        .map(|k| {
            let row = band_row(m, k, &Rat::zero());
            row[..m - 4].to_vec()
        })
        .collect()
}

/// Verifies the four exact row dependencies of A'_m: e_1, the all-ones
/// vector, (2^{k-1})_k and (2^{-(k-1)})_k all combine the rows to zero.
pub fn kernel_check_am(m: usize) -> bool {
    if m < 5 {
        return false;
    }
    let rows = a_prime_rows(m);
    let kernels: Vec<Vec<Rat>> = vec![
        (0..m).map(|k| if k == 0 { Rat::one() } else { Rat::zero() }).collect(),
        vec![Rat::one(); m],
        (0..m).map(|k| rat_int(1i64 << k)).collect(),
        (0..m).map(|k| rat(1, 1i64 << k)).collect(),
    ];
    kernels.iter().all(|v| {
        (0..m - 4).all(|j| {
            (0..m)
                .map(|k| v[k].clone() * rows[k][j].clone())
                .sum::<Rat>()
                .is_zero()
        })
    })
}

/// Finds coefficients lambda >= 1 with `sum lambda_i rows[i] = 0`, via the
/// substitution mu = lambda - 1 and exact phase-1 simplex.
pub fn positive_dependency(rows: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    if rows.is_empty() {
        return Some(vec![]);
    }
    let dim = rows[0].len();
    if dim == 0 {
        return Some(vec![Rat::one(); rows.len()]);
    }
    // system over mu: for each coordinate j, sum_i mu_i rows[i][j] = -sum_i rows[i][j]
    let a: Vec<Vec<Rat>> = (0..dim)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let b: Vec<Rat> = (0..dim)
        .map(|j| -rows.iter().map(|r| r[j].clone()).sum::<Rat>())
        .collect();
    let mu = nonnegative_solution(&a, &b)?;
    Some(mu.into_iter().map(|v| v + Rat::one()).collect())
}

/// Certificate from an explicit tight-row set (row indices into the cube's
/// 2m rows).
pub fn preservation_certificate_rows(
    c: &DeformedCube,
    face_label: &str,
    tight_rows: &[usize],
) -> Result<PreservationCertificate, GeomError> {
    let m = c.m;
    let restricted: Vec<Vec<Rat>> = tight_rows
        .iter()
        .map(|&r| c.rows[r][..m - 4].to_vec())
        .collect();
    let not_preserved = || GeomError::NotPreserved { face: face_label.to_string() };
    if m == 4 {
        // projection is a bijection; every face is trivially preserved
        return Ok(PreservationCertificate {
            face: face_label.to_string(),
            tight_rows: tight_rows.to_vec(),
            lambda: vec![Rat::one(); tight_rows.len()],
            rank_witness: vec![],
        });
    }
    let lambda = positive_dependency(&restricted).ok_or_else(not_preserved)?;
    let (rank, basis) = rank_basis(&restricted);
    if rank != m - 4 {
        return Err(not_preserved());
    }
    Ok(PreservationCertificate {
        face: face_label.to_string(),
        tight_rows: tight_rows.to_vec(),
        lambda,
        rank_witness: basis.into_iter().map(|i| tight_rows[i]).collect(),
    })
}

/// Certifies that the cube face given by `face` (entry 1 -> +eps row
/// tight, 0 -> -eps row, * -> free) is strictly preserved by the
/// projection to the last four coordinates.
pub fn preservation_certificate(
    c: &DeformedCube,
    face: &CubeFaceCode,
) -> Result<PreservationCertificate, GeomError> {
    if face.m() != c.m {
        return Err(GeomError::Domain(format!(
            "face code has length {}, cube has m = {}",
            face.m(),
            c.m
        )));
    }
    let code = face.to_string();
    let tight: Vec<usize> = code
        .bytes()
        .enumerate()
        .filter(|&(_, ch)| ch != b'*')
        .map(|(i, ch)| c.row_index(i + 1, ch == b'1'))
        .collect();
    preservation_certificate_rows(c, &code, &tight)
}

/// The last four coordinates of a vertex.
pub fn project_to_r4(v: &SignedVertex) -> [Rat; 4] {
    let n = v.coords.len();
    assert!(n >= 4);
    [
        v.coords[n - 4].clone(),
        v.coords[n - 3].clone(),
        v.coords[n - 2].clone(),
        v.coords[n - 1].clone(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_values() {
        let c = build_deformed_cube(5, rat(1, 3)).unwrap();
        let b: Vec<Rat> = (0..5).map(|k| c.rhs()[2 * k].clone()).collect();
        let expect: Vec<Rat> =
            [1, 18, 324, 5832, 104976].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(b, expect);
        let c = build_deformed_cube(4, rat(1, 4)).unwrap();
        let b: Vec<Rat> = (0..4).map(|k| c.rhs()[2 * k].clone()).collect();
        let expect: Vec<Rat> = [1, 24, 576, 13824].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(b, expect);
    }

    #[test]
    fn eps_range() {
        assert_eq!(
            build_deformed_cube(4, rat(1, 2)).unwrap_err(),
            GeomError::EpsilonOutOfRange
        );
        assert_eq!(
            build_deformed_cube(4, rat(0, 1)).unwrap_err(),
            GeomError::EpsilonOutOfRange
        );
        assert!(build_deformed_cube(3, rat(1, 4)).is_err());
    }

    #[test]
    fn forward_substitution() {
        let c = build_deformed_cube(4, rat(1, 3)).unwrap();
        let v = cube_vertex(&c, &[true, true, true, true]);
        assert_eq!(v.coords[0], rat_int(3));
        assert_eq!(v.coords[1], rat_int(36));
        let w = cube_vertex(&c, &[false, true, true, true]);
        assert_eq!(w.coords[0], rat_int(-3));
    }

    #[test]
    fn cube_combinatorics() {
        for (m, eps) in [(4usize, rat(1, 4)), (5, rat(1, 3))] {
            let c = build_deformed_cube(m, eps).unwrap();
            assert_eq!(verify_cube_combinatorics(&c), None);
        }
        // oversized epsilon breaks the combinatorics: a forced vertex
        // violates another row (this first shows up at m = 5; the m = 4
        // system happens to stay cubical even at eps = 2)
        let bad = build_deformed_cube_for_test(5, rat_int(2));
        let witness = verify_cube_combinatorics(&bad).unwrap();
        assert!(witness.contains("violates"));
        assert_eq!(
            verify_cube_combinatorics(&build_deformed_cube_for_test(4, rat_int(2))),
            None
        );
    }

    #[test]
    fn kernel_dependencies() {
        for m in [5usize, 8, 12] {
            assert!(kernel_check_am(m));
        }
    }

    #[test]
    fn quad_certificates_m7() {
        let c = build_deformed_cube(7, rat(1, 4)).unwrap();
        let face = CubeFaceCode::parse("01**010").unwrap();
        let cert = preservation_certificate(&c, &face).unwrap();
        assert_eq!(cert.tight_rows.len(), 5);
        assert!(cert.lambda.iter().all(|l| *l >= Rat::one()));
        // the certified combination really vanishes on the first m-4 coords
        for j in 0..3 {
            let s: Rat = cert
                .tight_rows
                .iter()
                .zip(&cert.lambda)
                .map(|(&r, l)| l.clone() * c.rows()[r][j].clone())
                .sum();
            assert!(s.is_zero());
        }
        assert_eq!(cert.rank_witness.len(), 3);
    }

    #[test]
    fn single_facet_not_preserved() {
        let c = build_deformed_cube(7, rat(1, 4)).unwrap();
        let err = preservation_certificate_rows(&c, "facet", &[0]).unwrap_err();
        assert_eq!(err, GeomError::NotPreserved { face: "facet".into() });
    }

    #[test]
    fn m4_trivially_preserved() {
        let c = build_deformed_cube(4, rat(1, 4)).unwrap();
        let face = CubeFaceCode::parse("0**1").unwrap();
        let cert = preservation_certificate(&c, &face).unwrap();
        assert_eq!(cert.tight_rows.len(), 2);
    }

    #[test]
    fn all_qm_faces_preserved_m5() {
        use crate::mirror::build_qm;
        let c = build_deformed_cube(5, rat(1, 4)).unwrap();
        let q = build_qm(5).unwrap();
        for code in q.quads() {
            preservation_certificate(&c, code).unwrap();
        }
    }

    #[test]
    fn projection_distinct_m6() {
        let c = build_deformed_cube(6, rat(1, 4)).unwrap();
        let mut images = Vec::new();
        for v in 0..64usize {
            let signs: Vec<bool> = (0..6).map(|i| v >> i & 1 == 1).collect();
            images.push(project_to_r4(&cube_vertex(&c, &signs)));
        }
        for i in 0..images.len() {
            for j in 0..i {
                assert_ne!(images[i], images[j]);
            }
        }
    }
}
