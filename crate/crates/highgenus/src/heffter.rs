//! Self-dual surfaces over finite fields F_q with q = 4g + 1, and their
//! stellar triangulations.
//!
//! The surface has one (q-1)-gon face per field element: face F_s walks the
//! partial power sums s, s + 1, s + 1 + a, s + 1 + a + a^2, ... of a
//! multiplicative generator a. The complete graph K_q is the edge graph, the
//! dual graph is again complete, and both the additive group and the map
//! x -> a*x act on the surface.

use crate::surface::{CellSurface, SurfaceError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeffterError {
    #[error("q = {q} is not congruent to 1 mod 4")]
    NotFourGPlusOne { q: usize },
    #[error("q = {q} is not a supported prime power (primes and prime powers up to 125)")]
    UnsupportedPrimePower { q: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Arithmetic in F_q = F_p[x]/(irreducible of degree e), with elements
/// encoded as 0..q-1 via base-p digits (digit i = coefficient of x^i).
/// Primes use plain modular arithmetic; proper prime powers up to 125 use
/// a deterministically chosen irreducible polynomial.
#[derive(Debug, Clone)]
pub struct FiniteField {
    q: usize,
    p: usize,
    e: usize,
    /// Low coefficients of the monic irreducible modulus (empty for e = 1).
    modulus: Vec<usize>,
    generator: usize,
}

fn factor_prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut m = q;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

fn poly_mul_mod_p(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    let mut out = vec![0usize; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over Z_p.
fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm || (r.len() == dm + 1 && dm == 0) {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = i + shift;
                r[idx] = (r[idx] + p * p - (lead * c) % p) % p;
            }
        }
        r.pop();
        while r.len() > 1 && *r.last().unwrap() == 0 {
            r.pop();
        }
        if r.len() <= dm {
            break;
        }
    }
    r
}

fn is_irreducible(poly: &[usize], p: usize) -> bool {
    let deg = poly.len() - 1;
    // trial division by every monic polynomial of degree 1..deg/2
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push(c % p);
                c /= p;
            }
            div.push(1);
            let r = poly_rem(poly, &div, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn q(&self) -> usize {
        self.q
    }

    /// The canonical multiplicative generator: the smallest element code
    /// with multiplicative order q - 1.
    pub fn generator(&self) -> usize {
        self.generator
    }

    fn decode(&self, x: usize) -> Vec<usize> {
        let mut digits = Vec::with_capacity(self.e);
        let mut v = x;
        for _ in 0..self.e {
            digits.push(v % self.p);
            v /= self.p;
        }
        digits
    }

    fn encode(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let da = self.decode(a);
        let n: Vec<usize> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&n)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if self.e == 1 {
            return (a * b) % self.p;
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let mut full_mod = self.modulus.clone();
        full_mod.push(1);
        let prod = poly_mul_mod_p(&da, &db, self.p);
        let mut r = poly_rem(&prod, &full_mod, self.p);
        r.resize(self.e, 0);
        self.encode(&r)
    }

    pub fn pow(&self, a: usize, mut n: usize) -> usize {
        let mut base = a;
        let mut acc = 1usize;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.q - 2))
    }

    fn multiplicative_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Builds F_q. Primes of any size are computed with modular arithmetic;
/// proper prime powers are supported up to q = 125.
pub fn make_field(q: usize) -> Result<FiniteField, HeffterError> {
    let Some((p, e)) = factor_prime_power(q) else {
        return Err(HeffterError::UnsupportedPrimePower { q });
    };
    if e > 1 && q > 125 {
        return Err(HeffterError::UnsupportedPrimePower { q });
    }
    let modulus = if e == 1 {
        Vec::new()
    } else {
        // deterministic: smallest low-coefficient code giving an
        // irreducible monic polynomial x^e + ...
        (0..q)
            .find_map(|code| {
                let mut poly = Vec::with_capacity(e + 1);
                let mut c = code;
                for _ in 0..e {
                    poly.push(c % p);
                    c /= p;
                }
                poly.push(1);
                is_irreducible(&poly, p).then(|| poly[..e].to_vec())
            })
            .expect("an irreducible polynomial of every degree exists")
    };
    let mut field = FiniteField { q, p, e, modulus, generator: 1 };
    field.generator = (2..q)
        .find(|&g| field.multiplicative_order(g) == q - 1)
        .expect("the multiplicative group of a finite field is cyclic");
    Ok(field)
}

/// The self-dual surface over F_q, q = 4g + 1: q faces of size q - 1,
/// face s listed as the partial sums s + (1 + a + ... + a^{k-1}).
pub fn heffter_surface(q: usize) -> Result<CellSurface, HeffterError> {
    if q % 4 != 1 {
        return Err(HeffterError::NotFourGPlusOne { q });
    }
    let field = make_field(q)?;
    let faces = heffter_faces(&field);
    let labels = (0..q).map(|x| format!("f{x}")).collect();
    Ok(CellSurface::new(q, faces, Some(labels))?)
}

fn heffter_faces(field: &FiniteField) -> Vec<Vec<usize>> {
    let q = field.q();
    let a = field.generator();
    (0..q)
        .map(|s| {
            let mut face = Vec::with_capacity(q - 1);
            let mut t = s; // partial sum s + sum_{i<k} a^i
            let mut pw = 1; // a^k
            for _ in 0..q - 1 {
                face.push(t);
                t = field.add(t, pw);
                pw = field.mul(pw, a);
            }
            face
        })
        .collect()
}

/// Symmetry and duality certificates for the surface over F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelfDualReport {
    /// x -> x + c permutes the faces (F_s -> F_{s+c}) for every c.
    pub additive_action: bool,
    /// x -> a*x maps F_s onto F_{a*s - 1}.
    pub multiplicative_action: bool,
    /// Every two distinct faces share exactly one edge, so the dual graph
    /// is the complete graph K_q.
    pub dual_complete: bool,
}

fn same_cyclic(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    (0..n).any(|r| (0..n).all(|i| a[(i + r) % n] == b[i]))
}

/// Verifies the additive and multiplicative face actions and completeness
/// of the dual graph.
pub fn check_self_dual_and_actions(q: usize) -> Result<SelfDualReport, HeffterError> {
    if q % 4 != 1 {
        return Err(HeffterError::NotFourGPlusOne { q });
    }
    let field = make_field(q)?;
    let faces = heffter_faces(&field);
    let a = field.generator();

    let additive_action = (0..q).all(|c| {
        faces.iter().enumerate().all(|(s, face)| {
            let shifted: Vec<usize> = face.iter().map(|&x| field.add(x, c)).collect();
            same_cyclic(&shifted, &faces[field.add(s, c)])
        })
    });

    let multiplicative_action = faces.iter().enumerate().all(|(s, face)| {
        let mapped: Vec<usize> = face.iter().map(|&x| field.mul(a, x)).collect();
        let target = field.sub(field.mul(a, s), 1);
        same_cyclic(&mapped, &faces[target])
    });

    let mut shared = vec![vec![0usize; q]; q];
    for (fi, face) in faces.iter().enumerate() {
        let k = face.len();
        for i in 0..k {
            let (u, v) = (face[i], face[(i + 1) % k]);
            for (fj, other) in faces.iter().enumerate() {
                if fj == fi {
                    continue;
                }
                let m = other.len();
                for j in 0..m {
                    let (x, y) = (other[j], other[(j + 1) % m]);
                    if (x, y) == (v, u) || (x, y) == (u, v) {
                        shared[fi][fj] += 1;
                    }
                }
            }
        }
    }
    let dual_complete =
        (0..q).all(|i| (0..q).all(|j| i == j || shared[i][j] == 1));

    Ok(SelfDualReport { additive_action, multiplicative_action, dual_complete })
}

/// Stellar subdivision: every face is coned over a fresh apex vertex,
/// producing a simplicial surface of the same genus.
pub fn stellar_triangulation(surface: &CellSurface) -> Result<CellSurface, HeffterError> {
    let n = surface.n_vertices();
    let mut faces = Vec::new();
    for (fi, face) in surface.faces().iter().enumerate() {
        let apex = n + fi;
        let k = face.len();
        for i in 0..k {
            faces.push(vec![face[i], face[(i + 1) % k], apex]);
        }
    }
    Ok(CellSurface::new(n + surface.faces().len(), faces, None)?)
}
