//! The quad surface Q_m inside the m-cube.
//!
//! Faces of the m-cube are codes over {0,1,*}: a `*` marks a free
//! coordinate. Q_m keeps every vertex and edge of the cube but only the
//! 2-faces whose two free coordinates are cyclically adjacent, giving a
//! closed orientable surface of genus 1 + (m-4) 2^{m-3}.

use crate::surface::{CellSurface, SurfaceError};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MirrorError {
    #[error("{0}")]
    Domain(String),
    #[error("invalid face code `{0}`: expected characters 0, 1, * with at most two *")]
    BadCode(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// A face of the m-cube: `code[i]` is the i-th coordinate, `*` = free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeFaceCode {
    code: Vec<u8>, // b'0', b'1', b'*'
}

impl CubeFaceCode {
    pub fn parse(s: &str) -> Result<Self, MirrorError> {
        let code: Vec<u8> = s.bytes().collect();
        let stars = code.iter().filter(|&&c| c == b'*').count();
        if code.is_empty()
            || stars > 2
            || code.iter().any(|&c| !matches!(c, b'0' | b'1' | b'*'))
        {
            return Err(MirrorError::BadCode(s.to_string()));
        }
        Ok(CubeFaceCode { code })
    }

    pub fn dim(&self) -> usize {
        self.code.iter().filter(|&&c| c == b'*').count()
    }

    pub fn m(&self) -> usize {
        self.code.len()
    }

    /// Positions of the free coordinates.
    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.code[i] == b'*').collect()
    }

    /// The vertex numbers covered by this face (bit i = coordinate i).
    pub fn vertices(&self) -> Vec<usize> {
        let free = self.free_positions();
        let mut base = 0usize;
        for (i, &c) in self.code.iter().enumerate() {
            if c == b'1' {
                base |= 1 << i;
            }
        }
        (0..1usize << free.len())
            .map(|mask| {
                let mut v = base;
                for (j, &p) in free.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        v |= 1 << p;
                    }
                }
                v
            })
            .collect()
    }

    /// Membership in Q_m: a quad belongs to Q_m iff its two free
    /// coordinates are cyclically adjacent (the wrap pair counts).
    pub fn is_qm_quad(&self) -> bool {
        let free = self.free_positions();
        if free.len() != 2 {
            return false;
        }
        let m = self.m();
        let d = free[1] - free[0];
        d == 1 || d == m - 1
    }
}

impl fmt::Display for CubeFaceCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(std::str::from_utf8(&self.code).expect("ascii"))
    }
}

/// The surface Q_m together with its quad codes, one per face, in the
/// same order as the faces of `surface`.
#[derive(Debug, Clone)]
pub struct QmComplex {
    m: usize,
    surface: CellSurface,
    quads: Vec<CubeFaceCode>,
}

impl QmComplex {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn surface(&self) -> &CellSurface {
        &self.surface
    }

    pub fn quads(&self) -> &[CubeFaceCode] {
        &self.quads
    }
}

fn popcount_parity(x: usize) -> bool {
    // true = odd coordinate sum
    x.count_ones() % 2 == 1
}

/// Quad with free positions p and (p+1) mod m and fixed bits `fixed`:
/// the cycle [x00, x10, x11, x01] over the two free bits, first bit at p.
fn quad_cycle(m: usize, p: usize, fixed: usize) -> [usize; 4] {
    let p2 = (p + 1) % m;
    let (bp, bq) = (1usize << p, 1usize << p2);
    [fixed, fixed | bp, fixed | bp | bq, fixed | bq]
}

/// Enumerates Q_m: all 2^m cube vertices, and one quad for each cyclically
/// adjacent position pair and each assignment of the m-2 fixed bits.
pub fn build_qm(m: usize) -> Result<QmComplex, MirrorError> {
    if m < 3 {
        return Err(MirrorError::Domain(format!(
            "Q_m needs m >= 3, got m = {m}"
        )));
    }
    if m > 20 {
        return Err(MirrorError::Domain(format!(
            "m = {m} is too large (2^m vertices); supported m <= 20"
        )));
    }
    let n = 1usize << m;
    let mut faces = Vec::with_capacity(m << (m - 2));
    let mut quads = Vec::with_capacity(m << (m - 2));
    for p in 0..m {
        let p2 = (p + 1) % m;
        let free_mask = (1usize << p) | (1usize << p2);
        // iterate over assignments of the fixed coordinates
        for bits in 0..n {
            if bits & free_mask != 0 {
                continue;
            }
            let cyc = quad_cycle(m, p, bits);
            faces.push(cyc.to_vec());
            let code: Vec<u8> = (0..m)
                .map(|i| {
                    if i == p || i == p2 {
                        b'*'
                    } else if bits >> i & 1 == 1 {
                        b'1'
                    } else {
                        b'0'
                    }
                })
                .collect();
            quads.push(CubeFaceCode { code });
        }
    }
    let labels = (0..n)
        .map(|v| (0..m).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect())
        .collect();
    let surface = CellSurface::new(n, faces, Some(labels))?;
    Ok(QmComplex { m, surface, quads })
}

/// Orients every quad by the parity rule: in the quad with free 1-indexed
/// coordinates k-1 and k, edges free in coordinate k-1 run from the
/// even-sum vertex to the odd-sum one, edges free in coordinate k the
/// other way. Equivalently, the cycle [x00, x10, x11, x01] is kept when
/// x00 has even coordinate sum and reversed otherwise. The result is a
/// coherent global orientation, verified before returning.
pub fn orient_qm(q: &QmComplex) -> Result<CellSurface, MirrorError> {
    let mut faces = Vec::with_capacity(q.surface.faces().len());
    for cyc in q.surface.faces() {
        let mut f = cyc.clone();
        if popcount_parity(f[0]) {
            f.reverse();
        }
        faces.push(f);
    }
    let oriented = CellSurface::new(
        q.surface.n_vertices(),
        faces,
        q.surface.labels().map(|l| l.to_vec()),
    )?;
    // coherence: every directed edge must be used exactly once
    match oriented.orientation() {
        Some(flips) if flips.iter().all(|&f| !f) => Ok(oriented),
        _ => Err(MirrorError::Domain(
            "parity orientation is not coherent".into(),
        )),
    }
}

/// Splits every quad by a diagonal chosen so that, for even m, all vertex
/// degrees equal 3m/2: the quad with free 1-indexed coordinates k-1, k
/// gets the diagonal between its two even-sum vertices when k is even and
/// between its two odd-sum vertices when k is odd.
pub fn triangulate_equivelar(q: &QmComplex) -> Result<CellSurface, MirrorError> {
    let m = q.m;
    let mut faces = Vec::with_capacity(2 * q.surface.faces().len());
    for (cyc, code) in q.surface.faces().iter().zip(&q.quads) {
        let free = code.free_positions();
        // second free coordinate in the cyclic order, 1-indexed
        let p = if free == vec![0, m - 1] { m - 1 } else { free[0] };
        let k = ((p + 1) % m) + 1;
        let want_odd_sum = k % 2 == 1;
        // cyc = [x00, x10, x11, x01]; diagonals are {cyc[0],cyc[2]} and
        // {cyc[1],cyc[3]}, of opposite coordinate-sum parity
        let diag_02 = popcount_parity(cyc[0]) == want_odd_sum;
        if diag_02 {
            faces.push(vec![cyc[0], cyc[1], cyc[2]]);
            faces.push(vec![cyc[0], cyc[2], cyc[3]]);
        } else {
            faces.push(vec![cyc[1], cyc[2], cyc[3]]);
            faces.push(vec![cyc[1], cyc[3], cyc[0]]);
        }
    }
    Ok(CellSurface::new(
        q.surface.n_vertices(),
        faces,
        q.surface.labels().map(|l| l.to_vec()),
    )?)
}
