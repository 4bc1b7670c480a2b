//! Dense exact-rational linear algebra: rank, linear solves, and a phase-1
//! simplex used for the face-preservation certificates.

use crate::rational::Rat;
use num::{One, Signed, Zero};

/// Row rank of a rational matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rank_basis(rows).1.len()
}

/// Returns (rank, indices of a row subset forming a basis of the row space).
pub fn rank_basis(rows: &[Vec<Rat>]) -> (usize, Vec<usize>) {
    if rows.is_empty() {
        return (0, vec![]);
    }
    let ncols = rows[0].len();
    let mut reduced: Vec<Vec<Rat>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new(); // pivot column of each reduced row
    let mut basis: Vec<usize> = Vec::new();
    for (ri, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (r, &pc) in reduced.iter().zip(&pivots) {
            if !v[pc].is_zero() {
                let f = v[pc].clone() / r[pc].clone();
                for c in 0..ncols {
                    let d = f.clone() * r[c].clone();
                    v[c] -= d;
                }
            }
        }
        if let Some(pc) = (0..ncols).find(|&c| !v[c].is_zero()) {
            reduced.push(v);
            pivots.push(pc);
            basis.push(ri);
        }
    }
    (basis.len(), basis)
}

/// Solves `A x = b` exactly (A given by rows). Returns `None` if inconsistent;
/// free variables are set to zero.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut v = row.clone();
            v.push(rhs.clone());
            v
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut prow = 0usize;
    for col in 0..n {
        let Some(sel) = (prow..m).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(prow, sel);
        let p = aug[prow][col].clone();
        for c in col..=n {
            aug[prow][c] = aug[prow][c].clone() / p.clone();
        }
        for r in 0..m {
            if r != prow && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=n {
                    let d = f.clone() * aug[prow][c].clone();
                    aug[r][c] -= d;
                }
            }
        }
        pivot_of_col[col] = Some(prow);
        prow += 1;
        if prow == m {
            break;
        }
    }
    // inconsistent if a zero row has nonzero rhs
    for r in 0..m {
        if aug[r][..n].iter().all(|x| x.is_zero()) && !aug[r][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for col in 0..n {
        if let Some(r) = pivot_of_col[col] {
            x[col] = aug[r][n].clone();
        }
    }
    Some(x)
}

/// A nonzero vector in the kernel of `A` (rows), or `None` if `A` has full
/// column rank.
pub fn nullspace_vector(a: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    let n = if a.is_empty() { return None } else { a[0].len() };
    let mut rows: Vec<Vec<Rat>> = a.to_vec();
    let m = rows.len();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut prow = 0usize;
    for col in 0..n {
        let Some(sel) = (prow..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(prow, sel);
        let p = rows[prow][col].clone();
        for c in col..n {
            rows[prow][c] = rows[prow][c].clone() / p.clone();
        }
        for r in 0..m {
            if r != prow && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..n {
                    let d = f.clone() * rows[prow][c].clone();
                    rows[r][c] -= d;
                }
            }
        }
        pivot_col_of_row.push(col);
        prow += 1;
        if prow == m {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![Rat::zero(); n];
    v[free] = Rat::one();
    for (r, &pc) in pivot_col_of_row.iter().enumerate() {
        v[pc] = -rows[r][free].clone();
    }
    Some(v)
}

/// Finds `x >= 0` with `A x = b`, by phase-1 simplex with Bland's rule.
///
/// Returns `None` if the system has no nonnegative solution.
pub fn nonnegative_solution(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = if m == 0 { 0 } else { a[0].len() };
    if m == 0 {
        return Some(vec![]);
    }
    // tableau: m rows, columns 0..n original, n..n+m artificial, last = rhs
    let ncols = n + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rat::zero(); ncols];
        let flip = b[i].is_negative();
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Rat::one();
        row[ncols - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // w-row for minimizing the artificial sum: w_j = -sum_i t[i][j] over
    // non-artificial columns, rhs = -sum_i rhs_i
    let mut w = vec![Rat::zero(); ncols];
    for i in 0..m {
        for j in 0..n {
            let d = t[i][j].clone();
            w[j] -= d;
        }
        let d = t[i][ncols - 1].clone();
        w[ncols - 1] -= d;
    }
    loop {
        // Bland: entering = smallest column with negative w coefficient
        let Some(enter) = (0..n + m).find(|&j| w[j].is_negative()) else {
            break;
        };
        // min-ratio leaving row, ties by smallest basis variable (Bland)
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = t[i][ncols - 1].clone() / t[i][enter].clone();
                let better = match &best {
                    None => true,
                    Some(bst) => {
                        ratio < *bst || (ratio == *bst && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave?; // unbounded cannot happen in phase 1, but be safe
        // pivot
        let p = t[leave][enter].clone();
        for c in 0..ncols {
            t[leave][c] = t[leave][c].clone() / p.clone();
        }
        for i in 0..m {
            if i != leave && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for c in 0..ncols {
                    let d = f.clone() * t[leave][c].clone();
                    t[i][c] -= d;
                }
            }
        }
        if !w[enter].is_zero() {
            let f = w[enter].clone();
            for c in 0..ncols {
                let d = f.clone() * t[leave][c].clone();
                w[c] -= d;
            }
        }
        basis[leave] = enter;
    }
    if !w[ncols - 1].is_zero() {
        return None; // artificial sum not driven to zero: infeasible
    }
    let mut x = vec![Rat::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][ncols - 1].clone();
        }
    }
    Some(x)
}

/// Dot product of equal-length rational vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_small() {
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 0]])), 0);
    }

    #[test]
    fn solve_exact() {
        let a = m(&[&[2, 1], &[1, -1]]);
        let b = vec![rat_int(5), rat_int(1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
        // inconsistent
        let a = m(&[&[1, 1], &[1, 1]]);
        let b = vec![rat_int(1), rat_int(2)];
        assert!(solve(&a, &b).is_none());
    }

    #[test]
    fn feasibility() {
        // x1 + x2 = 2 with x >= 0: feasible
        let a = m(&[&[1, 1]]);
        let x = nonnegative_solution(&a, &[rat_int(2)]).unwrap();
        assert_eq!(dot(&a[0], &x), rat_int(2));
        assert!(x.iter().all(|v| !v.is_negative()));
        // x1 - x2 = -1 feasible (x2 = 1)
        let a = m(&[&[1, -1]]);
        assert!(nonnegative_solution(&a, &[rat_int(-1)]).is_some());
        // x1 + x2 = -1 with x >= 0: infeasible
        let a = m(&[&[1, 1]]);
        assert!(nonnegative_solution(&a, &[rat_int(-1)]).is_none());
        // 2d: x1 = 1, x1 = 2 inconsistent
        let a = m(&[&[1], &[1]]);
        assert!(nonnegative_solution(&a, &[rat_int(1), rat_int(2)]).is_none());
    }

    #[test]
    fn nullspace() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let v = nullspace_vector(&a).unwrap();
        assert!(v.iter().any(|x| !num::Zero::is_zero(x)));
        for row in &a {
            assert!(num::Zero::is_zero(&dot(row, &v)));
        }
        // full column rank: no kernel
        assert!(nullspace_vector(&m(&[&[1, 0], &[0, 1]])).is_none());
    }

    #[test]
    fn feasibility_rational() {
        let a = vec![vec![rat(1, 2), rat(1, 3)]];
        let x = nonnegative_solution(&a, &[rat(5, 6)]).unwrap();
        assert_eq!(dot(&a[0], &x), rat(5, 6));
    }
}
