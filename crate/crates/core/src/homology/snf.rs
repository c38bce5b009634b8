//! Smith normal form with tracked transforms, and the linear solvers
//! built on it.

use crate::exact::mat::IntMat;
use crate::exact::Z;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// U * M * V = D with U, V unimodular and D diagonal with a
/// divisibility chain d1 | d2 | ... Every decomposition is re-verified
/// before being returned.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        (0..self.d.rows.min(self.d.cols))
            .take_while(|&i| !self.d[(i, i)].is_zero())
            .count()
    }

    /// Diagonal entries up to min(rows, cols).
    pub fn diagonal(&self) -> Vec<Z> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn min_abs_nonzero(a: &IntMat, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..a.rows {
        for j in from..a.cols {
            if a[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some(b) if a[(b.0, b.1)].abs() <= a[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMat) -> SmithDecomposition {
    let mut a = m.clone();
    let mut u = IntMat::identity(m.rows);
    let mut v = IntMat::identity(m.cols);
    let bound = m.rows.min(m.cols);
    let mut t = 0;
    while t < bound {
        let Some((pi, pj)) = min_abs_nonzero(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        'reduce: loop {
            for i in t + 1..a.rows {
                if !a[(i, t)].is_zero() {
                    let q = &a[(i, t)] / &a[(t, t)];
                    if !q.is_zero() {
                        let f = -q;
                        a.add_row_multiple(i, t, &f);
                        u.add_row_multiple(i, t, &f);
                    }
                    if !a[(i, t)].is_zero() {
                        // remainder is strictly smaller; re-pick pivot
                        let (ri, rj) = min_abs_nonzero(&a, t).unwrap();
                        a.swap_rows(t, ri);
                        u.swap_rows(t, ri);
                        a.swap_cols(t, rj);
                        v.swap_cols(t, rj);
                        continue 'reduce;
                    }
                }
            }
            for j in t + 1..a.cols {
                if !a[(t, j)].is_zero() {
                    let q = &a[(t, j)] / &a[(t, t)];
                    if !q.is_zero() {
                        let f = -q;
                        a.add_col_multiple(j, t, &f);
                        v.add_col_multiple(j, t, &f);
                    }
                    if !a[(t, j)].is_zero() {
                        let (ri, rj) = min_abs_nonzero(&a, t).unwrap();
                        a.swap_rows(t, ri);
                        u.swap_rows(t, ri);
                        a.swap_cols(t, rj);
                        v.swap_cols(t, rj);
                        continue 'reduce;
                    }
                }
            }
            // pivot divides everything below-right, or we fold a bad row in
            let pivot = a[(t, t)].clone();
            let mut fixed = true;
            'scan: for i in t + 1..a.rows {
                for j in t + 1..a.cols {
                    if !(&a[(i, j)] % &pivot).is_zero() {
                        let one = Z::from(1);
                        a.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let out = SmithDecomposition { u, d: a, v };
    verify(m, &out);
    out
}

fn verify(m: &IntMat, s: &SmithDecomposition) {
    assert!(s.u.is_unimodular(), "row transform not unimodular");
    assert!(s.v.is_unimodular(), "column transform not unimodular");
    let prod = s.u.mul(m).mul(&s.v);
    assert_eq!(prod, s.d, "transforms do not reproduce the diagonal form");
    let diag = s.diagonal();
    for w in diag.windows(2) {
        if !w[1].is_zero() {
            assert!(
                !w[0].is_zero() && (&w[1] % &w[0]).is_zero(),
                "divisibility chain broken"
            );
        }
    }
    for i in 0..s.d.rows {
        for j in 0..s.d.cols {
            if i != j {
                assert!(s.d[(i, j)].is_zero(), "off-diagonal residue");
            }
        }
    }
}

/// Invariant factors of the cokernel of M (as a map into Z^rows):
/// torsion factors > 1 and the free rank.
pub fn cokernel(m: &IntMat) -> (Vec<Z>, usize) {
    let s = smith_normal_form(m);
    let torsion: Vec<Z> = s
        .diagonal()
        .into_iter()
        .filter(|d| !d.is_zero() && *d > Z::from(1))
        .collect();
    let free = m.rows - s.rank();
    (torsion, free)
}

#[derive(Debug, PartialEq, Eq)]
pub struct SolveFailure {
    /// Index of an equation (row of the system) witnessing failure.
    pub row: usize,
}

/// Solves A x = b over the integers, or reports a failing equation.
/// The witness row r is such that the r-th transformed equation
/// (U A V y = U b) has no integer solution.
pub fn solve_integer(a: &IntMat, b: &[Z]) -> Result<Vec<Z>, SolveFailure> {
    assert_eq!(a.rows, b.len());
    let s = smith_normal_form(a);
    let ub = s.u.apply(b);
    let mut y = vec![Z::zero(); a.cols];
    let bound = a.rows.min(a.cols);
    for i in 0..a.rows {
        if i < bound && !s.d[(i, i)].is_zero() {
            let (q, r) = ub[i].div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return Err(SolveFailure { row: i });
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return Err(SolveFailure { row: i });
        }
    }
    Ok(s.v.apply(&y))
}

/// Solves A x = b modulo n > 0 by augmenting with n * I and solving
/// over the integers; the result is reduced into [0, n).
pub fn solve_mod(a: &IntMat, b: &[Z], n: &Z) -> Result<Vec<Z>, SolveFailure> {
    assert!(n > &Z::zero());
    let mut rows = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let mut row = a.row(i).to_vec();
        for j in 0..a.rows {
            row.push(if i == j { n.clone() } else { Z::zero() });
        }
        rows.push(row);
    }
    let aug = IntMat::from_rows(rows);
    let x = solve_integer(&aug, b)?;
    Ok(x[..a.cols].iter().map(|v| v.mod_floor(n)).collect())
}
