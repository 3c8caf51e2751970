//! Exact phase-one simplex over rationals.
//!
//! Only feasibility is ever needed here: the vertex test asks whether a point
//! lies in the convex hull of the other points plus the positive orthant.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Decides whether `{x >= 0 : A x = b}` is nonempty.
///
/// `rows` holds the rows of `A`, all of the same width. Uses an artificial
/// variable per row and Bland's rule, so it always terminates.
pub fn feasible(rows: &[Vec<BigRational>], rhs: &[BigRational]) -> bool {
    assert_eq!(rows.len(), rhs.len(), "row/rhs length mismatch");
    let m = rows.len();
    if m == 0 {
        return true;
    }
    let width = rows[0].len();

    // Tableau over the original columns only; artificials are implicit in
    // the basis until they are pivoted out, and never re-enter.
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut b: Vec<BigRational> = Vec::with_capacity(m);
    for (row, r) in rows.iter().zip(rhs) {
        assert_eq!(row.len(), width, "ragged constraint matrix");
        if r.is_negative() {
            tab.push(row.iter().map(|v| -v).collect());
            b.push(-r);
        } else {
            tab.push(row.clone());
            b.push(r.clone());
        }
    }
    // basis[i] = Some(col) once row i's artificial has been replaced.
    let mut basis: Vec<Option<usize>> = vec![None; m];

    // Reduced-cost numerators of the phase-one objective sum(artificials):
    // entering column j lowers the objective when reduced[j] > 0.
    let mut reduced: Vec<BigRational> = vec![BigRational::zero(); width];
    let mut objective = BigRational::zero();
    for i in 0..m {
        for (j, v) in tab[i].iter().enumerate() {
            reduced[j] += v;
        }
        objective += &b[i];
    }

    loop {
        if objective.is_zero() {
            return true;
        }
        let Some(enter) = (0..width).find(|&j| reduced[j].is_positive()) else {
            return false;
        };

        // Ratio test; ties broken by smallest basic label (artificials first).
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            let coef = &tab[i][enter];
            if !coef.is_positive() {
                continue;
            }
            let ratio = &b[i] / coef;
            let better = match &leave {
                None => true,
                Some((li, lr)) => {
                    ratio < *lr
                        || (ratio == *lr && basis_label(basis[i], i) < basis_label(basis[*li], *li))
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            // Unbounded descent is impossible for a phase-one objective
            // bounded below by zero.
            unreachable!("phase-one objective unbounded");
        };

        let pivot = tab[row][enter].clone();
        for v in tab[row].iter_mut() {
            *v /= &pivot;
        }
        b[row] /= &pivot;
        let pivot_row = tab[row].clone();
        let pivot_rhs = b[row].clone();
        for i in 0..m {
            if i == row {
                continue;
            }
            let factor = tab[i][enter].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in tab[i].iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
            b[i] -= &factor * &pivot_rhs;
        }
        let factor = reduced[enter].clone();
        for (v, p) in reduced.iter_mut().zip(&pivot_row) {
            *v -= &factor * p;
        }
        objective -= &factor * &pivot_rhs;
        basis[row] = Some(enter);
    }
}

// Artificials order before every structural column; Bland's rule needs one
// fixed total order over all variables.
fn basis_label(entry: Option<usize>, row: usize) -> (u8, usize) {
    match entry {
        None => (0, row),
        Some(col) => (1, col),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn rows(data: &[&[i64]]) -> Vec<Vec<BigRational>> {
        data.iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect()
    }

    #[test]
    fn simple_feasible_system() {
        // x + y = 2, x - y = 0 -> x = y = 1
        assert!(feasible(&rows(&[&[1, 1], &[1, -1]]), &[q(2), q(0)]));
    }

    #[test]
    fn infeasible_by_sign() {
        // x + y = -1 with x, y >= 0
        assert!(!feasible(&rows(&[&[1, 1]]), &[q(-1)]));
    }

    #[test]
    fn infeasible_by_inconsistency() {
        assert!(!feasible(&rows(&[&[1, 0], &[1, 0]]), &[q(1), q(2)]));
    }

    #[test]
    fn degenerate_redundant_rows() {
        assert!(feasible(
            &rows(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]),
            &[q(1), q(1), q(0)]
        ));
    }

    #[test]
    fn midpoint_membership() {
        // (1,1) = l1 (2,0) + l2 (0,2) + s, l1 + l2 = 1
        let a = rows(&[&[2, 0, 1, 0], &[0, 2, 0, 1], &[1, 1, 0, 0]]);
        assert!(feasible(&a, &[q(1), q(1), q(1)]));
        // (1,0) is below the segment
        assert!(!feasible(&a, &[q(1), q(0), q(1)]));
    }
}
