//! Dense Gauss-Jordan elimination over exact rationals.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Solves `a * x = b` for a square `a` and any number of right-hand-side
/// columns. Returns `None` when `a` is singular.
///
/// Pivots are chosen by largest magnitude in the column. With exact
/// arithmetic any non-zero pivot is correct; the choice only keeps the
/// intermediate fractions small in practice.
pub fn solve(mut a: Matrix, mut b: Matrix) -> Option<Matrix> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].abs().cmp(&a[s][col].abs()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut().skip(col) {
            *v /= &p;
        }
        for v in b[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let (pivot_a, row_a) = pair_mut(&mut a, col, r);
            for (x, p) in row_a.iter_mut().zip(pivot_a.iter()).skip(col) {
                *x -= &f * p;
            }
            let (pivot_b, row_b) = pair_mut(&mut b, col, r);
            for (x, p) in row_b.iter_mut().zip(pivot_b.iter()) {
                *x -= &f * p;
            }
        }
    }
    Some(b)
}

/// Shared access to row `i` and mutable access to row `j`, `i != j`.
fn pair_mut(m: &mut Matrix, i: usize, j: usize) -> (&[Rational], &mut [Rational]) {
    if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&lo[i], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&hi[0], &mut lo[j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn solves_small_system() {
        // 2x + y = 5, x + 3y = 10  ->  x = 1, y = 3
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let b = vec![vec![int(5)], vec![int(10)]];
        let x = solve(a, b).unwrap();
        assert_eq!(x, vec![vec![int(1)], vec![int(3)]]);
    }

    #[test]
    fn needs_row_swap() {
        let a = vec![vec![int(0), int(1)], vec![int(2), int(0)]];
        let b = vec![vec![int(4), int(1)], vec![int(1), int(0)]];
        let x = solve(a, b).unwrap();
        assert_eq!(x, vec![vec![ratio(1, 2), int(0)], vec![int(4), int(1)]]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(a, vec![vec![int(1)], vec![int(2)]]).is_none());
    }

    #[test]
    fn empty_system() {
        assert_eq!(solve(vec![], vec![]), Some(vec![]));
    }
}
