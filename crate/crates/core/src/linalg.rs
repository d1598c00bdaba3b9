// Dense exact linear algebra over BigRational, just enough for inverses and
// subfield membership in the cyclotomic module.

use alloc::vec::Vec;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Solve `a * x = b` for an m x n system of full column rank.
/// Returns `None` when the system is inconsistent or rank deficient.
pub(crate) fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut row = 0;
    for col in 0..n {
        let piv = (row..m).find(|&r| !a[r][col].is_zero())?;
        a.swap(row, piv);
        b.swap(row, piv);
        let inv = BigRational::one() / &a[row][col];
        for c in col..n {
            a[row][c] = &a[row][c] * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..m {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                let t = &f * &a[row][c];
                a[r][c] -= t;
            }
            let t = &f * &b[row];
            b[r] -= t;
        }
        row += 1;
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(b.into_iter().take(n).collect())
}
