//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts).

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
///
/// `diag` has length `n`, `off` has length `n - 1` (`off[i]` couples rows `i` and `i + 1`).
/// Returns eigenvalues sorted ascending and the matching orthonormal eigenvectors,
/// `vectors[k]` being the `k`-th eigenvector.
pub fn symmetric_tridiagonal_eigen<T: Real>(
    diag: &[T],
    off: &[T],
) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    assert_eq!(off.len() + 1, n, "off-diagonal length must be n - 1");

    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    e[..n - 1].copy_from_slice(off);
    // z[row][col]: column `col` accumulates eigenvector `col`.
    let mut z = vec![vec![T::zero(); n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = T::one();
    }

    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let zf = row[i + 1];
                    row[i + 1] = s * row[i] + c * zf;
                    row[i] = c * row[i] - s * zf;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| z.iter().map(|row| row[k]).collect())
        .collect();
    Ok((values, vectors))
}
