use num_complex::Complex;

use crate::scalar::Real;

/// `⟨m|D(α)|n⟩` for `0 ≤ m, n ≤ cutoff`, built column by column.
///
/// Column 0 is the coherent state; further columns follow from
/// `a† D = D (a† + α*)`, i.e. `D[m][n] = (√m D[m-1][n-1] - α* D[m][n-1]) / √n`.
/// Returned row-major: `d[m][n]`.
pub fn displacement_matrix<T: Real>(alpha: Complex<T>, cutoff: usize) -> Vec<Vec<Complex<T>>> {
    let dim = cutoff + 1;
    let zero = Complex::new(T::zero(), T::zero());
    let mut d = vec![vec![zero; dim]; dim];
    let sqrt: Vec<T> = (0..dim).map(|k| T::from_usize_lossy(k).sqrt()).collect();

    d[0][0] = Complex::new((-alpha.norm_sqr() / T::lit(2.0)).exp(), T::zero());
    for m in 1..dim {
        d[m][0] = d[m - 1][0] * alpha / sqrt[m];
    }
    let minus_conj = -alpha.conj();
    for n in 1..dim {
        d[0][n] = d[0][n - 1] * minus_conj / sqrt[n];
        for m in 1..dim {
            d[m][n] = (d[m - 1][n - 1].scale(sqrt[m]) + minus_conj * d[m][n - 1]) / sqrt[n];
        }
    }
    d
}
