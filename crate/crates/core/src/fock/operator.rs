use num_complex::Complex;

use super::state::TwoModeFockState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sparse operator on the square two-mode box, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator<T> {
    cutoff: usize,
    rows: Vec<Vec<(usize, Complex<T>)>>,
}

impl<T: Real> FockOperator<T> {
    fn diagonal(cutoff: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let side = cutoff + 1;
        let rows = (0..side * side)
            .map(|i| vec![(i, Complex::new(f(i / side, i % side), T::zero()))])
            .collect();
        Self { cutoff, rows }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `⟨m, n| O |m', n'⟩`.
    pub fn entry(&self, (m, n): (usize, usize), (mp, np): (usize, usize)) -> Complex<T> {
        let side = self.cutoff + 1;
        let col = mp * side + np;
        self.rows[m * side + n]
            .iter()
            .find(|(c, _)| *c == col)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn apply(&self, amplitudes: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if amplitudes.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: amplitudes.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (c, v)| acc + v * amplitudes[*c])
            })
            .collect())
    }

    pub fn adjoint(&self) -> Self {
        let mut rows = vec![Vec::new(); self.dim()];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.conj()));
            }
        }
        Self {
            cutoff: self.cutoff,
            rows,
        }
    }
}

/// `N̂ = N̂_p + N̂_s`.
pub fn build_n_operator<T: Real>(cutoff: usize) -> FockOperator<T> {
    FockOperator::diagonal(cutoff, |m, n| T::from_usize_lossy(m + n))
}

/// `L̂ = (N̂_p - N̂_s)/2`.
pub fn build_l_operator<T: Real>(cutoff: usize) -> FockOperator<T> {
    FockOperator::diagonal(cutoff, |m, n| {
        (T::from_usize_lossy(m) - T::from_usize_lossy(n)) / T::lit(2.0)
    })
}

/// `P̂ = sqrt(N̂_p / (N̂_s + 1))`.
pub fn modulus_operator<T: Real>(cutoff: usize) -> FockOperator<T> {
    FockOperator::diagonal(cutoff, |m, n| {
        (T::from_usize_lossy(m) / T::from_usize_lossy(n + 1)).sqrt()
    })
}

/// `Ê = Σ_{N ≤ M} Ê^(N)`; rows of incomplete layers (`m + n > M`) are empty.
pub fn phase_operator<T: Real>(cutoff: usize) -> FockOperator<T> {
    let side = cutoff + 1;
    let one = Complex::new(T::one(), T::zero());
    let mut rows = vec![Vec::new(); side * side];
    for layer in 0..=cutoff {
        // |n, N-n⟩⟨n+1, N-n-1|
        for n in 0..layer {
            rows[n * side + (layer - n)].push(((n + 1) * side + (layer - n - 1), one));
        }
        // vacuum wrap |N, 0⟩⟨0, N|
        rows[layer * side].push((layer, one));
    }
    FockOperator { cutoff, rows }
}

/// `Ê^(N)` in the layer basis `|n, N-n⟩`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerOperator<T> {
    pub photon_number: usize,
    pub matrix: Vec<Vec<Complex<T>>>,
}

impl<T: Real> LayerOperator<T> {
    /// `max |(Ê†Ê - 1)_{ij}|`.
    pub fn unitarity_defect(&self) -> T {
        let dim = self.matrix.len();
        let mut worst = T::zero();
        for i in 0..dim {
            for j in 0..dim {
                let g: Complex<T> = (0..dim)
                    .map(|k| self.matrix[k][i].conj() * self.matrix[k][j])
                    .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

pub fn phase_operator_layer<T: Real>(photon_number: usize) -> LayerOperator<T> {
    let dim = photon_number + 1;
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut matrix = vec![vec![zero; dim]; dim];
    for n in 0..photon_number {
        matrix[n][n + 1] = one;
    }
    matrix[photon_number][0] = one;
    LayerOperator {
        photon_number,
        matrix,
    }
}

fn check_dims<T: Real>(state: &TwoModeFockState<T>, op: &FockOperator<T>) -> Result<()> {
    if state.cutoff() != op.cutoff() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: state.dim(),
        });
    }
    Ok(())
}

fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// `⟨ψ|O|ψ⟩`.
pub fn expectation<T: Real>(state: &TwoModeFockState<T>, op: &FockOperator<T>) -> Result<Complex<T>> {
    check_dims(state, op)?;
    let applied = op.apply(state.amplitudes())?;
    Ok(inner(state.amplitudes(), &applied))
}

/// `‖(O - ⟨O⟩)ψ‖²` for Hermitian `O`.
pub fn variance_hermitian<T: Real>(state: &TwoModeFockState<T>, op: &FockOperator<T>) -> Result<T> {
    check_dims(state, op)?;
    let applied = op.apply(state.amplitudes())?;
    let mean = inner(state.amplitudes(), &applied);
    Ok(applied
        .iter()
        .zip(state.amplitudes())
        .map(|(o, psi)| (o - mean * psi).norm_sqr())
        .sum())
}

/// `1 - |⟨U⟩|²`.
pub fn circular_variance_unitary<T: Real>(
    state: &TwoModeFockState<T>,
    unitary: &FockOperator<T>,
) -> Result<T> {
    let mean = expectation(state, unitary)?;
    Ok((T::one() - mean.norm_sqr()).max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn smallest_layer_is_exchange() {
        let e = phase_operator_layer::<f64>(1);
        assert_eq!(e.matrix[0][1].re, 1.0);
        assert_eq!(e.matrix[1][0].re, 1.0);
        assert_eq!(e.matrix[0][0].re, 0.0);
        assert_eq!(e.matrix[1][1].re, 0.0);
    }

    #[test]
    fn layer_unitarity() {
        assert!(phase_operator_layer::<f64>(10).unitarity_defect() < 1e-14);
    }

    #[test]
    fn diagonal_entries() {
        let l = build_l_operator::<f64>(4);
        let n = build_n_operator::<f64>(4);
        let p = modulus_operator::<f64>(5);
        assert_eq!(l.entry((3, 1), (3, 1)).re, 1.0);
        assert_eq!(n.entry((2, 2), (2, 2)).re, 4.0);
        assert_eq!(p.entry((0, 5), (0, 5)).re, 0.0);
        assert_eq!(p.entry((3, 2), (3, 2)).re, 1.0);
        // P̂ on (5,0) is √5, while the swapped state gives 0, not 1/√5.
        assert_abs_diff_eq!(p.entry((5, 0), (5, 0)).re, 5.0_f64.sqrt(), epsilon = 1e-15);
        assert!((p.entry((0, 5), (0, 5)).re - 1.0 / 5.0_f64.sqrt()).abs() > 0.4);
    }

    #[test]
    fn full_operator_structure() {
        let e = phase_operator::<f64>(6);
        // one nonzero per row of every complete layer
        let side = 7;
        for m in 0..side {
            for n in 0..side {
                let want = usize::from(m + n <= 6);
                assert_eq!(e.rows[m * side + n].len(), want);
            }
        }
        // |2,3⟩⟨3,2| and the wrap |5,0⟩⟨0,5|
        assert_eq!(e.entry((2, 3), (3, 2)).re, 1.0);
        assert_eq!(e.entry((5, 0), (0, 5)).re, 1.0);
        let ed = e.adjoint();
        assert_eq!(ed.entry((3, 2), (2, 3)).re, 1.0);
    }

    #[test]
    fn commuting_diagonals() {
        // [N, L] = 0: both diagonal in the same basis
        let n = build_n_operator::<f64>(5);
        let l = build_l_operator::<f64>(5);
        let v: Vec<Complex<f64>> = (0..36).map(|i| Complex::new(i as f64, 1.0)).collect();
        let nl = n.apply(&l.apply(&v).unwrap()).unwrap();
        let ln = l.apply(&n.apply(&v).unwrap()).unwrap();
        assert_eq!(nl, ln);
    }

    #[test]
    fn apply_checks_dimension() {
        let n = build_n_operator::<f64>(3);
        assert!(matches!(
            n.apply(&[Complex::new(1.0, 0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
