//! Even, period-π angular Mathieu functions `ce_2k(η, q)`.
//!
//! The Fourier coefficients of `ce_2k(η, q) = Σ_j A_2j cos(2jη)` satisfy
//!
//! ```text
//! a A_0              = q A_2
//! (a - 4) A_2        = q (2 A_0 + A_4)
//! (a - 4j²) A_2j     = q (A_2j-2 + A_2j+2),   j ≥ 2
//! ```
//!
//! Scaling `A_0` by `√2` turns this into a symmetric tridiagonal eigenproblem whose
//! unit eigenvectors are exactly the normalization `2 A_0² + Σ_{j≥1} A_2j² = 1`
//! (so that `∫₀^{2π} ce² dη = π`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::symmetric_tridiagonal_eigen;
use crate::scalar::Real;

/// Number of Fourier coefficients kept in the truncated recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// `max(32, ceil(2√q) + 24)`, grown until the tail coefficient is negligible.
    #[default]
    Auto,
    Fixed(usize),
}

/// Truncation used by [`Truncation::Auto`] before any growth.
pub fn auto_truncation<T: Real>(q: T) -> usize {
    let grow = (T::lit(2.0) * q.sqrt()).ceil().to_usize().unwrap_or(usize::MAX / 2);
    32.max(grow.saturating_add(24))
}

const MAX_AUTO_TRUNCATION: usize = 1 << 14;

/// One even Mathieu solution `ce_2k(·, q)` with its eigenvalue `a_2k(q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MathieuSolution<T> {
    pub order_index: usize,
    pub q: T,
    pub eigenvalue: T,
    /// `A_2j` for `j = 0..J`.
    pub coefficients: Vec<T>,
}

/// `(Δ²L̂, Δ²Ê)` of the phase state built on a Mathieu solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MathieuVariances<T> {
    pub l_var: T,
    pub e_var: T,
}

fn tail_tolerance<T: Real>() -> T {
    T::tol(1e-12, 64.0)
}

fn check_q<T: Real>(q: T) -> Result<()> {
    if !q.is_finite() {
        return Err(Error::InvalidParameter(format!("q must be finite, got {q}")));
    }
    if q < T::zero() {
        return Err(Error::InvalidParameter(format!("q must be non-negative, got {q}")));
    }
    Ok(())
}

/// Solve for the `k`-th even period-π Mathieu function (eigenvalues sorted ascending).
pub fn solve_even_mathieu<T: Real>(
    q: T,
    order_index: usize,
    truncation: Truncation,
) -> Result<MathieuSolution<T>> {
    check_q(q)?;
    match truncation {
        Truncation::Fixed(dim) => {
            if order_index >= dim {
                return Err(Error::TruncationTooSmall(format!(
                    "order {order_index} needs more than {dim} coefficients"
                )));
            }
            let sol = solve_fixed(q, order_index, dim)?;
            let tail = sol.coefficients[dim - 1].abs();
            if tail >= tail_tolerance::<T>() {
                return Err(Error::TruncationTooSmall(format!(
                    "tail coefficient {tail:e} at J = {dim}"
                )));
            }
            Ok(sol)
        }
        Truncation::Auto => {
            let mut dim = auto_truncation(q).max(order_index + 24);
            loop {
                let sol = solve_fixed(q, order_index, dim)?;
                if sol.coefficients[dim - 1].abs() < tail_tolerance::<T>() {
                    return Ok(sol);
                }
                dim *= 2;
                if dim > MAX_AUTO_TRUNCATION {
                    return Err(Error::TruncationTooSmall(format!(
                        "no convergence up to J = {MAX_AUTO_TRUNCATION}"
                    )));
                }
            }
        }
    }
}

fn solve_fixed<T: Real>(q: T, order_index: usize, dim: usize) -> Result<MathieuSolution<T>> {
    let mut coefficients = vec![T::zero(); dim];
    if q == T::zero() {
        // Decoupled recurrence: a_2k(0) = 4k², ce_0 = 1/√2, ce_2k = cos(2kη).
        let k = T::from_usize_lossy(order_index);
        coefficients[order_index] = if order_index == 0 {
            T::FRAC_1_SQRT_2()
        } else {
            T::one()
        };
        return Ok(MathieuSolution {
            order_index,
            q,
            eigenvalue: T::lit(4.0) * k * k,
            coefficients,
        });
    }

    let diag: Vec<T> = (0..dim)
        .map(|j| {
            let j = T::from_usize_lossy(j);
            T::lit(4.0) * j * j
        })
        .collect();
    let mut off = vec![q; dim - 1];
    if let Some(first) = off.first_mut() {
        *first = T::SQRT_2() * q;
    }
    let (values, vectors) = symmetric_tridiagonal_eigen(&diag, &off)?;
    let mut vector = vectors[order_index].clone();
    vector[0] /= T::SQRT_2();

    // Sign: A_0 > 0, or the leading significant coefficient when A_0 vanishes.
    let pivot_tol = T::epsilon().sqrt();
    let pivot = vector
        .iter()
        .copied()
        .find(|c| c.abs() > pivot_tol)
        .unwrap_or(vector[0]);
    if pivot < T::zero() {
        vector.iter_mut().for_each(|c| *c = -*c);
    }
    coefficients.copy_from_slice(&vector);
    Ok(MathieuSolution {
        order_index,
        q,
        eigenvalue: values[order_index],
        coefficients,
    })
}

impl<T: Real> MathieuSolution<T> {
    pub fn truncation_dim(&self) -> usize {
        self.coefficients.len()
    }

    /// `2 A_0² + Σ_{j≥1} A_2j²`, equal to one for a valid solution.
    pub fn normalization(&self) -> T {
        let a0 = self.coefficients[0];
        a0 * a0 + self.coefficients.iter().map(|c| *c * *c).sum::<T>()
    }

    /// Largest absolute residual of the three-term recurrence.
    pub fn recurrence_residual(&self) -> T {
        let a = self.eigenvalue;
        let q = self.q;
        let c = &self.coefficients;
        let at = |j: usize| c.get(j).copied().unwrap_or_else(T::zero);
        let mut worst = (a * at(0) - q * at(1)).abs();
        for j in 1..c.len() {
            let jj = T::from_usize_lossy(j);
            let lower = if j == 1 { T::lit(2.0) * at(0) } else { at(j - 1) };
            let r = (a - T::lit(4.0) * jj * jj) * at(j) - q * (lower + at(j + 1));
            worst = worst.max(r.abs());
        }
        worst
    }

    /// `ce_2k(η, q) = Σ_j A_2j cos(2jη)`.
    pub fn eval_ce(&self, eta: T) -> T {
        // Clenshaw summation of the cosine series in 2η.
        let x = T::lit(2.0) * eta;
        let two_cos = T::lit(2.0) * x.cos();
        let mut b1 = T::zero();
        let mut b2 = T::zero();
        for &a in self.coefficients.iter().skip(1).rev() {
            let b0 = a + two_cos * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coefficients[0] + b1 * x.cos() - b2
    }

    /// `Θ = A_0 A_2 + Σ_{j≥0} A_2j A_2j+2`, the first circular moment of the phase state.
    pub fn theta_series(&self) -> T {
        let c = &self.coefficients;
        let pairs: T = c.windows(2).map(|w| w[0] * w[1]).sum();
        match c.get(1) {
            Some(&a2) => c[0] * a2 + pairs,
            None => T::zero(),
        }
    }

    /// `Δ²L̂ = (a - 2qΘ)/4` and `Δ²Ê = 1 - Θ²`.
    pub fn variances(&self) -> Result<MathieuVariances<T>> {
        let theta = self.theta_series();
        let l_var = (self.eigenvalue - T::lit(2.0) * self.q * theta) / T::lit(4.0);
        let slack = T::tol(1e-10, 1e3) * (T::one() + self.eigenvalue.abs());
        if l_var < -slack {
            return Err(Error::InconsistentSolution(format!(
                "negative L variance {l_var:e} (truncation J = {})",
                self.truncation_dim()
            )));
        }
        let e_var = (T::one() - theta * theta).max(T::zero()).min(T::one());
        Ok(MathieuVariances {
            l_var: l_var.max(T::zero()),
            e_var,
        })
    }
}

/// Eigenvalue `b_{2k+2}(q)` of the odd period-π solution `se_{2k+2}`.
///
/// Only the eigenvalue is provided; the odd branch has no variance pipeline.
pub fn odd_eigenvalue<T: Real>(q: T, order_index: usize, truncation: Truncation) -> Result<T> {
    check_q(q)?;
    let dim = match truncation {
        Truncation::Auto => auto_truncation(q).max(order_index + 24),
        Truncation::Fixed(dim) => dim,
    };
    if order_index >= dim {
        return Err(Error::TruncationTooSmall(format!(
            "order {order_index} needs more than {dim} coefficients"
        )));
    }
    // se_2k+2: B_2j for j = 1..=dim; (b - 4)B_2 = q B_4, (b - 4j²)B_2j = q(B_2j-2 + B_2j+2).
    let diag: Vec<T> = (1..=dim)
        .map(|j| {
            let j = T::from_usize_lossy(j);
            T::lit(4.0) * j * j
        })
        .collect();
    let off = vec![q; dim - 1];
    let (values, _) = symmetric_tridiagonal_eigen(&diag, &off)?;
    Ok(values[order_index])
}
