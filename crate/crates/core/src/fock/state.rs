use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::displacement::displacement_matrix;
use crate::error::{Error, Result};
use crate::phase_space::PhaseWaveFunction;
use crate::scalar::Real;

/// Default probability allowed outside the truncated space.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Per-mode photon cutoff `M` and the tail mass allowed beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCutoff<T> {
    pub cutoff: usize,
    pub tail_tol: T,
}

impl<T: Real> FockCutoff<T> {
    pub fn new(cutoff: usize) -> Self {
        Self {
            cutoff,
            tail_tol: T::tol(DEFAULT_TAIL_TOL, 64.0),
        }
    }

    pub fn with_tol(self, tail_tol: T) -> Self {
        Self { tail_tol, ..self }
    }
}

/// Pure state on the box `0 ≤ m, n ≤ M`, amplitudes indexed `m * (M + 1) + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockState<T> {
    cutoff: usize,
    amplitudes: Vec<Complex<T>>,
    tail_mass: T,
}

/// Moments of `N̂`, `Ê`, `L̂` and `P̂` in one pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockMoments<T> {
    pub n_mean: T,
    pub e_mean: Complex<T>,
    pub e_var: T,
    pub l_mean: T,
    pub l_var: T,
    pub p_mean: T,
    pub p_var: T,
}

impl<T: Real> TwoModeFockState<T> {
    /// Zero the incomplete layers, record the missing mass and renormalize.
    ///
    /// `amplitudes` are exact expansion coefficients of a unit-norm state, so whatever
    /// is not retained (plus `extra_tail`) is the truncation tail.
    fn from_truncated(
        cutoff: usize,
        mut amplitudes: Vec<Complex<T>>,
        extra_tail: T,
        tail_tol: T,
    ) -> Result<Self> {
        let side = cutoff + 1;
        let mut retained = T::zero();
        for (i, a) in amplitudes.iter_mut().enumerate() {
            if i / side + i % side > cutoff {
                *a = Complex::new(T::zero(), T::zero());
            } else {
                retained += a.norm_sqr();
            }
        }
        let tail = (T::one() - retained).max(T::zero()) + extra_tail;
        if !(tail <= tail_tol) {
            return Err(Error::CutoffTooSmall {
                tail: tail.to_f64_lossy(),
                tol: tail_tol.to_f64_lossy(),
            });
        }
        let s = T::one() / retained.sqrt();
        amplitudes.iter_mut().for_each(|a| *a = a.scale(s));
        Ok(Self {
            cutoff,
            amplitudes,
            tail_mass: tail,
        })
    }

    /// Arbitrary amplitudes (row-major, side `M + 1`); normalized, incomplete layers dropped.
    pub fn from_amplitudes(cutoff: usize, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let side = cutoff + 1;
        if amplitudes.len() != side * side {
            return Err(Error::DimensionMismatch {
                expected: side * side,
                got: amplitudes.len(),
            });
        }
        let total: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(total > T::zero()) || !total.is_finite() {
            return Err(Error::InvalidState("zero or non-finite norm".into()));
        }
        let s = T::one() / total.sqrt();
        let scaled = amplitudes.into_iter().map(|a| a.scale(s)).collect();
        Self::from_truncated(cutoff, scaled, T::zero(), T::one())
    }

    /// `|m, n⟩`.
    pub fn number_state(m: usize, n: usize, cutoff: usize) -> Result<Self> {
        if m + n > cutoff {
            return Err(Error::CutoffTooSmall {
                tail: 1.0,
                tol: 0.0,
            });
        }
        let side = cutoff + 1;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); side * side];
        amplitudes[m * side + n] = Complex::new(T::one(), T::zero());
        Ok(Self {
            cutoff,
            amplitudes,
            tail_mass: T::zero(),
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn tail_mass(&self) -> T {
        self.tail_mass
    }

    pub fn amplitude(&self, m: usize, n: usize) -> Complex<T> {
        if m > self.cutoff || n > self.cutoff {
            return Complex::new(T::zero(), T::zero());
        }
        self.amplitudes[m * (self.cutoff + 1) + n]
    }

    /// Amplitudes of layer `N` in the basis `|n, N-n⟩`, `n = 0..=N`.
    pub fn layer(&self, photon_number: usize) -> Vec<Complex<T>> {
        (0..=photon_number)
            .map(|n| {
                if photon_number - n > self.cutoff || n > self.cutoff {
                    Complex::new(T::zero(), T::zero())
                } else {
                    self.amplitude(n, photon_number - n)
                }
            })
            .collect()
    }

    fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex<T>)> + '_ {
        let side = self.cutoff + 1;
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, a)| (i / side, i % side, *a))
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨Ê⟩`, summed layer by layer including the vacuum wrap term.
    pub fn phase_expectation(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for layer in 0..=self.cutoff {
            for n in 0..layer {
                acc += self.amplitude(n, layer - n).conj() * self.amplitude(n + 1, layer - n - 1);
            }
            acc += self.amplitude(layer, 0).conj() * self.amplitude(0, layer);
        }
        acc
    }

    pub fn moments(&self) -> FockMoments<T> {
        let half = T::lit(0.5);
        let weight = |m: usize, n: usize| (T::from_usize_lossy(m), T::from_usize_lossy(n));
        let mut n_mean = T::zero();
        let mut l_mean = T::zero();
        let mut p_mean = T::zero();
        for (m, n, a) in self.iter() {
            let w = a.norm_sqr();
            if w == T::zero() {
                continue;
            }
            let (mf, nf) = weight(m, n);
            n_mean += (mf + nf) * w;
            l_mean += half * (mf - nf) * w;
            p_mean += (mf / (nf + T::one())).sqrt() * w;
        }
        let mut l_var = T::zero();
        let mut p_var = T::zero();
        for (m, n, a) in self.iter() {
            let w = a.norm_sqr();
            if w == T::zero() {
                continue;
            }
            let (mf, nf) = weight(m, n);
            let dl = half * (mf - nf) - l_mean;
            let dp = (mf / (nf + T::one())).sqrt() - p_mean;
            l_var += dl * dl * w;
            p_var += dp * dp * w;
        }
        let e_mean = self.phase_expectation();
        FockMoments {
            n_mean,
            e_mean,
            e_var: (T::one() - e_mean.norm_sqr()).max(T::zero()),
            l_mean,
            l_var,
            p_mean,
            p_var,
        }
    }
}

/// Single-mode coherent amplitudes `e^{-|α|²/2} α^k / √k!`, computed in log space.
fn coherent_amplitudes<T: Real>(alpha: Complex<T>, cutoff: usize) -> Vec<Complex<T>> {
    let r = alpha.norm();
    let arg = alpha.arg();
    let mut log_fact = T::zero();
    let half_norm = alpha.norm_sqr() / T::lit(2.0);
    (0..=cutoff)
        .map(|k| {
            if k > 0 {
                log_fact += T::from_usize_lossy(k).ln();
            }
            let kf = T::from_usize_lossy(k);
            if r == T::zero() {
                let v = if k == 0 { T::one() } else { T::zero() };
                return Complex::new(v, T::zero());
            }
            let log_mag = -half_norm + kf * r.ln() - log_fact / T::lit(2.0);
            Complex::from_polar(log_mag.exp(), kf * arg)
        })
        .collect()
}

/// Smallest cutoff whose dropped Poisson tail of the total photon number is below `tol / 4`.
pub fn coherent_cutoff(mean_photons: f64, tol: f64) -> usize {
    let lambda = mean_photons.max(0.0);
    if lambda == 0.0 {
        return 1;
    }
    // Beyond this index every Poisson weight is far below f64 resolution.
    let last = (lambda + 40.0 * lambda.sqrt() + 100.0).ceil() as usize;
    let mut log_p = -lambda;
    let mut weights = Vec::with_capacity(last + 1);
    for k in 0..=last {
        if k > 0 {
            log_p += lambda.ln() - (k as f64).ln();
        }
        weights.push(log_p.exp());
    }
    // Upper tails from suffix sums: no cancellation against 1.
    let mut tail = 0.0;
    let mut cutoff = last;
    for k in (1..last).rev() {
        tail += weights[k + 1];
        if tail >= tol / 4.0 {
            break;
        }
        cutoff = k;
    }
    cutoff
}

/// `|α_p⟩ ⊗ |α_s⟩` truncated to the complete layers of the box.
pub fn coherent_state<T: Real>(
    alpha_p: Complex<T>,
    alpha_s: Complex<T>,
    cut: FockCutoff<T>,
) -> Result<TwoModeFockState<T>> {
    if !(alpha_p.norm().is_finite() && alpha_s.norm().is_finite()) {
        return Err(Error::InvalidParameter("coherent amplitudes must be finite".into()));
    }
    let cp = coherent_amplitudes(alpha_p, cut.cutoff);
    let cs = coherent_amplitudes(alpha_s, cut.cutoff);
    let amplitudes = cp
        .iter()
        .flat_map(|a| cs.iter().map(move |b| a * b))
        .collect();
    TwoModeFockState::from_truncated(cut.cutoff, amplitudes, T::zero(), cut.tail_tol)
}

/// `D_p(α_p) D_s(α_s) Σ_k (e^{iθ} tanh 𝔰)^k |k, k⟩ / cosh 𝔰` with `ζ = 𝔰 e^{iθ}`.
pub fn displaced_squeezed_state<T: Real>(
    alpha_p: Complex<T>,
    alpha_s: Complex<T>,
    zeta: Complex<T>,
    cut: FockCutoff<T>,
) -> Result<TwoModeFockState<T>> {
    if !(alpha_p.norm().is_finite() && alpha_s.norm().is_finite() && zeta.norm().is_finite()) {
        return Err(Error::InvalidParameter("state parameters must be finite".into()));
    }
    let m_cut = cut.cutoff;
    let side = m_cut + 1;
    let s = zeta.norm();
    let ratio = Complex::from_polar(s.tanh(), zeta.arg());
    let t2 = s.tanh() * s.tanh();
    // Σ_{k>M} |c_k|² = tanh^{2(M+1)}
    let pair_tail = t2.powi(side as i32);
    let negligible = T::tol(1e-40, 0.0);
    let mut pairs = Vec::new();
    let mut c = Complex::new(T::one() / s.cosh(), T::zero());
    for k in 0..side {
        if c.norm_sqr() < negligible && k > 0 {
            break;
        }
        pairs.push((k, c));
        c *= ratio;
    }

    let dp = displacement_matrix(alpha_p, m_cut);
    let ds = displacement_matrix(alpha_s, m_cut);
    let zero = Complex::new(T::zero(), T::zero());
    let mut amplitudes = vec![zero; side * side];
    for m in 0..side {
        for n in 0..(side - m) {
            amplitudes[m * side + n] = pairs
                .iter()
                .fold(zero, |acc, (k, ck)| acc + dp[m][*k] * ck * ds[n][*k]);
        }
    }
    TwoModeFockState::from_truncated(m_cut, amplitudes, pair_tail, cut.tail_tol)
}

/// [`displaced_squeezed_state`] with the cutoff grown until the tail fits `tail_tol`.
pub fn displaced_squeezed_state_auto<T: Real>(
    alpha_p: Complex<T>,
    alpha_s: Complex<T>,
    zeta: Complex<T>,
    tail_tol: T,
) -> Result<TwoModeFockState<T>> {
    let s = zeta.norm().to_f64_lossy();
    let sinh2 = s.sinh().powi(2);
    let mean = alpha_p.norm_sqr().to_f64_lossy() + alpha_s.norm_sqr().to_f64_lossy() + 2.0 * sinh2;
    let t2 = s.tanh().powi(2);
    let geometric = if t2 > 0.0 {
        (tail_tol.to_f64_lossy().ln() / t2.ln()).max(0.0)
    } else {
        0.0
    };
    let mut cutoff = (mean + 10.0 * (mean + 1.0).sqrt() + 20.0).max(geometric + 10.0).ceil() as usize;
    loop {
        match displaced_squeezed_state(alpha_p, alpha_s, zeta, FockCutoff { cutoff, tail_tol }) {
            Err(Error::CutoffTooSmall { .. }) if cutoff < 4096 => cutoff = cutoff * 5 / 4 + 8,
            other => return other,
        }
    }
}

/// Place `Ψ_ℓ` on `|N/2 + ℓ, N/2 - ℓ⟩` of the single layer `N` (cutoff `M = N`).
pub fn embed_phase_state<T: Real>(
    psi: &PhaseWaveFunction<T>,
    photon_number: usize,
    tail_tol: T,
) -> Result<TwoModeFockState<T>> {
    if photon_number == 0 || !photon_number.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "embedding layer must be even and positive, got {photon_number}"
        )));
    }
    let half = (photon_number / 2) as i64;
    let side = photon_number + 1;
    let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); side * side];
    let mut clipped = T::zero();
    for (l, c) in psi.iter() {
        if l.abs() <= half {
            let m = (half + l) as usize;
            let n = (half - l) as usize;
            amplitudes[m * side + n] = c;
        } else {
            clipped += c.norm_sqr();
        }
    }
    if !(clipped <= tail_tol) {
        return Err(Error::LayerTooSmall {
            clipped: clipped.to_f64_lossy(),
            tol: tail_tol.to_f64_lossy(),
        });
    }
    let kept = T::one() - clipped;
    let s = T::one() / kept.sqrt();
    amplitudes.iter_mut().for_each(|a| *a = a.scale(s));
    Ok(TwoModeFockState {
        cutoff: photon_number,
        amplitudes,
        tail_mass: clipped,
    })
}
