//! Wave functions on the relative-phase circle.
//!
//! A state is stored by its photon-difference components `Ψ_ℓ`; the phase
//! representation is `Ψ(φ) = (2π)^{-1/2} Σ_ℓ e^{-iℓφ} Ψ_ℓ`, so that `Ê ↦ e^{iφ}` acts as
//! `ℓ → ℓ - 1` and `⟨Ê⟩ = Σ_ℓ Ψ_ℓ* Ψ_{ℓ+1}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mathieu::MathieuSolution;
use crate::scalar::Real;
use crate::special::bessel_i_scaled;

/// Fourier-side wave function on a finite window of `ℓ` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseWaveFunction<T> {
    /// `ℓ` of `components[0]`, already including `mean_l_offset`.
    first_index: i64,
    components: Vec<Complex<T>>,
    /// Integer index translation applied to the centred state.
    mean_l_offset: i64,
    /// Probability dropped when the window was chosen.
    tail_mass: T,
}

/// Circular moments of a phase state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularMoments<T> {
    pub e_mean: Complex<T>,
    pub e_var: T,
    pub l_mean: T,
    pub l_var: T,
}

fn normalize<T: Real>(components: &mut [Complex<T>]) -> T {
    let norm: T = components.iter().map(|c| c.norm_sqr()).sum();
    if norm > T::zero() {
        let s = T::one() / norm.sqrt();
        components.iter_mut().for_each(|c| *c = c.scale(s));
    }
    norm
}

impl<T: Real> PhaseWaveFunction<T> {
    /// Build from raw components starting at `first_index`; the vector is normalized.
    pub fn from_components(first_index: i64, mut components: Vec<Complex<T>>) -> Result<Self> {
        let norm = normalize(&mut components);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidState("wave function has zero or non-finite norm".into()));
        }
        Ok(Self {
            first_index,
            components,
            mean_l_offset: 0,
            tail_mass: T::zero(),
        })
    }

    /// Uniform phase distribution (`Ψ_ℓ = δ_ℓ0`).
    pub fn uniform() -> Self {
        Self::l_eigenstate(0)
    }

    /// Photon-difference eigenstate `|ℓ⟩`.
    pub fn l_eigenstate(l: i64) -> Self {
        Self {
            first_index: l,
            components: vec![Complex::new(T::one(), T::zero())],
            mean_l_offset: 0,
            tail_mass: T::zero(),
        }
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.components.len() as i64 - 1
    }

    pub fn components(&self) -> &[Complex<T>] {
        &self.components
    }

    pub fn mean_l_offset(&self) -> i64 {
        self.mean_l_offset
    }

    pub fn tail_mass(&self) -> T {
        self.tail_mass
    }

    /// `Ψ_ℓ`, zero outside the stored window.
    pub fn component(&self, l: i64) -> Complex<T> {
        let i = l - self.first_index;
        if i < 0 {
            return Complex::new(T::zero(), T::zero());
        }
        self.components
            .get(i as usize)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    /// `(ℓ, Ψ_ℓ)` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.components
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.first_index + i as i64, *c))
    }

    /// `(ℓ, |Ψ_ℓ|²)`.
    pub fn spectrum(&self) -> Vec<(i64, T)> {
        self.iter().map(|(l, c)| (l, c.norm_sqr())).collect()
    }

    pub fn norm_sqr(&self) -> T {
        self.components.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Multiply by `e^{-imφ}`: every index moves by `m`.
    pub fn shifted(&self, m: i64) -> Self {
        Self {
            first_index: self.first_index + m,
            mean_l_offset: self.mean_l_offset + m,
            ..self.clone()
        }
    }

    /// `Ψ_ℓ → e^{iℓθ} Ψ_ℓ`, i.e. `Ψ(φ) → Ψ(φ - θ)`.
    pub fn rotated(&self, theta: T) -> Self {
        let components = self
            .iter()
            .map(|(l, c)| c * Complex::from_polar(T::one(), T::from_i64_lossy(l) * theta))
            .collect();
        Self {
            components,
            ..self.clone()
        }
    }

    /// `Ψ(φ)` from the Fourier sum.
    pub fn amplitude_at(&self, phi: T) -> Complex<T> {
        let step = Complex::from_polar(T::one(), -phi);
        let mut phase = Complex::from_polar(T::one(), -T::from_i64_lossy(self.first_index) * phi);
        let mut sum = Complex::new(T::zero(), T::zero());
        for c in &self.components {
            sum += phase * c;
            phase *= step;
        }
        sum.scale(T::one() / (T::lit(2.0) * T::PI()).sqrt())
    }
}

/// `Ψ_ℓ` of `e^{-i m φ} ce_2k(φ/2, q)/√π`: `Ψ_0 = √2 A_0`, `Ψ_{±j} = A_2j/√2`, shifted by `m`.
pub fn from_mathieu<T: Real>(sol: &MathieuSolution<T>, mean_l: i64) -> PhaseWaveFunction<T> {
    let coeffs = &sol.coefficients;
    let j_max = coeffs.len() - 1;
    let mut components = Vec::with_capacity(2 * j_max + 1);
    for j in (1..=j_max).rev() {
        components.push(Complex::new(coeffs[j] * T::FRAC_1_SQRT_2(), T::zero()));
    }
    components.push(Complex::new(coeffs[0] * T::SQRT_2(), T::zero()));
    for &c in &coeffs[1..] {
        components.push(Complex::new(c * T::FRAC_1_SQRT_2(), T::zero()));
    }
    PhaseWaveFunction {
        first_index: -(j_max as i64),
        components,
        mean_l_offset: 0,
        tail_mass: T::zero(),
    }
    .shifted(mean_l)
}

/// Window tail allowed when truncating the von Mises spectrum.
const VON_MISES_TAIL: f64 = 1e-15;

/// Square-root von Mises state, `|Ψ(φ)|² ∝ exp[-κ cos(φ - φ₀)]`, shifted by `mean_l`.
///
/// `Ψ_ℓ = (-1)^ℓ e^{iℓφ₀} I_ℓ(κ/2) / √I_0(κ)`.
pub fn from_von_mises<T: Real>(kappa: T, phi0: T, mean_l: i64) -> Result<PhaseWaveFunction<T>> {
    if !kappa.is_finite() || kappa < T::zero() {
        return Err(Error::InvalidParameter(format!(
            "kappa must be finite and non-negative, got {kappa}"
        )));
    }
    if !phi0.is_finite() {
        return Err(Error::InvalidParameter("phi0 must be finite".into()));
    }
    if kappa == T::zero() {
        return Ok(PhaseWaveFunction::uniform().shifted(mean_l));
    }
    let half = kappa / T::lit(2.0);
    let x = half.to_f64_lossy();
    let n_max = (x.ceil() as usize) + (12.0 * (x + 1.0).sqrt()).ceil() as usize + 30;
    let scaled = bessel_i_scaled(half, n_max);
    // two-sided total Σ_ℓ I_ℓ² (in scaled units)
    let sq: Vec<T> = scaled.iter().map(|v| *v * *v).collect();
    let total = sq[0] + T::lit(2.0) * sq[1..].iter().copied().sum::<T>();
    // Cut on the summed dropped amplitude so Ψ(φ) is accurate pointwise, not just in norm.
    let amp_tol = T::tol(VON_MISES_TAIL, 4.0);
    let root_total = total.sqrt();
    let mut window = n_max;
    let mut tail = T::zero();
    let mut amp_tail = T::zero();
    while window > 0 {
        let dropped_amp = amp_tail + T::lit(2.0) * scaled[window] / root_total;
        if dropped_amp >= amp_tol {
            break;
        }
        amp_tail = dropped_amp;
        tail += T::lit(2.0) * sq[window] / total;
        window -= 1;
    }
    let w = window as i64;
    let components: Vec<Complex<T>> = (-w..=w)
        .map(|l| {
            let mag = scaled[l.unsigned_abs() as usize];
            let sign = if l.rem_euclid(2) == 0 { T::one() } else { -T::one() };
            Complex::from_polar(sign * mag, T::from_i64_lossy(l) * phi0)
        })
        .collect();
    let mut psi = PhaseWaveFunction::from_components(-w, components)?;
    psi.tail_mass = tail;
    Ok(psi.shifted(mean_l))
}

/// Normalized von Mises density `exp[-κ cos(φ - φ₀)] / (2π I_0(κ))`.
pub fn von_mises_density<T: Real>(kappa: T, phi0: T, phi: T) -> T {
    let i0_scaled = bessel_i_scaled(kappa, 0)[0];
    (-kappa * (T::one() + (phi - phi0).cos())).exp() / (T::lit(2.0) * T::PI() * i0_scaled)
}

/// Accept a real `⟨L̂⟩` request only when it is an integer.
pub fn integer_mean_l<T: Real>(value: T) -> Result<i64> {
    if value.is_finite() && value.fract() == T::zero() {
        value
            .to_i64()
            .ok_or_else(|| Error::InvalidParameter(format!("mean_l {value} out of range")))
    } else {
        Err(Error::InvalidParameter(format!(
            "mean_l must be an integer so the state stays 2π-periodic, got {value}"
        )))
    }
}

/// `⟨Ê⟩`, `Δ²Ê`, `⟨L̂⟩`, `Δ²L̂` from the Fourier components.
pub fn circular_moments<T: Real>(psi: &PhaseWaveFunction<T>) -> Result<CircularMoments<T>> {
    let norm = psi.norm_sqr();
    if (norm - T::one()).abs() > T::tol(1e-9, 1e3) {
        return Err(Error::InvalidState(format!("norm {norm} differs from one")));
    }
    let c = psi.components();
    let e_mean = c
        .windows(2)
        .map(|w| w[0].conj() * w[1])
        .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x);
    let l_mean: T = psi
        .iter()
        .map(|(l, a)| T::from_i64_lossy(l) * a.norm_sqr())
        .sum();
    let l_var: T = psi
        .iter()
        .map(|(l, a)| {
            let d = T::from_i64_lossy(l) - l_mean;
            d * d * a.norm_sqr()
        })
        .sum();
    let e_var = (T::one() - e_mean.norm_sqr()).max(T::zero()).min(T::one());
    Ok(CircularMoments {
        e_mean,
        e_var,
        l_mean,
        l_var,
    })
}

/// `(φ, |Ψ(φ)|²)` on a uniform grid over `[0, 2π)`.
pub fn density_profile<T: Real>(psi: &PhaseWaveFunction<T>, grid_points: usize) -> Result<Vec<(T, T)>> {
    if grid_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "density grid needs at least 2 points, got {grid_points}"
        )));
    }
    let step = T::lit(2.0) * T::PI() / T::from_usize_lossy(grid_points);
    Ok((0..grid_points)
        .map(|i| {
            let phi = T::from_usize_lossy(i) * step;
            (phi, psi.amplitude_at(phi).norm_sqr())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathieu::{solve_even_mathieu, Truncation};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn mathieu(q: f64) -> MathieuSolution<f64> {
        solve_even_mathieu(q, 0, Truncation::Auto).unwrap()
    }

    #[test]
    fn mathieu_q_zero_is_uniform() {
        let psi = from_mathieu(&mathieu(0.0), 0);
        for (l, c) in psi.iter() {
            let want = if l == 0 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(c.re, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn mathieu_small_q_side_components() {
        let psi = from_mathieu(&mathieu(1e-3), 0);
        assert_abs_diff_eq!(psi.component(1).re, -2.5e-4, epsilon = 1e-9);
        assert_abs_diff_eq!(psi.component(-1).re, -2.5e-4, epsilon = 1e-9);
        assert_abs_diff_eq!(psi.component(0).re, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mathieu_translation() {
        let base = from_mathieu(&mathieu(1.0), 0);
        let moved = from_mathieu(&mathieu(1.0), 5);
        assert_eq!(moved.mean_l_offset(), 5);
        for (l, c) in base.iter() {
            assert_eq!(moved.component(l + 5), c);
        }
        let m = circular_moments(&moved).unwrap();
        assert_abs_diff_eq!(m.l_mean, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn theta_is_first_circular_moment() {
        for &q in &[0.01, 1.0, 10.0] {
            let sol = mathieu(q);
            let m = circular_moments(&from_mathieu(&sol, 0)).unwrap();
            assert_abs_diff_eq!(m.e_mean.re, sol.theta_series(), epsilon = 1e-12);
            assert_abs_diff_eq!(m.e_mean.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn single_component_moments() {
        let m = circular_moments(&PhaseWaveFunction::<f64>::l_eigenstate(3)).unwrap();
        assert_eq!(m.e_mean, Complex::new(0.0, 0.0));
        assert_eq!(m.e_var, 1.0);
        assert_eq!(m.l_var, 0.0);
        assert_eq!(m.l_mean, 3.0);
    }

    #[test]
    fn two_point_spectrum() {
        let h = 0.5_f64.sqrt();
        let psi =
            PhaseWaveFunction::from_components(0, vec![Complex::new(h, 0.0), Complex::new(h, 0.0)])
                .unwrap();
        let m = circular_moments(&psi).unwrap();
        assert_abs_diff_eq!(m.e_mean.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.l_var, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn unnormalized_rejected() {
        let mut psi = PhaseWaveFunction::<f64>::uniform();
        psi.components[0] = Complex::new(1.1, 0.0);
        assert!(matches!(circular_moments(&psi), Err(Error::InvalidState(_))));
    }

    #[test]
    fn von_mises_uniform_and_sign() {
        let psi = from_von_mises(0.0_f64, 0.3, 0).unwrap();
        let m = circular_moments(&psi).unwrap();
        assert_eq!(m.e_var, 1.0);

        // I_1(2)/I_0(2) from the tabulated Bessel values.
        let ratio = 1.590_636_854_637_329 / 2.279_585_302_336_067;
        let m0 = circular_moments(&from_von_mises(2.0_f64, 0.0, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(m0.e_mean.re, -ratio, epsilon = 1e-12);
        let mpi = circular_moments(&from_von_mises(2.0_f64, PI, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(mpi.e_mean.re, ratio, epsilon = 1e-12);
        assert_abs_diff_eq!(mpi.e_mean.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn von_mises_spectrum_matches_bessel_squares() {
        let kappa = 6.0_f64;
        let psi = from_von_mises(kappa, 0.0, 0).unwrap();
        let i = bessel_i_scaled(kappa / 2.0, 3);
        let i0k = bessel_i_scaled(kappa, 0)[0];
        for l in 0..=3 {
            // scaled: I_l(κ/2)² e^{-κ} / (I_0(κ) e^{-κ})
            let want = i[l] * i[l] / i0k;
            assert_abs_diff_eq!(psi.component(l as i64).norm_sqr(), want, epsilon = 1e-13);
        }
        assert!(psi.tail_mass() < 1e-12);
    }

    #[test]
    fn von_mises_density_shape() {
        let psi = from_von_mises(3.0_f64, 0.7, 2).unwrap();
        for (phi, p) in density_profile(&psi, 64).unwrap() {
            assert_abs_diff_eq!(p, von_mises_density(3.0, 0.7, phi), epsilon = 1e-12);
        }
    }

    #[test]
    fn negative_kappa_rejected() {
        assert!(from_von_mises(-1.0_f64, 0.0, 0).is_err());
    }

    #[test]
    fn uniform_density() {
        let d = density_profile(&PhaseWaveFunction::<f64>::uniform(), 16).unwrap();
        assert!(d.iter().all(|(_, p)| (p - 1.0 / (2.0 * PI)).abs() < 1e-15));
        assert!(density_profile(&PhaseWaveFunction::<f64>::uniform(), 1).is_err());
    }

    #[test]
    fn mathieu_density_peaks_at_pi() {
        let psi = from_mathieu(&mathieu(0.1), 0);
        let d = density_profile(&psi, 512).unwrap();
        let (phi_max, _) = d
            .iter()
            .copied()
            .fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
        assert_abs_diff_eq!(phi_max, PI, epsilon = 1e-12);
        let mass: f64 = d.iter().map(|(_, p)| p * 2.0 * PI / 512.0).sum();
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn integer_mean_l_only() {
        assert_eq!(integer_mean_l(4.0_f64).unwrap(), 4);
        assert!(integer_mean_l(0.5_f64).is_err());
        assert!(integer_mean_l(f64::NAN).is_err());
    }

    #[test]
    fn rotation_moves_mean_phase() {
        let psi = from_mathieu(&mathieu(1.0), 0);
        let m = circular_moments(&psi).unwrap();
        let r = circular_moments(&psi.rotated(0.4)).unwrap();
        let want = m.e_mean * Complex::from_polar(1.0, 0.4);
        assert_abs_diff_eq!((r.e_mean - want).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.l_var, m.l_var, epsilon = 1e-14);
    }
}
