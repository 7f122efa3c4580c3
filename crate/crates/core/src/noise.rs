//! Uncertainty-relation analysis, scaling fits and propagation onto `ρ = e^{iΔ} tan ψ`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    coherent_cutoff, coherent_state, displaced_squeezed_state_auto, embed_phase_state, FockCutoff,
    TwoModeFockState,
};
use crate::mathieu::{solve_even_mathieu, Truncation};
use crate::phase_space::{circular_moments, from_mathieu, from_von_mises, PhaseWaveFunction};
use crate::scalar::Real;

/// Moments of the `(Ê, L̂)` pair together with the uncertainty bound `|⟨Ê⟩|²/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport<T> {
    pub n_mean: T,
    pub e_mean: Complex<T>,
    pub e_var: T,
    pub l_mean: T,
    pub l_var: T,
    /// `e_var * l_var`
    pub product: T,
    /// `|e_mean|² / 4`
    pub bound: T,
    /// `product / bound`; absent when the bound vanishes.
    pub saturation_ratio: Option<T>,
    /// `l_var < N̄ |e_mean|² / 4`
    pub pol_squeezed: bool,
    pub p_var: Option<T>,
}

impl<T: Real> MomentReport<T> {
    pub fn from_moments(n_mean: T, e_mean: Complex<T>, l_mean: T, l_var: T, p_var: Option<T>) -> Self {
        let e_abs2 = e_mean.norm_sqr();
        let e_var = (T::one() - e_abs2).max(T::zero());
        let product = e_var * l_var;
        let bound = e_abs2 / T::lit(4.0);
        let saturation_ratio = (bound > T::zero()).then(|| product / bound);
        Self {
            n_mean,
            e_mean,
            e_var,
            l_mean,
            l_var,
            product,
            bound,
            saturation_ratio,
            pol_squeezed: l_var < n_mean * bound,
            p_var,
        }
    }

    /// Whether the uncertainty relation holds up to `slack` (vacuously when the bound is zero).
    pub fn respects_bound(&self, slack: T) -> bool {
        self.saturation_ratio.is_none_or(|r| r >= T::one() - slack)
    }

    pub fn target(&self, target: VarianceTarget) -> Option<T> {
        match target {
            VarianceTarget::EVar => Some(self.e_var),
            VarianceTarget::LVar => Some(self.l_var),
            VarianceTarget::PVar => self.p_var,
            VarianceTarget::RhoVar => rho_uncertainty(self, OperatingPoint::default())
                .ok()
                .map(|r| r.sigma_rho_rel * r.sigma_rho_rel),
        }
    }
}

/// Exact moments of a truncated two-mode state.
pub fn analyze_state<T: Real>(state: &TwoModeFockState<T>) -> MomentReport<T> {
    let m = state.moments();
    MomentReport::from_moments(m.n_mean, m.e_mean, m.l_mean, m.l_var, Some(m.p_var))
}

const FAST_PATH_CLIP: f64 = 1e-12;

fn even_layer<T: Real>(n_mean: T) -> Option<usize> {
    if n_mean > T::zero() && n_mean.fract() == T::zero() {
        n_mean.to_usize().filter(|n| n % 2 == 0)
    } else {
        None
    }
}

/// Phase-state fast path with `N̄` as an external parameter.
///
/// `p_var` is reported when `N̄` is an even integer whose layer holds the spectrum
/// up to a negligible clipped mass.
pub fn analyze_phase_state<T: Real>(psi: &PhaseWaveFunction<T>, n_mean: T) -> Result<MomentReport<T>> {
    if !n_mean.is_finite() || n_mean < T::zero() {
        return Err(Error::InvalidParameter(format!("mean photon number {n_mean} must be >= 0")));
    }
    let m = circular_moments(psi)?;
    let p_var = even_layer(n_mean).and_then(|layer| {
        let half = (layer / 2) as i64;
        let inside = |l: i64| l.abs() <= half;
        let kept: T = psi.iter().filter(|&(l, _)| inside(l)).map(|(_, c)| c.norm_sqr()).sum();
        if !(T::one() - kept <= T::tol(FAST_PATH_CLIP, 64.0)) {
            return None;
        }
        let half_t = T::from_i64_lossy(half);
        let modulus = |l: i64| {
            let lt = T::from_i64_lossy(l);
            ((half_t + lt) / (half_t - lt + T::one())).sqrt()
        };
        let weight = |c: Complex<T>| c.norm_sqr() / kept;
        let mean: T = psi
            .iter()
            .filter(|&(l, _)| inside(l))
            .map(|(l, c)| modulus(l) * weight(c))
            .sum();
        Some(
            psi.iter()
                .filter(|&(l, _)| inside(l))
                .map(|(l, c)| {
                    let d = modulus(l) - mean;
                    d * d * weight(c)
                })
                .sum(),
        )
    });
    Ok(MomentReport::from_moments(n_mean, m.e_mean, m.l_mean, m.l_var, p_var))
}

/// Input-state families, parametrized by their mean photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateFamily<T> {
    /// `|α_p| = |α_s| = sqrt(N̄/2)`.
    Coherent { phi_p: T, phi_s: T },
    /// Displaced two-mode squeezed vacuum in the optimal amplitude setting
    /// `|α_p| = |α_s| = sqrt(N̄/2 - sinh² 𝔰)`, with `δφ = φ_p + φ_s - θ`.
    Squeezed { s: T, theta: T, dphi: T },
    /// Fundamental Mathieu state embedded in the layer `N = N̄`.
    Mathieu { q: T, mean_l: i64 },
    /// Square-root von Mises state embedded in the layer `N = N̄`.
    VonMises { kappa: T, phi0: T, mean_l: i64 },
}

impl<T: Real> StateFamily<T> {
    /// Phase wave function of the phase families.
    pub fn phase_state(&self) -> Option<Result<PhaseWaveFunction<T>>> {
        match *self {
            StateFamily::Mathieu { q, mean_l } => Some(
                solve_even_mathieu(q, 0, Truncation::Auto).map(|sol| from_mathieu(&sol, mean_l)),
            ),
            StateFamily::VonMises { kappa, phi0, mean_l } => Some(from_von_mises(kappa, phi0, mean_l)),
            _ => None,
        }
    }

    /// Truncated Fock state of this family at mean photon number `n_mean`.
    pub fn state_at(&self, n_mean: T, tail_tol: T) -> Result<TwoModeFockState<T>> {
        if !n_mean.is_finite() || n_mean < T::zero() {
            return Err(Error::InvalidParameter(format!("mean photon number {n_mean} must be >= 0")));
        }
        match *self {
            StateFamily::Coherent { phi_p, phi_s } => {
                let r = (n_mean / T::lit(2.0)).sqrt();
                let cutoff = coherent_cutoff(n_mean.to_f64_lossy(), tail_tol.to_f64_lossy());
                coherent_state(
                    Complex::from_polar(r, phi_p),
                    Complex::from_polar(r, phi_s),
                    FockCutoff { cutoff, tail_tol },
                )
            }
            StateFamily::Squeezed { s, theta, dphi } => {
                if !(s >= T::zero()) {
                    return Err(Error::InvalidParameter(format!("squeezing {s} must be >= 0")));
                }
                let r2 = n_mean / T::lit(2.0) - s.sinh() * s.sinh();
                if r2 < T::zero() {
                    return Err(Error::InvalidParameter(format!(
                        "N̄ = {n_mean} is below the squeezing energy 2 sinh²𝔰"
                    )));
                }
                let r = r2.sqrt();
                displaced_squeezed_state_auto(
                    Complex::from_polar(r, dphi + theta),
                    Complex::from_polar(r, T::zero()),
                    Complex::from_polar(s, theta),
                    tail_tol,
                )
            }
            StateFamily::Mathieu { .. } | StateFamily::VonMises { .. } => {
                let layer = even_layer(n_mean).ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "phase states embed in a single even layer, got N̄ = {n_mean}"
                    ))
                })?;
                let psi = self.phase_state().expect("phase family")?;
                embed_phase_state(&psi, layer, tail_tol)
            }
        }
    }

    pub fn report_at(&self, n_mean: T, tail_tol: T) -> Result<MomentReport<T>> {
        self.state_at(n_mean, tail_tol).map(|s| analyze_state(&s))
    }
}

/// Which variance a scaling fit is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceTarget {
    EVar,
    LVar,
    PVar,
    RhoVar,
}

impl VarianceTarget {
    pub const ALL: [VarianceTarget; 4] = [Self::EVar, Self::LVar, Self::PVar, Self::RhoVar];

    pub fn name(self) -> &'static str {
        match self {
            Self::EVar => "e_var",
            Self::LVar => "l_var",
            Self::PVar => "p_var",
            Self::RhoVar => "rho_var",
        }
    }
}

impl fmt::Display for VarianceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VarianceTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variance target '{s}'")))
    }
}

/// Least-squares fit of `log10(variance)` against `log10(N̄)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit<T> {
    pub points: Vec<(T, T)>,
    /// `N̄` values dropped because the variance was zero, negative or unavailable.
    pub excluded: Vec<T>,
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

/// Fits with `r² < 0.98` do not support a scaling claim.
pub const MIN_R_SQUARED: f64 = 0.98;

impl<T: Real> ScalingFit<T> {
    pub fn is_reliable(&self) -> bool {
        self.r_squared >= T::lit(MIN_R_SQUARED)
    }
}

pub fn fit_power_law<T: Real>(samples: &[(T, Option<T>)]) -> Result<ScalingFit<T>> {
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for &(n, v) in samples {
        match v {
            Some(v) if v > T::zero() && v.is_finite() && n > T::zero() => points.push((n, v)),
            _ => excluded.push(n),
        }
    }
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "{} usable points after excluding {:?}",
            points.len(),
            excluded.iter().map(|x| x.to_f64_lossy()).collect::<Vec<_>>()
        )));
    }
    let logs: Vec<(T, T)> = points.iter().map(|(n, v)| (n.log10(), v.log10())).collect();
    let count = T::from_usize_lossy(logs.len());
    let mx = logs.iter().map(|p| p.0).sum::<T>() / count;
    let my = logs.iter().map(|p| p.1).sum::<T>() / count;
    let sxx: T = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: T = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: T = logs.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx <= T::zero() {
        return Err(Error::DegenerateFit("all N̄ values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: T = logs
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    // A flat series is fit exactly by slope zero.
    let r_squared = if syy <= T::epsilon() * T::epsilon() {
        T::one()
    } else {
        (T::one() - ss_res / syy).max(T::zero()).min(T::one())
    };
    Ok(ScalingFit {
        points,
        excluded,
        slope,
        intercept,
        r_squared,
    })
}

fn check_n_list<T: Real>(n_list: &[T], min_points: usize) -> Result<()> {
    if n_list.len() < min_points {
        return Err(Error::InvalidParameter(format!(
            "need at least {min_points} N̄ values, got {}",
            n_list.len()
        )));
    }
    if n_list.iter().any(|n| !(*n > T::zero()) || !n.is_finite()) {
        return Err(Error::InvalidParameter("N̄ values must be positive and finite".into()));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("N̄ values must be strictly increasing".into()));
    }
    Ok(())
}

/// Reports for every `N̄`, evaluated in parallel, returned in input order.
pub fn sweep<T: Real>(family: &StateFamily<T>, n_list: &[T], tail_tol: T) -> Result<Vec<MomentReport<T>>> {
    check_n_list(n_list, 1)?;
    n_list
        .par_iter()
        .map(|&n| family.report_at(n, tail_tol))
        .collect()
}

/// Log-log fit of `target` against `N̄` for one family.
pub fn scaling_sweep<T: Real>(
    family: &StateFamily<T>,
    n_list: &[T],
    target: VarianceTarget,
    tail_tol: T,
) -> Result<ScalingFit<T>> {
    check_n_list(n_list, 4)?;
    let reports = sweep(family, n_list, tail_tol)?;
    let samples: Vec<(T, Option<T>)> = reports.iter().map(|r| (r.n_mean, r.target(target))).collect();
    fit_power_law(&samples)
}

/// Nominal `(ψ, Δ)` of the measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint<T> {
    pub psi_angle: T,
    pub delta: T,
}

impl<T: Real> Default for OperatingPoint<T> {
    fn default() -> Self {
        Self {
            psi_angle: T::FRAC_PI_4(),
            delta: T::zero(),
        }
    }
}

/// Quantum noise carried onto the ellipsometric angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoUncertainty<T> {
    /// Circular standard deviation `sqrt(-2 ln|⟨Ê⟩|)`, radians.
    pub sigma_delta: T,
    /// `sqrt(Δ²P̂)`
    pub sigma_tanpsi_rel: T,
    pub sigma_rho_rel: T,
    /// `σ_ψ = σ_tanψ,rel · sin ψ cos ψ`, radians.
    pub sigma_psi: T,
    /// Set when `Δ²Ê ≥ 0.5`; the small-noise propagation is unreliable there.
    pub large_noise: bool,
}

pub fn rho_uncertainty<T: Real>(report: &MomentReport<T>, at: OperatingPoint<T>) -> Result<RhoUncertainty<T>> {
    if !(report.bound > T::zero()) {
        return Err(Error::InvalidState("⟨Ê⟩ vanishes: phase noise is unbounded".into()));
    }
    if !(at.psi_angle >= T::zero() && at.psi_angle <= T::FRAC_PI_2()) || !at.delta.is_finite() {
        return Err(Error::InvalidParameter("operating point outside ψ ∈ [0, π/2]".into()));
    }
    let p_var = report
        .p_var
        .ok_or_else(|| Error::InvalidParameter("modulus variance unavailable for this report".into()))?;
    let e_abs = report.e_mean.norm().min(T::one());
    let sigma_delta = (-T::lit(2.0) * e_abs.ln()).max(T::zero()).sqrt();
    let sigma_tanpsi_rel = p_var.max(T::zero()).sqrt();
    let sigma_rho_rel = sigma_delta.hypot(sigma_tanpsi_rel);
    Ok(RhoUncertainty {
        sigma_delta,
        sigma_tanpsi_rel,
        sigma_rho_rel,
        sigma_psi: sigma_tanpsi_rel * at.psi_angle.sin() * at.psi_angle.cos(),
        large_noise: report.e_var >= T::lit(0.5),
    })
}
