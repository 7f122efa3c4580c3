//! Deterministic CSV emission shared by the command-line frontend.

use std::fmt::Write as _;

use crate::error::Result;
use crate::noise::MomentReport;
use crate::phase_space::{density_profile, von_mises_density, PhaseWaveFunction};
use crate::scalar::Real;

pub const SWEEP_HEADER: &str = "nbar,e_var,l_var,p_var,product,bound,saturation_ratio,pol_squeezed";
pub const DENSITY_HEADER: &str = "phi,p_mathieu,p_vonmises_smallq,p_vonmises_largeq";
pub const SPECTRUM_HEADER: &str = "l,psi_sq";

/// `%.12g`-style formatting: `digits` significant digits, trailing zeros dropped.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects carries like 9.99..→10.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g<T: Real>(x: T) -> String {
    fmt_sig(x.to_f64_lossy(), 12)
}

fn opt<T: Real>(x: Option<T>) -> String {
    x.map(g).unwrap_or_default()
}

/// Sweep table, rows sorted ascending by `n_mean`.
pub fn sweep_csv<T: Real>(reports: &[MomentReport<T>]) -> String {
    let mut rows: Vec<&MomentReport<T>> = reports.iter().collect();
    rows.sort_by(|a, b| a.n_mean.partial_cmp(&b.n_mean).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            g(r.n_mean),
            g(r.e_var),
            g(r.l_var),
            opt(r.p_var),
            g(r.product),
            g(r.bound),
            opt(r.saturation_ratio),
            r.pol_squeezed
        );
    }
    out
}

/// Mathieu density next to both von Mises approximations (`κ = q` and `κ = √q`),
/// sampled on `grid_points` equispaced angles in `[0, 2π)`.
///
/// Both von Mises curves use `φ₀ = 0`, so like the Mathieu density they peak at `φ = π`.
pub fn density_csv<T: Real>(psi: &PhaseWaveFunction<T>, q: T, grid_points: usize) -> Result<String> {
    let profile = density_profile(psi, grid_points)?;
    let mut out = String::from(DENSITY_HEADER);
    out.push('\n');
    for (phi, p) in profile {
        let small = von_mises_density(q, T::zero(), phi);
        let large = von_mises_density(q.sqrt(), T::zero(), phi);
        let _ = writeln!(out, "{},{},{},{}", g(phi), g(p), g(small), g(large));
    }
    Ok(out)
}

/// `|Ψ_ℓ|²` relative to the mean, over the stored support.
pub fn spectrum_csv<T: Real>(psi: &PhaseWaveFunction<T>) -> String {
    let offset = psi.mean_l_offset();
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for (l, p) in psi.spectrum() {
        let _ = writeln!(out, "{},{}", l - offset, g(p));
    }
    out
}
