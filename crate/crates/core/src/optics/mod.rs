//! Classical multilayer ellipsometry.
//!
//! Conventions: time dependence `e^{-iωt}`, absorbing indices `n + ik` with `k ≥ 0`,
//! and `r_p` positive for external reflection at normal incidence, so a bare
//! interface at normal incidence gives `ρ = -1` (`ψ = 45°`, `Δ = π`).

mod stack_file;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{rho_uncertainty, MomentReport, OperatingPoint, RhoUncertainty};
use crate::scalar::Real;

pub use stack_file::parse_stack;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer<T> {
    pub index: Complex<T>,
    pub thickness_nm: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStack<T> {
    pub ambient_index: Complex<T>,
    /// Ordered from the ambient side down to the substrate.
    pub layers: Vec<Layer<T>>,
    pub substrate_index: Complex<T>,
    pub wavelength_nm: T,
    /// Angle of incidence in the ambient, radians.
    pub angle_of_incidence: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipsometricResult<T> {
    pub r_p: Complex<T>,
    pub r_s: Complex<T>,
    pub rho: Complex<T>,
    /// `atan|ρ|`, in `[0, π/2]`.
    pub psi_angle: T,
    /// `arg ρ`, in `[0, 2π)`.
    pub delta: T,
}

impl<T: Real> EllipsometricResult<T> {
    pub fn from_coefficients(r_p: Complex<T>, r_s: Complex<T>) -> Result<Self> {
        if r_s.norm() == T::zero() {
            return Err(Error::NumericalDomain("r_s vanishes, ρ is undefined".into()));
        }
        let rho = r_p / r_s;
        let psi_angle = rho.norm().atan();
        let two_pi = T::TAU();
        let mut delta = rho.arg();
        if delta < T::zero() {
            delta += two_pi;
        }
        if delta >= two_pi {
            delta -= two_pi;
        }
        Ok(Self {
            r_p,
            r_s,
            rho,
            psi_angle,
            delta,
        })
    }
}

/// `n cos θ` in a medium of index `n`, from the invariant `n₀ sin θ₀`; branch `Im ≥ 0`.
pub(crate) fn normal_component<T: Real>(index: Complex<T>, invariant: Complex<T>) -> Complex<T> {
    let mut k = (index * index - invariant * invariant).sqrt();
    if k.im < T::zero() || (k.im == T::zero() && k.re < T::zero()) {
        k = -k;
    }
    k
}

/// Fresnel coefficients `(r_p, r_s)` of a single interface.
pub fn fresnel_interface<T: Real>(
    n_i: Complex<T>,
    n_t: Complex<T>,
    theta_i: Complex<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    if n_i.norm() == T::zero() || n_t.norm() == T::zero() {
        return Err(Error::InvalidParameter("refractive indices must be nonzero".into()));
    }
    let invariant = n_i * theta_i.sin();
    let ki = normal_component(n_i, invariant);
    let kt = normal_component(n_t, invariant);
    let cos_i = ki / n_i;
    let cos_t = kt / n_t;
    let den_s = ki + kt;
    let den_p = n_t * cos_i + n_i * cos_t;
    if den_s.norm() == T::zero() || den_p.norm() == T::zero() {
        return Err(Error::NumericalDomain("grazing interface".into()));
    }
    let r_s = (ki - kt) / den_s;
    let r_p = (n_t * cos_i - n_i * cos_t) / den_p;
    Ok((r_p, r_s))
}

impl<T: Real> LayerStack<T> {
    pub fn bare(ambient: Complex<T>, substrate: Complex<T>, wavelength_nm: T, angle: T) -> Self {
        Self {
            ambient_index: ambient,
            layers: Vec::new(),
            substrate_index: substrate,
            wavelength_nm,
            angle_of_incidence: angle,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.wavelength_nm > T::zero()) || !self.wavelength_nm.is_finite() {
            return bad("wavelength must be positive");
        }
        let a = self.angle_of_incidence;
        if !(a >= T::zero() && a < T::FRAC_PI_2()) {
            return bad("angle of incidence must lie in [0, π/2)");
        }
        let indices = std::iter::once(self.ambient_index)
            .chain(self.layers.iter().map(|l| l.index))
            .chain(std::iter::once(self.substrate_index));
        for n in indices {
            if !(n.re.is_finite() && n.im.is_finite()) || n.im < T::zero() || n.norm() == T::zero() {
                return bad("indices must be finite, nonzero, with non-negative extinction");
            }
        }
        if self
            .layers
            .iter()
            .any(|l| !(l.thickness_nm >= T::zero()) || !l.thickness_nm.is_finite())
        {
            return bad("layer thicknesses must be non-negative");
        }
        Ok(())
    }
}

type Mat2<T> = [[Complex<T>; 2]; 2];

fn mat_mul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Characteristic matrix `[[cos β, -i sin β / η], [-i η sin β, cos β]]`.
fn characteristic<T: Real>(beta: Complex<T>, admittance: Complex<T>) -> Mat2<T> {
    let minus_i = Complex::new(T::zero(), -T::one());
    let (c, s) = (beta.cos(), beta.sin());
    [[c, minus_i * s / admittance], [minus_i * admittance * s, c]]
}

/// `(B, C)` → amplitude reflection `(η₀B - C)/(η₀B + C)`.
fn reflect<T: Real>(matrix: &Mat2<T>, eta0: Complex<T>, eta_sub: Complex<T>) -> Result<Complex<T>> {
    let b = matrix[0][0] + matrix[0][1] * eta_sub;
    let c = matrix[1][0] + matrix[1][1] * eta_sub;
    let den = eta0 * b + c;
    if den.norm() == T::zero() || !den.norm().is_finite() {
        return Err(Error::NumericalDomain("singular characteristic matrix".into()));
    }
    Ok((eta0 * b - c) / den)
}

/// Reflection coefficients of the stack by ordered characteristic-matrix products.
pub fn stack_reflection<T: Real>(stack: &LayerStack<T>) -> Result<EllipsometricResult<T>> {
    stack.validate()?;
    let n0 = stack.ambient_index;
    let invariant = n0 * stack.angle_of_incidence.sin();
    let ncos = |n: Complex<T>| -> Result<Complex<T>> {
        let k = normal_component(n, invariant);
        if k.norm() <= T::epsilon() * n.norm() {
            return Err(Error::NumericalDomain("grazing propagation (cos θ = 0)".into()));
        }
        Ok(k)
    };
    // s: η = n cos θ; p: η = n / cos θ = n² / (n cos θ)
    let eta_s = |_n: Complex<T>, k: Complex<T>| k;
    let eta_p = |n: Complex<T>, k: Complex<T>| n * n / k;

    let k0 = ncos(n0)?;
    let k_sub = ncos(stack.substrate_index)?;
    let identity = [
        [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())],
        [Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())],
    ];
    let mut ms = identity;
    let mut mp = identity;
    let wavenumber = T::TAU() / stack.wavelength_nm;
    for layer in &stack.layers {
        let k = ncos(layer.index)?;
        let beta = k.scale(wavenumber * layer.thickness_nm);
        ms = mat_mul(&ms, &characteristic(beta, eta_s(layer.index, k)));
        mp = mat_mul(&mp, &characteristic(beta, eta_p(layer.index, k)));
    }
    let r_s = reflect(&ms, eta_s(n0, k0), eta_s(stack.substrate_index, k_sub))?;
    // p admittances give -(r_p) in the r_p > 0 at normal incidence convention
    let r_p = -reflect(&mp, eta_p(n0, k0), eta_p(stack.substrate_index, k_sub))?;
    EllipsometricResult::from_coefficients(r_p, r_s)
}

/// Classical `(ψ, Δ)` of the stack with quantum noise bars from `report`.
pub fn rho_with_noise<T: Real>(
    stack: &LayerStack<T>,
    report: &MomentReport<T>,
) -> Result<(EllipsometricResult<T>, RhoUncertainty<T>)> {
    let result = stack_reflection(stack)?;
    let noise = rho_uncertainty(
        report,
        OperatingPoint {
            psi_angle: result.psi_angle,
            delta: result.delta,
        },
    )?;
    Ok((result, noise))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn normal_incidence_glass() {
        let (rp, rs) = fresnel_interface(c(1.0), c(1.5), c(0.0)).unwrap();
        assert_abs_diff_eq!(rs.re, -0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(rp.re, 0.2, epsilon = 1e-15);
        let res = EllipsometricResult::from_coefficients(rp, rs).unwrap();
        assert_abs_diff_eq!(res.rho.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(res.psi_angle, std::f64::consts::FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(res.delta, std::f64::consts::PI, epsilon = 1e-15);
    }

    #[test]
    fn brewster_null() {
        let theta = 1.5_f64.atan();
        let (rp, _) = fresnel_interface(c(1.0), c(1.5), c(theta)).unwrap();
        assert!(rp.norm() < 1e-15);
        let res = stack_reflection(&LayerStack::bare(c(1.0), c(1.5), 632.8, theta)).unwrap();
        assert!(res.rho.norm() < 1e-15);
        assert!(res.psi_angle < 1e-15);
    }

    #[test]
    fn no_interface() {
        let (rp, rs) = fresnel_interface(c(1.4), c(1.4), c(0.6)).unwrap();
        assert_eq!(rp.norm(), 0.0);
        assert_eq!(rs.norm(), 0.0);
    }

    #[test]
    fn bare_stack_matches_fresnel() {
        let sub = Complex::new(3.85, 0.02);
        let theta = 70f64.to_radians();
        let (rp, rs) = fresnel_interface(c(1.0), sub, c(theta)).unwrap();
        let res = stack_reflection(&LayerStack::bare(c(1.0), sub, 632.8, theta)).unwrap();
        assert_abs_diff_eq!((res.r_p - rp).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((res.r_s - rs).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_thickness_and_half_wave_layers() {
        let bare = LayerStack::bare(c(1.0), c(1.5), 500.0, 0.0);
        let base = stack_reflection(&bare).unwrap();
        let mut zero = bare.clone();
        zero.layers.push(Layer { index: c(2.1), thickness_nm: 0.0 });
        assert_eq!(stack_reflection(&zero).unwrap(), base);
        let mut half = bare.clone();
        half.layers.push(Layer { index: c(2.0), thickness_nm: 500.0 / 4.0 });
        let r = stack_reflection(&half).unwrap();
        assert_abs_diff_eq!((r.r_s - base.r_s).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((r.r_p - base.r_p).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn invalid_stacks() {
        let mut s = LayerStack::bare(c(1.0), c(1.5), 500.0, 0.2);
        s.angle_of_incidence = std::f64::consts::FRAC_PI_2;
        assert!(stack_reflection(&s).is_err());
        let mut s = LayerStack::bare(c(1.0), Complex::new(1.5, -0.1), 500.0, 0.2);
        assert!(stack_reflection(&s).is_err());
        s.substrate_index = c(1.5);
        s.layers.push(Layer { index: c(1.4), thickness_nm: -1.0 });
        assert!(stack_reflection(&s).is_err());
        let s = LayerStack::bare(c(1.0), c(1.5), 0.0, 0.2);
        assert!(stack_reflection(&s).is_err());
    }

    #[test]
    fn noiseless_report_gives_zero_bars() {
        let report = MomentReport::from_moments(100.0, c(1.0), 0.0, 0.0, Some(0.0));
        let stack = LayerStack::bare(c(1.0), c(1.5), 632.8, 70f64.to_radians());
        let (_, noise) = rho_with_noise(&stack, &report).unwrap();
        assert_eq!(noise.sigma_delta, 0.0);
        assert_eq!(noise.sigma_tanpsi_rel, 0.0);
    }
}
