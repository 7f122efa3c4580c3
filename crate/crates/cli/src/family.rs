//! Family flags shared by `state`, `sweep` and `ellipsometry`.

use clap::{Args, ValueEnum};
use serde::Deserialize;

use qellip::StateFamily64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Coherent,
    Squeezed,
    Mathieu,
    #[value(name = "von-mises", alias = "von_mises")]
    VonMises,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    /// Phase of the p-mode displacement (coherent), radians
    #[arg(long, allow_hyphen_values = true)]
    pub phi_p: Option<f64>,
    /// Phase of the s-mode displacement (coherent), radians
    #[arg(long, allow_hyphen_values = true)]
    pub phi_s: Option<f64>,
    /// Squeezing magnitude
    #[arg(long)]
    pub s: Option<f64>,
    /// Squeezing phase, radians
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Displacement phase offset φp + φs - θ (squeezed), radians
    #[arg(long, allow_hyphen_values = true)]
    pub dphi: Option<f64>,
    /// Mathieu parameter
    #[arg(long)]
    pub q: Option<f64>,
    /// von Mises concentration
    #[arg(long)]
    pub kappa: Option<f64>,
    /// von Mises centre, radians
    #[arg(long, allow_hyphen_values = true)]
    pub phi0: Option<f64>,
    /// Mean photon-number difference, integer (phase families)
    #[arg(long, allow_hyphen_values = true)]
    pub mean_l: Option<i64>,
}

impl FamilyParams {
    /// Fill unset fields from `base`.
    pub fn or(self, base: FamilyParams) -> FamilyParams {
        FamilyParams {
            phi_p: self.phi_p.or(base.phi_p),
            phi_s: self.phi_s.or(base.phi_s),
            s: self.s.or(base.s),
            theta: self.theta.or(base.theta),
            dphi: self.dphi.or(base.dphi),
            q: self.q.or(base.q),
            kappa: self.kappa.or(base.kappa),
            phi0: self.phi0.or(base.phi0),
            mean_l: self.mean_l.or(base.mean_l),
        }
    }

    /// Names of the parameters that were given.
    pub fn set(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut push = |on: bool, name| {
            if on {
                v.push(name)
            }
        };
        push(self.phi_p.is_some(), "phi_p");
        push(self.phi_s.is_some(), "phi_s");
        push(self.s.is_some(), "s");
        push(self.theta.is_some(), "theta");
        push(self.dphi.is_some(), "dphi");
        push(self.q.is_some(), "q");
        push(self.kappa.is_some(), "kappa");
        push(self.phi0.is_some(), "phi0");
        push(self.mean_l.is_some(), "mean_l");
        v
    }

    pub fn build(&self, kind: FamilyKind) -> CliResult<StateFamily64> {
        let allowed: &[&str] = match kind {
            FamilyKind::Coherent => &["phi_p", "phi_s"],
            FamilyKind::Squeezed => &["s", "theta", "dphi"],
            FamilyKind::Mathieu => &["q", "mean_l"],
            FamilyKind::VonMises => &["kappa", "phi0", "mean_l"],
        };
        if let Some(extra) = self.set().into_iter().find(|p| !allowed.contains(p)) {
            return Err(CliError::user(format!(
                "parameter `{extra}` does not apply to family {kind:?}"
            )));
        }
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::user(format!("family {kind:?} requires `{name}`")))
        };
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::user(format!("`{name}` must be finite")))
            }
        };
        let opt = |v: Option<f64>, name: &str| finite(v.unwrap_or(0.0), name);
        Ok(match kind {
            FamilyKind::Coherent => StateFamily64::Coherent {
                phi_p: opt(self.phi_p, "phi_p")?,
                phi_s: opt(self.phi_s, "phi_s")?,
            },
            FamilyKind::Squeezed => StateFamily64::Squeezed {
                s: finite(need(self.s, "s")?, "s")?,
                theta: opt(self.theta, "theta")?,
                dphi: opt(self.dphi, "dphi")?,
            },
            FamilyKind::Mathieu => StateFamily64::Mathieu {
                q: finite(need(self.q, "q")?, "q")?,
                mean_l: self.mean_l.unwrap_or(0),
            },
            FamilyKind::VonMises => StateFamily64::VonMises {
                kappa: finite(need(self.kappa, "kappa")?, "kappa")?,
                phi0: opt(self.phi0, "phi0")?,
                mean_l: self.mean_l.unwrap_or(0),
            },
        })
    }
}

pub fn is_phase_family(family: &StateFamily64) -> bool {
    matches!(family, StateFamily64::Mathieu { .. } | StateFamily64::VonMises { .. })
}
