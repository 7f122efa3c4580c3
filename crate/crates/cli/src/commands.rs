use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qellip::export::{density_csv, fmt_sig, spectrum_csv, sweep_csv};
use qellip::fock::DEFAULT_TAIL_TOL;
use qellip::mathieu::{solve_even_mathieu, Truncation};
use qellip::phase_space::from_mathieu;
use qellip::{
    analyze_phase_state, fit_power_law, parse_stack, rho_with_noise, stack_reflection, sweep as run_sweep,
    Complex64, MomentReport64, StateFamily64, VarianceTarget,
};

use crate::error::{CliError, CliResult};
use crate::family::{is_phase_family, FamilyKind, FamilyParams};
use crate::output::{emit, sibling, to_json, write_atomic, Format};
use crate::{DensityArgs, EllipsometryArgs, MathieuTableArgs, StateArgs, SweepArgs};

/// Slack allowed on the uncertainty relation before a sweep is declared broken.
const BOUND_SLACK: f64 = 1e-9;
const TOL_ENV: &str = "QELLIP_TOL";

/// Fock-space truncation tolerance, overridable through the environment.
fn tail_tol() -> CliResult<f64> {
    match std::env::var(TOL_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_TAIL_TOL),
        Err(e) => Err(CliError::user(format!("{TOL_ENV}: {e}"))),
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t < 1.0 => Ok(t),
            _ => Err(CliError::user(format!("{TOL_ENV} must be a number in (0, 1), got {raw:?}"))),
        },
    }
}

fn report_for(family: &StateFamily64, nbar: Option<f64>, tol: f64) -> CliResult<MomentReport64> {
    match nbar {
        Some(n) => Ok(family.report_at(n, tol)?),
        None if is_phase_family(family) => {
            let psi = family.phase_state().expect("phase family")?;
            Ok(analyze_phase_state(&psi, 0.0)?)
        }
        None => Err(CliError::user("this family needs --nbar")),
    }
}

pub fn state(args: StateArgs) -> CliResult<()> {
    let tol = tail_tol()?;
    let family = args.params.build(args.family)?;
    let report = report_for(&family, args.nbar, tol)?;
    let text = match args.format {
        Format::Json => to_json(&report),
        Format::Csv => sweep_csv(&[report]),
    };
    emit(args.output.as_deref(), &text)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepConfig {
    family: Option<FamilyKind>,
    n_list: Option<Vec<f64>>,
    targets: Option<Vec<String>>,
    output_path: Option<PathBuf>,
    output_format: Option<Format>,
    #[serde(flatten)]
    params: FamilyParams,
}

#[derive(Debug, Serialize)]
struct FitSummary {
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

#[derive(Debug, Serialize)]
struct SweepDocument<'a> {
    rows: &'a [MomentReport64],
    fits: &'a BTreeMap<String, Option<FitSummary>>,
}

fn load_config(path: &Path) -> CliResult<SweepConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::user(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::user(format!("{}: {e}", path.display())))
}

pub fn sweep(args: SweepArgs) -> CliResult<()> {
    let tol = tail_tol()?;
    let config = match &args.config {
        Some(p) => load_config(p)?,
        None => SweepConfig::default(),
    };
    let kind = args
        .family
        .or(config.family)
        .ok_or_else(|| CliError::user("sweep needs a family (flag or config)"))?;
    let family = args.params.or(config.params).build(kind)?;
    let mut n_list = args.n_list.or(config.n_list).unwrap_or_default();
    if n_list.is_empty() {
        return Err(CliError::user("n_list is empty"));
    }
    n_list.sort_by(f64::total_cmp);
    let targets = match args.targets.or(config.targets) {
        None => VarianceTarget::ALL.to_vec(),
        Some(names) if names.is_empty() => return Err(CliError::user("targets list is empty")),
        Some(names) => names
            .iter()
            .map(|n| n.trim().parse::<VarianceTarget>())
            .collect::<Result<Vec<_>, _>>()?,
    };
    let format = args.format.or(config.output_format).unwrap_or(Format::Csv);
    let output = args.output.or(config.output_path);

    let reports = run_sweep(&family, &n_list, tol)?;
    if let Some(bad) = reports.iter().find(|r| !r.respects_bound(BOUND_SLACK)) {
        return Err(CliError::Tolerance(format!(
            "uncertainty relation violated at N̄ = {}: ratio {:?}",
            bad.n_mean, bad.saturation_ratio
        )));
    }

    let mut fits = BTreeMap::new();
    for t in targets {
        let samples: Vec<(f64, Option<f64>)> = reports.iter().map(|r| (r.n_mean, r.target(t))).collect();
        let fit = fit_power_law(&samples).ok().map(|f| FitSummary {
            slope: f.slope,
            intercept: f.intercept,
            r_squared: f.r_squared,
        });
        fits.insert(t.name().to_string(), fit);
    }

    match format {
        Format::Csv => {
            let fit_json = to_json(&fits);
            match &output {
                Some(path) => {
                    write_atomic(path, &sweep_csv(&reports))?;
                    write_atomic(&sibling(path, ".fit.json"), &fit_json)?;
                    emit(None, &fit_json)
                }
                None => {
                    eprint!("{fit_json}");
                    emit(None, &sweep_csv(&reports))
                }
            }
        }
        Format::Json => emit(
            output.as_deref(),
            &to_json(&SweepDocument {
                rows: &reports,
                fits: &fits,
            }),
        ),
    }
}

const MIN_DENSITY_GRID: usize = 64;

pub fn density(args: DensityArgs) -> CliResult<()> {
    if args.grid < MIN_DENSITY_GRID {
        return Err(CliError::user(format!(
            "--grid must be at least {MIN_DENSITY_GRID}, got {}",
            args.grid
        )));
    }
    let sol = solve_even_mathieu(args.q, 0, Truncation::Auto)?;
    let psi = from_mathieu(&sol, 0);
    let spectrum_path = args
        .spectrum
        .unwrap_or_else(|| sibling(&args.output, "_spectrum.csv"));
    write_atomic(&args.output, &density_csv(&psi, args.q, args.grid)?)?;
    write_atomic(&spectrum_path, &spectrum_csv(&psi))
}

#[derive(Debug, Serialize)]
struct ComplexOut {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Serialize)]
struct NoiseOut {
    sigma_delta: f64,
    sigma_tanpsi_rel: f64,
    sigma_rho_rel: f64,
    sigma_psi_deg: f64,
    large_noise: bool,
    report: MomentReport64,
}

#[derive(Debug, Serialize)]
struct EllipsometryOut {
    r_p: ComplexOut,
    r_s: ComplexOut,
    rho: ComplexOut,
    psi_deg: f64,
    delta_deg: f64,
    noise: Option<NoiseOut>,
}

pub fn ellipsometry(args: EllipsometryArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.stack)
        .map_err(|e| CliError::user(format!("{}: {e}", args.stack.display())))?;
    let stack = parse_stack::<f64>(&text)
        .map_err(|e| CliError::user(format!("{}: {e}", args.stack.display())))?;
    let (result, noise) = match args.family {
        None => {
            if !args.params.set().is_empty() {
                return Err(CliError::user("state parameters given without --family"));
            }
            (stack_reflection(&stack)?, None)
        }
        Some(kind) => {
            let family = args.params.build(kind)?;
            let report = report_for(&family, args.nbar, tail_tol()?)?;
            let (result, bars) = rho_with_noise(&stack, &report)?;
            let noise = NoiseOut {
                sigma_delta: bars.sigma_delta,
                sigma_tanpsi_rel: bars.sigma_tanpsi_rel,
                sigma_rho_rel: bars.sigma_rho_rel,
                sigma_psi_deg: bars.sigma_psi.to_degrees(),
                large_noise: bars.large_noise,
                report,
            };
            (result, Some(noise))
        }
    };
    let out = EllipsometryOut {
        r_p: result.r_p.into(),
        r_s: result.r_s.into(),
        rho: result.rho.into(),
        psi_deg: result.psi_angle.to_degrees(),
        delta_deg: result.delta.to_degrees(),
        noise,
    };
    emit(args.output.as_deref(), &to_json(&out))
}

#[derive(Debug, Serialize)]
struct MathieuRow {
    q: f64,
    order_index: usize,
    eigenvalue: f64,
    theta: f64,
    l_var: f64,
    e_var: f64,
    product: f64,
    recurrence_residual: f64,
    truncation: usize,
    coefficients: Vec<f64>,
}

pub fn mathieu_table(args: MathieuTableArgs) -> CliResult<()> {
    let truncation = match args.truncation {
        Some(j) => Truncation::Fixed(j),
        None => Truncation::Auto,
    };
    let mut rows = Vec::new();
    for &q in &args.q {
        for k in 0..=args.max_order {
            let sol = solve_even_mathieu(q, k, truncation)?;
            let v = sol.variances()?;
            let mut coefficients: Vec<f64> = sol.coefficients.iter().copied().take(args.coefficients).collect();
            coefficients.resize(args.coefficients, 0.0);
            rows.push(MathieuRow {
                q,
                order_index: k,
                eigenvalue: sol.eigenvalue,
                theta: sol.theta_series(),
                l_var: v.l_var,
                e_var: v.e_var,
                product: v.l_var * v.e_var,
                recurrence_residual: sol.recurrence_residual(),
                truncation: sol.truncation_dim(),
                coefficients,
            });
        }
    }
    let text = match args.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("q,k,eigenvalue,theta,l_var,e_var,product,recurrence_residual,truncation");
            for j in 0..args.coefficients {
                let _ = write!(out, ",A{}", 2 * j);
            }
            out.push('\n');
            for r in &rows {
                let g = |x: f64| fmt_sig(x, 12);
                let _ = write!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    g(r.q),
                    r.order_index,
                    g(r.eigenvalue),
                    g(r.theta),
                    g(r.l_var),
                    g(r.e_var),
                    g(r.product),
                    g(r.recurrence_residual),
                    r.truncation
                );
                for c in &r.coefficients {
                    let _ = write!(out, ",{}", g(*c));
                }
                out.push('\n');
            }
            out
        }
    };
    emit(args.output.as_deref(), &text)
}
