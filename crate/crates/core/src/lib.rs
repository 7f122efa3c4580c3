//! Quantum-limited ellipsometry: optimal relative-phase states, two-mode Fock
//! simulation, uncertainty analysis and classical multilayer optics.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the bottom of this file fix the scalar to `f64` (or `f32` with a `32` suffix).

// `!(x <= tol)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod fock;
pub mod linalg;
pub mod mathieu;
pub mod noise;
pub mod optics;
pub mod phase_space;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use fock::{FockCutoff, FockMoments, FockOperator, LayerOperator, TwoModeFockState};
pub use mathieu::{solve_even_mathieu, MathieuSolution, MathieuVariances, Truncation};
pub use noise::{
    analyze_phase_state, analyze_state, fit_power_law, rho_uncertainty, scaling_sweep, sweep,
    MomentReport, OperatingPoint, RhoUncertainty, ScalingFit, StateFamily, VarianceTarget,
};
pub use optics::{
    fresnel_interface, parse_stack, rho_with_noise, stack_reflection, EllipsometricResult, Layer,
    LayerStack,
};
pub use phase_space::{circular_moments, CircularMoments, PhaseWaveFunction};
pub use scalar::Real;

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;

pub type MathieuSolution64 = MathieuSolution<f64>;
pub type PhaseState64 = PhaseWaveFunction<f64>;
pub type FockState64 = TwoModeFockState<f64>;
pub type MomentReport64 = MomentReport<f64>;
pub type StateFamily64 = StateFamily<f64>;
pub type ScalingFit64 = ScalingFit<f64>;
pub type LayerStack64 = LayerStack<f64>;
pub type EllipsometricResult64 = EllipsometricResult<f64>;

pub type MathieuSolution32 = MathieuSolution<f32>;
pub type PhaseState32 = PhaseWaveFunction<f32>;
pub type FockState32 = TwoModeFockState<f32>;
pub type MomentReport32 = MomentReport<f32>;
pub type LayerStack32 = LayerStack<f32>;
pub type EllipsometricResult32 = EllipsometricResult<f32>;
