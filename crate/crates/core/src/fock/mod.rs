//! Exact two-mode Fock-space simulator.
//!
//! States live on the square box `0 ≤ m, n ≤ M` of `|m⟩_p ⊗ |n⟩_s`. Only complete
//! Fock layers (`m + n ≤ M`) carry amplitude: the relative-phase operator `Ê` is
//! unitary on each of them, vacuum wrap term included.

mod displacement;
mod operator;
mod state;

pub use displacement::displacement_matrix;
pub use operator::{
    build_l_operator, build_n_operator, circular_variance_unitary, expectation, modulus_operator,
    phase_operator, phase_operator_layer, variance_hermitian, FockOperator, LayerOperator,
};
pub use state::{
    coherent_cutoff, coherent_state, displaced_squeezed_state, displaced_squeezed_state_auto,
    embed_phase_state, FockCutoff, FockMoments, TwoModeFockState, DEFAULT_TAIL_TOL,
};
