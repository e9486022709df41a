//! Numerical verification of multipartite steering and entanglement under
//! imprecise measurements.
//!
//! The library evaluates the correlation functional L = |<f_1 ... f_N>|^2
//! built from two +/-1-valued observables per party, compares it against the
//! ideal bound B_0 = 2^{N-T} and the imprecision-corrected bound B_eps
//! satisfied by every LHS(T, N) model, and derives GHZ violation weights,
//! depolarizing-noise thresholds, and adversarial LHS-model searches that
//! stress the bounds.

pub mod adversary;
pub mod error;
pub mod inequality;
pub mod observables;
pub mod states;
pub mod tensor;

pub use adversary::{model_l_value, random_model, search_max, LhsComponent, LhsModel, SearchReport};
pub use error::{Error, Result};
pub use inequality::{
    bound_first_order, bound_ideal, bound_imprecise_perparty, bound_imprecise_uniform,
    depolarized_weight, di_weight, ghz_l_value, ghz_weight, ghz_weight_eps1, imprecision_factor,
    l_value, threshold_p, verify, Classification, Scenario, SignPattern, Threshold,
    ThresholdMethod, VerificationResult,
};
pub use observables::{
    eps_to_q_range, f_operator, fidelity_gap, pauli, tilted_pair, AlignmentFactor, Axis,
    ImprecisionParam, ObservablePair, Sign, MAX_IMPRECISION,
};
pub use states::{bloch_state, depolarized_ghz, ghz, product_state, random_pure, PureState};
pub use tensor::{CMatrix, Complex64};
