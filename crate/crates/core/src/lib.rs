//! Joint statistics of path and interference in a spin-marked Young
//! interferometer.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`statistics`]: exact path, fringe and phase statistics of a pure
//!    two-aperture state.
//! 2. [`interferometer`]: path marking on a spin, spin analysis, and the
//!    operational joint distributions actually recorded.
//! 3. [`inversion`]: linear kernels that remove the instrumental blurring,
//!    producing joints with exact marginals that may go negative.
//! 4. [`analysis`]: how negative they go; [`sampling`] adds shot noise.
//!
//! Everything up to the analysis is generic over [`Scalar`] (`f32`/`f64`);
//! the `*64` aliases below fix the common double-precision case.

pub mod analysis;
pub mod error;
pub mod format;
pub mod interferometer;
pub mod inversion;
pub mod sampling;
pub mod scalar;
pub mod statistics;

pub use error::{Error, Result};
pub use scalar::{Scalar, SIGNS};

pub use analysis::{
    linspace, negative_part_integral, negativity_of, p_min_discrete, p_min_phase, scan_negativity,
    Argmin, CellFlag, Negativity, NegativityReport, ScanCell, ScanGrid,
};
pub use interferometer::{
    analyzer_states, born_joint_discrete, born_joint_phase, entangled_state, gamma_coefficients,
    marginal_phase, marginal_x, marginal_z, marginal_z_of_phase, operational_joint_discrete,
    operational_joint_phase, operational_marginal_phase, operational_marginal_x,
    operational_marginal_z, AnalyzerStates, CompositeState, DiscreteJoint, GammaCoefficients,
    JointKind, MarkerConfig, PhaseJoint,
};
pub use inversion::{
    delta_coefficients, invert_joint_discrete, invert_joint_phase, invert_marginal_x,
    invert_marginal_z, invert_phase_density, mu_phi_kernel, mu_x_matrix, mu_z_matrix,
    quasi_joint_closed_form, quasi_joint_unmarked, quasi_phase_closed_form, quasi_phase_unmarked,
    x_response_matrix, z_response_matrix, DeltaCoefficients, InversionMatrix, KernelLabel, Matrix2,
    PhaseKernel, SingularityThreshold,
};
pub use sampling::{
    empirical_phase_joint, estimate_quasi_joint, estimate_quasi_phase, sample_discrete,
    sample_phase, EstimatedQuasiJoint, PhaseShots, ShotCounts,
};
pub use statistics::{
    bloch_from_state, born_interference, born_phase, evaluate_phase_density,
    exact_interference_distribution, exact_path_distribution, exact_phase_distribution, phase_grid,
    wrap_phase, BinaryDistribution, BlochExpectations, PhaseDensity, PureState,
};

pub type PureState64 = PureState<f64>;
pub type BlochExpectations64 = BlochExpectations<f64>;
pub type BinaryDistribution64 = BinaryDistribution<f64>;
pub type PhaseDensity64 = PhaseDensity<f64>;
pub type MarkerConfig64 = MarkerConfig<f64>;
pub type GammaCoefficients64 = GammaCoefficients<f64>;
pub type DiscreteJoint64 = DiscreteJoint<f64>;
pub type PhaseJoint64 = PhaseJoint<f64>;
pub type InversionMatrix64 = InversionMatrix<f64>;
pub type PhaseKernel64 = PhaseKernel<f64>;
pub type DeltaCoefficients64 = DeltaCoefficients<f64>;
pub type NegativityReport64 = NegativityReport<f64>;
pub type ScanGrid64 = ScanGrid<f64>;

pub type PureState32 = PureState<f32>;
pub type MarkerConfig32 = MarkerConfig<f32>;
pub type DiscreteJoint32 = DiscreteJoint<f32>;
pub type PhaseJoint32 = PhaseJoint<f32>;
