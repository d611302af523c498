//! Two-particle experiments built from path sums.
//!
//! Covers the two-particle interferometer with congruent-path amplitudes, the
//! entangled ring pair with its class-product sums and factor diagnostics,
//! and the singlet spin correlation reduced to axis winding classes.

mod interferometer;
mod rings;
mod spin;

pub use interferometer::{
    congruence_factorization_residual, interferometer_joint, CongruentArms, DetectorPort,
    InterferometerSetting, JointDistribution,
};
pub use rings::{entangled_ring_amplitude, RingPairMode, RingPairResult, RingPairSetting};
pub use spin::{
    singlet_correlation_closed, singlet_correlation_statevector, singlet_spin_correlation,
    spin_winding_reduction,
};
