//! Propagators as sums of exponentiated-action terms.
//!
//! Three routes are implemented: the time-sliced free-particle lattice sum
//! checked against the closed-form kernel, the mirror-reflection amplitude
//! whose running prefix sums trace a Cornu spiral, and the ring propagator as
//! a linear combination over winding classes checked against an independent
//! spectral eigenfunction sum.
//!
//! Normalization is fixed to (m/(2πi·dt))^(1/2) per slice with the branch
//! sqrt(1/i) = e^{−iπ/4}, so all oracle comparisons carry constant 1.

mod free;
mod mirror;
mod ring;

pub use free::{
    chapman_kolmogorov_compose, free_propagator_analytic, free_propagator_sliced, LatticeSpec,
    SlicedPropagator, BOUNDARY_WARN_THRESHOLD,
};
pub use mirror::{
    mirror_amplitude, spiral_turn_sums, stationary_zone_recovery, MirrorAmplitude, MirrorGeometry,
    SpiralTrace,
};
pub use ring::{
    ring_propagator, ring_propagator_fixed_momentum, ring_propagator_spectral, PropagatorResult,
    RingParams,
};
