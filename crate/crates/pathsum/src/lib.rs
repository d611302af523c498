//! Numerical laboratory for sums over paths.
//!
//! The crate computes propagators as sums of exponentiated-action terms and
//! uses them to drive a set of desk-scale experiments:
//!
//! - [`path`] — time-sliced paths, kinetic actions (ħ = 1), winding-number
//!   and SO(3) homotopy classification, seeded path sampling.
//! - [`propagator`] — the time-sliced free-particle lattice sum, the
//!   mirror-reflection amplitude with its Cornu-spiral trace, and the ring
//!   propagator as a winding-class sum with an independent spectral route.
//! - [`entangle`] — two-particle interferometer coincidences, entangled ring
//!   pairs with the congruent-path factorization diagnostics, and the singlet
//!   spin correlation with its state-vector oracle.
//! - [`bell`] — CHSH values, exhaustive deterministic local-hidden-variable
//!   search, GHZ products, element-of-reality assignment enumeration, and a
//!   no-signaling audit.
//! - [`stream`] — event-level Monte Carlo: per trial the tangible particle
//!   takes one random path from a sampled ensemble while outcomes follow the
//!   ensemble-level amplitude rules.
//! - [`suite`] — the fixed acceptance criteria with pinned tolerances.
//!
//! Everything is deterministic given its seed; parallel reductions are
//! chunked so results are bit-identical across thread counts.

pub mod bell;
pub mod entangle;
pub mod error;
pub mod path;
pub mod propagator;
pub mod statevec;
pub mod stream;
pub mod suite;

pub use error::{Error, Result};
pub use path::{
    exp_action, free_action, homotopy_class, sample_paths, so3_class, winding_number, ActionValue,
    Amplitude, Generator, GeneratorSpec, HomotopyClass, Path, PathEnsemble, SampleSpec, So3Class,
    Space,
};
