//! Singlet spin correlation and the axis-winding reduction.
//!
//! The two-particle correlation is exposed through two independent routes: a
//! closed form −cos(α−β) and a 4-dimensional state-vector evaluation with
//! explicit 2×2 measurement operators; the public entry point checks their
//! agreement.
//!
//! The reduction constrains rotation paths to a single axis of the SO(3)
//! ball, where each surface passage continues the unwrapped angle. Stuck to
//! the axis, paths fall into integer winding classes exactly as on the ring,
//! and the per-class phase sums give the same data structure the ring pair
//! uses.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::path::{kinetic_action, winding_number, Amplitude, PathEnsemble, Space};
use crate::statevec::{expectation, kron, singlet_state, spin_measurement};

/// Closed-form singlet correlation of ±1 outcomes at analyzer angles α, β.
pub fn singlet_correlation_closed(alpha: f64, beta: f64) -> f64 {
    -(alpha - beta).cos()
}

/// Same correlation from the 4-dimensional state vector: ⟨ψ⁻| σ(α)⊗σ(β) |ψ⁻⟩
/// with σ(γ) = cos γ·σz + sin γ·σx built entry by entry.
pub fn singlet_correlation_statevector(alpha: f64, beta: f64) -> f64 {
    let op = kron(&spin_measurement(alpha), &spin_measurement(beta));
    let e = expectation(&op, &singlet_state());
    debug_assert!(e.im.abs() < 1e-12);
    e.re
}

/// E(α, β) for the singlet. Evaluates both routes and asserts they agree to
/// 1e-12 before returning the closed form.
pub fn singlet_spin_correlation(alpha: f64, beta: f64) -> f64 {
    let closed = singlet_correlation_closed(alpha, beta);
    let state = singlet_correlation_statevector(alpha, beta);
    assert!(
        (closed - state).abs() < 1e-12,
        "closed form and state vector disagree: {closed} vs {state}"
    );
    closed
}

/// Partitions an axis-constrained ensemble from θ to γ by winding number
/// about the reference point 0 and returns the per-class phase sums
/// Σ exp(i·S) with the kinetic action at the given moment of inertia.
pub fn spin_winding_reduction(
    ensemble: &PathEnsemble,
    theta: f64,
    gamma: f64,
    moment: f64,
) -> Result<BTreeMap<i64, Amplitude>> {
    if !moment.is_finite() || moment <= 0.0 {
        return Err(Error::NonFinite { what: "moment" });
    }
    let tau = std::f64::consts::TAU;
    let mut per_class: BTreeMap<i64, Amplitude> = BTreeMap::new();
    for (i, path) in ensemble.paths().iter().enumerate() {
        if path.space() != Space::So3Axis {
            return Err(Error::SpaceMismatch {
                expected: "So3Axis",
                got: path.space(),
            });
        }
        let start_off = (path.start() - theta).rem_euclid(tau);
        let end_off = (path.end() - gamma).rem_euclid(tau);
        if start_off.min(tau - start_off) > 1e-9 || end_off.min(tau - end_off) > 1e-9 {
            return Err(Error::invalid(
                "ensemble endpoints do not match θ → γ (mod 2π)",
            ));
        }
        let n = winding_number(path, 0.0)?;
        let s = kinetic_action(path.points(), path.dt(), moment);
        let weight = ensemble.weights().map_or(1.0, |w| w[i]);
        *per_class.entry(n).or_insert(Amplitude::new(0.0, 0.0)) += Amplitude::from_polar(weight, s);
    }
    Ok(per_class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{Generator, Path};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

    #[test]
    fn perfect_anticorrelation_at_equal_angles() {
        for a in [0.0, 0.4, 2.9] {
            assert!((singlet_spin_correlation(a, a) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_settings_are_uncorrelated() {
        assert!(singlet_spin_correlation(FRAC_PI_2, 0.0).abs() < 1e-12);
    }

    #[test]
    fn eighth_turn_matches_state_vector() {
        let e = singlet_correlation_statevector(FRAC_PI_4, 0.0);
        assert!((e + std::f64::consts::SQRT_2 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_state_vector_on_grid() {
        for i in 0..25 {
            let a = TAU * i as f64 / 25.0;
            let b = 0.77;
            let closed = singlet_correlation_closed(a, b);
            let state = singlet_correlation_statevector(a, b);
            assert!((closed - state).abs() < 1e-12);
        }
    }

    fn axis_path(points: Vec<f64>) -> Path {
        Path::new(Space::So3Axis, points, 0.25).unwrap()
    }

    #[test]
    fn single_direct_path_is_one_class() {
        let ensemble = PathEnsemble::from_paths(
            vec![axis_path(vec![0.3, 0.6, 1.0])],
            None,
            0,
            Generator::FixedMomentum,
        )
        .unwrap();
        let classes = spin_winding_reduction(&ensemble, 0.3, 1.0, 1.0).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(classes.contains_key(&0));
    }

    #[test]
    fn surface_passage_separates_classes() {
        // One direct path and one that passes the surface at π and comes to
        // the same physical endpoint one winding later.
        let ensemble = PathEnsemble::from_paths(
            vec![
                axis_path(vec![0.3, 0.6, 1.0]),
                axis_path(vec![0.3, 4.0, 1.0 + TAU]),
            ],
            None,
            0,
            Generator::FixedMomentum,
        )
        .unwrap();
        let classes = spin_winding_reduction(&ensemble, 0.3, 1.0, 1.0).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.contains_key(&0));
        assert!(classes.contains_key(&1));
    }

    #[test]
    fn class_sums_recombine_to_ensemble_total() {
        let paths = vec![
            axis_path(vec![0.2, 1.5, 0.9]),
            axis_path(vec![0.2, -2.0, 0.9 - TAU]),
            axis_path(vec![0.2, 4.0, 0.9 + TAU]),
            axis_path(vec![0.2, 0.5, 0.9]),
        ];
        let total: Amplitude = paths
            .iter()
            .map(|p| Amplitude::from_polar(1.0, kinetic_action(p.points(), p.dt(), 2.0)))
            .sum();
        let ensemble = PathEnsemble::from_paths(paths, None, 0, Generator::FixedMomentum).unwrap();
        let classes = spin_winding_reduction(&ensemble, 0.2, 0.9, 2.0).unwrap();
        let sum: Amplitude = classes.values().sum();
        assert!((sum - total).norm() < 1e-12);
    }

    #[test]
    fn wrong_space_is_rejected() {
        let ensemble = PathEnsemble::from_paths(
            vec![Path::new(Space::Ring, vec![0.3, 1.0], 0.5).unwrap()],
            None,
            0,
            Generator::FixedMomentum,
        )
        .unwrap();
        assert!(matches!(
            spin_winding_reduction(&ensemble, 0.3, 1.0, 1.0),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn correlation_range_spans_the_bell_angles() {
        // The values consumed by the CHSH harness.
        let s = singlet_spin_correlation(0.0, FRAC_PI_4)
            - singlet_spin_correlation(0.0, 3.0 * FRAC_PI_4)
            + singlet_spin_correlation(FRAC_PI_2, FRAC_PI_4)
            + singlet_spin_correlation(FRAC_PI_2, 3.0 * FRAC_PI_4);
        assert!((s.abs() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);
    }
}
