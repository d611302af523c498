//! Acceptance criteria with pinned tolerances.
//!
//! Each criterion compares an implementation route against an independent
//! oracle (closed form, spectral sum, state vector, exhaustive enumeration,
//! or binomial statistics) and reports a measured value against a fixed
//! threshold. The whole battery runs in seconds on a laptop.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};

use serde::Serialize;

use crate::bell::{
    chsh_coefficients, chsh_value, ghz_quantum_products, lhv_exhaustive_max,
    mermin_assignment_search, no_signaling_audit, JointSample,
};
use crate::entangle::{
    congruence_factorization_residual, entangled_ring_amplitude, interferometer_joint,
    singlet_correlation_closed, singlet_correlation_statevector, CongruentArms,
    InterferometerSetting, RingPairMode, RingPairSetting,
};
use crate::path::Amplitude;
use crate::propagator::{
    chapman_kolmogorov_compose, free_propagator_analytic, free_propagator_sliced, mirror_amplitude,
    ring_propagator, ring_propagator_spectral, spiral_turn_sums, stationary_zone_recovery,
    LatticeSpec, MirrorGeometry, RingParams,
};
use crate::stream::{run_stream, Experiment, ShadowSpec, StreamConfig};

/// Seeds used by every Monte Carlo criterion.
pub const STANDARD_SEEDS: [u64; 20] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20,
];

/// Complex-time damping for the ring-propagator oracle comparison. At the
/// criterion's resonant time the undamped partial sums are Dirichlet kernels
/// and never settle; this ε makes both summation routes Gaussian-convergent
/// while Poisson summation stays exact.
pub const RING_DAMPING: f64 = 5e-3;

const MC_TRIALS: u64 = 100_000;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Worst measured value for the headline comparison.
    pub measured: f64,
    /// Pinned threshold the measured value is held against.
    pub threshold: f64,
    pub detail: String,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {:2} {:<28} {}  measured {:.3e} vs threshold {:.3e}  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.measured,
            self.threshold,
            self.detail
        )
    }
}

/// Runs every acceptance criterion.
pub fn run_all() -> Vec<CriterionResult> {
    run_all_with(None)
}

/// Variant with a fail-injection hook used to exercise the failure path of
/// suite consumers: the named criterion is forced to fail after evaluation.
pub fn run_all_with(fail_inject: Option<u32>) -> Vec<CriterionResult> {
    let mut results = vec![
        interferometer_curve(),
        congruent_factorization(),
        no_signaling(),
        ring_oracle_agreement(),
        entangled_rings(),
        chsh_gap(),
        ghz_mermin(),
        singlet_anticorrelation(),
        free_propagator(),
        cornu_stationary_phase(),
        monte_carlo_convergence(),
    ];
    if let Some(id) = fail_inject {
        for r in &mut results {
            if r.id == id {
                r.passed = false;
                r.detail = format!("{} [tolerance tampered by test hook]", r.detail);
            }
        }
    }
    results
}

fn interferometer_curve() -> CriterionResult {
    const THRESHOLD: f64 = 1e-9;
    let arms = CongruentArms::default_arms();
    let mut max_err = 0.0f64;
    for k in 0..25 {
        let delta = TAU * k as f64 / 25.0;
        let joint = interferometer_joint(&InterferometerSetting::from_congruent(delta, 0.0, &arms))
            .expect("congruent setting is valid");
        let predicted = 0.5 * (0.5 * delta).cos().powi(2);
        max_err = max_err.max((joint.p_uu - predicted).abs());
    }
    let equal = interferometer_joint(&InterferometerSetting::from_congruent(0.9, 0.9, &arms))
        .expect("congruent setting is valid");
    let anchor_err = (equal.p_uu - 0.5).abs().max(equal.p_ud.abs());
    let measured = max_err.max(anchor_err);
    CriterionResult {
        id: 1,
        name: "interferometer-curve",
        passed: measured < THRESHOLD,
        measured,
        threshold: THRESHOLD,
        detail: format!("25-point grid err {max_err:.3e}, equal-shifter anchor {anchor_err:.3e}"),
    }
}

fn congruent_factorization() -> CriterionResult {
    const THRESHOLD: f64 = 1e-9;
    const DELTA: f64 = 0.1;
    let arms = CongruentArms::default_arms();
    let mut congruent = 0.0f64;
    for (a, b) in [(0.0, 0.0), (0.9, 0.2), (2.5, 4.0), (5.8, 1.1)] {
        let setting = InterferometerSetting::from_congruent(a, b, &arms);
        congruent = congruent.max(congruence_factorization_residual(&setting));
    }
    let mut perturbed_setting = InterferometerSetting::from_congruent(0.9, 0.2, &arms);
    perturbed_setting.amp_b += Amplitude::new(DELTA, 0.0);
    let perturbed = congruence_factorization_residual(&perturbed_setting);
    let sensitivity_ok = perturbed >= DELTA / 10.0;
    CriterionResult {
        id: 2,
        name: "congruent-factorization",
        passed: congruent < THRESHOLD && sensitivity_ok,
        measured: congruent,
        threshold: THRESHOLD,
        detail: format!("perturbed δ=0.1 residual {perturbed:.3e} (needs ≥ 1e-2)"),
    }
}

fn no_signaling() -> CriterionResult {
    const THRESHOLD: f64 = 1e-12;
    let arms = CongruentArms::default_arms();
    let mut family = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let alpha = TAU * i as f64 / 5.0;
            let beta = TAU * j as f64 / 5.0;
            family.push(JointSample {
                alpha,
                beta,
                joint: interferometer_joint(&InterferometerSetting::from_congruent(
                    alpha, beta, &arms,
                ))
                .expect("congruent setting is valid"),
            });
        }
    }
    let analytic = no_signaling_audit(&family).expect("family is well formed");

    // Monte Carlo side: empirical left marginal against the analytic 1/2.
    let four_sigma = 4.0 * (0.25 / MC_TRIALS as f64).sqrt();
    let mut mc_worst = 0.0f64;
    for beta in [0.3, 2.1] {
        let run = run_stream(&StreamConfig {
            experiment: Experiment::Interferometer { alpha: 0.8, beta },
            n_trials: MC_TRIALS,
            seed: STANDARD_SEEDS[0],
            shadow: ShadowSpec::default(),
        })
        .expect("stream config is valid");
        let marginal_u =
            (run.report.counts["uu"] + run.report.counts["ud"]) as f64 / MC_TRIALS as f64;
        mc_worst = mc_worst.max((marginal_u - 0.5).abs());
    }
    CriterionResult {
        id: 3,
        name: "no-signaling",
        passed: analytic < THRESHOLD && mc_worst <= four_sigma,
        measured: analytic,
        threshold: THRESHOLD,
        detail: format!("MC marginal dev {mc_worst:.3e} vs 4σ {four_sigma:.3e}"),
    }
}

fn ring_oracle_agreement() -> CriterionResult {
    const THRESHOLD: f64 = 1e-6;
    const MONOTONE_SLACK: f64 = 1e-13;
    let grid: Vec<f64> = (0..8).map(|k| (2 * k + 1) as f64 * PI / 8.0).collect();
    let err_at = |cutoff: usize| -> f64 {
        let params = RingParams::new(1.0, TAU, cutoff, cutoff)
            .expect("params valid")
            .with_damping(RING_DAMPING)
            .expect("damping valid");
        grid.iter()
            .map(|&d| {
                let w = ring_propagator(d, 0.0, &params)
                    .expect("angles in range")
                    .value;
                (w - ring_propagator_spectral(d, 0.0, &params)).norm()
            })
            .fold(0.0f64, f64::max)
    };
    let e40 = err_at(40);
    let e80 = err_at(80);
    let e160 = err_at(160);
    let monotone = e80 <= e40 + MONOTONE_SLACK && e160 <= e80 + MONOTONE_SLACK;
    CriterionResult {
        id: 4,
        name: "ring-propagator",
        passed: e40 < THRESHOLD && monotone,
        measured: e40,
        threshold: THRESHOLD,
        detail: format!("errors at cutoffs 40/80/160: {e40:.3e}/{e80:.3e}/{e160:.3e}"),
    }
}

fn entangled_rings() -> CriterionResult {
    const THRESHOLD: f64 = 1e-12;
    let triples = [
        (0.05, 0.95, 0.45),
        (0.2, 1.4, 0.9),
        (0.0, 2.0, 1.1),
        (0.3, 1.0, 0.8),
        (0.15, 2.8, 1.9),
        (0.4, 1.7, 0.6),
        (0.1, 2.4, 2.0),
        (0.25, 1.2, 1.2),
        (0.0, 3.0, 0.5),
        (0.35, 2.2, 1.5),
    ];
    let params = RingParams::new(1.0, TAU, 8, 8).expect("params valid");
    let mut measured = 0.0f64;
    for p in -5i64..=5 {
        for &(theta, alpha, beta) in &triples {
            let setting =
                RingPairSetting::new(theta, alpha, beta, params, RingPairMode::FixedMomentum(p))
                    .expect("ordered triple");
            let r = entangled_ring_amplitude(&setting).expect("non-degenerate");
            let expected =
                Amplitude::from_polar(1.0, p as f64 * (setting.alpha() - setting.beta()));
            measured = measured.max((r.factor - expected).norm());
        }
    }
    // Full-propagator mode: residual is reported, not asserted.
    let full_params = RingParams::new(1.0, TAU, 40, 40)
        .expect("params valid")
        .with_damping(RING_DAMPING)
        .expect("damping valid");
    let full = entangled_ring_amplitude(
        &RingPairSetting::new(0.1, 1.0, 0.5, full_params, RingPairMode::FullPropagator)
            .expect("ordered triple"),
    )
    .expect("non-degenerate");
    CriterionResult {
        id: 5,
        name: "entangled-rings",
        passed: measured < THRESHOLD,
        measured,
        threshold: THRESHOLD,
        detail: format!(
            "full-propagator diagnostic f=({:.4},{:.4}) residual {:.3e} (reported only)",
            full.factor.re, full.factor.im, full.phase_residual
        ),
    }
}

fn chsh_gap() -> CriterionResult {
    const THRESHOLD: f64 = 1e-9;
    let s = chsh_value(
        crate::entangle::singlet_spin_correlation,
        0.0,
        FRAC_PI_2,
        FRAC_PI_4,
        3.0 * FRAC_PI_4,
    )
    .expect("singlet correlation in range");
    let measured = (s.abs() - 2.0 * SQRT_2).abs();
    let lhv = lhv_exhaustive_max(&chsh_coefficients()).expect("table within cap");
    let gap = s.abs() - lhv.max_value;
    CriterionResult {
        id: 6,
        name: "chsh-gap",
        passed: measured < THRESHOLD && lhv.max_value == 2.0 && gap > 0.8,
        measured,
        threshold: THRESHOLD,
        detail: format!(
            "|S| = {:.6}, LHV max = {} ({} strategies attain), gap {:.4}",
            s.abs(),
            lhv.max_value,
            lhv.argmax.len(),
            gap
        ),
    }
}

fn ghz_mermin() -> CriterionResult {
    const THRESHOLD: f64 = 1e-12;
    let products = ghz_quantum_products();
    let measured = (products.xyy - 1.0)
        .abs()
        .max((products.yxy - 1.0).abs())
        .max((products.yyx - 1.0).abs())
        .max((products.xxx + 1.0).abs());
    let report = mermin_assignment_search();
    CriterionResult {
        id: 7,
        name: "ghz-mermin",
        passed: measured < THRESHOLD
            && report.quantum_match_count == 0
            && report.forcing_identity_holds,
        measured,
        threshold: THRESHOLD,
        detail: format!(
            "quantum matches {}/64, forcing identity holds: {}",
            report.quantum_match_count, report.forcing_identity_holds
        ),
    }
}

fn singlet_anticorrelation() -> CriterionResult {
    const THRESHOLD: f64 = 1e-12;
    let mut measured = 0.0f64;
    for k in 0..25 {
        let alpha = TAU * k as f64 / 25.0;
        let beta = 0.77;
        measured = measured.max(
            (singlet_correlation_closed(alpha, beta)
                - singlet_correlation_statevector(alpha, beta))
            .abs(),
        );
        measured = measured.max((singlet_correlation_statevector(alpha, alpha) + 1.0).abs());
    }
    CriterionResult {
        id: 8,
        name: "singlet-anticorrelation",
        passed: measured < THRESHOLD,
        measured,
        threshold: THRESHOLD,
        detail: "closed form vs 4-dim state vector on 25 grid points".into(),
    }
}

fn free_propagator() -> CriterionResult {
    const THRESHOLD: f64 = 1e-3;
    let window = LatticeSpec::default_window();
    let mut measured = 0.0f64;
    for displacement in [0.0, 0.5, 1.0, 1.5, 2.0] {
        let sliced =
            free_propagator_sliced(0.0, displacement, 1.0, 1.0, 2, &window).expect("valid lattice");
        let exact = free_propagator_analytic(0.0, displacement, 1.0, 1.0);
        measured = measured.max((sliced.value - exact).norm() / exact.norm());
    }
    let three_slice_window = LatticeSpec::new(721, 12.0, 0.5).expect("valid lattice");
    let three =
        free_propagator_sliced(0.0, 1.0, 1.0, 1.0, 3, &three_slice_window).expect("valid lattice");
    let exact = free_propagator_analytic(0.0, 1.0, 1.0, 1.0);
    let three_err = (three.value - exact).norm() / exact.norm();

    let half = LatticeSpec::new(1201, 15.0, 0.5).expect("valid lattice");
    let compose = LatticeSpec::new(401, 12.0, 0.5).expect("valid lattice");
    let ck =
        chapman_kolmogorov_compose(0.0, 1.0, 1.0, 1.0, 2, &half, &compose).expect("valid lattice");
    let ck_err = (ck.value - exact).norm() / exact.norm();
    let measured = measured.max(three_err).max(ck_err);
    CriterionResult {
        id: 9,
        name: "free-propagator",
        passed: measured < THRESHOLD,
        measured,
        threshold: THRESHOLD,
        detail: format!("3-slice err {three_err:.3e}, Chapman-Kolmogorov err {ck_err:.3e}"),
    }
}

fn cornu_stationary_phase() -> CriterionResult {
    const UNIT_TOLERANCE: f64 = 1e-12;
    const ZONE_MINIMUM: f64 = 0.9;
    const CAUCHY_TOLERANCE: f64 = 1e-3;
    let geometry = MirrorGeometry {
        source: (-1.0, 1.0),
        receiver: (1.0, 1.0),
        mirror_min: -8.0,
        mirror_max: 8.0,
    };
    let result = mirror_amplitude(&geometry, 12_801, 1.0, 1.0).expect("valid geometry");
    let sums = result.trace.partial_sums();
    let mut unit_dev = (sums[0].norm() - 1.0).abs();
    for w in sums.windows(2) {
        unit_dev = unit_dev.max(((w[1] - w[0]).norm() - 1.0).abs());
    }
    let zone = stationary_zone_recovery(&result);
    let (head, tail) = spiral_turn_sums(&result.trace, 0.1);
    let finer = mirror_amplitude(&geometry, 25_601, 1.0, 1.0).expect("valid geometry");
    let cauchy = (finer.trace.total_scaled() - result.trace.total_scaled()).norm();
    let passed = unit_dev < UNIT_TOLERANCE
        && zone >= ZONE_MINIMUM
        && head * tail < 0.0
        && cauchy < CAUCHY_TOLERANCE;
    CriterionResult {
        id: 10,
        name: "cornu-stationary-phase",
        passed,
        measured: unit_dev,
        threshold: UNIT_TOLERANCE,
        detail: format!(
            "zone recovery {zone:.3} (≥ 0.9), turn signs {}/{}, Cauchy step {cauchy:.3e}",
            head.signum(),
            tail.signum()
        ),
    }
}

fn monte_carlo_convergence() -> CriterionResult {
    const Z_BOUND: f64 = 4.0;
    let mut max_z = 0.0f64;
    let configs = |seed: u64| {
        [
            StreamConfig {
                experiment: Experiment::TwoDetector {
                    amp0: Amplitude::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                    amp1: Amplitude::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
                },
                n_trials: MC_TRIALS,
                seed,
                shadow: ShadowSpec::default(),
            },
            StreamConfig {
                experiment: Experiment::Interferometer {
                    alpha: 0.9,
                    beta: 0.4,
                },
                n_trials: MC_TRIALS,
                seed,
                shadow: ShadowSpec::default(),
            },
        ]
    };
    for seed in STANDARD_SEEDS {
        for config in configs(seed) {
            let run = run_stream(&config).expect("valid config");
            for z in run.report.z_scores.values() {
                max_z = max_z.max(z.abs());
            }
        }
    }
    // Determinism: identical configs give bit-identical event logs.
    let a = run_stream(&configs(STANDARD_SEEDS[0])[1]).expect("valid config");
    let b = run_stream(&configs(STANDARD_SEEDS[0])[1]).expect("valid config");
    let deterministic = a.records == b.records;
    CriterionResult {
        id: 11,
        name: "monte-carlo-convergence",
        passed: max_z <= Z_BOUND && deterministic,
        measured: max_z,
        threshold: Z_BOUND,
        detail: format!(
            "20 seeds × 2 experiments × 1e5 trials, bit-identical replay: {deterministic}"
        ),
    }
}
