//! Event-level Monte Carlo over sampled path ensembles.
//!
//! Per trial the tangible particle takes one path drawn uniformly from the
//! ensemble (the rest of the ensemble is its shadow stream), while the
//! detector outcome is drawn from the distribution fixed by the full
//! ensemble's amplitudes — for two-particle experiments the joint amplitudes
//! are products of the per-side sums. Outcome statistics must converge to the
//! analytic predictions at the binomial rate; nothing about a single trial
//! depends on which path the tangible took.
//!
//! Randomness is counter-derived: trial t uses stream BASE+t of the seeded
//! generator, so runs are bit-identical for any thread count and a longer run
//! extends a shorter one with the same seed.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entangle::{interferometer_joint, CongruentArms, InterferometerSetting};
use crate::error::{Error, Result};
use crate::path::{
    homotopy_class, indexed_rng, sample_paths, Generator, GeneratorSpec, HomotopyClass, Path,
    PathEnsemble, SampleSpec, Space,
};

/// Stream offset for per-trial randomness; ensemble sampling uses the low
/// stream indices of the same seed.
const TRIAL_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Experiment {
    /// Two detectors fed by fixed amplitudes; outcome probabilities are the
    /// normalized squared moduli.
    TwoDetector {
        amp0: crate::path::Amplitude,
        amp1: crate::path::Amplitude,
    },
    /// Coincidence counting at shifter settings (α, β); outcomes are the four
    /// detector pairs.
    Interferometer { alpha: f64, beta: f64 },
    /// Ring pair at fixed integer input momentum; the tangible's winding
    /// class varies per trial, the measured momentum does not.
    RingMomentum { momentum: i64, n_cutoff: usize },
}

/// Size of the sampled shadow ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShadowSpec {
    pub n_paths: usize,
    pub n_slices: usize,
}

impl Default for ShadowSpec {
    fn default() -> Self {
        ShadowSpec {
            n_paths: 100,
            n_slices: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StreamConfig {
    pub experiment: Experiment,
    pub n_trials: u64,
    pub seed: u64,
    pub shadow: ShadowSpec,
}

/// One Monte Carlo trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventRecord {
    pub trial: u64,
    pub tangible_path_id: usize,
    pub homotopy_class: HomotopyClass,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub n_trials: u64,
    pub counts: BTreeMap<String, u64>,
    pub predicted: BTreeMap<String, f64>,
    pub z_scores: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamRun {
    pub records: Vec<EventRecord>,
    pub report: FrequencyReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub n_trials: u64,
    pub max_abs_error: f64,
    pub sqrt_n_error: f64,
}

fn build_ensemble(config: &StreamConfig) -> Result<PathEnsemble> {
    match config.experiment {
        Experiment::TwoDetector { .. } => sample_paths(&SampleSpec {
            space: Space::Line1D,
            start: 0.0,
            end: 1.0,
            t_total: 1.0,
            n_slices: config.shadow.n_slices,
            n_paths: config.shadow.n_paths,
            generator: GeneratorSpec::BrownianBridge {
                mass: 1.0,
                sigma: None,
            },
            seed: config.seed,
        }),
        Experiment::Interferometer { .. } => interferometer_ensemble(config),
        Experiment::RingMomentum { n_cutoff, .. } => sample_paths(&SampleSpec {
            space: Space::Ring,
            start: 0.2,
            end: 1.0,
            t_total: 1.0,
            n_slices: config.shadow.n_slices,
            n_paths: 1,
            generator: GeneratorSpec::FixedMomentum { n_cutoff },
            seed: config.seed,
        }),
    }
}

/// Arm representatives for the interferometer: the lower class stays on the
/// direct arc (winding 0), the upper class loops once (winding 1). Small
/// deterministic interior bumps keep the per-id paths distinct without
/// leaving their class.
fn interferometer_ensemble(config: &StreamConfig) -> Result<PathEnsemble> {
    let n_slices = config.shadow.n_slices.max(2);
    let per_class = (config.shadow.n_paths / 2).max(1);
    let dt = 1.0 / n_slices as f64;
    let tau = std::f64::consts::TAU;
    let mut paths = Vec::with_capacity(2 * per_class);
    for class in 0..2u32 {
        let target = 1.0 + tau * class as f64;
        for j in 0..per_class {
            let bump = 0.05 * (j + 1) as f64 / per_class as f64;
            let points: Vec<f64> = (0..=n_slices)
                .map(|k| {
                    let frac = k as f64 / n_slices as f64;
                    target * frac + bump * (std::f64::consts::PI * frac).sin()
                })
                .collect();
            paths.push(Path::new(Space::Ring, points, dt)?);
        }
    }
    PathEnsemble::from_paths(paths, None, config.seed, Generator::FixedMomentum)
}

/// Ordered outcome labels and probabilities for an experiment.
fn outcome_distribution(experiment: &Experiment) -> Result<Vec<(String, f64)>> {
    match experiment {
        Experiment::TwoDetector { amp0, amp1 } => {
            let w0 = amp0.norm_sqr();
            let w1 = amp1.norm_sqr();
            let total = w0 + w1;
            if total < 1e-24 {
                return Err(Error::DegenerateAmplitude {
                    reason: "both detector amplitudes vanish".into(),
                });
            }
            Ok(vec![
                ("d0".to_string(), w0 / total),
                ("d1".to_string(), w1 / total),
            ])
        }
        Experiment::Interferometer { alpha, beta } => {
            let arms = CongruentArms::default_arms();
            let joint =
                interferometer_joint(&InterferometerSetting::from_congruent(*alpha, *beta, &arms))?;
            Ok(vec![
                ("uu".to_string(), joint.p_uu),
                ("ud".to_string(), joint.p_ud),
                ("du".to_string(), joint.p_du),
                ("dd".to_string(), joint.p_dd),
            ])
        }
        Experiment::RingMomentum { momentum, .. } => Ok(vec![(format!("p{momentum}"), 1.0)]),
    }
}

fn draw_outcome(outcomes: &[(String, f64)], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, (_, p)) in outcomes.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    outcomes.len() - 1
}

/// Runs the Monte Carlo stream. Deterministic given the config.
pub fn run_stream(config: &StreamConfig) -> Result<StreamRun> {
    if config.n_trials < 1 {
        return Err(Error::invalid("n_trials must be at least 1"));
    }
    let ensemble = build_ensemble(config)?;
    let outcomes = outcome_distribution(&config.experiment)?;
    let classes: Vec<HomotopyClass> = ensemble
        .paths()
        .iter()
        .map(|p| homotopy_class(p, 0.0))
        .collect::<Result<_>>()?;

    let n_paths = ensemble.len();
    let seed = config.seed;
    let records: Vec<EventRecord> = (0..config.n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = indexed_rng(seed, TRIAL_STREAM_BASE + trial);
            let path_id = rng.gen_range(0..n_paths);
            let u: f64 = rng.gen();
            let outcome_idx = draw_outcome(&outcomes, u);
            EventRecord {
                trial,
                tangible_path_id: path_id,
                homotopy_class: classes[path_id],
                outcome: outcomes[outcome_idx].0.clone(),
            }
        })
        .collect();

    let mut counts: BTreeMap<String, u64> = outcomes.iter().map(|(k, _)| (k.clone(), 0)).collect();
    for r in &records {
        *counts.get_mut(&r.outcome).unwrap() += 1;
    }
    let predicted: BTreeMap<String, f64> = outcomes.iter().cloned().collect();
    let n = config.n_trials as f64;
    let z_scores = counts
        .iter()
        .map(|(k, &c)| {
            let p = predicted[k];
            let z = if p <= 0.0 || p >= 1.0 {
                let expected = p * n;
                if (c as f64 - expected).abs() < 0.5 {
                    0.0
                } else {
                    f64::MAX
                }
            } else {
                (c as f64 / n - p) / (p * (1.0 - p) / n).sqrt()
            };
            (k.clone(), z)
        })
        .collect();

    Ok(StreamRun {
        records,
        report: FrequencyReport {
            n_trials: config.n_trials,
            counts,
            predicted,
            z_scores,
        },
    })
}

/// Empirical distribution of the tangible's homotopy class. Under the uniform
/// path draw this tracks the ensemble's class composition.
pub fn tangible_class_statistics(records: &[EventRecord]) -> Result<BTreeMap<HomotopyClass, f64>> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut counts: BTreeMap<HomotopyClass, u64> = BTreeMap::new();
    for r in records {
        *counts.entry(r.homotopy_class).or_insert(0) += 1;
    }
    let total = records.len() as f64;
    Ok(counts
        .into_iter()
        .map(|(k, v)| (k, v as f64 / total))
        .collect())
}

/// Max |frequency − predicted| per trial count. With a shared seed each run
/// extends the previous one, so the scan shows one stream converging.
pub fn convergence_scan(config: &StreamConfig, trial_counts: &[u64]) -> Result<Vec<ScanRow>> {
    if trial_counts.windows(2).any(|w| w[1] <= w[0]) || trial_counts.is_empty() {
        return Err(Error::invalid("trial counts must be strictly increasing"));
    }
    let mut rows = Vec::with_capacity(trial_counts.len());
    for &n_trials in trial_counts {
        let run = run_stream(&StreamConfig {
            n_trials,
            ..*config
        })?;
        let n = n_trials as f64;
        let max_abs_error = run
            .report
            .counts
            .iter()
            .map(|(k, &c)| (c as f64 / n - run.report.predicted[k]).abs())
            .fold(0.0f64, f64::max);
        rows.push(ScanRow {
            n_trials,
            max_abs_error,
            sqrt_n_error: n.sqrt() * max_abs_error,
        });
    }
    Ok(rows)
}

/// CSV event log with columns trial, path_id, class, outcome.
pub fn events_to_csv(records: &[EventRecord]) -> String {
    let mut out = String::from("trial,path_id,class,outcome\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.trial, r.tangible_path_id, r.homotopy_class, r.outcome
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Amplitude;

    fn two_detector(seed: u64, n_trials: u64) -> StreamConfig {
        StreamConfig {
            experiment: Experiment::TwoDetector {
                amp0: Amplitude::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                amp1: Amplitude::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
            },
            n_trials,
            seed,
            shadow: ShadowSpec::default(),
        }
    }

    #[test]
    fn symmetric_two_detector_frequencies_within_four_sigma() {
        let run = run_stream(&two_detector(11, 100_000)).unwrap();
        for z in run.report.z_scores.values() {
            assert!(z.abs() <= 4.0, "z = {z}");
        }
        let f0 = run.report.counts["d0"] as f64 / 100_000.0;
        assert!((f0 - 0.5).abs() <= 4.0 * (0.25f64 / 100_000.0).sqrt());
    }

    #[test]
    fn equal_shifter_interferometer_coincidence_near_half() {
        let config = StreamConfig {
            experiment: Experiment::Interferometer {
                alpha: 0.6,
                beta: 0.6,
            },
            n_trials: 100_000,
            seed: 5,
            shadow: ShadowSpec::default(),
        };
        let run = run_stream(&config).unwrap();
        let f_uu = run.report.counts["uu"] as f64 / 100_000.0;
        assert!((f_uu - 0.5).abs() <= 4.0 * (0.25f64 / 100_000.0).sqrt());
        // Closed channels stay closed.
        assert_eq!(run.report.counts["ud"], 0);
        assert_eq!(run.report.counts["du"], 0);
    }

    #[test]
    fn same_seed_gives_bit_identical_event_logs() {
        let a = run_stream(&two_detector(42, 5_000)).unwrap();
        let b = run_stream(&two_detector(42, 5_000)).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(events_to_csv(&a.records), events_to_csv(&b.records));
    }

    #[test]
    fn longer_run_extends_shorter_run() {
        let a = run_stream(&two_detector(9, 1_000)).unwrap();
        let b = run_stream(&two_detector(9, 2_000)).unwrap();
        assert_eq!(&b.records[..1_000], &a.records[..]);
    }

    #[test]
    fn class_statistics_match_ensemble_composition() {
        let config = StreamConfig {
            experiment: Experiment::Interferometer {
                alpha: 0.3,
                beta: 1.1,
            },
            n_trials: 100_000,
            seed: 3,
            shadow: ShadowSpec::default(),
        };
        let ensemble = build_ensemble(&config).unwrap();
        let composition = ensemble.class_composition(0.0).unwrap();
        let run = run_stream(&config).unwrap();
        let stats = tangible_class_statistics(&run.records).unwrap();
        assert_eq!(stats.len(), composition.len());
        for (class, &expected) in &composition {
            let got = stats[class];
            let se = (expected * (1.0 - expected) / 100_000.0).sqrt();
            assert!(
                (got - expected).abs() <= 4.0 * se,
                "class {class}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn single_class_ensemble_has_unit_frequency() {
        let config = StreamConfig {
            experiment: Experiment::TwoDetector {
                amp0: Amplitude::new(1.0, 0.0),
                amp1: Amplitude::new(1.0, 0.0),
            },
            n_trials: 500,
            seed: 8,
            shadow: ShadowSpec::default(),
        };
        let run = run_stream(&config).unwrap();
        let stats = tangible_class_statistics(&run.records).unwrap();
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[&HomotopyClass::Winding(0)], 1.0);
    }

    #[test]
    fn empty_records_are_rejected() {
        assert!(matches!(
            tangible_class_statistics(&[]),
            Err(Error::EmptyRecords)
        ));
    }

    #[test]
    fn all_zero_amplitudes_are_degenerate() {
        let config = StreamConfig {
            experiment: Experiment::TwoDetector {
                amp0: Amplitude::new(0.0, 0.0),
                amp1: Amplitude::new(0.0, 0.0),
            },
            n_trials: 10,
            seed: 0,
            shadow: ShadowSpec::default(),
        };
        assert!(matches!(
            run_stream(&config),
            Err(Error::DegenerateAmplitude { .. })
        ));
    }

    #[test]
    fn convergence_errors_shrink_with_trials() {
        // A single stream's error is not monotone in N; the 1/sqrt(N) law
        // holds in aggregate. Compare medians over ten seeds.
        let mut small = Vec::new();
        let mut large = Vec::new();
        for seed in 1..=10u64 {
            let rows = convergence_scan(&two_detector(seed, 1), &[1_000, 10_000, 100_000]).unwrap();
            small.push(rows[0].max_abs_error);
            large.push(rows[2].max_abs_error);
            // Binomial scale: errors of order sqrt(0.25/N), generously bounded.
            for row in &rows {
                assert!(row.sqrt_n_error < 2.0);
            }
        }
        small.sort_by(f64::total_cmp);
        large.sort_by(f64::total_cmp);
        assert!(small[5] > large[5], "median {} vs {}", small[5], large[5]);
    }

    #[test]
    fn degenerate_prediction_has_zero_error_at_all_sizes() {
        let config = StreamConfig {
            experiment: Experiment::RingMomentum {
                momentum: 1,
                n_cutoff: 4,
            },
            n_trials: 1,
            seed: 2,
            shadow: ShadowSpec::default(),
        };
        let rows = convergence_scan(&config, &[100, 1_000]).unwrap();
        for row in &rows {
            assert_eq!(row.max_abs_error, 0.0);
        }
    }

    #[test]
    fn convergence_scan_requires_increasing_counts() {
        assert!(convergence_scan(&two_detector(1, 1), &[100, 100]).is_err());
        assert!(convergence_scan(&two_detector(1, 1), &[]).is_err());
    }

    #[test]
    fn scaled_error_median_stays_in_the_binomial_band() {
        // Median over 20 seeds of sqrt(N)·error for the symmetric two-detector
        // case; the half-normal median is ≈ 0.674·sqrt(0.25).
        let n = 100_000u64;
        let mut scaled: Vec<f64> = (1..=20u64)
            .map(|seed| {
                let run = run_stream(&two_detector(seed, n)).unwrap();
                let f0 = run.report.counts["d0"] as f64 / n as f64;
                (n as f64).sqrt() * (f0 - 0.5).abs()
            })
            .collect();
        scaled.sort_by(f64::total_cmp);
        let median = 0.5 * (scaled[9] + scaled[10]);
        assert!(
            (0.1..=0.75).contains(&median),
            "median sqrt(N)·err = {median}"
        );
    }

    #[test]
    fn rpp_path_draw_is_uniform_by_chi_square() {
        // 100 paths, 1e5 trials: chi² against uniform must stay below the
        // 99.9th percentile of chi²(99) = 148.2304 for the fixed seed set.
        for seed in [1u64, 7, 23] {
            let run = run_stream(&two_detector(seed, 100_000)).unwrap();
            let mut counts = vec![0u64; 100];
            for r in &run.records {
                counts[r.tangible_path_id] += 1;
            }
            let expected = 1_000.0;
            let chi2: f64 = counts
                .iter()
                .map(|&c| {
                    let d = c as f64 - expected;
                    d * d / expected
                })
                .sum();
            assert!(chi2 < 148.2304, "seed {seed}: chi2 = {chi2}");
        }
    }

    #[test]
    fn independent_streams_factorize() {
        // Two independent two-detector tangibles: the joint empirical
        // distribution of their outcomes factorizes into the marginals.
        let n = 100_000u64;
        let a = run_stream(&two_detector(101, n)).unwrap();
        let b = run_stream(&two_detector(202, n)).unwrap();
        let mut joint = [[0u64; 2]; 2];
        for (ra, rb) in a.records.iter().zip(&b.records) {
            let i = usize::from(ra.outcome == "d1");
            let j = usize::from(rb.outcome == "d1");
            joint[i][j] += 1;
        }
        let fa = a.report.counts["d1"] as f64 / n as f64;
        let fb = b.report.counts["d1"] as f64 / n as f64;
        let marginals = [
            [(1.0 - fa) * (1.0 - fb), (1.0 - fa) * fb],
            [fa * (1.0 - fb), fa * fb],
        ];
        for i in 0..2 {
            for j in 0..2 {
                let observed = joint[i][j] as f64 / n as f64;
                let tolerance = 5.0 * (0.25f64 / n as f64).sqrt();
                assert!(
                    (observed - marginals[i][j]).abs() <= tolerance,
                    "cell ({i},{j})"
                );
            }
        }
    }
}
