//! Per-subcommand experiment runners. Each writes its artifacts into the
//! output directory and returns the list of files written.

use std::fmt::Write as _;
use std::path::Path;

use pathsum::bell::{
    chsh_coefficients, chsh_value, ghz_quantum_products, harness_report, lhv_exhaustive_max,
    mermin_assignment_search,
};
use pathsum::entangle::{
    entangled_ring_amplitude, interferometer_joint, singlet_spin_correlation, CongruentArms,
    InterferometerSetting, RingPairMode, RingPairSetting,
};
use pathsum::propagator::{
    chapman_kolmogorov_compose, free_propagator_analytic, free_propagator_sliced, mirror_amplitude,
    ring_propagator, ring_propagator_spectral, spiral_turn_sums, stationary_zone_recovery,
    LatticeSpec, MirrorGeometry, RingParams,
};
use pathsum::stream::{events_to_csv, run_stream, Experiment, ShadowSpec, StreamConfig};
use pathsum::Amplitude;
use serde_json::json;

use crate::config;
use crate::CliError;

type Artifacts = Vec<String>;

fn write_artifact(out_dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::write(out_dir.join(name), contents)
        .map_err(|e| CliError::Internal(anyhow::anyhow!("writing {name}: {e}")))
}

fn to_json(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

pub fn cornu(cfg: &config::CornuConfig, out_dir: &Path) -> Result<Artifacts, CliError> {
    let geometry = MirrorGeometry {
        source: cfg.source,
        receiver: cfg.receiver,
        mirror_min: cfg.mirror.0,
        mirror_max: cfg.mirror.1,
    };
    let result = mirror_amplitude(&geometry, cfg.n_points, cfg.mass, cfg.t_total)?;
    let zone = stationary_zone_recovery(&result);
    let (head, tail) = spiral_turn_sums(&result.trace, 0.1);
    write_artifact(out_dir, "cornu_trace.csv", &result.trace.to_csv())?;
    let summary = json!({
        "n_points": cfg.n_points,
        "total_re": result.value.re,
        "total_im": result.value.im,
        "total_scaled_re": result.trace.total_scaled().re,
        "total_scaled_im": result.trace.total_scaled().im,
        "stationary_index": result.stationary_index,
        "zone_recovery": zone,
        "turn_sum_head": head,
        "turn_sum_tail": tail,
        "double_spiral": head * tail < 0.0,
    });
    write_artifact(out_dir, "cornu_summary.json", &to_json(&summary))?;
    Ok(vec!["cornu_trace.csv".into(), "cornu_summary.json".into()])
}

pub fn free(cfg: &config::FreeConfig, out_dir: &Path) -> Result<Artifacts, CliError> {
    let lattice = LatticeSpec::new(cfg.sites, cfg.half_width, cfg.taper_frac)?;
    let mut csv = String::from("displacement,re,im,exact_re,exact_im,rel_err\n");
    let mut max_rel_err = 0.0f64;
    let mut boundary = 0.0f64;
    let mut warned = false;
    for k in 0..cfg.grid {
        let displacement = if cfg.grid == 1 {
            0.0
        } else {
            cfg.max_displacement * k as f64 / (cfg.grid - 1) as f64
        };
        let sliced = free_propagator_sliced(
            0.0,
            displacement,
            cfg.t_total,
            cfg.mass,
            cfg.n_slices,
            &lattice,
        )?;
        let exact = free_propagator_analytic(0.0, displacement, cfg.t_total, cfg.mass);
        let rel_err = (sliced.value - exact).norm() / exact.norm();
        max_rel_err = max_rel_err.max(rel_err);
        boundary = boundary.max(sliced.boundary_estimate);
        warned |= sliced.window_warning;
        writeln!(
            csv,
            "{displacement},{},{},{},{},{rel_err}",
            sliced.value.re, sliced.value.im, exact.re, exact.im
        )
        .expect("string write");
    }
    let half = LatticeSpec::new(1201, 15.0, 0.5).expect("pinned lattice is valid");
    let compose = LatticeSpec::new(401, 12.0, 0.5).expect("pinned lattice is valid");
    let ck = chapman_kolmogorov_compose(0.0, 1.0, cfg.t_total, cfg.mass, 2, &half, &compose)?;
    let exact_mid = free_propagator_analytic(0.0, 1.0, cfg.t_total, cfg.mass);
    let ck_err = (ck.value - exact_mid).norm() / exact_mid.norm();
    write_artifact(out_dir, "free.csv", &csv)?;
    let summary = json!({
        "max_rel_err": max_rel_err,
        "chapman_kolmogorov_rel_err": ck_err,
        "boundary_estimate": boundary,
        "window_warning": warned,
        "n_slices": cfg.n_slices,
        "sites": cfg.sites,
        "half_width": cfg.half_width,
        "taper_frac": cfg.taper_frac,
    });
    write_artifact(out_dir, "free_summary.json", &to_json(&summary))?;
    Ok(vec!["free.csv".into(), "free_summary.json".into()])
}

pub fn ring(cfg: &config::RingConfig, out_dir: &Path) -> Result<Artifacts, CliError> {
    let params = RingParams::new(cfg.moment, cfg.t_total, cfg.n_cutoff, cfg.m_cutoff)?
        .with_damping(cfg.damping)?;
    let mut csv = String::from("delta,winding_re,winding_im,spectral_re,spectral_im,abs_err\n");
    let mut max_err = 0.0f64;
    let mut truncation = 0.0f64;
    for k in 0..cfg.grid {
        // Midpoint grid over (0, 2π), avoiding the revival spike at Δ = π.
        let delta = (2 * k + 1) as f64 * std::f64::consts::PI / cfg.grid as f64;
        let winding = ring_propagator(delta, 0.0, &params)?;
        let spectral = ring_propagator_spectral(delta, 0.0, &params);
        let err = (winding.value - spectral).norm();
        max_err = max_err.max(err);
        truncation = truncation.max(winding.truncation_estimate);
        writeln!(
            csv,
            "{delta},{},{},{},{},{err}",
            winding.value.re, winding.value.im, spectral.re, spectral.im
        )
        .expect("string write");
    }
    write_artifact(out_dir, "ring.csv", &csv)?;
    let summary = json!({
        "max_abs_err": max_err,
        "truncation_estimate": truncation,
        "moment": cfg.moment,
        "t_total": cfg.t_total,
        "n_cutoff": cfg.n_cutoff,
        "m_cutoff": cfg.m_cutoff,
        "damping": cfg.damping,
    });
    write_artifact(out_dir, "ring_summary.json", &to_json(&summary))?;
    Ok(vec!["ring.csv".into(), "ring_summary.json".into()])
}

pub fn interferometer(
    cfg: &config::InterferometerConfig,
    out_dir: &Path,
) -> Result<Artifacts, CliError> {
    if cfg.alpha_grid == 0 {
        return Err(CliError::Validation("alpha_grid must be positive".into()));
    }
    let arms = CongruentArms::default_arms();
    let mut csv = String::from("alpha,beta,p_uu,p_ud,p_du,p_dd\n");
    for k in 0..cfg.alpha_grid {
        let alpha = std::f64::consts::TAU * k as f64 / cfg.alpha_grid as f64;
        let joint = interferometer_joint(&InterferometerSetting::from_congruent(
            alpha, cfg.beta, &arms,
        ))?;
        writeln!(
            csv,
            "{alpha},{},{},{},{},{}",
            cfg.beta, joint.p_uu, joint.p_ud, joint.p_du, joint.p_dd
        )
        .expect("string write");
    }
    write_artifact(out_dir, "interferometer.csv", &csv)?;
    Ok(vec!["interferometer.csv".into()])
}

pub fn rings(cfg: &config::RingsConfig, out_dir: &Path) -> Result<Artifacts, CliError> {
    if cfg.p_min > cfg.p_max {
        return Err(CliError::Validation("p_min must not exceed p_max".into()));
    }
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
    let params = RingParams::new(1.0, std::f64::consts::TAU, cfg.n_cutoff, cfg.n_cutoff)?;
    let mut diagnostics = Vec::new();
    for p in cfg.p_min..=cfg.p_max {
        for &(theta, alpha, beta) in &triples {
            let setting =
                RingPairSetting::new(theta, alpha, beta, params, RingPairMode::FixedMomentum(p))?;
            let r = entangled_ring_amplitude(&setting)?;
            diagnostics.push(json!({
                "mode": "fixed-momentum",
                "p": p,
                "theta": theta,
                "alpha": setting.alpha(),
                "beta": setting.beta(),
                "f_re": r.factor.re,
                "f_im": r.factor.im,
                "residual": r.phase_residual,
            }));
        }
    }
    let full_params =
        RingParams::new(1.0, std::f64::consts::TAU, 40, 40)?.with_damping(cfg.damping)?;
    for &(theta, alpha, beta) in &triples[..3] {
        let setting = RingPairSetting::new(
            theta,
            alpha,
            beta,
            full_params,
            RingPairMode::FullPropagator,
        )?;
        let r = entangled_ring_amplitude(&setting)?;
        diagnostics.push(json!({
            "mode": "full-propagator",
            "theta": theta,
            "alpha": setting.alpha(),
            "beta": setting.beta(),
            "f_re": r.factor.re,
            "f_im": r.factor.im,
            "residual": r.phase_residual,
        }));
    }
    write_artifact(out_dir, "rings.json", &to_json(&json!(diagnostics)))?;
    Ok(vec!["rings.json".into()])
}

pub fn spin(cfg: &config::SpinConfig, out_dir: &Path) -> Result<Artifacts, CliError> {
    if cfg.grid == 0 {
        return Err(CliError::Validation("grid must be positive".into()));
    }
    let mut csv = String::from("alpha,beta,E\n");
    for k in 0..cfg.grid {
        let alpha = std::f64::consts::TAU * k as f64 / cfg.grid as f64;
        let e = singlet_spin_correlation(alpha, cfg.beta);
        writeln!(csv, "{alpha},{},{e}", cfg.beta).expect("string write");
    }
    write_artifact(out_dir, "spin.csv", &csv)?;
    Ok(vec!["spin.csv".into()])
}

pub fn chsh(out_dir: &Path) -> Result<Artifacts, CliError> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let s = chsh_value(
        singlet_spin_correlation,
        0.0,
        FRAC_PI_2,
        FRAC_PI_4,
        3.0 * FRAC_PI_4,
    )?;
    let search = lhv_exhaustive_max(&chsh_coefficients())?;
    let report = json!({
        "chsh_quantum": s.abs(),
        "chsh_s_value": s,
        "chsh_lhv_max": search.max_value,
        "lhv_argmax_count": search.argmax.len(),
        "gap": s.abs() - search.max_value,
        "angles": [0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4],
    });
    write_artifact(out_dir, "chsh.json", &to_json(&report))?;
    Ok(vec!["chsh.json".into()])
}

pub fn ghz(out_dir: &Path) -> Result<Artifacts, CliError> {
    let products = ghz_quantum_products();
    let mermin = mermin_assignment_search();
    let report = json!({
        "xyy": products.xyy,
        "yxy": products.yxy,
        "yyx": products.yyx,
        "xxx": products.xxx,
        "mermin_match_count": mermin.quantum_match_count,
        "mermin_all_plus_match_count": mermin.all_plus_match_count,
        "forcing_identity_holds": mermin.forcing_identity_holds,
        "n_assignments": mermin.n_assignments,
    });
    write_artifact(out_dir, "ghz.json", &to_json(&report))?;
    Ok(vec!["ghz.json".into()])
}

pub fn stream(
    cfg: &config::StreamCliConfig,
    seed: u64,
    out_dir: &Path,
) -> Result<Artifacts, CliError> {
    let experiment = match cfg.experiment.as_str() {
        "two-detector" => Experiment::TwoDetector {
            amp0: Amplitude::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            amp1: Amplitude::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        },
        "interferometer" => Experiment::Interferometer {
            alpha: cfg.alpha,
            beta: cfg.beta,
        },
        "ring-momentum" => Experiment::RingMomentum {
            momentum: cfg.momentum,
            n_cutoff: cfg.n_cutoff,
        },
        other => {
            return Err(CliError::Validation(format!(
                "unknown stream experiment `{other}` (expected two-detector, interferometer, or ring-momentum)"
            )))
        }
    };
    let config = StreamConfig {
        experiment,
        n_trials: cfg.n_trials,
        seed,
        shadow: ShadowSpec {
            n_paths: cfg.shadow_paths,
            n_slices: cfg.shadow_slices,
        },
    };
    let run = run_stream(&config)?;
    write_artifact(out_dir, "stream_events.csv", &events_to_csv(&run.records))?;
    let report = serde_json::to_value(&run.report).expect("serializable");
    write_artifact(out_dir, "stream_report.json", &to_json(&report))?;
    Ok(vec![
        "stream_events.csv".into(),
        "stream_report.json".into(),
    ])
}

pub fn suite(out_dir: &Path) -> Result<(Artifacts, bool), CliError> {
    let fail_inject = std::env::var("PATHSUM_SUITE_FAIL_INJECT")
        .ok()
        .and_then(|v| v.parse::<u32>().ok());
    let results = pathsum::suite::run_all_with(fail_inject);
    for r in &results {
        println!("{}", r.summary_line());
    }
    let all_pass = results.iter().all(|r| r.passed);
    let summary = json!({
        "criteria": results,
        "all_pass": all_pass,
    });
    write_artifact(out_dir, "suite_summary.json", &to_json(&summary))?;
    let harness = harness_report()?;
    write_artifact(
        out_dir,
        "harness_report.json",
        &to_json(&serde_json::to_value(&harness).expect("serializable")),
    )?;
    Ok((
        vec!["suite_summary.json".into(), "harness_report.json".into()],
        all_pass,
    ))
}
