//! Free particle on a ring: propagator as a sum over winding classes.
//!
//! The class-n contribution is the free kernel at unwrapped displacement
//! α−θ+2πn. Poisson summation identifies the full winding sum with the
//! spectral eigenfunction sum (1/2π)·Σ_m exp(i·m(α−θ))·exp(−i·m²T/(2I)), which
//! serves as the independent oracle route.
//!
//! Both series have constant-modulus terms at real time and are summable only
//! distributionally; at resonant times (T a multiple of 2πI) the truncated
//! sums are Dirichlet kernels that never settle. The `damping` parameter
//! applies the standard complex-time prescription T → T·(1 − iε) identically
//! to both routes, making both series Gaussian-convergent while leaving the
//! Poisson identity exact. With `damping = 0` the literal constant-modulus
//! class terms are returned and the truncation estimate is infinite.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::path::{Amplitude, HomotopyClass};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingParams {
    /// Moment of inertia M·R².
    pub moment: f64,
    /// Propagation time.
    pub t_total: f64,
    /// Winding truncation: classes |n| ≤ n_cutoff.
    pub n_cutoff: usize,
    /// Spectral truncation: momenta |m| ≤ m_cutoff.
    pub m_cutoff: usize,
    /// Complex-time damping ε in T → T·(1 − iε). Zero keeps the literal
    /// constant-modulus winding terms.
    pub damping: f64,
}

impl RingParams {
    pub fn new(moment: f64, t_total: f64, n_cutoff: usize, m_cutoff: usize) -> Result<Self> {
        if !moment.is_finite() || moment <= 0.0 {
            return Err(Error::NonFinite { what: "moment" });
        }
        if !t_total.is_finite() || t_total <= 0.0 {
            return Err(Error::NonFinite { what: "t_total" });
        }
        if n_cutoff < 1 || m_cutoff < 1 {
            return Err(Error::invalid("cutoffs must be at least 1"));
        }
        Ok(RingParams {
            moment,
            t_total,
            n_cutoff,
            m_cutoff,
            damping: 0.0,
        })
    }

    pub fn with_damping(mut self, damping: f64) -> Result<Self> {
        if !damping.is_finite() || damping < 0.0 {
            return Err(Error::NonFinite { what: "damping" });
        }
        self.damping = damping;
        Ok(self)
    }

    fn complex_time(&self) -> Complex64 {
        Complex64::new(self.t_total, -self.t_total * self.damping)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorResult {
    /// Truncated total.
    pub value: Amplitude,
    /// Per-homotopy-class contributions; the value is their sum.
    pub per_class: BTreeMap<HomotopyClass, Amplitude>,
    pub n_terms: usize,
    /// Estimated modulus of the truncated tail; infinite when the terms do
    /// not decay (undamped real time).
    pub truncation_estimate: f64,
}

impl PropagatorResult {
    fn from_terms(terms: Vec<(i64, Amplitude)>, truncation_estimate: f64) -> PropagatorResult {
        let mut per_class = BTreeMap::new();
        let mut value = Amplitude::new(0.0, 0.0);
        let n_terms = terms.len();
        for (n, amp) in terms {
            value += amp;
            per_class.insert(HomotopyClass::Winding(n), amp);
        }
        PropagatorResult {
            value,
            per_class,
            n_terms,
            truncation_estimate,
        }
    }
}

fn check_angle_range(name: &'static str, angle: f64) -> Result<()> {
    if !(0.0..TAU).contains(&angle) {
        return Err(Error::invalid(format!("{name} must lie in [0, 2π)")));
    }
    Ok(())
}

/// Free kernel sqrt(I/(2πi·Tc))·exp(i·I·u²/(2·Tc)) at complex time Tc.
fn winding_kernel(u: f64, moment: f64, tc: Complex64) -> Amplitude {
    let pref = (Complex64::new(0.0, 1.0) * TAU * tc / moment).sqrt().inv();
    pref * (Complex64::new(0.0, 0.5) * moment * u * u / tc).exp()
}

/// Winding-class decomposition of the ring propagator K(α, θ).
pub fn ring_propagator(alpha: f64, theta: f64, params: &RingParams) -> Result<PropagatorResult> {
    check_angle_range("alpha", alpha)?;
    check_angle_range("theta", theta)?;
    let tc = params.complex_time();
    let delta = alpha - theta;
    let cutoff = params.n_cutoff as i64;
    let terms: Vec<(i64, Amplitude)> = (-cutoff..=cutoff)
        .map(|n| (n, winding_kernel(delta + TAU * n as f64, params.moment, tc)))
        .collect();

    // Tail bound from the first omitted terms and their decay ratio.
    let t1 = winding_kernel(delta + TAU * (cutoff + 1) as f64, params.moment, tc).norm()
        + winding_kernel(delta - TAU * (cutoff + 1) as f64, params.moment, tc).norm();
    let t2 = winding_kernel(delta + TAU * (cutoff + 2) as f64, params.moment, tc).norm()
        + winding_kernel(delta - TAU * (cutoff + 2) as f64, params.moment, tc).norm();
    let estimate = if t2 < t1 {
        t1 / (1.0 - t2 / t1)
    } else {
        f64::INFINITY
    };

    Ok(PropagatorResult::from_terms(terms, estimate))
}

/// Spectral eigenfunction sum (1/2π)·Σ_{|m|≤M} e^{i·m(α−θ)}·e^{−i·m²·Tc/(2I)}.
/// Independent oracle route for [`ring_propagator`]; kept free of any shared
/// code with the winding sum.
pub fn ring_propagator_spectral(alpha: f64, theta: f64, params: &RingParams) -> Amplitude {
    let tc = params.complex_time();
    let delta = alpha - theta;
    let cutoff = params.m_cutoff as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for m in -cutoff..=cutoff {
        let mf = m as f64;
        let phase = Complex64::new(0.0, mf * delta);
        let evolution = Complex64::new(0.0, -0.5 * mf * mf / params.moment) * tc;
        sum += (phase + evolution).exp();
    }
    sum / TAU
}

/// Winding decomposition at fixed integer momentum: class n contributes
/// exp(i·p·(α−θ+2πn)). For integer p every class factor e^{i·2πpn} is 1, so
/// ratios of these sums are class-independent.
pub fn ring_propagator_fixed_momentum(
    alpha: f64,
    theta: f64,
    momentum: i64,
    n_cutoff: usize,
) -> Result<PropagatorResult> {
    if n_cutoff < 1 {
        return Err(Error::invalid("n_cutoff must be at least 1"));
    }
    if !alpha.is_finite() || !theta.is_finite() {
        return Err(Error::NonFinite { what: "angle" });
    }
    let cutoff = n_cutoff as i64;
    let p = momentum as f64;
    let terms: Vec<(i64, Amplitude)> = (-cutoff..=cutoff)
        .map(|n| {
            (
                n,
                Amplitude::from_polar(1.0, p * (alpha - theta + TAU * n as f64)),
            )
        })
        .collect();
    Ok(PropagatorResult::from_terms(terms, f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: [f64; 8] = [
        1.0 * std::f64::consts::PI / 8.0,
        3.0 * std::f64::consts::PI / 8.0,
        5.0 * std::f64::consts::PI / 8.0,
        7.0 * std::f64::consts::PI / 8.0,
        9.0 * std::f64::consts::PI / 8.0,
        11.0 * std::f64::consts::PI / 8.0,
        13.0 * std::f64::consts::PI / 8.0,
        15.0 * std::f64::consts::PI / 8.0,
    ];

    fn criterion_params(cutoff: usize) -> RingParams {
        RingParams::new(1.0, TAU, cutoff, cutoff)
            .unwrap()
            .with_damping(5e-3)
            .unwrap()
    }

    #[test]
    fn rotational_invariance() {
        let params = criterion_params(20);
        let a = ring_propagator(1.2, 0.4, &params).unwrap().value;
        let b = ring_propagator(1.2 + 0.9, 0.4 + 0.9, &params)
            .unwrap()
            .value;
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn winding_sum_matches_spectral_oracle() {
        let params = criterion_params(40);
        // Coincident angles plus the 8-point grid.
        let w = ring_propagator(0.0, 0.0, &params).unwrap().value;
        let s = ring_propagator_spectral(0.0, 0.0, &params);
        assert!((w - s).norm() < 1e-6);
        for &delta in &GRID {
            let w = ring_propagator(delta, 0.0, &params).unwrap().value;
            let s = ring_propagator_spectral(delta, 0.0, &params);
            assert!(
                (w - s).norm() < 1e-6,
                "delta={delta}: |w-s|={}",
                (w - s).norm()
            );
        }
    }

    #[test]
    fn oracle_agreement_error_non_increasing_under_cutoff_doubling() {
        let mut prev = f64::INFINITY;
        for cutoff in [10, 20, 40, 80] {
            let params = criterion_params(cutoff);
            let err = GRID
                .iter()
                .map(|&d| {
                    let w = ring_propagator(d, 0.0, &params).unwrap().value;
                    (w - ring_propagator_spectral(d, 0.0, &params)).norm()
                })
                .fold(0.0f64, f64::max);
            assert!(err <= prev + 1e-13, "cutoff {cutoff}: {err} > {prev}");
            prev = err;
        }
    }

    #[test]
    fn per_class_modulus_constant_without_damping() {
        let params = RingParams::new(1.0, TAU, 6, 6).unwrap();
        let r = ring_propagator(0.7, 0.0, &params).unwrap();
        let mods: Vec<f64> = r.per_class.values().map(|a| a.norm()).collect();
        for m in &mods {
            assert!((m - mods[0]).abs() < 1e-12);
        }
        assert!(r.truncation_estimate.is_infinite());
    }

    #[test]
    fn value_is_sum_of_classes() {
        let params = criterion_params(25);
        let r = ring_propagator(2.0, 0.3, &params).unwrap();
        let sum: Amplitude = r.per_class.values().sum();
        assert!((r.value - sum).norm() < 1e-9);
        assert_eq!(r.n_terms, 51);
    }

    #[test]
    fn damped_truncation_estimate_is_small_and_finite() {
        let params = criterion_params(40);
        let r = ring_propagator(0.7, 0.0, &params).unwrap();
        assert!(r.truncation_estimate.is_finite());
        assert!(r.truncation_estimate < 1e-9);
    }

    #[test]
    fn angle_range_is_validated() {
        let params = criterion_params(5);
        assert!(ring_propagator(-0.1, 0.0, &params).is_err());
        assert!(ring_propagator(0.0, TAU, &params).is_err());
    }

    #[test]
    fn fixed_momentum_zero_gives_class_count() {
        let r = ring_propagator_fixed_momentum(1.0, 0.2, 0, 7).unwrap();
        assert!((r.value - Amplitude::new(15.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fixed_momentum_ratio_is_pure_phase() {
        for p in [-3i64, 1, 4] {
            let a = ring_propagator_fixed_momentum(1.3, 0.2, p, 9)
                .unwrap()
                .value;
            let b = ring_propagator_fixed_momentum(0.8, 0.2, p, 9)
                .unwrap()
                .value;
            let ratio = a / b;
            let expected = Amplitude::from_polar(1.0, p as f64 * (1.3 - 0.8));
            assert!((ratio - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn fixed_momentum_periodic_in_alpha() {
        let a = ring_propagator_fixed_momentum(0.9, 0.1, 3, 6)
            .unwrap()
            .value;
        let b = ring_propagator_fixed_momentum(0.9 + TAU, 0.1, 3, 6)
            .unwrap()
            .value;
        assert!((a - b).norm() < 1e-9);
    }
}
