//! Two-particle interferometer coincidences from class amplitudes.
//!
//! The four class amplitudes are the path sums into the left and right
//! beamsplitters: ⟨C|A⟩ and ⟨C|B⟩ for the upper/lower classes on the left,
//! ⟨C′|B′⟩ and ⟨C′|A′⟩ on the right. Momentum conservation at the source
//! links the cases (A, A′) and (B, B′); the joint amplitude for a detector
//! pair sums the two case products. Congruent geometry makes the lower-path
//! sums on the two sides equal term by term, which turns the entangled
//! coincidence expression into a product of per-side factors.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::path::Amplitude;
use crate::propagator::{mirror_amplitude, MirrorGeometry};

/// Beamsplitter convention: reflection picks up phase i relative to
/// transmission.
const TRANSMIT: Complex64 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
const REFLECT: Complex64 = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorPort {
    U,
    D,
}

/// Phase-shifter settings plus the four homotopy-class amplitudes
/// {A, B, A′, B′}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerSetting {
    pub alpha: f64,
    pub beta: f64,
    /// ⟨C|A⟩ — upper-class sum into the left beamsplitter (includes e^{iα}).
    pub amp_a: Amplitude,
    /// ⟨C|B⟩ — lower-class sum into the left beamsplitter.
    pub amp_b: Amplitude,
    /// ⟨C′|A′⟩ — lower-class sum into the right beamsplitter.
    pub amp_a_prime: Amplitude,
    /// ⟨C′|B′⟩ — upper-class sum into the right beamsplitter (includes e^{iβ}).
    pub amp_b_prime: Amplitude,
}

/// Base arm amplitudes shared by the two sides of a congruent setup: `upper`
/// is the shifter-free upper-arm path sum, `lower` the lower-arm sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CongruentArms {
    pub upper: Amplitude,
    pub lower: Amplitude,
}

impl CongruentArms {
    /// Evaluates both arm sums as mirror-reflection amplitudes (the upper arm
    /// bounces off a ceiling mirror, the lower arm off a floor mirror; only
    /// the reflected geometry differs).
    pub fn from_reflection_geometry(
        upper: &MirrorGeometry,
        lower: &MirrorGeometry,
        n_reflection_points: usize,
        mass: f64,
        t_total: f64,
    ) -> Result<CongruentArms> {
        let up = mirror_amplitude(upper, n_reflection_points, mass, t_total)?;
        let lo = mirror_amplitude(lower, n_reflection_points, mass, t_total)?;
        // Scale by the spacing so arm amplitudes stay O(1) as resolution grows.
        Ok(CongruentArms {
            upper: up.trace.total_scaled(),
            lower: lo.trace.total_scaled(),
        })
    }

    /// A small default setup: symmetric bounce geometry, 801 reflection
    /// points, unit mass and time.
    pub fn default_arms() -> CongruentArms {
        let upper = MirrorGeometry {
            source: (-1.0, 1.0),
            receiver: (1.0, 1.0),
            mirror_min: -8.0,
            mirror_max: 8.0,
        };
        let lower = MirrorGeometry {
            source: (-1.0, 1.4),
            receiver: (1.0, 1.4),
            mirror_min: -8.0,
            mirror_max: 8.0,
        };
        CongruentArms::from_reflection_geometry(&upper, &lower, 801, 1.0, 1.0)
            .expect("default geometry is valid")
    }
}

impl InterferometerSetting {
    /// Builds the four class amplitudes from congruent geometry: the lower
    /// sums on the two sides are the same path sum, the upper sums differ
    /// only by the shifter phases.
    pub fn from_congruent(alpha: f64, beta: f64, arms: &CongruentArms) -> InterferometerSetting {
        InterferometerSetting {
            alpha,
            beta,
            amp_a: Amplitude::from_polar(1.0, alpha) * arms.upper,
            amp_b: arms.lower,
            amp_a_prime: arms.lower,
            amp_b_prime: Amplitude::from_polar(1.0, beta) * arms.upper,
        }
    }

    /// Directly supplied class amplitudes.
    pub fn from_amplitudes(
        alpha: f64,
        beta: f64,
        amp_a: Amplitude,
        amp_b: Amplitude,
        amp_a_prime: Amplitude,
        amp_b_prime: Amplitude,
    ) -> InterferometerSetting {
        InterferometerSetting {
            alpha,
            beta,
            amp_a,
            amp_b,
            amp_a_prime,
            amp_b_prime,
        }
    }

    /// Coincidence amplitude ⟨C|A⟩⟨C′|A′⟩ + ⟨C|B⟩⟨C′|B′⟩.
    pub fn coincidence_amplitude(&self) -> Amplitude {
        self.amp_a * self.amp_a_prime + self.amp_b * self.amp_b_prime
    }
}

/// Probabilities over the four detector pairs (u/d on the left × u′/d′ on the
/// right). Entries are non-negative and sum to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDistribution {
    pub p_uu: f64,
    pub p_ud: f64,
    pub p_du: f64,
    pub p_dd: f64,
}

impl JointDistribution {
    pub fn probability(&self, left: DetectorPort, right: DetectorPort) -> f64 {
        match (left, right) {
            (DetectorPort::U, DetectorPort::U) => self.p_uu,
            (DetectorPort::U, DetectorPort::D) => self.p_ud,
            (DetectorPort::D, DetectorPort::U) => self.p_du,
            (DetectorPort::D, DetectorPort::D) => self.p_dd,
        }
    }

    pub fn left_marginal(&self, left: DetectorPort) -> f64 {
        match left {
            DetectorPort::U => self.p_uu + self.p_ud,
            DetectorPort::D => self.p_du + self.p_dd,
        }
    }

    pub fn right_marginal(&self, right: DetectorPort) -> f64 {
        match right {
            DetectorPort::U => self.p_uu + self.p_du,
            DetectorPort::D => self.p_ud + self.p_dd,
        }
    }

    pub fn total(&self) -> f64 {
        self.p_uu + self.p_ud + self.p_du + self.p_dd
    }

    pub fn validate(&self) -> Result<()> {
        let entries = [self.p_uu, self.p_ud, self.p_du, self.p_dd];
        if entries.iter().any(|p| !p.is_finite() || *p < -1e-15) {
            return Err(Error::InvalidDistribution {
                reason: "negative or non-finite probability".into(),
            });
        }
        if (self.total() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution {
                reason: format!("probabilities sum to {}, not 1", self.total()),
            });
        }
        Ok(())
    }
}

/// Full 2×2 coincidence distribution via the beamsplitter complements.
///
/// Case (A, A′): the left particle enters the left splitter on the upper
/// port, the right particle enters the right splitter on the lower port.
/// Case (B, B′): ports swapped. Upper ports transmit to u and reflect to d;
/// lower ports reflect to u and transmit to d. With congruent amplitudes this
/// normalizes to P(u,u′) = P(d,d′) = cos²((α−β)/2)/2 and
/// P(u,d′) = P(d,u′) = sin²((α−β)/2)/2.
pub fn interferometer_joint(setting: &InterferometerSetting) -> Result<JointDistribution> {
    let case_aa = setting.amp_a * setting.amp_a_prime;
    let case_bb = setting.amp_b * setting.amp_b_prime;

    // Left factor × right factor per case, per detector pair.
    let amp = |left_upper: Complex64, left_lower: Complex64| -> Amplitude {
        case_aa * left_upper + case_bb * left_lower
    };
    // (u, u′): A transmits left / A′ reflects right; B reflects / B′ transmits.
    let uu = amp(TRANSMIT * REFLECT, REFLECT * TRANSMIT);
    // (u, d′): A transmits / A′ transmits; B reflects / B′ reflects.
    let ud = amp(TRANSMIT * TRANSMIT, REFLECT * REFLECT);
    // (d, u′): A reflects / A′ reflects; B transmits / B′ transmits.
    let du = amp(REFLECT * REFLECT, TRANSMIT * TRANSMIT);
    // (d, d′): A reflects / A′ transmits; B transmits / B′ reflects.
    let dd = amp(REFLECT * TRANSMIT, TRANSMIT * REFLECT);

    let weights = [uu.norm_sqr(), ud.norm_sqr(), du.norm_sqr(), dd.norm_sqr()];
    let total: f64 = weights.iter().sum();
    if total < 1e-24 {
        return Err(Error::DegenerateAmplitude {
            reason: "all four class amplitudes vanish".into(),
        });
    }
    Ok(JointDistribution {
        p_uu: weights[0] / total,
        p_ud: weights[1] / total,
        p_du: weights[2] / total,
        p_dd: weights[3] / total,
    })
}

/// Fixed 5×5 grid of shifter settings used by the factorization residual.
const RESIDUAL_GRID: usize = 5;

/// Distance of a setting's class amplitudes from the congruent-path
/// factorization structure. Two residuals are combined:
///
/// 1. the substitution identity that replaces ⟨C′|A′⟩ by ⟨C|B⟩ in the
///    coincidence amplitude, exact when the lower paths are congruent;
/// 2. the proportionality of the coincidence amplitude to e^{iα} + e^{iβ},
///    with the single constant solved by least squares over a fixed grid of
///    shifter settings (base amplitudes held fixed, phases reapplied).
///
/// Exactly congruent constructions give ~1e-15; breaking congruence by δ
/// grows the residual linearly.
pub fn congruence_factorization_residual(setting: &InterferometerSetting) -> f64 {
    // Strip the shifter phases to recover the base amplitudes.
    let upper_left = Amplitude::from_polar(1.0, -setting.alpha) * setting.amp_a;
    let upper_right = Amplitude::from_polar(1.0, -setting.beta) * setting.amp_b_prime;
    let lower_left = setting.amp_b;
    let lower_right = setting.amp_a_prime;

    let mut substitution_residual = 0.0f64;
    let mut lsq_num = Complex64::new(0.0, 0.0);
    let mut lsq_den = 0.0f64;
    let mut samples = Vec::with_capacity(RESIDUAL_GRID * RESIDUAL_GRID);
    for i in 0..RESIDUAL_GRID {
        for j in 0..RESIDUAL_GRID {
            let a = std::f64::consts::TAU * i as f64 / RESIDUAL_GRID as f64;
            let b = std::f64::consts::TAU * j as f64 / RESIDUAL_GRID as f64;
            let ea = Amplitude::from_polar(1.0, a);
            let eb = Amplitude::from_polar(1.0, b);
            let coincidence = ea * upper_left * lower_right + lower_left * eb * upper_right;
            let substituted = ea * upper_left * lower_left + eb * upper_right * lower_right;
            substitution_residual = substitution_residual.max((coincidence - substituted).norm());
            let basis = ea + eb;
            lsq_num += basis.conj() * coincidence;
            lsq_den += basis.norm_sqr();
            samples.push((coincidence, basis));
        }
    }
    let constant = lsq_num / lsq_den;
    let proportionality_residual = samples
        .iter()
        .map(|(c, basis)| (c - constant * basis).norm())
        .fold(0.0f64, f64::max);
    substitution_residual.max(proportionality_residual)
}
