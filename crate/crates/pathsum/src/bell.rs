//! CHSH values, exhaustive local-hidden-variable search, GHZ products, and a
//! no-signaling audit.
//!
//! The hidden-variable side is made concrete by enumerating every
//! deterministic strategy (one ±1 outcome per setting per side); stochastic
//! models are mixtures of these, so the enumerated maximum is the bound.
//! Quantum values come from explicit state-vector computations in
//! [`crate::statevec`], never from the closed forms they are compared with.

use serde::Serialize;

use crate::entangle::{DetectorPort, JointDistribution};
use crate::error::{Error, Result};
use crate::statevec::{expectation, ghz_state, kron, pauli_x, pauli_y, CMat};

/// Enumeration guard: at most 4 settings per side (2^8 strategies).
pub const MAX_SETTINGS_PER_SIDE: usize = 4;

/// One deterministic assignment λ: a fixed ±1 outcome per setting per side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LhvStrategy {
    pub left: Vec<i8>,
    pub right: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LhvSearch {
    pub max_value: f64,
    pub argmax: Vec<LhvStrategy>,
    pub n_strategies: usize,
}

/// S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′) for a correlation function E
/// with values in [−1, 1].
pub fn chsh_value<E>(e: E, a: f64, a_prime: f64, b: f64, b_prime: f64) -> Result<f64>
where
    E: Fn(f64, f64) -> f64,
{
    let pairs = [(a, b), (a, b_prime), (a_prime, b), (a_prime, b_prime)];
    let mut values = [0.0; 4];
    for (i, (x, y)) in pairs.iter().enumerate() {
        let v = e(*x, *y);
        if !v.is_finite() || v.abs() > 1.0 + 1e-12 {
            return Err(Error::invalid(format!(
                "correlation E({x}, {y}) = {v} outside [-1, 1]"
            )));
        }
        values[i] = v;
    }
    Ok(values[0] - values[1] + values[2] + values[3])
}

/// CHSH coefficient table matching [`chsh_value`]'s sign convention.
pub fn chsh_coefficients() -> Vec<Vec<f64>> {
    vec![vec![1.0, -1.0], vec![1.0, 1.0]]
}

/// Enumerates all deterministic strategies for the given coefficient table
/// and returns the maximum of Σ c_ij·L_i·R_j together with every strategy
/// attaining it.
pub fn lhv_exhaustive_max(coefficients: &[Vec<f64>]) -> Result<LhvSearch> {
    let n_left = coefficients.len();
    if n_left == 0 {
        return Err(Error::invalid("empty coefficient table"));
    }
    let n_right = coefficients[0].len();
    if coefficients.iter().any(|row| row.len() != n_right) || n_right == 0 {
        return Err(Error::invalid("ragged or empty coefficient table"));
    }
    if n_left > MAX_SETTINGS_PER_SIDE || n_right > MAX_SETTINGS_PER_SIDE {
        return Err(Error::ResourceCap {
            what: "LHV strategy enumeration",
            requested: 1u64 << (n_left + n_right).min(63),
            cap: 1 << (2 * MAX_SETTINGS_PER_SIDE),
        });
    }

    let n_strategies = 1usize << (n_left + n_right);
    let signs = |bits: usize, n: usize| -> Vec<i8> {
        (0..n)
            .map(|i| if bits >> i & 1 == 1 { 1 } else { -1 })
            .collect()
    };
    let mut max_value = f64::NEG_INFINITY;
    let mut argmax = Vec::new();
    for code in 0..n_strategies {
        let left = signs(code, n_left);
        let right = signs(code >> n_left, n_right);
        let mut value = 0.0;
        for (i, row) in coefficients.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                value += c * f64::from(left[i]) * f64::from(right[j]);
            }
        }
        if value > max_value + 1e-12 {
            max_value = value;
            argmax.clear();
        }
        if (value - max_value).abs() <= 1e-12 {
            argmax.push(LhvStrategy { left, right });
        }
    }
    Ok(LhvSearch {
        max_value,
        argmax,
        n_strategies,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhzProducts {
    pub xyy: f64,
    pub yxy: f64,
    pub yyx: f64,
    pub xxx: f64,
}

fn three_particle(ops: [&CMat; 3]) -> CMat {
    kron(&kron(ops[0], ops[1]), ops[2])
}

/// Expectation values of the four three-particle products on the GHZ state
/// (|↑↑↑⟩ − |↓↓↓⟩)/√2: (xyy, yxy, yyx) = +1 and xxx = −1.
pub fn ghz_quantum_products() -> GhzProducts {
    let state = ghz_state();
    let x = pauli_x();
    let y = pauli_y();
    let value = |ops: [&CMat; 3]| -> f64 {
        let e = expectation(&three_particle(ops), &state);
        debug_assert!(e.im.abs() < 1e-12);
        e.re
    };
    GhzProducts {
        xyy: value([&x, &y, &y]),
        yxy: value([&y, &x, &y]),
        yyx: value([&y, &y, &x]),
        xxx: value([&x, &x, &x]),
    }
}

/// One candidate set of six predetermined values m_x^i, m_y^i ∈ {±1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhzAssignment {
    /// m[particle][axis], axis 0 = x, axis 1 = y.
    pub m: [[i8; 2]; 3],
}

impl GhzAssignment {
    pub fn products(&self) -> [i8; 4] {
        let m = &self.m;
        [
            m[0][0] * m[1][1] * m[2][1], // x y y
            m[0][1] * m[1][0] * m[2][1], // y x y
            m[0][1] * m[1][1] * m[2][0], // y y x
            m[0][0] * m[1][0] * m[2][0], // x x x
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MerminReport {
    /// Assignments whose four products equal the quantum pattern (+,+,+,−).
    pub quantum_match_count: usize,
    /// Assignments matching (+,+,+,+), the pattern forced by the algebra.
    pub all_plus_match_count: usize,
    /// Whether (xyy)·(yxy)·(yyx) = xxx held for every assignment.
    pub forcing_identity_holds: bool,
    pub n_assignments: usize,
}

/// Enumerates all 2⁶ assignments of the six ±1 values and checks them against
/// the quantum sign pattern. Squares cancel in the product of the first three
/// terms, so the fourth is forced to +1 and no assignment matches (+,+,+,−).
pub fn mermin_assignment_search() -> MerminReport {
    let mut quantum_match_count = 0;
    let mut all_plus_match_count = 0;
    let mut forcing_identity_holds = true;
    for code in 0..64usize {
        let bit = |k: usize| -> i8 {
            if code >> k & 1 == 1 {
                1
            } else {
                -1
            }
        };
        let assignment = GhzAssignment {
            m: [[bit(0), bit(1)], [bit(2), bit(3)], [bit(4), bit(5)]],
        };
        let p = assignment.products();
        if p == [1, 1, 1, -1] {
            quantum_match_count += 1;
        }
        if p == [1, 1, 1, 1] {
            all_plus_match_count += 1;
        }
        if p[0] * p[1] * p[2] != p[3] {
            forcing_identity_holds = false;
        }
    }
    MerminReport {
        quantum_match_count,
        all_plus_match_count,
        forcing_identity_holds,
        n_assignments: 64,
    }
}

/// A joint distribution at one pair of analyzer settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSample {
    pub alpha: f64,
    pub beta: f64,
    pub joint: JointDistribution,
}

/// Maximum change of any one-side marginal as the remote setting varies
/// across the family. Zero (to rounding) means no signaling.
pub fn no_signaling_audit(family: &[JointSample]) -> Result<f64> {
    if family.is_empty() {
        return Err(Error::InvalidDistribution {
            reason: "empty distribution family".into(),
        });
    }
    for sample in family {
        sample.joint.validate()?;
    }
    let mut max_deviation = 0.0f64;
    // Fixed left setting, varying right setting: left marginals must agree.
    for a in family {
        for b in family {
            if a.alpha.to_bits() == b.alpha.to_bits() {
                for port in [DetectorPort::U, DetectorPort::D] {
                    max_deviation = max_deviation
                        .max((a.joint.left_marginal(port) - b.joint.left_marginal(port)).abs());
                }
            }
            if a.beta.to_bits() == b.beta.to_bits() {
                for port in [DetectorPort::U, DetectorPort::D] {
                    max_deviation = max_deviation
                        .max((a.joint.right_marginal(port) - b.joint.right_marginal(port)).abs());
                }
            }
        }
    }
    Ok(max_deviation)
}

/// Scalar summary consumed by the report exporters.
#[derive(Debug, Clone, Serialize)]
pub struct HarnessReport {
    pub chsh_quantum: f64,
    pub chsh_lhv_max: f64,
    pub ghz_products: GhzProducts,
    pub mermin_match_count: usize,
    pub no_signaling_max_deviation: f64,
}

/// Runs the standard harness: singlet CHSH at the optimal angles, the
/// exhaustive LHV bound, GHZ products, the Mermin enumeration, and a
/// no-signaling audit over an interferometer settings grid.
pub fn harness_report() -> Result<HarnessReport> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let s = chsh_value(
        crate::entangle::singlet_spin_correlation,
        0.0,
        FRAC_PI_2,
        FRAC_PI_4,
        3.0 * FRAC_PI_4,
    )?;
    let lhv = lhv_exhaustive_max(&chsh_coefficients())?;
    let arms = crate::entangle::CongruentArms::default_arms();
    let mut family = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let alpha = std::f64::consts::TAU * i as f64 / 5.0;
            let beta = std::f64::consts::TAU * j as f64 / 5.0;
            let setting =
                crate::entangle::InterferometerSetting::from_congruent(alpha, beta, &arms);
            family.push(JointSample {
                alpha,
                beta,
                joint: crate::entangle::interferometer_joint(&setting)?,
            });
        }
    }
    Ok(HarnessReport {
        chsh_quantum: s.abs(),
        chsh_lhv_max: lhv.max_value,
        ghz_products: ghz_quantum_products(),
        mermin_match_count: mermin_assignment_search().quantum_match_count,
        no_signaling_max_deviation: no_signaling_audit(&family)?,
    })
}
