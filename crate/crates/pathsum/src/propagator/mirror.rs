//! Source → mirror → receiver amplitude as a sum of unit phase vectors.
//!
//! Each reflection point on the mirror segment contributes exp(i·S) with S
//! the classical two-leg free action at fixed total time: the particle moves
//! at constant speed along the broken path, S = m·(L1+L2)²/(2T), so the phase
//! is stationary at the specular point. Running prefix sums of the unit
//! vectors trace the double spiral; contributions far from the stationary
//! point wind tightly and cancel.

use crate::error::{Error, Result};
use crate::path::Amplitude;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorGeometry {
    /// Source position (x, y), strictly above the mirror line y = 0.
    pub source: (f64, f64),
    /// Receiver position (x, y), strictly above the mirror line.
    pub receiver: (f64, f64),
    /// Mirror segment [mirror_min, mirror_max] on the y = 0 line.
    pub mirror_min: f64,
    pub mirror_max: f64,
}

impl MirrorGeometry {
    fn validate(&self) -> Result<()> {
        let vals = [
            self.source.0,
            self.source.1,
            self.receiver.0,
            self.receiver.1,
            self.mirror_min,
            self.mirror_max,
        ];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "geometry" });
        }
        if self.source.1 <= 0.0 || self.receiver.1 <= 0.0 {
            return Err(Error::DegenerateGeometry {
                reason: "source and receiver must lie strictly above the mirror".into(),
            });
        }
        if self.mirror_min >= self.mirror_max {
            return Err(Error::DegenerateGeometry {
                reason: "mirror segment must have positive extent".into(),
            });
        }
        Ok(())
    }
}

/// Running prefix sums of the reflection-point contributions, ordered by
/// reflection-point position left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralTrace {
    partial_sums: Vec<Amplitude>,
    spacing: f64,
}

impl SpiralTrace {
    pub fn partial_sums(&self) -> &[Amplitude] {
        &self.partial_sums
    }

    /// Reflection-point spacing Δx on the mirror.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn total(&self) -> Amplitude {
        *self.partial_sums.last().unwrap()
    }

    /// Total scaled by the reflection-point spacing; Cauchy in the number of
    /// reflection points.
    pub fn total_scaled(&self) -> Amplitude {
        self.total() * self.spacing
    }

    /// CSV with columns index, re, im.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (i, z) in self.partial_sums.iter().enumerate() {
            out.push_str(&format!("{i},{:.17e},{:.17e}\n", z.re, z.im));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MirrorAmplitude {
    pub value: Amplitude,
    pub trace: SpiralTrace,
    /// Per-reflection-point action phases, same order as the trace.
    pub phases: Vec<f64>,
    /// Index of the minimal-action (stationary-phase) reflection point.
    pub stationary_index: usize,
}

pub fn mirror_amplitude(
    geometry: &MirrorGeometry,
    n_reflection_points: usize,
    mass: f64,
    t_total: f64,
) -> Result<MirrorAmplitude> {
    geometry.validate()?;
    if n_reflection_points < 3 {
        return Err(Error::invalid("need at least 3 reflection points"));
    }
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::NonFinite { what: "mass" });
    }
    if !t_total.is_finite() || t_total <= 0.0 {
        return Err(Error::NonFinite { what: "t_total" });
    }

    let (sx, sy) = geometry.source;
    let (rx, ry) = geometry.receiver;
    let n = n_reflection_points;
    let spacing = (geometry.mirror_max - geometry.mirror_min) / (n - 1) as f64;

    let mut phases = Vec::with_capacity(n);
    let mut partial_sums = Vec::with_capacity(n);
    let mut acc = Amplitude::new(0.0, 0.0);
    let mut stationary_index = 0;
    let mut min_phase = f64::INFINITY;
    for j in 0..n {
        let x = geometry.mirror_min + j as f64 * spacing;
        let length = (x - sx).hypot(sy) + (rx - x).hypot(ry);
        let s = mass * length * length / (2.0 * t_total);
        if s < min_phase {
            min_phase = s;
            stationary_index = j;
        }
        phases.push(s);
        acc += Amplitude::from_polar(1.0, s);
        partial_sums.push(acc);
    }

    Ok(MirrorAmplitude {
        value: acc,
        trace: SpiralTrace {
            partial_sums,
            spacing,
        },
        phases,
        stationary_index,
    })
}

/// |sum over the contiguous stationary-phase zone| / |full amplitude|, the
/// zone being reflection points whose phase lies within π of the stationary
/// value. Constructive addition near the classical path makes this fraction
/// large even though the zone is a small part of the mirror.
pub fn stationary_zone_recovery(result: &MirrorAmplitude) -> f64 {
    let phases = &result.phases;
    let s0 = phases[result.stationary_index];
    let mut lo = result.stationary_index;
    while lo > 0 && (phases[lo - 1] - s0).abs() <= std::f64::consts::PI {
        lo -= 1;
    }
    let mut hi = result.stationary_index;
    while hi + 1 < phases.len() && (phases[hi + 1] - s0).abs() <= std::f64::consts::PI {
        hi += 1;
    }
    let zone: Amplitude = phases[lo..=hi]
        .iter()
        .map(|&s| Amplitude::from_polar(1.0, s))
        .sum();
    zone.norm() / result.value.norm()
}

/// Summed turn direction (cross products of consecutive polyline segments)
/// over the first and last `fraction` of the prefix-sum polyline. The two
/// spiral ends wind in opposite senses, so the signs differ.
pub fn spiral_turn_sums(trace: &SpiralTrace, fraction: f64) -> (f64, f64) {
    let p = trace.partial_sums();
    let segs: Vec<(f64, f64)> = p
        .windows(2)
        .map(|w| (w[1].re - w[0].re, w[1].im - w[0].im))
        .collect();
    let turns: Vec<f64> = segs
        .windows(2)
        .map(|s| s[0].0 * s[1].1 - s[0].1 * s[1].0)
        .collect();
    let k = ((turns.len() as f64 * fraction) as usize)
        .max(3)
        .min(turns.len());
    let head: f64 = turns[..k].iter().sum();
    let tail: f64 = turns[turns.len() - k..].iter().sum();
    (head, tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symmetric() -> MirrorGeometry {
        MirrorGeometry {
            source: (-1.0, 1.0),
            receiver: (1.0, 1.0),
            mirror_min: -8.0,
            mirror_max: 8.0,
        }
    }

    #[test]
    fn increments_are_unit_vectors() {
        let r = mirror_amplitude(&symmetric(), 801, 1.0, 1.0).unwrap();
        let p = r.trace.partial_sums();
        assert!((p[0].norm() - 1.0).abs() < 1e-12);
        for w in p.windows(2) {
            assert!(((w[1] - w[0]).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_geometry_stationary_at_center() {
        let r = mirror_amplitude(&symmetric(), 801, 1.0, 1.0).unwrap();
        assert_eq!(r.stationary_index, 400);
    }

    #[test]
    fn asymmetric_geometry_stationary_at_specular_point() {
        let geom = MirrorGeometry {
            source: (-2.0, 1.5),
            receiver: (1.0, 0.8),
            mirror_min: -8.0,
            mirror_max: 8.0,
        };
        let n = 3201;
        let r = mirror_amplitude(&geom, n, 1.0, 1.0).unwrap();
        // Image construction: reflect the source below the mirror and
        // intersect the straight line to the receiver with y = 0.
        let specular = -2.0 + 3.0 * (1.5 / 2.3);
        let x = geom.mirror_min + r.stationary_index as f64 * r.trace.spacing();
        assert!((x - specular).abs() <= r.trace.spacing());
    }

    #[test]
    fn stationary_zone_recovers_most_of_the_amplitude() {
        let r = mirror_amplitude(&symmetric(), 3201, 1.0, 1.0).unwrap();
        assert!(stationary_zone_recovery(&r) >= 0.9);
    }

    #[test]
    fn accumulation_order_does_not_matter() {
        let r = mirror_amplitude(&symmetric(), 1601, 1.0, 1.0).unwrap();
        let reversed: Amplitude = r
            .phases
            .iter()
            .rev()
            .map(|&s| Amplitude::from_polar(1.0, s))
            .sum();
        assert!((reversed - r.value).norm() < 1e-12);
    }

    #[test]
    fn scaled_total_is_cauchy_in_resolution() {
        let t1 = mirror_amplitude(&symmetric(), 6401, 1.0, 1.0)
            .unwrap()
            .trace
            .total_scaled();
        let t2 = mirror_amplitude(&symmetric(), 12801, 1.0, 1.0)
            .unwrap()
            .trace
            .total_scaled();
        let t3 = mirror_amplitude(&symmetric(), 25601, 1.0, 1.0)
            .unwrap()
            .trace
            .total_scaled();
        assert!((t2 - t1).norm() > (t3 - t2).norm());
        assert!((t3 - t2).norm() < 1e-3);
    }

    #[test]
    fn spiral_ends_turn_in_opposite_senses() {
        let r = mirror_amplitude(&symmetric(), 3201, 1.0, 1.0).unwrap();
        let (head, tail) = spiral_turn_sums(&r.trace, 0.1);
        assert!(head * tail < 0.0);
    }

    #[test]
    fn source_on_mirror_is_degenerate() {
        let geom = MirrorGeometry {
            source: (-1.0, 0.0),
            receiver: (1.0, 1.0),
            mirror_min: -4.0,
            mirror_max: 4.0,
        };
        assert!(matches!(
            mirror_amplitude(&geom, 11, 1.0, 1.0),
            Err(Error::DegenerateGeometry { .. })
        ));
    }

    #[test]
    fn csv_has_header_and_one_row_per_point() {
        let r = mirror_amplitude(&symmetric(), 11, 1.0, 1.0).unwrap();
        let csv = r.trace.to_csv();
        assert_eq!(csv.lines().count(), 12);
        assert!(csv.starts_with("index,re,im\n"));
    }
}
