//! Time-sliced paths, actions in units of ħ, and homotopy classification.
//!
//! A [`Path`] is an ordered list of coordinates sampled at a fixed time step.
//! Coordinates are interpreted per [`Space`]:
//!
//! - `Line1D`: position on the real line.
//! - `Ring`: *unwrapped* cumulative angle in radians. Keeping the full
//!   cumulative angle (instead of reducing mod 2π) makes winding numbers exact
//!   integers rather than quantities inferred from a lossy representation.
//! - `So3Axis`: signed rotation angle about a fixed axis of the solid ball of
//!   radius π that models SO(3) with antipodal identification. Passing through
//!   the surface continues the unwrapped coordinate past an odd multiple of π,
//!   so the two SO(3) homotopy classes reduce to a parity count.
//!
//! All actions are dimensionless (ħ = 1); masses, times and lengths are
//! multiples of an arbitrary reference scale.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex amplitude (a propagator value or exponentiated-action term).
pub type Amplitude = Complex64;

/// Hard cap on lattice enumeration size.
pub const ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    Line1D,
    Ring,
    So3Axis,
}

/// Action divided by ħ. Plain value container; finiteness is enforced by the
/// operations that produce or consume one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValue(pub f64);

impl ActionValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum So3Class {
    Trivial,
    Nontrivial,
}

/// Label partitioning paths into homotopy classes: an integer winding number
/// on the ring (or on the axis-of-the-ball construction), or the two-element
/// classification of SO(3) proper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HomotopyClass {
    Winding(i64),
    So3(So3Class),
}

impl std::fmt::Display for HomotopyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HomotopyClass::Winding(n) => write!(f, "w{n}"),
            HomotopyClass::So3(So3Class::Trivial) => write!(f, "so3-trivial"),
            HomotopyClass::So3(So3Class::Nontrivial) => write!(f, "so3-nontrivial"),
        }
    }
}

/// A time-discretized trajectory with fixed slice width `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    space: Space,
    points: Vec<f64>,
    dt: f64,
}

impl Path {
    pub fn new(space: Space, points: Vec<f64>, dt: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints { got: points.len() });
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::NonFinite { what: "dt" });
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite {
                what: "path coordinate",
            });
        }
        Ok(Path { space, points, dt })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        *self.points.last().unwrap()
    }

    pub fn n_slices(&self) -> usize {
        self.points.len() - 1
    }

    pub fn reversed(&self) -> Path {
        let mut points = self.points.clone();
        points.reverse();
        Path {
            space: self.space,
            points,
            dt: self.dt,
        }
    }

    /// Joins `other` onto the end of `self`. Endpoint and start must coincide
    /// exactly; both paths must share space and slice width.
    pub fn concat(&self, other: &Path) -> Result<Path> {
        if self.space != other.space {
            return Err(Error::invalid("concat requires matching spaces"));
        }
        if self.dt != other.dt {
            return Err(Error::invalid("concat requires matching dt"));
        }
        if self.end() != other.start() {
            return Err(Error::invalid(
                "concat requires the first path to end where the second starts",
            ));
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        Ok(Path {
            space: self.space,
            points,
            dt: self.dt,
        })
    }
}

/// Phase factor exp(i·S/ħ) of an action value. Unit modulus by construction.
pub fn exp_action(s: ActionValue) -> Result<Amplitude> {
    if !s.0.is_finite() {
        return Err(Error::NonFinite { what: "action" });
    }
    Ok(Amplitude::from_polar(1.0, s.0))
}

/// Kinetic action Σ (m/2)·((x_{k+1}−x_k)/dt)²·dt in units of ħ.
///
/// On the ring, pass the moment of inertia M·R² as `mass` and use angular
/// coordinates; the arc-length factor R is absorbed into the moment.
pub fn free_action(path: &Path, mass: f64) -> Result<ActionValue> {
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::NonFinite { what: "mass" });
    }
    if path.space == Space::So3Axis {
        return Err(Error::SpaceMismatch {
            expected: "Line1D or Ring",
            got: path.space,
        });
    }
    let s = kinetic_action(path.points(), path.dt(), mass);
    if !s.is_finite() {
        return Err(Error::NonFinite { what: "action" });
    }
    Ok(ActionValue(s))
}

pub(crate) fn kinetic_action(points: &[f64], dt: f64, inertia: f64) -> f64 {
    points
        .windows(2)
        .map(|w| {
            let v = (w[1] - w[0]) / dt;
            0.5 * inertia * v * v * dt
        })
        .sum()
}

fn level_index(u: f64, origin: f64) -> i64 {
    ((u - origin) / TAU).floor() as i64
}

/// Heuristic detection of a mod-2π trace: every sample sits in the
/// fundamental window but adjacent samples jump by more than π, the
/// signature of an angle that was reduced instead of accumulated. A genuinely
/// winding unwrapped path necessarily leaves [0, 2π).
fn looks_wrapped(points: &[f64]) -> bool {
    points.iter().all(|&p| (0.0..TAU).contains(&p))
        && points.windows(2).any(|w| (w[1] - w[0]).abs() > PI)
}

/// Signed count of passes of `reference`: counterclockwise crossings of the
/// levels reference + 2πk minus clockwise crossings, for the piecewise-linear
/// interpolation of the unwrapped coordinates. Back-and-forth excursions
/// cancel, so the net count depends only on the endpoints.
pub fn winding_number(path: &Path, reference: f64) -> Result<i64> {
    if path.space == Space::Line1D {
        return Err(Error::SpaceMismatch {
            expected: "Ring or So3Axis",
            got: path.space,
        });
    }
    if !reference.is_finite() {
        return Err(Error::NonFinite { what: "reference" });
    }
    if looks_wrapped(path.points()) {
        return Err(Error::WrappedAngles);
    }
    Ok(level_index(path.end(), reference) - level_index(path.start(), reference))
}

/// SO(3) two-class label: nontrivial iff the path passes through the ball
/// surface (odd multiples of π of the unwrapped rotation angle) an odd number
/// of times. A 2π excursion is nontrivial; a 4π excursion is trivial.
pub fn so3_class(path: &Path) -> Result<HomotopyClass> {
    if path.space != Space::So3Axis {
        return Err(Error::SpaceMismatch {
            expected: "So3Axis",
            got: path.space,
        });
    }
    let crossings = level_index(path.end(), PI) - level_index(path.start(), PI);
    let class = if crossings.rem_euclid(2) == 1 {
        So3Class::Nontrivial
    } else {
        So3Class::Trivial
    };
    Ok(HomotopyClass::So3(class))
}

/// Class label used to partition ensembles: winding number on Ring/So3Axis
/// (the axis construction shares the ring's integer classes), the single
/// trivial class on the simply connected line.
pub fn homotopy_class(path: &Path, reference: f64) -> Result<HomotopyClass> {
    match path.space {
        Space::Line1D => Ok(HomotopyClass::Winding(0)),
        Space::Ring | Space::So3Axis => {
            Ok(HomotopyClass::Winding(winding_number(path, reference)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    LatticeEnumeration,
    BrownianBridge,
    FixedMomentum,
}

/// Generator-specific sampling parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GeneratorSpec {
    /// All interior-point combinations on a lattice of `sites` points per
    /// slice, centered on the straight path, half-width `half_width`.
    LatticeEnumeration { sites: usize, half_width: f64 },
    /// Pinned-endpoint bridge; per-step standard deviation defaults to
    /// sqrt(dt/m) (the kinetic-kernel scale) and can be overridden.
    BrownianBridge { mass: f64, sigma: Option<f64> },
    /// One uniform-velocity representative per winding class |n| ≤ cutoff.
    FixedMomentum { n_cutoff: usize },
}

impl GeneratorSpec {
    pub fn tag(&self) -> Generator {
        match self {
            GeneratorSpec::LatticeEnumeration { .. } => Generator::LatticeEnumeration,
            GeneratorSpec::BrownianBridge { .. } => Generator::BrownianBridge,
            GeneratorSpec::FixedMomentum { .. } => Generator::FixedMomentum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub space: Space,
    pub start: f64,
    pub end: f64,
    pub t_total: f64,
    pub n_slices: usize,
    /// Requested path count. LatticeEnumeration and FixedMomentum derive their
    /// own counts (sites^(n_slices−1) and 2·cutoff+1 respectively).
    pub n_paths: usize,
    pub generator: GeneratorSpec,
    pub seed: u64,
}

/// Immutable bundle of sampled paths sharing space, endpoints and slice count.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    paths: Vec<Path>,
    weights: Option<Vec<f64>>,
    seed: u64,
    generator: Generator,
}

impl PathEnsemble {
    /// Assembles an ensemble from explicit paths. Used by experiment setups
    /// that need hand-built class representatives.
    pub fn from_paths(
        paths: Vec<Path>,
        weights: Option<Vec<f64>>,
        seed: u64,
        generator: Generator,
    ) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::invalid("ensemble needs at least one path"));
        }
        let space = paths[0].space();
        let n = paths[0].points().len();
        let dt = paths[0].dt();
        for p in &paths {
            if p.space() != space || p.points().len() != n || p.dt() != dt {
                return Err(Error::invalid(
                    "ensemble paths must share space, slice count and dt",
                ));
            }
        }
        if let Some(w) = &weights {
            if w.len() != paths.len() {
                return Err(Error::invalid("one weight per path required"));
            }
            if w.iter().any(|&x| !x.is_finite() || x <= 0.0) {
                return Err(Error::invalid("weights must be positive and finite"));
            }
        }
        Ok(PathEnsemble {
            paths,
            weights,
            seed,
            generator,
        })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Fraction of paths per homotopy class (classes taken about `reference`).
    pub fn class_composition(
        &self,
        reference: f64,
    ) -> Result<std::collections::BTreeMap<HomotopyClass, f64>> {
        let mut counts = std::collections::BTreeMap::new();
        for p in &self.paths {
            *counts.entry(homotopy_class(p, reference)?).or_insert(0u64) += 1;
        }
        let total = self.paths.len() as f64;
        Ok(counts
            .into_iter()
            .map(|(k, v)| (k, v as f64 / total))
            .collect())
    }
}

/// Deterministic per-index RNG stream: same (seed, index) always yields the
/// same draws, independent of evaluation order or thread count.
pub(crate) fn indexed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Samples a path ensemble. Pure function of the spec, including the seed.
pub fn sample_paths(spec: &SampleSpec) -> Result<PathEnsemble> {
    if spec.n_slices < 1 {
        return Err(Error::invalid("n_slices must be at least 1"));
    }
    if spec.n_paths < 1 {
        return Err(Error::invalid("n_paths must be at least 1"));
    }
    if !spec.t_total.is_finite() || spec.t_total <= 0.0 {
        return Err(Error::NonFinite { what: "t_total" });
    }
    if !spec.start.is_finite() || !spec.end.is_finite() {
        return Err(Error::NonFinite { what: "endpoint" });
    }
    let dt = spec.t_total / spec.n_slices as f64;
    let paths = match &spec.generator {
        GeneratorSpec::LatticeEnumeration { sites, half_width } => {
            lattice_paths(spec, *sites, *half_width, dt)?
        }
        GeneratorSpec::BrownianBridge { mass, sigma } => bridge_paths(spec, *mass, *sigma, dt)?,
        GeneratorSpec::FixedMomentum { n_cutoff } => fixed_momentum_paths(spec, *n_cutoff, dt)?,
    };
    PathEnsemble::from_paths(paths, None, spec.seed, spec.generator.tag())
}

fn lattice_paths(spec: &SampleSpec, sites: usize, half_width: f64, dt: f64) -> Result<Vec<Path>> {
    if sites < 1 {
        return Err(Error::invalid("lattice needs at least one site"));
    }
    if !half_width.is_finite() || half_width <= 0.0 {
        return Err(Error::NonFinite { what: "half_width" });
    }
    let n_interior = spec.n_slices - 1;
    let count = (sites as u64)
        .checked_pow(n_interior as u32)
        .unwrap_or(u64::MAX);
    if count > ENUMERATION_CAP {
        return Err(Error::ResourceCap {
            what: "lattice enumeration",
            requested: count,
            cap: ENUMERATION_CAP,
        });
    }
    let offsets = lattice_offsets(sites, half_width);
    let centers: Vec<f64> = (1..spec.n_slices)
        .map(|k| spec.start + (spec.end - spec.start) * k as f64 / spec.n_slices as f64)
        .collect();
    let mut paths = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut points = Vec::with_capacity(spec.n_slices + 1);
        points.push(spec.start);
        let mut rem = idx;
        for center in &centers {
            let digit = (rem % sites as u64) as usize;
            rem /= sites as u64;
            points.push(center + offsets[digit]);
        }
        points.push(spec.end);
        paths.push(Path::new(spec.space, points, dt)?);
    }
    Ok(paths)
}

pub(crate) fn lattice_offsets(sites: usize, half_width: f64) -> Vec<f64> {
    if sites == 1 {
        return vec![0.0];
    }
    let dx = 2.0 * half_width / (sites - 1) as f64;
    (0..sites).map(|j| -half_width + j as f64 * dx).collect()
}

fn bridge_paths(spec: &SampleSpec, mass: f64, sigma: Option<f64>, dt: f64) -> Result<Vec<Path>> {
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::NonFinite { what: "mass" });
    }
    let step_sigma = match sigma {
        Some(s) if s.is_finite() && s > 0.0 => s,
        Some(_) => return Err(Error::NonFinite { what: "sigma" }),
        None => (dt / mass).sqrt(),
    };
    // Diffusion rate implied by the per-step scale.
    let rate = step_sigma * step_sigma / dt;
    let mut paths = Vec::with_capacity(spec.n_paths);
    for i in 0..spec.n_paths {
        let mut rng = indexed_rng(spec.seed, i as u64);
        let mut points = Vec::with_capacity(spec.n_slices + 1);
        points.push(spec.start);
        let mut x = spec.start;
        for k in 1..spec.n_slices {
            let remaining = (spec.n_slices - k + 1) as f64 * dt;
            let mean = x + (spec.end - x) * dt / remaining;
            let var = rate * dt * (remaining - dt) / remaining;
            let z: f64 = rng.sample(StandardNormal);
            x = mean + var.sqrt() * z;
            points.push(x);
        }
        points.push(spec.end);
        paths.push(Path::new(spec.space, points, dt)?);
    }
    Ok(paths)
}

fn fixed_momentum_paths(spec: &SampleSpec, n_cutoff: usize, dt: f64) -> Result<Vec<Path>> {
    if spec.space == Space::Line1D {
        return Err(Error::SpaceMismatch {
            expected: "Ring or So3Axis",
            got: spec.space,
        });
    }
    // Principal displacement, then one unwrapped endpoint per winding class.
    let raw = spec.end - spec.start;
    let principal = raw - TAU * (raw / TAU).round();
    let cutoff = n_cutoff as i64;
    let mut paths = Vec::with_capacity(2 * n_cutoff + 1);
    for n in -cutoff..=cutoff {
        let target = spec.start + principal + TAU * n as f64;
        let points: Vec<f64> = (0..=spec.n_slices)
            .map(|k| spec.start + (target - spec.start) * k as f64 / spec.n_slices as f64)
            .collect();
        paths.push(Path::new(spec.space, points, dt)?);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn line(points: Vec<f64>, dt: f64) -> Path {
        Path::new(Space::Line1D, points, dt).unwrap()
    }

    fn ring(points: Vec<f64>) -> Path {
        Path::new(Space::Ring, points, 0.1).unwrap()
    }

    #[test]
    fn exp_action_identity_cases() {
        let one = exp_action(ActionValue(0.0)).unwrap();
        assert!((one - Amplitude::new(1.0, 0.0)).norm() < TOL);
        let half_turn = exp_action(ActionValue(PI)).unwrap();
        assert!((half_turn - Amplitude::new(-1.0, 0.0)).norm() < TOL);
        let quarter_turn = exp_action(ActionValue(PI / 2.0)).unwrap();
        assert!((quarter_turn - Amplitude::new(0.0, 1.0)).norm() < TOL);
    }

    #[test]
    fn exp_action_rejects_non_finite() {
        assert!(matches!(
            exp_action(ActionValue(f64::NAN)),
            Err(Error::NonFinite { .. })
        ));
        assert!(exp_action(ActionValue(f64::INFINITY)).is_err());
    }

    #[test]
    fn free_action_examples() {
        let constant = line(vec![1.3, 1.3, 1.3], 0.5);
        assert_eq!(free_action(&constant, 1.0).unwrap().value(), 0.0);

        let two_points = line(vec![0.0, 1.0], 1.0);
        assert!((free_action(&two_points, 1.0).unwrap().value() - 0.5).abs() < TOL);

        // Two slices at velocity 1, inertia 2: (2/2)·1²·0.5 per slice.
        let three_points = line(vec![0.0, 0.5, 1.0], 0.5);
        assert!((free_action(&three_points, 2.0).unwrap().value() - 1.0).abs() < TOL);
    }

    #[test]
    fn path_requires_two_points() {
        assert!(matches!(
            Path::new(Space::Line1D, vec![0.0], 1.0),
            Err(Error::TooFewPoints { got: 1 })
        ));
    }

    #[test]
    fn free_action_rejects_so3_axis() {
        let p = Path::new(Space::So3Axis, vec![0.0, 1.0], 1.0).unwrap();
        assert!(matches!(
            free_action(&p, 1.0),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn winding_examples() {
        // Arc not crossing the reference.
        assert_eq!(winding_number(&ring(vec![0.2, 0.6, 1.0]), 0.0).unwrap(), 0);
        // One full loop then an arc.
        assert_eq!(
            winding_number(&ring(vec![0.2, 3.0, 0.2 + TAU + 0.8]), 0.0).unwrap(),
            1
        );
        // Forward past the reference once, back once: net zero.
        assert_eq!(
            winding_number(&ring(vec![0.2, TAU + 0.5, 1.0]), 0.0).unwrap(),
            0
        );
    }

    #[test]
    fn winding_rejects_wrapped_trace() {
        // All samples inside [0, 2π) with a >π jump: the signature of a
        // mod-2π reduced trace.
        let wrapped = ring(vec![5.9, 6.2, 0.3, 0.8]);
        assert!(matches!(
            winding_number(&wrapped, 0.0),
            Err(Error::WrappedAngles)
        ));
    }

    #[test]
    fn winding_rejects_line() {
        assert!(winding_number(&line(vec![0.0, 1.0], 1.0), 0.0).is_err());
    }

    #[test]
    fn so3_class_examples() {
        let axis = |pts: Vec<f64>| Path::new(Space::So3Axis, pts, 0.1).unwrap();
        assert_eq!(
            so3_class(&axis(vec![0.0, 0.0, 0.0])).unwrap(),
            HomotopyClass::So3(So3Class::Trivial)
        );
        assert_eq!(
            so3_class(&axis(vec![0.0, PI, TAU])).unwrap(),
            HomotopyClass::So3(So3Class::Nontrivial)
        );
        assert_eq!(
            so3_class(&axis(vec![0.0, PI, TAU, 3.0 * PI, 2.0 * TAU])).unwrap(),
            HomotopyClass::So3(So3Class::Trivial)
        );
    }

    #[test]
    fn sample_single_slice_is_straight_segment() {
        let spec = SampleSpec {
            space: Space::Line1D,
            start: 0.0,
            end: 1.0,
            t_total: 1.0,
            n_slices: 1,
            n_paths: 1,
            generator: GeneratorSpec::LatticeEnumeration {
                sites: 5,
                half_width: 2.0,
            },
            seed: 9,
        };
        let ens = sample_paths(&spec).unwrap();
        assert_eq!(ens.len(), 1);
        assert_eq!(ens.paths()[0].points(), &[0.0, 1.0]);
    }

    #[test]
    fn lattice_count_is_sites_to_interior_power() {
        let spec = SampleSpec {
            space: Space::Line1D,
            start: 0.0,
            end: 1.0,
            t_total: 1.0,
            n_slices: 3,
            n_paths: 1,
            generator: GeneratorSpec::LatticeEnumeration {
                sites: 3,
                half_width: 1.0,
            },
            seed: 9,
        };
        assert_eq!(sample_paths(&spec).unwrap().len(), 9);
    }

    #[test]
    fn lattice_cap_exceeded_names_cap() {
        let spec = SampleSpec {
            space: Space::Line1D,
            start: 0.0,
            end: 1.0,
            t_total: 1.0,
            n_slices: 9,
            n_paths: 1,
            generator: GeneratorSpec::LatticeEnumeration {
                sites: 100,
                half_width: 1.0,
            },
            seed: 9,
        };
        match sample_paths(&spec) {
            Err(Error::ResourceCap { cap, .. }) => assert_eq!(cap, ENUMERATION_CAP),
            other => panic!("expected resource cap error, got {other:?}"),
        }
    }

    #[test]
    fn same_seed_bit_identical_ensembles() {
        let spec = SampleSpec {
            space: Space::Line1D,
            start: -0.5,
            end: 1.5,
            t_total: 2.0,
            n_slices: 16,
            n_paths: 20,
            generator: GeneratorSpec::BrownianBridge {
                mass: 1.0,
                sigma: None,
            },
            seed: 1234,
        };
        let a = sample_paths(&spec).unwrap();
        let b = sample_paths(&spec).unwrap();
        for (pa, pb) in a.paths().iter().zip(b.paths()) {
            let bits_a: Vec<u64> = pa.points().iter().map(|x| x.to_bits()).collect();
            let bits_b: Vec<u64> = pb.points().iter().map(|x| x.to_bits()).collect();
            assert_eq!(bits_a, bits_b);
        }
    }

    #[test]
    fn bridge_pins_endpoints() {
        let spec = SampleSpec {
            space: Space::Line1D,
            start: -2.0,
            end: 3.0,
            t_total: 1.0,
            n_slices: 8,
            n_paths: 50,
            generator: GeneratorSpec::BrownianBridge {
                mass: 2.0,
                sigma: None,
            },
            seed: 7,
        };
        for p in sample_paths(&spec).unwrap().paths() {
            assert_eq!(p.start(), -2.0);
            assert_eq!(p.end(), 3.0);
        }
    }

    #[test]
    fn fixed_momentum_one_path_per_class() {
        let spec = SampleSpec {
            space: Space::Ring,
            start: 0.3,
            end: 1.0,
            t_total: 1.0,
            n_slices: 10,
            n_paths: 1,
            generator: GeneratorSpec::FixedMomentum { n_cutoff: 3 },
            seed: 0,
        };
        let ens = sample_paths(&spec).unwrap();
        assert_eq!(ens.len(), 7);
        let classes: Vec<i64> = ens
            .paths()
            .iter()
            .map(|p| winding_number(p, 0.0).unwrap())
            .collect();
        assert_eq!(classes, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    proptest! {
        #[test]
        fn exp_action_is_multiplicative(a in -1e3..1e3f64, b in -1e3..1e3f64) {
            let lhs = exp_action(ActionValue(a + b)).unwrap();
            let rhs = exp_action(ActionValue(a)).unwrap() * exp_action(ActionValue(b)).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn exp_action_unit_modulus(s in -1e6..1e6f64) {
            prop_assert!((exp_action(ActionValue(s)).unwrap().norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn free_action_time_reversal_and_translation(
            pts in proptest::collection::vec(-10.0..10.0f64, 2..20),
            dt in 0.01..2.0f64,
            mass in 0.1..10.0f64,
            shift in -5.0..5.0f64,
        ) {
            let p = line(pts.clone(), dt);
            let s = free_action(&p, mass).unwrap().value();
            let rev = free_action(&p.reversed(), mass).unwrap().value();
            prop_assert!((s - rev).abs() <= 1e-9 * (1.0 + s.abs()));
            let shifted = line(pts.iter().map(|x| x + shift).collect(), dt);
            let st = free_action(&shifted, mass).unwrap().value();
            prop_assert!((s - st).abs() <= 1e-9 * (1.0 + s.abs()));
        }

        #[test]
        fn winding_additive_under_concat(
            mid in proptest::collection::vec(-20.0..20.0f64, 1..8),
            a in -3.0..3.0f64,
            b in -20.0..20.0f64,
            c in -20.0..20.0f64,
            reference in 0.05..0.95f64,
        ) {
            // Shift everything below the fundamental window so the
            // wrapped-representation heuristic cannot fire on random data.
            let mut first = vec![a - 30.0];
            first.extend(mid.iter().map(|x| x - 30.0));
            first.push(b - 30.0);
            let p1 = ring(first);
            let p2 = ring(vec![b - 30.0, c - 30.0]);
            let joined = p1.concat(&p2).unwrap();
            let w1 = winding_number(&p1, reference).unwrap();
            let w2 = winding_number(&p2, reference).unwrap();
            let w = winding_number(&joined, reference).unwrap();
            prop_assert_eq!(w, w1 + w2);
        }

        #[test]
        fn winding_of_closed_path_reference_independent(
            loops in -4i64..4,
            start in -3.0..3.0f64,
            r1 in 0.05..6.0f64,
            r2 in 0.05..6.0f64,
        ) {
            let end = start + TAU * loops as f64;
            let p = ring(vec![start, start + 0.5 * (end - start), end]);
            let w1 = winding_number(&p, r1).unwrap();
            let w2 = winding_number(&p, r2).unwrap();
            prop_assert_eq!(w1, w2);
            prop_assert_eq!(w1, loops);
        }

        #[test]
        fn double_traversal_is_so3_trivial(
            mid in proptest::collection::vec(-15.0..15.0f64, 1..6),
            start in -3.0..3.0f64,
            loops in -2i64..=2,
        ) {
            // Closed path on the axis (returns to start + 2πk after identification).
            let mut pts = vec![start];
            pts.extend(mid.iter().cloned());
            pts.push(start + TAU * loops as f64);
            let mut doubled = pts.clone();
            let offset = *pts.last().unwrap() - start;
            doubled.extend(pts[1..].iter().map(|x| x + offset));
            let pp = Path::new(Space::So3Axis, doubled, 0.1).unwrap();
            prop_assert_eq!(so3_class(&pp).unwrap(), HomotopyClass::So3(So3Class::Trivial));
        }
    }
}
