//! Vector-model simulation of liquid-state NMR pulse sequences.
//!
//! Each spectral peak carries a classical magnetisation vector in units of
//! its equilibrium value. Pulses are instantaneous right-handed rotations
//! about `(cos phi, sin phi, 0)`; a delay precesses the transverse part by
//! `offset * tau` and, when the peak has a T1, relaxes `mz` back towards 1.
//! Transverse decay is not modelled.
//!
//! Experiments are described by a JSON document:
//!
//! ```json
//! {
//!   "peaks": [{"label": "A", "offset_rad_s": 628.3, "t1_s": 7.6}],
//!   "sequence": [
//!     {"type": "hard_pulse", "beta": 1.5707963267948966, "phi": "$B"},
//!     {"type": "selective_pulse", "beta": 1.57, "phi": 1.57, "target_offset": "$A", "tolerance": 50.0},
//!     {"type": "delay", "tau": 0.001}
//!   ]
//! }
//! ```
//!
//! Any numeric sequence field may instead be one of the placeholders `"$A"`
//! or `"$B"`, which turns the document into an [`ExperimentTemplate`].

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Readouts with a transverse magnitude below this are treated as no signal.
pub const SIGNAL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Magnetization {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Magnetization {
    pub const EQUILIBRIUM: Magnetization = Magnetization {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Magnetization { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn transverse_norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Rodrigues rotation by `beta` about the transverse axis at angle `phi`.
    pub fn rotated(&self, beta: f64, phi: f64) -> Self {
        let (kx, ky) = (phi.cos(), phi.sin());
        let (s, c) = beta.sin_cos();
        // k x v with k = (kx, ky, 0)
        let cross = [ky * self.z, -kx * self.z, kx * self.y - ky * self.x];
        let dot = kx * self.x + ky * self.y;
        Magnetization {
            x: self.x * c + cross[0] * s + kx * dot * (1.0 - c),
            y: self.y * c + cross[1] * s + ky * dot * (1.0 - c),
            z: self.z * c + cross[2] * s,
        }
    }

    /// Free evolution for `tau` seconds at angular `offset`.
    pub fn evolved(&self, offset: f64, tau: f64, t1: Option<f64>) -> Self {
        let (s, c) = (offset * tau).sin_cos();
        let z = match t1 {
            Some(t1) => 1.0 + (self.z - 1.0) * (-tau / t1).exp(),
            None => self.z,
        };
        Magnetization {
            x: self.x * c - self.y * s,
            y: self.x * s + self.y * c,
            z,
        }
    }
}

impl Default for Magnetization {
    fn default() -> Self {
        Self::EQUILIBRIUM
    }
}

/// One resonance of the sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub label: String,
    /// Angular frequency relative to the transmitter, rad/s.
    pub offset: f64,
    pub m: Magnetization,
    /// Longitudinal relaxation time in seconds; `None` disables relaxation.
    pub t1: Option<f64>,
}

impl Peak {
    pub fn new(label: impl Into<String>, offset: f64, t1: Option<f64>) -> Result<Self> {
        let label = label.into();
        if !offset.is_finite() {
            return Err(Error::InvalidSystem(format!(
                "peak {label}: offset must be finite"
            )));
        }
        if let Some(t1) = t1 {
            if !(t1 > 0.0 && t1.is_finite()) {
                return Err(Error::InvalidSystem(format!("peak {label}: t1 must be positive")));
            }
        }
        Ok(Peak {
            label,
            offset,
            m: Magnetization::EQUILIBRIUM,
            t1,
        })
    }
}

/// Serialized form of a peak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeakSpec {
    pub label: String,
    pub offset_rad_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    peaks: Vec<Peak>,
}

impl SpinSystem {
    pub fn new(peaks: Vec<Peak>) -> Result<Self> {
        if peaks.is_empty() {
            return Err(Error::InvalidSystem("at least one peak is required".into()));
        }
        let mut labels = BTreeSet::new();
        for p in &peaks {
            if !labels.insert(p.label.as_str()) {
                return Err(Error::InvalidSystem(format!("duplicate peak label {}", p.label)));
            }
        }
        Ok(SpinSystem { peaks })
    }

    /// A single on-resonance peak without relaxation.
    pub fn single() -> Self {
        SpinSystem {
            peaks: vec![Peak::new("A", 0.0, None).expect("valid peak")],
        }
    }

    pub fn from_specs(specs: &[PeakSpec]) -> Result<Self> {
        let peaks = specs
            .iter()
            .map(|s| Peak::new(s.label.clone(), s.offset_rad_s, s.t1_s))
            .collect::<Result<Vec<_>>>()?;
        SpinSystem::new(peaks)
    }

    pub fn specs(&self) -> Vec<PeakSpec> {
        self.peaks
            .iter()
            .map(|p| PeakSpec {
                label: p.label.clone(),
                offset_rad_s: p.offset,
                t1_s: p.t1,
            })
            .collect()
    }

    pub fn peaks(&self) -> &[Peak] {
        &self.peaks
    }

    pub fn peak(&self, label: &str) -> Option<&Peak> {
        self.peaks.iter().find(|p| p.label == label)
    }

    /// Copy with every peak at equilibrium.
    pub fn at_equilibrium(&self) -> Self {
        self.map_peaks(|_| Magnetization::EQUILIBRIUM)
    }

    /// Copy with the magnetisation of each peak replaced, in peak order.
    pub fn with_magnetizations(&self, ms: &[Magnetization]) -> Result<Self> {
        if ms.len() != self.peaks.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} magnetisation vectors, got {}",
                self.peaks.len(),
                ms.len()
            )));
        }
        let mut out = self.clone();
        for (p, m) in out.peaks.iter_mut().zip(ms) {
            p.m = *m;
        }
        Ok(out)
    }

    fn map_peaks(&self, f: impl Fn(&Peak) -> Magnetization) -> Self {
        let peaks = self.peaks.iter().map(|p| Peak { m: f(p), ..p.clone() }).collect();
        SpinSystem { peaks }
    }

    pub fn apply(&self, element: &SequenceElement) -> Result<Self> {
        element.validate()?;
        Ok(match *element {
            SequenceElement::HardPulse { beta, phi } => self.map_peaks(|p| p.m.rotated(beta, phi)),
            SequenceElement::SelectivePulse {
                beta,
                phi,
                target_offset,
                tolerance,
            } => self.map_peaks(|p| {
                if (p.offset - target_offset).abs() < tolerance {
                    p.m.rotated(beta, phi)
                } else {
                    p.m
                }
            }),
            SequenceElement::Delay { tau } => self.map_peaks(|p| p.m.evolved(p.offset, tau, p.t1)),
        })
    }
}

/// One step of a pulse sequence. `P` is `f64` for concrete sequences and
/// [`Param`] for templates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceElement<P = f64> {
    HardPulse {
        beta: P,
        phi: P,
    },
    SelectivePulse {
        beta: P,
        phi: P,
        target_offset: P,
        tolerance: P,
    },
    Delay {
        tau: P,
    },
}

impl<P> SequenceElement<P> {
    pub fn try_map<Q>(&self, mut f: impl FnMut(&P) -> Result<Q>) -> Result<SequenceElement<Q>> {
        Ok(match self {
            SequenceElement::HardPulse { beta, phi } => SequenceElement::HardPulse {
                beta: f(beta)?,
                phi: f(phi)?,
            },
            SequenceElement::SelectivePulse {
                beta,
                phi,
                target_offset,
                tolerance,
            } => SequenceElement::SelectivePulse {
                beta: f(beta)?,
                phi: f(phi)?,
                target_offset: f(target_offset)?,
                tolerance: f(tolerance)?,
            },
            SequenceElement::Delay { tau } => SequenceElement::Delay { tau: f(tau)? },
        })
    }

    fn fields(&self) -> Vec<&P> {
        match self {
            SequenceElement::HardPulse { beta, phi } => vec![beta, phi],
            SequenceElement::SelectivePulse {
                beta,
                phi,
                target_offset,
                tolerance,
            } => {
                vec![beta, phi, target_offset, tolerance]
            }
            SequenceElement::Delay { tau } => vec![tau],
        }
    }
}

impl SequenceElement {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(what.to_string()));
        match *self {
            SequenceElement::HardPulse { beta, phi } => {
                if !(beta.is_finite() && phi.is_finite()) {
                    return bad("pulse angles must be finite");
                }
            }
            SequenceElement::SelectivePulse {
                beta,
                phi,
                target_offset,
                tolerance,
            } => {
                if !(beta.is_finite() && phi.is_finite() && target_offset.is_finite()) {
                    return bad("selective pulse parameters must be finite");
                }
                if !(tolerance > 0.0 && tolerance.is_finite()) {
                    return bad("selective pulse tolerance must be positive");
                }
            }
            SequenceElement::Delay { tau } => {
                if !(tau >= 0.0 && tau.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "delay must be non-negative, got {tau}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PulseSequence {
    pub elements: Vec<SequenceElement>,
}

impl PulseSequence {
    pub fn new(elements: Vec<SequenceElement>) -> Self {
        PulseSequence { elements }
    }

    /// Single square pulse.
    pub fn single_pulse(beta: f64, phi: f64) -> Self {
        PulseSequence::new(vec![SequenceElement::HardPulse { beta, phi }])
    }

    /// Two square pulses back to back.
    pub fn two_pulse(beta1: f64, phi1: f64, beta2: f64, phi2: f64) -> Self {
        PulseSequence::new(vec![
            SequenceElement::HardPulse {
                beta: beta1,
                phi: phi1,
            },
            SequenceElement::HardPulse {
                beta: beta2,
                phi: phi2,
            },
        ])
    }
}

/// A template slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    #[serde(rename = "$A")]
    A,
    #[serde(rename = "$B")]
    B,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::A => "$A",
            Slot::B => "$B",
        })
    }
}

/// A sequence field that is either fixed or filled from a slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Value(f64),
    Slot(Slot),
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Value(v)
    }
}

impl From<Slot> for Param {
    fn from(s: Slot) -> Self {
        Param::Slot(s)
    }
}

/// The JSON experiment document: peaks plus a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDoc<P = f64> {
    pub peaks: Vec<PeakSpec>,
    pub sequence: Vec<SequenceElement<P>>,
}

pub type ExperimentTemplate = ExperimentDoc<Param>;

impl ExperimentDoc<f64> {
    pub fn new(system: &SpinSystem, sequence: &PulseSequence) -> Self {
        ExperimentDoc {
            peaks: system.specs(),
            sequence: sequence.elements.clone(),
        }
    }

    pub fn system(&self) -> Result<SpinSystem> {
        SpinSystem::from_specs(&self.peaks)
    }

    pub fn pulse_sequence(&self) -> PulseSequence {
        PulseSequence::new(self.sequence.clone())
    }
}

impl<P: Serialize> ExperimentDoc<P> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl<P: serde::de::DeserializeOwned> ExperimentDoc<P> {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl ExperimentTemplate {
    pub fn system(&self) -> Result<SpinSystem> {
        SpinSystem::from_specs(&self.peaks)
    }

    /// Placeholders used anywhere in the sequence.
    pub fn slots(&self) -> BTreeSet<Slot> {
        self.sequence
            .iter()
            .flat_map(|e| e.fields().into_iter().copied())
            .filter_map(|p| match p {
                Param::Slot(s) => Some(s),
                Param::Value(_) => None,
            })
            .collect()
    }

    pub fn instantiate(&self, a: f64, b: f64) -> Result<PulseSequence> {
        let elements = self
            .sequence
            .iter()
            .map(|e| {
                e.try_map(|p| {
                    Ok(match *p {
                        Param::Value(v) => v,
                        Param::Slot(Slot::A) => a,
                        Param::Slot(Slot::B) => b,
                    })
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PulseSequence::new(elements))
    }

    /// The single-pulse template: `$A` is the flip angle, `$B` the phase.
    pub fn single_pulse() -> Self {
        ExperimentDoc {
            peaks: SpinSystem::single().specs(),
            sequence: vec![SequenceElement::HardPulse {
                beta: Slot::A.into(),
                phi: Slot::B.into(),
            }],
        }
    }

    /// Two pulses with `$A` the first flip angle and `$B` the second phase.
    pub fn two_pulse(phi1: f64, beta2: f64) -> Self {
        ExperimentDoc {
            peaks: SpinSystem::single().specs(),
            sequence: vec![
                SequenceElement::HardPulse {
                    beta: Slot::A.into(),
                    phi: phi1.into(),
                },
                SequenceElement::HardPulse {
                    beta: beta2.into(),
                    phi: Slot::B.into(),
                },
            ],
        }
    }

    /// Two peaks, B at twice A's offset; a selective pi/2 pulse at `$B`
    /// onto +x followed by a delay of `$A` seconds.
    pub fn selective_delay(omega_a: f64, tolerance: f64) -> Self {
        let half_pi = std::f64::consts::FRAC_PI_2;
        ExperimentDoc {
            peaks: vec![
                PeakSpec {
                    label: "A".into(),
                    offset_rad_s: omega_a,
                    t1_s: None,
                },
                PeakSpec {
                    label: "B".into(),
                    offset_rad_s: 2.0 * omega_a,
                    t1_s: None,
                },
            ],
            sequence: vec![
                SequenceElement::SelectivePulse {
                    beta: half_pi.into(),
                    phi: half_pi.into(),
                    target_offset: Slot::B.into(),
                    tolerance: tolerance.into(),
                },
                SequenceElement::Delay { tau: Slot::A.into() },
            ],
        }
    }
}

pub fn apply_hard_pulse(s: &SpinSystem, beta: f64, phi: f64) -> SpinSystem {
    s.map_peaks(|p| p.m.rotated(beta, phi))
}

pub fn apply_selective_pulse(
    s: &SpinSystem,
    beta: f64,
    phi: f64,
    target_offset: f64,
    tolerance: f64,
) -> Result<SpinSystem> {
    s.apply(&SequenceElement::SelectivePulse {
        beta,
        phi,
        target_offset,
        tolerance,
    })
}

pub fn apply_delay(s: &SpinSystem, tau: f64) -> Result<SpinSystem> {
    s.apply(&SequenceElement::Delay { tau })
}

/// Resets `s` to equilibrium, then applies the sequence in order.
pub fn run_sequence(s: &SpinSystem, seq: &PulseSequence) -> Result<SpinSystem> {
    seq.elements
        .iter()
        .try_fold(s.at_equilibrium(), |sys, e| sys.apply(e))
}

/// Sum of the x components over all peaks.
pub fn read_mx(s: &SpinSystem) -> f64 {
    s.peaks.iter().map(|p| p.m.x).sum()
}

/// Magnitude and phase in `[0, 2pi)` of the summed transverse signal.
pub fn read_complex(s: &SpinSystem) -> (f64, f64) {
    let (x, y) = s
        .peaks
        .iter()
        .fold((0.0, 0.0), |(x, y), p| (x + p.m.x, y + p.m.y));
    let r = x.hypot(y);
    if r < SIGNAL_FLOOR {
        return (0.0, 0.0);
    }
    (r, normalize_angle(y.atan2(x)))
}

/// Wraps an angle into `[0, 2pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// `n` evenly spaced samples covering `[start, end]` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// A table of readouts over two swept parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub row_values: Vec<f64>,
    pub col_values: Vec<f64>,
    pub cells: Vec<Vec<f64>>,
}

/// Evaluates `read_mx` for every `($A, $B)` pair; rows follow `a_vals`.
pub fn scan(template: &ExperimentTemplate, a_vals: &[f64], b_vals: &[f64]) -> Result<Grid> {
    if a_vals.is_empty() || b_vals.is_empty() {
        return Err(Error::InvalidArgument("scan grids must be non-empty".into()));
    }
    let system = template.system()?;
    let cells = a_vals
        .iter()
        .map(|&a| {
            b_vals
                .iter()
                .map(|&b| Ok(read_mx(&run_sequence(&system, &template.instantiate(a, b)?)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Grid {
        row_values: a_vals.to_vec(),
        col_values: b_vals.to_vec(),
        cells,
    })
}

/// The two-pulse experiment: rows sweep the first flip angle, columns the
/// second phase, both over `[0, 2pi]` with `n` inclusive samples.
pub fn two_pulse_grid(n: usize, phi1: f64, beta2: f64) -> Result<Grid> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid size must be at least 2, got {n}"
        )));
    }
    let samples = linspace(0.0, TAU, n);
    scan(&ExperimentTemplate::two_pulse(phi1, beta2), &samples, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    type Mat = [[f64; 3]; 3];

    // Independent oracle: rotation matrix about a unit axis.
    fn axis_rotation(beta: f64, phi: f64) -> Mat {
        let (ux, uy, uz) = (phi.cos(), phi.sin(), 0.0);
        let (s, c) = beta.sin_cos();
        let t = 1.0 - c;
        [
            [c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s],
            [uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s],
            [uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t],
        ]
    }

    fn mat_vec(m: &Mat, v: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
    }

    fn one_peak(m: Magnetization) -> SpinSystem {
        SpinSystem::single().with_magnetizations(&[m]).unwrap()
    }

    fn two_peaks(omega: f64) -> SpinSystem {
        SpinSystem::new(vec![
            Peak::new("A", omega, None).unwrap(),
            Peak::new("B", 2.0 * omega, None).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn zero_flip_is_identity() {
        let s = SpinSystem::single();
        assert_eq!(apply_hard_pulse(&s, 0.0, 1.3), s);
    }

    #[test]
    fn quarter_turn_about_x() {
        let m = apply_hard_pulse(&SpinSystem::single(), FRAC_PI_2, 0.0).peaks()[0].m;
        assert!(m.x.abs() < 1e-15 && (m.y + 1.0).abs() < 1e-15 && m.z.abs() < 1e-15);
    }

    #[test]
    fn matches_matrix_oracle() {
        let v = [0.3, -0.4, 0.5];
        for &(beta, phi) in &[(0.7, 0.2), (2.9, 4.1), (PI, 1.0), (5.5, -0.3)] {
            let got = Magnetization::new(v[0], v[1], v[2]).rotated(beta, phi);
            let want = mat_vec(&axis_rotation(beta, phi), v);
            assert!((got.x - want[0]).abs() < 1e-14);
            assert!((got.y - want[1]).abs() < 1e-14);
            assert!((got.z - want[2]).abs() < 1e-14);
        }
    }

    #[test]
    fn selective_pulse_targets_one_peak() {
        let omega = 100.0;
        let s = two_peaks(omega);
        let hit_a = apply_selective_pulse(&s, FRAC_PI_2, FRAC_PI_2, omega, 0.25 * omega).unwrap();
        assert!((hit_a.peak("A").unwrap().m.x - 1.0).abs() < 1e-15);
        assert_eq!(hit_a.peak("B").unwrap().m, Magnetization::EQUILIBRIUM);

        let none = apply_selective_pulse(&s, FRAC_PI_2, FRAC_PI_2, 1.5 * omega, 0.25 * omega).unwrap();
        assert_eq!(none, s);

        let both = apply_selective_pulse(&s, FRAC_PI_2, 0.4, 1.5 * omega, omega).unwrap();
        assert_eq!(both, apply_hard_pulse(&s, FRAC_PI_2, 0.4));

        assert!(apply_selective_pulse(&s, 1.0, 0.0, omega, 0.0).is_err());
    }

    #[test]
    fn delay_behaviour() {
        let s = SpinSystem::single();
        assert_eq!(apply_delay(&s, 0.0).unwrap(), s);
        assert!(matches!(apply_delay(&s, -1.0), Err(Error::InvalidArgument(_))));

        let t1 = 2.0;
        let relaxing = SpinSystem::new(vec![Peak::new("A", 0.0, Some(t1)).unwrap()])
            .unwrap()
            .with_magnetizations(&[Magnetization::new(0.0, 0.0, -1.0)])
            .unwrap();
        let z = apply_delay(&relaxing, t1 * 2f64.ln()).unwrap().peaks()[0].m.z;
        assert!(z.abs() < 1e-15);

        let omega = 50.0;
        let precessing = SpinSystem::new(vec![Peak::new("A", omega, None).unwrap()])
            .unwrap()
            .with_magnetizations(&[Magnetization::new(1.0, 0.0, 0.0)])
            .unwrap();
        let m = apply_delay(&precessing, PI / omega).unwrap().peaks()[0].m;
        assert!((m.x + 1.0).abs() < 1e-14 && m.y.abs() < 1e-14);
    }

    #[test]
    fn run_sequence_examples() {
        let s = SpinSystem::single()
            .with_magnetizations(&[Magnetization::new(1.0, 0.0, 0.0)])
            .unwrap();
        assert_eq!(
            run_sequence(&s, &PulseSequence::default()).unwrap(),
            SpinSystem::single()
        );

        let out = run_sequence(&s, &PulseSequence::single_pulse(FRAC_PI_2, FRAC_PI_2)).unwrap();
        assert!((read_mx(&out) - 1.0).abs() < 1e-15);

        let inv = run_sequence(&s, &PulseSequence::single_pulse(PI, 2.2))
            .unwrap()
            .peaks()[0]
            .m;
        assert!((inv.z + 1.0).abs() < 1e-15 && inv.transverse_norm() < 1e-15);
    }

    #[test]
    fn readouts() {
        assert_eq!(read_mx(&SpinSystem::single()), 0.0);
        let s = two_peaks(1.0)
            .with_magnetizations(&[Magnetization::new(1.0, 0.0, 0.0), Magnetization::EQUILIBRIUM])
            .unwrap();
        assert_eq!(read_mx(&s), 1.0);

        // A precessed by pi/2 after excitation, B untouched
        let omega = 10.0;
        let sys = two_peaks(omega);
        let excited = apply_selective_pulse(&sys, FRAC_PI_2, FRAC_PI_2, omega, 0.25 * omega).unwrap();
        let later = apply_delay(&excited, FRAC_PI_2 / omega).unwrap();
        assert!(read_mx(&later).abs() < 1e-15);

        assert_eq!(
            read_complex(&one_peak(Magnetization::new(1.0, 0.0, 0.0))),
            (1.0, 0.0)
        );
        let (r, th) = read_complex(&one_peak(Magnetization::new(0.0, -1.0, 0.0)));
        assert!((r - 1.0).abs() < 1e-15 && (th - 1.5 * PI).abs() < 1e-15);
        assert_eq!(read_complex(&SpinSystem::single()), (0.0, 0.0));
    }

    #[test]
    fn two_pulse_grid_edges() {
        assert!(two_pulse_grid(1, 0.0, 0.0).is_err());
        let g = two_pulse_grid(10, 1.5 * PI, FRAC_PI_2).unwrap();
        assert_eq!(g.cells.len(), 10);
        for (j, &phi2) in g.col_values.iter().enumerate() {
            // beta1 = 0 row reduces to the single second pulse
            assert!((g.cells[0][j] - FRAC_PI_2.sin() * phi2.sin()).abs() < 1e-12);
        }
        assert!(g.cells.iter().flatten().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn system_validation() {
        assert!(SpinSystem::new(vec![]).is_err());
        let dup = vec![
            Peak::new("A", 0.0, None).unwrap(),
            Peak::new("A", 1.0, None).unwrap(),
        ];
        assert!(SpinSystem::new(dup).is_err());
        assert!(Peak::new("A", 0.0, Some(0.0)).is_err());
        assert!(Peak::new("A", f64::NAN, None).is_err());
    }

    #[test]
    fn json_document_round_trip() {
        let text = r#"{
            "peaks": [{"label": "A", "offset_rad_s": 100.0}, {"label": "B", "offset_rad_s": 200.0, "t1_s": 7.6}],
            "sequence": [
                {"type": "selective_pulse", "beta": 1.5, "phi": "$A", "target_offset": 100.0, "tolerance": 25.0},
                {"type": "delay", "tau": "$B"},
                {"type": "hard_pulse", "beta": 3.0, "phi": 0.5}
            ]
        }"#;
        let t = ExperimentTemplate::from_json(text).unwrap();
        assert_eq!(t.slots(), [Slot::A, Slot::B].into_iter().collect());
        assert_eq!(t.peaks[1].t1_s, Some(7.6));
        let seq = t.instantiate(0.25, 0.01).unwrap();
        assert_eq!(seq.elements[1], SequenceElement::Delay { tau: 0.01 });
        let back = ExperimentTemplate::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);

        let concrete = ExperimentDoc::new(&t.system().unwrap(), &seq);
        let json = concrete.to_json().unwrap();
        assert!(json.contains("\"type\": \"hard_pulse\""));
        assert!(!json.contains("t1_s\": null"));
        assert_eq!(ExperimentDoc::<f64>::from_json(&json).unwrap(), concrete);

        assert!(ExperimentTemplate::from_json(
            r#"{"peaks": [], "sequence": [{"type": "delay", "tau": "$C"}]}"#
        )
        .is_err());
        assert!(ExperimentDoc::<f64>::from_json(
            r#"{"peaks": [], "sequence": [{"type": "delay", "tau": "$A"}]}"#
        )
        .is_err());
    }

    #[test]
    fn normalize_angle_range() {
        assert_eq!(normalize_angle(-1e-300), 0.0);
        assert!((normalize_angle(-FRAC_PI_2) - 1.5 * PI).abs() < 1e-15);
        assert_eq!(normalize_angle(TAU), 0.0);
    }

    proptest! {
        #[test]
        fn rotation_preserves_norm(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64,
                                   beta in -10.0..10.0f64, phi in -10.0..10.0f64) {
            let m = Magnetization::new(x, y, z);
            prop_assert!((m.rotated(beta, phi).norm() - m.norm()).abs() < 1e-12);
        }

        #[test]
        fn delay_without_relaxation_preserves(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64,
                                              offset in -1e3..1e3f64, tau in 0.0..1.0f64) {
            let m = Magnetization::new(x, y, z).evolved(offset, tau, None);
            prop_assert_eq!(m.z, z);
            prop_assert!((m.transverse_norm() - x.hypot(y)).abs() < 1e-12);
        }

        #[test]
        fn equilibrium_is_relaxation_fixed_point(tau in 0.0..100.0f64, t1 in 0.01..10.0f64) {
            let m = Magnetization::new(0.0, 0.0, 1.0).evolved(0.0, tau, Some(t1));
            prop_assert_eq!(m.z, 1.0);
        }

        #[test]
        fn sequence_is_composition(b1 in 0.0..7.0f64, p1 in 0.0..7.0f64, tau in 0.0..0.1f64, b2 in 0.0..7.0f64) {
            let sys = two_peaks(37.0);
            let e1 = SequenceElement::HardPulse { beta: b1, phi: p1 };
            let e2 = SequenceElement::Delay { tau };
            let e3 = SequenceElement::SelectivePulse { beta: b2, phi: 0.3, target_offset: 74.0, tolerance: 5.0 };
            let whole = run_sequence(&sys, &PulseSequence::new(vec![e1, e2, e3])).unwrap();
            let stepwise = sys.apply(&e1).unwrap().apply(&e2).unwrap().apply(&e3).unwrap();
            prop_assert_eq!(whole, stepwise);
        }

        #[test]
        fn single_pulse_law(beta in 0.0..TAU, phi in 0.0..TAU) {
            let s = run_sequence(&SpinSystem::single(), &PulseSequence::single_pulse(beta, phi)).unwrap();
            prop_assert!((read_mx(&s) - beta.sin() * phi.sin()).abs() < 1e-12);
        }
    }
}
