//! Continuous logic carried by complex numbers `r e^{i theta}`.
//!
//! Magnitude logic acts on `r` in `[0, 1]` like ordinary fuzzy logic and
//! leaves the phase alone. Phase logic treats `theta = 0` as true and
//! `theta = pi` as false, with phase arithmetic modulo `2 pi`. Complex
//! multiplication is magnitude AND combined with phase XNOR.
//!
//! Samples are realised in the spin simulator by inversion recovery
//! (magnitude) followed by off-resonance precession (phase).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spin::{
    normalize_angle, read_complex, run_sequence, Peak, PulseSequence, SequenceElement, SpinSystem,
};

/// A continuous truth value: magnitude in `[0, 1]`, phase in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexSample {
    r: f64,
    theta: f64,
}

impl ComplexSample {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidArgument(format!(
                "magnitude must lie in [0, 1], got {r}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "phase must be finite, got {theta}"
            )));
        }
        Ok(ComplexSample {
            r,
            theta: normalize_angle(theta),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_cartesian(&self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.r * c, self.r * s)
    }
}

/// Fuzzy truth of a phase, `|pi - theta| / pi`.
pub fn ptruth(theta: f64) -> f64 {
    (PI - normalize_angle(theta)).abs() / PI
}

pub fn mnot(z: ComplexSample) -> ComplexSample {
    ComplexSample {
        r: 1.0 - z.r,
        theta: z.theta,
    }
}

fn and_magnitude(z1: ComplexSample, z2: ComplexSample) -> f64 {
    z1.r * z2.r
}

fn xnor_phase(z1: ComplexSample, z2: ComplexSample) -> f64 {
    normalize_angle(z1.theta + z2.theta)
}

/// Magnitude AND; the result phase defaults to the pXNOR phase.
pub fn mand(z1: ComplexSample, z2: ComplexSample) -> ComplexSample {
    ComplexSample {
        r: and_magnitude(z1, z2),
        theta: xnor_phase(z1, z2),
    }
}

/// Magnitude AND with a caller-chosen result phase.
pub fn mand_with(
    z1: ComplexSample,
    z2: ComplexSample,
    phase_rule: impl Fn(ComplexSample, ComplexSample) -> f64,
) -> Result<ComplexSample> {
    ComplexSample::new(and_magnitude(z1, z2), phase_rule(z1, z2))
}

/// Phase XNOR; the result magnitude defaults to `r1 * r2`.
pub fn pxnor(z1: ComplexSample, z2: ComplexSample) -> ComplexSample {
    ComplexSample {
        r: and_magnitude(z1, z2),
        theta: xnor_phase(z1, z2),
    }
}

/// Phase XNOR with a caller-chosen result magnitude.
pub fn pxnor_with(
    z1: ComplexSample,
    z2: ComplexSample,
    magnitude_rule: impl Fn(ComplexSample, ComplexSample) -> f64,
) -> Result<ComplexSample> {
    ComplexSample::new(magnitude_rule(z1, z2), xnor_phase(z1, z2))
}

/// A phase and its conjugate always carry the same truth.
pub fn conjugate_truth_check(theta: f64) -> bool {
    let theta = normalize_angle(theta);
    (ptruth(theta) - ptruth(normalize_angle(TAU - theta))).abs() <= 1e-12
}

/// The product `z1 * z2`, assembled from the mAND magnitude and the pXNOR
/// phase.
pub fn complex_multiply_via_logic(z1: ComplexSample, z2: ComplexSample) -> ComplexSample {
    ComplexSample {
        r: mand(z1, z2).r,
        theta: pxnor(z1, z2).theta,
    }
}

/// Constants of the NMR encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EncodingParams {
    /// Longitudinal relaxation time, s.
    pub t1: f64,
    /// Off-resonance frequency of the readout frame, rad/s.
    pub omega_off: f64,
    /// Scale between `mz / M0` and magnitude.
    pub alpha: f64,
}

impl EncodingParams {
    pub const DEFAULT_ALPHA: f64 = 2.0;

    pub fn new(t1: f64, omega_off: f64, alpha: f64) -> Result<Self> {
        if !(t1 > 0.0 && t1.is_finite()) {
            return Err(Error::InvalidArgument(format!("t1 must be positive, got {t1}")));
        }
        if !(omega_off != 0.0 && omega_off.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "omega_off must be finite and non-zero, got {omega_off}"
            )));
        }
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must exceed 1, got {alpha}"
            )));
        }
        Ok(EncodingParams { t1, omega_off, alpha })
    }
}

impl Default for EncodingParams {
    fn default() -> Self {
        // T1 of residual CHCl3 and a 100 Hz frame offset
        EncodingParams {
            t1: 7.6,
            omega_off: TAU * 100.0,
            alpha: Self::DEFAULT_ALPHA,
        }
    }
}

/// Recovery delay and precession delay realising `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EncodedDelays {
    pub tau_dec: f64,
    pub tau_d: f64,
}

pub fn encode(z: ComplexSample, p: &EncodingParams) -> Result<EncodedDelays> {
    let ratio = z.r / p.alpha;
    if ratio >= 1.0 {
        return Err(Error::Unencodable {
            r: z.r,
            alpha: p.alpha,
        });
    }
    // mz(t) = 1 - 2 exp(-t / T1) after inversion; solve mz = r / alpha
    let tau_dec = p.t1 * (2.0 / (1.0 - ratio)).ln();
    let turn = TAU / p.omega_off.abs();
    let tau_d = (z.theta / p.omega_off).rem_euclid(turn);
    Ok(EncodedDelays { tau_dec, tau_d })
}

/// Inversion, recovery, read pulse onto +x, then precession.
pub fn encoding_sequence(delays: EncodedDelays) -> PulseSequence {
    PulseSequence::new(vec![
        SequenceElement::HardPulse { beta: PI, phi: 0.0 },
        SequenceElement::Delay { tau: delays.tau_dec },
        SequenceElement::HardPulse {
            beta: FRAC_PI_2,
            phi: FRAC_PI_2,
        },
        SequenceElement::Delay { tau: delays.tau_d },
    ])
}

pub fn encoding_system(p: &EncodingParams) -> SpinSystem {
    SpinSystem::new(vec![
        Peak::new("CHCl3", p.omega_off, Some(p.t1)).expect("validated params")
    ])
    .expect("single peak")
}

/// Encodes `z`, simulates the sequence from equilibrium and decodes the
/// transverse signal back into a sample.
pub fn encode_decode_roundtrip(z: ComplexSample, p: &EncodingParams) -> Result<ComplexSample> {
    let delays = encode(z, p)?;
    let end = run_sequence(&encoding_system(p), &encoding_sequence(delays))?;
    let (signal, theta) = read_complex(&end);
    ComplexSample::new((p.alpha * signal).min(1.0), theta)
}

/// Distance between two phases on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(r: f64, theta: f64) -> ComplexSample {
        ComplexSample::new(r, theta).unwrap()
    }

    // Cartesian multiplication oracle.
    fn cartesian_product(a: ComplexSample, b: ComplexSample) -> (f64, f64) {
        let (ax, ay) = a.to_cartesian();
        let (bx, by) = b.to_cartesian();
        let (x, y) = (ax * bx - ay * by, ax * by + ay * bx);
        (x.hypot(y), normalize_angle(y.atan2(x)))
    }

    #[test]
    fn constructor_normalises() {
        assert!(ComplexSample::new(1.1, 0.0).is_err());
        assert!(ComplexSample::new(-0.1, 0.0).is_err());
        assert!((z(0.5, -FRAC_PI_2).theta() - 1.5 * PI).abs() < 1e-15);
        assert_eq!(z(0.5, TAU).theta(), 0.0);
    }

    #[test]
    fn ptruth_values() {
        assert_eq!(ptruth(0.0), 1.0);
        assert_eq!(ptruth(PI), 0.0);
        assert!((ptruth(FRAC_PI_2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mnot_values() {
        assert_eq!(mnot(z(1.0, 0.7)), z(0.0, 0.7));
        assert_eq!(mnot(z(0.25, PI / 3.0)), z(0.75, PI / 3.0));
        let s = z(0.3, 2.0);
        assert!((mnot(mnot(s)).r() - s.r()).abs() < 1e-15);
        assert_eq!(mnot(mnot(s)).theta(), s.theta());
    }

    #[test]
    fn mand_values() {
        assert_eq!(mand(z(1.0, 0.0), z(0.4, 1.0)).r(), 0.4);
        assert_eq!(mand(z(0.5, 0.0), z(0.5, 0.0)).r(), 0.25);
        let custom = mand_with(z(0.5, 1.0), z(0.5, 2.0), |a, _| a.theta()).unwrap();
        assert_eq!(custom.theta(), 1.0);
    }

    #[test]
    fn pxnor_crisp_values() {
        assert_eq!(pxnor(z(1.0, 0.0), z(1.0, 0.0)).theta(), 0.0);
        assert_eq!(pxnor(z(1.0, PI), z(1.0, PI)).theta(), 0.0);
        assert_eq!(pxnor(z(1.0, 0.0), z(1.0, PI)).theta(), PI);
        let custom = pxnor_with(z(0.2, 0.0), z(0.9, PI), |a, b| a.r().max(b.r())).unwrap();
        assert_eq!(custom.r(), 0.9);
        assert!(pxnor_with(z(0.2, 0.0), z(0.9, PI), |_, _| 2.0).is_err());
    }

    #[test]
    fn pxnor_agrees_with_boolean_xnor_at_crisp_phases() {
        for t1 in [0.0, PI] {
            for t2 in [0.0, PI] {
                let out = pxnor(z(1.0, t1), z(1.0, t2)).theta();
                let xnor = (ptruth(t1) == 1.0) == (ptruth(t2) == 1.0);
                assert_eq!(ptruth(out), if xnor { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn conjugate_examples() {
        assert!(conjugate_truth_check(PI / 3.0));
        assert!((ptruth(PI / 3.0) - ptruth(5.0 * PI / 3.0)).abs() < 1e-15);
        assert!(conjugate_truth_check(0.0));
        assert!(conjugate_truth_check(PI));
    }

    #[test]
    fn multiplication_examples() {
        let p = complex_multiply_via_logic(z(1.0, 0.0), z(0.3, 2.0));
        assert!((p.r() - 0.3).abs() < 1e-15 && (p.theta() - 2.0).abs() < 1e-15);

        let p = complex_multiply_via_logic(z(0.8, PI / 3.0), z(0.5, PI));
        assert!((p.r() - 0.4).abs() < 1e-15);
        assert!((p.theta() - 4.0 * PI / 3.0).abs() < 1e-12);

        let p = complex_multiply_via_logic(z(0.9, 1.5 * PI), z(0.9, 1.5 * PI));
        assert!((p.r() - 0.81).abs() < 1e-15);
        assert!((p.theta() - PI).abs() < 1e-12);
    }

    #[test]
    fn encode_delays() {
        let p = EncodingParams::new(3.0, 100.0, 2.0).unwrap();
        let d = encode(z(0.0, 0.0), &p).unwrap();
        assert!((d.tau_dec - 3.0 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(d.tau_d, 0.0);
        let d = encode(z(1.0, 0.0), &p).unwrap();
        assert!((d.tau_dec - 3.0 * 4f64.ln()).abs() < 1e-14);

        let neg = EncodingParams::new(3.0, -100.0, 2.0).unwrap();
        let d = encode(z(0.5, FRAC_PI_2), &neg).unwrap();
        assert!(d.tau_d >= 0.0);
        assert!(phase_distance(neg.omega_off * d.tau_d, FRAC_PI_2) < 1e-12);

        assert!(EncodingParams::new(3.0, 100.0, 1.0).is_err());
        assert!(EncodingParams::new(0.0, 100.0, 2.0).is_err());
        assert!(EncodingParams::new(3.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn unencodable_magnitude() {
        // alpha > 1 is enforced on construction, so build the degenerate case by hand
        let p = EncodingParams {
            t1: 1.0,
            omega_off: 1.0,
            alpha: 1.0,
        };
        assert!(matches!(encode(z(1.0, 0.0), &p), Err(Error::Unencodable { .. })));
    }

    #[test]
    fn roundtrip_examples() {
        let p = EncodingParams::default();
        let out = encode_decode_roundtrip(z(1.0, 0.0), &p).unwrap();
        assert!((out.r() - 1.0).abs() < 1e-9 && phase_distance(out.theta(), 0.0) < 1e-9);

        let out = encode_decode_roundtrip(z(0.0, 2.0), &p).unwrap();
        assert_eq!(out.r(), 0.0);
        assert_eq!(out.theta(), 0.0);

        let out = encode_decode_roundtrip(z(0.5, FRAC_PI_2), &p).unwrap();
        assert!((out.r() - 0.5).abs() < 1e-9 && phase_distance(out.theta(), FRAC_PI_2) < 1e-9);
    }

    proptest! {
        #[test]
        fn ptruth_range_and_symmetry(theta in 0.0..TAU) {
            let t = ptruth(theta);
            prop_assert!((0.0..=1.0).contains(&t));
            prop_assert!(conjugate_truth_check(theta));
        }

        #[test]
        fn mand_laws(a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64, t in 0.0..TAU) {
            let (za, zb, zc) = (z(a, t), z(b, 0.3), z(c, 1.1));
            prop_assert_eq!(mand(za, zb).r(), mand(zb, za).r());
            prop_assert!((mand(mand(za, zb), zc).r() - mand(za, mand(zb, zc)).r()).abs() < 1e-15);
            prop_assert_eq!(mand(za, z(1.0, 0.0)).r(), a);
            prop_assert_eq!(mand(za, z(0.0, 0.0)).r(), 0.0);
        }

        #[test]
        fn pxnor_laws(t1 in 0.0..TAU, t2 in 0.0..TAU, t3 in 0.0..TAU) {
            let (a, b, c) = (z(1.0, t1), z(1.0, t2), z(1.0, t3));
            prop_assert!(phase_distance(pxnor(a, b).theta(), pxnor(b, a).theta()) < 1e-12);
            prop_assert!(phase_distance(pxnor(pxnor(a, b), c).theta(), pxnor(a, pxnor(b, c)).theta()) < 1e-12);
            prop_assert!(phase_distance(pxnor(a, z(1.0, 0.0)).theta(), t1) < 1e-12);
        }

        #[test]
        fn mnot_preserves_phase(r in 0.0..=1.0f64, t in 0.0..TAU) {
            prop_assert_eq!(mnot(z(r, t)).theta(), z(r, t).theta());
        }

        #[test]
        fn product_matches_cartesian(r1 in 0.0..=1.0f64, t1 in 0.0..TAU, r2 in 0.0..=1.0f64, t2 in 0.0..TAU) {
            let (a, b) = (z(r1, t1), z(r2, t2));
            let p = complex_multiply_via_logic(a, b);
            let (r, theta) = cartesian_product(a, b);
            prop_assert!((p.r() - r).abs() < 1e-12);
            if r > 1e-9 {
                prop_assert!(phase_distance(p.theta(), theta) < 1e-12);
            }
        }

        #[test]
        fn roundtrip_recovers_sample(r in 0.0..=1.0f64, t in 0.0..TAU) {
            let s = z(r, t);
            let out = encode_decode_roundtrip(s, &EncodingParams::default()).unwrap();
            prop_assert!((out.r() - r).abs() < 1e-9);
            if r > 1e-6 {
                prop_assert!(phase_distance(out.theta(), s.theta()) < 1e-9);
            }
        }
    }
}
