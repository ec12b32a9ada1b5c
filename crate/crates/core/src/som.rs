//! Closed-form second-order moments of the seeded two-mode field.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::OperatingPoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveAmplitudes {
    #[serde(rename = "As")]
    pub a_s: Complex64,
    #[serde(rename = "Ai")]
    pub a_i: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Intra,
    Extra,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SomTriple {
    pub gamma_s: f64,
    pub gamma_i: f64,
    pub gamma_si: f64,
    pub location: Location,
}

/// Qs = 2 / (1 - g^2).
pub fn qs(g: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&g) {
        return Err(Error::Threshold { g });
    }
    Ok(2.0 / (1.0 - g * g))
}

pub fn effective_amplitudes(point: &OperatingPoint) -> EffectiveAmplitudes {
    let root = (2.0 * PI).sqrt();
    let gs = point.squeeze();
    let (s, i) = (point.seed_s(), point.seed_i());
    EffectiveAmplitudes {
        a_s: root * (s - gs * i.conj()),
        a_i: root * (i - gs * s.conj()),
    }
}

fn self_term(g: f64, q: f64, a2: f64) -> f64 {
    (PI * PI / 2.0) * g.powi(4) * q * q + 2.0 * PI * g * g * q.powi(3) * a2 + q.powi(4) * a2 * a2
}

pub fn som_intracavity(point: &OperatingPoint) -> Result<SomTriple> {
    let g = point.g();
    let q = qs(g)?;
    let amp = effective_amplitudes(point);
    let (s2, i2) = (amp.a_s.norm_sqr(), amp.a_i.norm_sqr());
    let pump: Complex64 = point.squeeze().conj() * amp.a_s * amp.a_i;
    let gamma_si = (PI * PI / 4.0) * g * g * (1.0 + g * g) * q * q - PI * q.powi(3) * pump.re
        + (PI / 2.0) * g * g * (s2 + i2) * q.powi(3)
        + s2 * i2 * q.powi(4);
    Ok(SomTriple {
        gamma_s: self_term(g, q, s2),
        gamma_i: self_term(g, q, i2),
        gamma_si,
        location: Location::Intra,
    })
}

/// Moments of the transmitted field: gamma2^2 times the intracavity values.
pub fn som_output(point: &OperatingPoint) -> Result<SomTriple> {
    let t = som_intracavity(point)?;
    let k = point.gamma2() * point.gamma2();
    Ok(SomTriple {
        gamma_s: k * t.gamma_s,
        gamma_i: k * t.gamma_i,
        gamma_si: k * t.gamma_si,
        location: Location::Extra,
    })
}

pub fn som(point: &OperatingPoint, location: Location) -> Result<SomTriple> {
    match location {
        Location::Intra => som_intracavity(point),
        Location::Extra => som_output(point),
    }
}

/// The single worked contraction term g^2 gamma2^2 (pi / (1 - g^2))^2,
/// used to anchor the contraction oracle.
pub fn gamma_s1_term(point: &OperatingPoint) -> Result<f64> {
    let g = point.g();
    qs(g)?;
    let gamma2 = point.gamma2();
    Ok(g * g * gamma2 * gamma2 * (PI / (1.0 - g * g)).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn effective_amplitude_examples() {
        let z = OperatingPoint::new(0.5, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
        let e = effective_amplitudes(&z);
        assert_eq!(e.a_s.norm() + e.a_i.norm(), 0.0);

        let p = OperatingPoint::new(0.5, (0.2, 0.0), (0.2, 0.0), 0.0).unwrap();
        let e = effective_amplitudes(&p);
        // mpmath: sqrt(2 pi) * 0.1 = 0.25066282746310005024
        assert!((e.a_s.re - 0.250_662_827_463_100_05).abs() < 1e-15);
        assert_eq!(e.a_s, e.a_i);

        let p = OperatingPoint::new(0.4, (0.3, 0.5), (0.1, -1.2), 0.7).unwrap();
        let q = OperatingPoint::new(0.4, (0.1, -1.2), (0.3, 0.5), 0.7).unwrap();
        let (a, b) = (effective_amplitudes(&p), effective_amplitudes(&q));
        assert!((a.a_s - b.a_i).norm() < 1e-15 && (a.a_i - b.a_s).norm() < 1e-15);
    }

    #[test]
    fn zero_seed_values() {
        let p = OperatingPoint::new(0.5, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
        let t = som_intracavity(&p).unwrap();
        // mpmath: 2.1932454224643018..., 5.4831135561607547...
        assert!(rel(t.gamma_s, 2.193_245_422_464_302) < 1e-14);
        assert_eq!(t.gamma_s, t.gamma_i);
        assert!(rel(t.gamma_si, 5.483_113_556_160_755) < 1e-14);

        let v = OperatingPoint::new(0.0, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
        let t = som_intracavity(&v).unwrap();
        assert_eq!([t.gamma_s, t.gamma_i, t.gamma_si], [0.0; 3]);
    }

    #[test]
    fn output_scaling() {
        let p = OperatingPoint::new(0.5, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
        let (a, b) = (som_intracavity(&p).unwrap(), som_output(&p).unwrap());
        let k = p.gamma2().powi(2);
        assert_eq!(b.gamma_s, k * a.gamma_s);
        assert_eq!(b.location, Location::Extra);
        assert!(rel(b.gamma_s, 2.193_245_422_464_302 / (1.002f64 * 1.002)) < 1e-14);

        let unit = p.with_gamma2(1.0).unwrap();
        let (a, b) = (som_intracavity(&unit).unwrap(), som_output(&unit).unwrap());
        assert_eq!((a.gamma_s, a.gamma_i, a.gamma_si), (b.gamma_s, b.gamma_i, b.gamma_si));
    }

    #[test]
    fn worked_term() {
        let p = OperatingPoint::new(0.5, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
        // mpmath: 4.3689973794214004...
        assert!(rel(gamma_s1_term(&p).unwrap(), 4.368_997_379_421_4) < 1e-14);
        assert_eq!(gamma_s1_term(&p.with_g(0.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn threshold_rejected() {
        assert!(matches!(qs(1.0), Err(Error::Threshold { .. })));
    }

    fn arb_point() -> impl Strategy<Value = OperatingPoint> {
        (0.0..0.99f64, 0.0..1.0f64, 0.0..1.0f64, -PI..PI, -PI..PI, -PI..PI).prop_map(
            |(g, a, b, ps, pi_, pp)| OperatingPoint::new(g, (a, ps), (b, pi_), pp).unwrap(),
        )
    }

    proptest! {
        #[test]
        fn seed_swap_symmetry(p in arb_point()) {
            let q = OperatingPoint::new(
                p.g(), (p.ai_mag(), p.seed_i_phase()), (p.as_mag(), p.seed_s_phase()), p.pump_phase(),
            ).unwrap();
            let (a, b) = (som_intracavity(&p).unwrap(), som_intracavity(&q).unwrap());
            prop_assert!(rel(a.gamma_s, b.gamma_i) < 1e-12 || (a.gamma_s - b.gamma_i).abs() < 1e-14);
            prop_assert!(rel(a.gamma_i, b.gamma_s) < 1e-12 || (a.gamma_i - b.gamma_s).abs() < 1e-14);
            prop_assert!(rel(a.gamma_si, b.gamma_si) < 1e-12 || (a.gamma_si - b.gamma_si).abs() < 1e-14);
        }

        #[test]
        fn cross_term_depends_only_on_phi(p in arb_point(), d in -3.0..3.0f64) {
            let q = OperatingPoint::new(
                p.g(), (p.as_mag(), p.seed_s_phase() + d), (p.ai_mag(), p.seed_i_phase()), p.pump_phase() + d,
            ).unwrap();
            let (a, b) = (som_intracavity(&p).unwrap(), som_intracavity(&q).unwrap());
            prop_assert!((a.gamma_si - b.gamma_si).abs() <= 1e-11 * (1.0 + a.gamma_si.abs()));
            prop_assert!((a.gamma_s - b.gamma_s).abs() <= 1e-11 * (1.0 + a.gamma_s.abs()));
        }

        #[test]
        fn self_term_depends_on_phases_via_as(p in arb_point(), d in -3.0..3.0f64) {
            // a common rotation of both seeds plus twice that of the pump leaves |As| fixed
            let q = OperatingPoint::new(
                p.g(), (p.as_mag(), p.seed_s_phase() + d), (p.ai_mag(), p.seed_i_phase() + d), p.pump_phase() + 2.0 * d,
            ).unwrap();
            let (ea, eb) = (effective_amplitudes(&p), effective_amplitudes(&q));
            prop_assert!((ea.a_s.norm() - eb.a_s.norm()).abs() < 1e-12);
            let (a, b) = (som_intracavity(&p).unwrap(), som_intracavity(&q).unwrap());
            prop_assert!((a.gamma_s - b.gamma_s).abs() <= 1e-11 * (1.0 + a.gamma_s));
        }

        #[test]
        fn zero_seed_ratio(g in 0.001..0.999f64) {
            let p = OperatingPoint::new(g, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
            let t = som_intracavity(&p).unwrap();
            prop_assert!(rel(t.gamma_s / t.gamma_si, 2.0 * g * g / (1.0 + g * g)) < 1e-13);
        }

        #[test]
        fn sign_and_growth(p in arb_point(), dg in 0.0001..0.01f64) {
            let t = som_intracavity(&p).unwrap();
            prop_assert!(t.gamma_s >= 0.0 && t.gamma_i >= 0.0);
            if p.g() > 0.0 { prop_assert!(t.gamma_si > 0.0); }
            if p.g() + dg < 0.999 {
                // zero-seed moments grow monotonically toward threshold
                let z = OperatingPoint::new(p.g(), (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
                let (a, b) = (som_intracavity(&z).unwrap(), som_intracavity(&z.with_g(p.g() + dg).unwrap()).unwrap());
                prop_assert!(b.gamma_s > a.gamma_s && b.gamma_si > a.gamma_si);
            }
        }
    }
}
