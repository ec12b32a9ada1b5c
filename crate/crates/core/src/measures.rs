//! Nonclassicality measures built from the second-order moments.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::OperatingPoint;
use crate::som::{qs, som, Location, SomTriple};

const NO_CROSS: &str = "no cross-correlation";
const NO_SPDC: &str = "normalization singular at g = 0 or g = 1";

pub fn pi_a(som: &SomTriple) -> Result<f64> {
    if som.gamma_si == 0.0 {
        return Err(Error::UndefinedMeasure(NO_CROSS));
    }
    Ok((som.gamma_s * som.gamma_i).sqrt() / som.gamma_si.abs())
}

pub fn pi_l(som: &SomTriple) -> Result<f64> {
    if som.gamma_si == 0.0 {
        return Err(Error::UndefinedMeasure(NO_CROSS));
    }
    Ok(0.5 * (som.gamma_s + som.gamma_i) / som.gamma_si.abs())
}

/// Value of both ratio measures for unseeded down-conversion, 2g^2/(1+g^2).
pub fn pi_spdc_bound(g: f64) -> f64 {
    2.0 * g * g / (1.0 + g * g)
}

/// Arithmetic-minus-cross difference; negative values are nonclassical.
pub fn pi_raw(som: &SomTriple) -> f64 {
    0.5 * (som.gamma_s + som.gamma_i) - som.gamma_si
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PiComponents {
    pub inj: f64,
    pub fc: f64,
    pub spdc: f64,
    pub stpdc: f64,
}

impl PiComponents {
    pub fn sum(&self) -> f64 {
        self.inj + self.fc + self.spdc + self.stpdc
    }

    /// Components divided by |spdc|, so that the spdc entry is exactly -1.
    pub fn normalized(&self) -> Result<PiComponents> {
        if self.spdc == 0.0 {
            return Err(Error::UndefinedMeasure(NO_SPDC));
        }
        let n = self.spdc.abs();
        Ok(PiComponents {
            inj: self.inj / n,
            fc: self.fc / n,
            spdc: -1.0,
            stpdc: self.stpdc / n,
        })
    }
}

/// Injection, frequency-conversion, spontaneous and stimulated parts of the
/// difference indicator (before the Qs^2 prefactor).
pub fn pi_components(point: &OperatingPoint) -> PiComponents {
    let g = point.g();
    let (a, b) = (point.as_mag(), point.ai_mag());
    let p2 = PI * PI;
    PiComponents {
        inj: 8.0 * p2 * (a * a - b * b).powi(2),
        fc: 4.0 * p2 * g * a * b * (1.0 + point.phi().cos()),
        spdc: -(p2 / 4.0) * g * g * (1.0 - g * g),
        stpdc: -2.0 * p2 * g * g * (a * a + b * b) - 4.0 * p2 * g * a * b,
    }
}

/// Intracavity difference indicator rebuilt as Qs^2 times the component sum.
pub fn pi_raw_decomposed(point: &OperatingPoint) -> Result<f64> {
    let q = qs(point.g())?;
    Ok(q * q * pi_components(point).sum())
}

/// Normalized indicator; -1 for pure down-conversion, negative is nonclassical.
pub fn pi_n(point: &OperatingPoint) -> Result<f64> {
    let g = point.g();
    if !(g > 0.0 && g < 1.0) {
        return Err(Error::UndefinedMeasure(NO_SPDC));
    }
    let (a2, th) = (point.a_total().powi(2), point.theta());
    let num = 32.0 * a2 * a2 * (2.0 * th).cos().powi(2)
        + 8.0 * a2 * g * ((2.0 * th).sin() * point.phi().cos() - g);
    Ok(num / (g * g * (1.0 - g * g)) - 1.0)
}

/// The normalized indicator at g = 1/sqrt(2), where the spontaneous term peaks.
pub fn pi_n_critical(a_total: f64, theta: f64, phi: f64) -> f64 {
    let a2 = a_total * a_total;
    128.0 * a2 * a2 * (2.0 * theta).cos().powi(2)
        + 16.0 * a2 * (SQRT_2 * (2.0 * theta).sin() * phi.cos() - 1.0)
        - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classicality {
    Nonclassical,
    Boundary,
    Classical,
}

impl Classicality {
    /// Strict comparison against `threshold`; equality is the boundary.
    pub fn below(value: f64, threshold: f64) -> Self {
        if value < threshold {
            Classicality::Nonclassical
        } else if value == threshold {
            Classicality::Boundary
        } else {
            Classicality::Classical
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureSet {
    pub location: Location,
    pub pi_a: f64,
    pub pi_l: f64,
    pub pi_raw: f64,
    /// Absent at g = 0.
    pub pi_n: Option<f64>,
    pub pi_spdc: f64,
    pub components: PiComponents,
    pub normalized: Option<PiComponents>,
    pub class_a: Classicality,
    pub class_l: Classicality,
    pub class_n: Option<Classicality>,
}

pub fn measure_set(point: &OperatingPoint, location: Location) -> Result<MeasureSet> {
    let t = som(point, location)?;
    let (a, l) = (pi_a(&t)?, pi_l(&t)?);
    let components = pi_components(point);
    let n = pi_n(point).ok();
    Ok(MeasureSet {
        location,
        pi_a: a,
        pi_l: l,
        pi_raw: pi_raw(&t),
        pi_n: n,
        pi_spdc: pi_spdc_bound(point.g()),
        components,
        normalized: components.normalized().ok(),
        class_a: Classicality::below(a, 1.0),
        class_l: Classicality::below(l, 1.0),
        class_n: n.map(|v| Classicality::below(v, 0.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::som::{som_intracavity, som_output};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn pt(g: f64, a: f64, b: f64, phi: f64) -> OperatingPoint {
        OperatingPoint::new(g, (a, phi), (b, 0.0), 0.0).unwrap()
    }

    #[test]
    fn unseeded_values() {
        let t = som_intracavity(&pt(0.3, 0.0, 0.0, 0.0)).unwrap();
        assert!((pi_a(&t).unwrap() - 0.18 / 1.09).abs() < 1e-14);
        let t = som_intracavity(&pt(0.5, 0.0, 0.0, 0.0)).unwrap();
        assert!((pi_l(&t).unwrap() - 0.4).abs() < 1e-14);
        // mpmath: -3.2898681336964528...
        assert!((pi_raw(&t) - -3.289_868_133_696_453).abs() < 1e-13);
        assert_eq!(pi_spdc_bound(0.0), 0.0);
        assert!((pi_spdc_bound(0.3) - 0.165_137_614_678_899_1).abs() < 1e-15);
        let v = som_intracavity(&pt(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(pi_raw(&v), 0.0);
        assert!(matches!(pi_a(&v), Err(Error::UndefinedMeasure(_))));
    }

    #[test]
    fn coherent_limit() {
        let t = som_intracavity(&pt(0.0, 0.2, 0.2, 0.4)).unwrap();
        assert!((pi_a(&t).unwrap() - 1.0).abs() < 1e-14);
        assert!((pi_l(&t).unwrap() - 1.0).abs() < 1e-14);
        let t = som_intracavity(&pt(0.0, 0.1, 0.3, 0.4)).unwrap();
        assert!((pi_a(&t).unwrap() - 1.0).abs() < 1e-14);
        assert!(pi_l(&t).unwrap() > 1.0);
    }

    #[test]
    fn balanced_and_asymmetric() {
        let t = som_intracavity(&pt(0.4, 0.2, 0.2, 0.9)).unwrap();
        assert!((pi_a(&t).unwrap() - pi_l(&t).unwrap()).abs() < 1e-15);
        let t = som_intracavity(&pt(0.3, 0.09, 0.18, 0.0)).unwrap();
        assert!(pi_l(&t).unwrap() >= pi_a(&t).unwrap());
    }

    #[test]
    fn component_examples() {
        let c = pi_components(&pt(0.4, 0.3, 0.1, PI));
        assert!(c.fc.abs() < 1e-15);
        assert_eq!(pi_components(&pt(0.4, 0.2, 0.2, 0.3)).inj, 0.0);
        let c = pi_components(&pt(FRAC_1_SQRT_2, 0.1, 0.2, 0.0));
        assert!((c.spdc + PI * PI / 16.0).abs() < 1e-15);
        let z = pi_components(&pt(0.0, 0.1, 0.2, 0.0));
        assert!(z.normalized().is_err());
    }

    #[test]
    fn pi_n_examples() {
        for g in [0.1, 0.5, 0.9] {
            assert!((pi_n(&pt(g, 0.0, 0.0, 0.0)).unwrap() + 1.0).abs() < 1e-15);
        }
        // mpmath: -0.023199023199023199...
        for phi in [0.0, 1.0, PI] {
            let p = OperatingPoint::from_polar(0.25, 0.0, 0.3, phi).unwrap();
            assert!((pi_n(&p).unwrap() - -0.023_199_023_199_023_2).abs() < 1e-13);
        }
        // mpmath: -1.3862741699796952...
        assert!((pi_n_critical(0.1, PI / 4.0, PI) - -1.386_274_169_979_695_2).abs() < 1e-15);
        assert_eq!(pi_n_critical(0.0, 0.3, 0.3), -1.0);
        assert!(pi_n(&pt(0.0, 0.1, 0.1, 0.0)).is_err());
    }

    #[test]
    fn critical_form_on_grid() {
        for k in 0..100 {
            let a = 0.5 * (k % 10) as f64 / 9.0;
            let th = (PI / 2.0) * (k / 10) as f64 / 9.0;
            let phi = -PI + 0.37 * k as f64 % (2.0 * PI);
            let p = OperatingPoint::from_polar(a, th, FRAC_1_SQRT_2, phi).unwrap();
            let lhs = pi_n(&p).unwrap();
            let rhs = pi_n_critical(a, th, p.phi());
            assert!((lhs - rhs).abs() <= 1e-14 * (1.0 + rhs.abs()) * 10.0, "{lhs} {rhs}");
        }
    }

    #[test]
    fn classicality_boundary() {
        assert_eq!(Classicality::below(0.0, 0.0), Classicality::Boundary);
        assert_eq!(Classicality::below(1.0, 1.0), Classicality::Boundary);
        assert_eq!(Classicality::below(-1e-300, 0.0), Classicality::Nonclassical);
        let m = measure_set(&pt(0.3, 0.0, 0.0, 0.0), Location::Extra).unwrap();
        assert_eq!(m.class_a, Classicality::Nonclassical);
        assert_eq!(m.class_n, Some(Classicality::Nonclassical));
        let m = measure_set(&pt(0.0, 0.1, 0.1, 0.0), Location::Intra).unwrap();
        assert!(m.pi_n.is_none() && m.normalized.is_none());
    }

    fn arb_point() -> impl Strategy<Value = OperatingPoint> {
        (0.05..0.95f64, 0.0..0.5f64, 0.0..0.5f64, -PI..PI, -PI..PI, -PI..PI).prop_map(
            |(g, a, b, ps, pi_, pp)| OperatingPoint::new(g, (a, ps), (b, pi_), pp).unwrap(),
        )
    }

    proptest! {
        #[test]
        fn cavity_invariance(p in arb_point()) {
            let (i, o) = (som_intracavity(&p).unwrap(), som_output(&p).unwrap());
            prop_assert!((pi_a(&i).unwrap() - pi_a(&o).unwrap()).abs() <= 4.0 * f64::EPSILON * pi_a(&i).unwrap());
            prop_assert!((pi_l(&i).unwrap() - pi_l(&o).unwrap()).abs() <= 4.0 * f64::EPSILON * pi_l(&i).unwrap());
        }

        #[test]
        fn am_gm(p in arb_point()) {
            let t = som_intracavity(&p).unwrap();
            prop_assert!(pi_l(&t).unwrap() >= pi_a(&t).unwrap() * (1.0 - 1e-15));
        }

        #[test]
        fn decomposition_identity(p in arb_point()) {
            let direct = pi_raw(&som_intracavity(&p).unwrap());
            let split = pi_raw_decomposed(&p).unwrap();
            let t = som_intracavity(&p).unwrap();
            // relative to the size of the moments entering the difference
            let scale = t.gamma_s.max(t.gamma_i).max(t.gamma_si);
            prop_assert!((direct - split).abs() <= 1e-12 * scale, "{} vs {}", direct, split);
        }

        #[test]
        fn sign_contracts(p in arb_point()) {
            let c = pi_components(&p);
            prop_assert!(c.inj >= 0.0 && c.fc >= 0.0 && c.spdc < 0.0 && c.stpdc <= 0.0);
            if p.a_total() > 0.0 { prop_assert!(c.stpdc < 0.0); }
            prop_assert_eq!(c.normalized().unwrap().spdc, -1.0);
        }

        #[test]
        fn pi_n_is_normalized_sum(p in arb_point()) {
            let s = pi_components(&p).normalized().unwrap();
            let v = pi_n(&p).unwrap();
            prop_assert!((s.sum() - v).abs() <= 1e-10 * (1.0 + v.abs()));
        }

        #[test]
        fn phi_only_through_fc(g in 0.05..0.95f64, a in 0.0..0.5f64, which in 0usize..2, phi in -3.0..3.0f64) {
            let (sa, sb) = if which == 0 { (a, 0.0) } else { (0.0, a) };
            let h = 1e-6;
            let lo = pi_n(&pt(g, sa, sb, phi - h)).unwrap();
            let hi = pi_n(&pt(g, sa, sb, phi + h)).unwrap();
            prop_assert!(((hi - lo) / (2.0 * h)).abs() < 1e-6);
        }
    }
}
