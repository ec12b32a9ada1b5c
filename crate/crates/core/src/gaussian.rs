//! Gaussian-state observables of the stabilized squeezed coherent state:
//! stabilizing displacements, Bogoliubov amplitudes, output quadrature
//! means, squeezing spectrum and Wigner grids.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::OperatingPoint;

/// Displacement alpha = A* / (2 g*) that removes the linear terms from the
/// single-mode Hamiltonian i(g* a^2 - g a†^2) + i(A a† - A* a).
pub fn stabilizing_displacement(g: Complex64, a: Complex64) -> Result<Complex64> {
    if g.norm() == 0.0 {
        return Err(Error::NoSqueezing);
    }
    Ok(a.conj() / (2.0 * g.conj()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovAmplitudes {
    pub upsilon_s: Complex64,
    pub upsilon_i: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub e_s: Complex64,
    pub e_i: Complex64,
    pub xi: Complex64,
    /// Global phase of the product-state form. Unobservable, kept for completeness.
    pub global_phase: f64,
}

pub const DEFAULT_TAU: f64 = 1.0;

pub fn bogoliubov_amplitudes(point: &OperatingPoint, tau: f64) -> Result<BogoliubovAmplitudes> {
    if point.g() == 0.0 {
        return Err(Error::NoSqueezing);
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidConfig(format!("tau = {tau} must be finite and non-negative")));
    }
    let gs = point.squeeze();
    let (seed_s, seed_i) = (point.seed_s(), point.seed_i());
    let beta1 = (seed_s + seed_i) * FRAC_1_SQRT_2;
    let beta2 = (seed_s - seed_i) * FRAC_1_SQRT_2;
    let d1 = 2.0 * beta1 / gs;
    let d2 = 2.0 * beta2 / gs;
    let e_s = (d1 + d2) * FRAC_1_SQRT_2;
    let e_i = (d1 - d2) * FRAC_1_SQRT_2;
    let xi = gs * tau;

    let half = xi.norm() / 2.0;
    let (ch, sh) = (half.cosh(), half.sinh());
    let rot = Complex64::from_polar(1.0, point.pump_phase());
    let upsilon_s = (1.0 - ch) * e_i.conj() + rot * sh * e_s;
    let upsilon_i = (1.0 - ch) * e_s.conj() + rot * sh * e_i;

    let global_phase = (xi * (d1 * d1 - d2 * d2)).im / 2.0;

    Ok(BogoliubovAmplitudes {
        upsilon_s,
        upsilon_i,
        d1,
        d2,
        e_s,
        e_i,
        xi,
        global_phase,
    })
}

/// Output quadrature displacements of the symmetric (1) and antisymmetric (2)
/// modes in the frame rotated by phi_p/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureMeans {
    pub dx1: f64,
    pub dp1: f64,
    pub dx2: f64,
    pub dp2: f64,
}

pub fn quadrature_means(point: &OperatingPoint) -> QuadratureMeans {
    quadrature_means_in_frame(point, point.pump_phase())
}

/// Same as [`quadrature_means`] but rotating by `frame_phase / 2` instead of
/// the pump phase. `frame_phase = 0` gives the unrotated frame.
pub fn quadrature_means_in_frame(point: &OperatingPoint, frame_phase: f64) -> QuadratureMeans {
    let g = point.g();
    let pref = 2.0 * (2.0 * PI * point.gamma2()).sqrt();
    let rot = Complex64::from_polar(1.0, -frame_phase / 2.0);
    let sym = (point.seed_s() + point.seed_i()) * rot;
    let anti = (point.seed_s() - point.seed_i()) * rot;
    QuadratureMeans {
        dx1: pref / (1.0 + g) * sym.re,
        dp1: pref / (1.0 - g) * sym.im,
        dx2: pref / (1.0 - g) * anti.re,
        dp2: pref / (1.0 + g) * anti.im,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumSample {
    pub omega: f64,
    pub s: f64,
    pub v: f64,
    pub v_anti: f64,
}

/// Two-mode squeezing spectrum and variances at offset frequency `omega`.
///
/// The anti-squeezed branch uses g -> -g in the Lorentzian denominator.
pub fn squeezing_spectrum(point: &OperatingPoint, omega: f64) -> SpectrumSample {
    let g = point.g();
    let amp = 2.0 * point.eta() * g * point.gamma2();
    let w2 = 4.0 * omega * omega;
    let s = -amp / ((1.0 + g).powi(2) + w2);
    SpectrumSample {
        omega,
        s,
        v: 0.5 + s,
        v_anti: 0.5 + amp / ((1.0 - g).powi(2) + w2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezingParams {
    pub r_int: f64,
    /// `f64::INFINITY` at threshold.
    pub r_ext: f64,
}

pub fn squeezing_params(g: f64) -> Result<SqueezingParams> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::Threshold { g });
    }
    let r_int = 0.5 * g.ln_1p();
    let r_ext = if g == 1.0 {
        f64::INFINITY
    } else {
        g.ln_1p() - (-g).ln_1p()
    };
    Ok(SqueezingParams { r_int, r_ext })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Symmetric,
    Antisymmetric,
}

impl Mode {
    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Mode::Symmetric),
            2 => Ok(Mode::Antisymmetric),
            _ => Err(Error::InvalidConfig(format!("mode must be 1 or 2, got {k}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// Row-major, `values[ix * p_axis.len() + ip]`.
    pub values: Vec<f64>,
    pub mean: (f64, f64),
    pub variance: (f64, f64),
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|k| if k == n - 1 { hi } else { lo + step * k as f64 })
        .collect()
}

/// Gaussian Wigner function of one output mode at Omega = 0, means in the
/// unrotated (phi_p = 0) frame.
pub fn wigner_grid(
    point: &OperatingPoint,
    mode: Mode,
    x_range: (f64, f64),
    p_range: (f64, f64),
    n: usize,
) -> Result<WignerGrid> {
    if n < 2 {
        return Err(Error::InvalidConfig("grid needs at least 2 points per axis".into()));
    }
    if !(x_range.0 < x_range.1) || !(p_range.0 < p_range.1) {
        return Err(Error::InvalidConfig("grid ranges must satisfy lo < hi".into()));
    }
    let spec = squeezing_spectrum(point, 0.0);
    let means = quadrature_means_in_frame(point, 0.0);
    let (mean, variance) = match mode {
        Mode::Symmetric => ((means.dx1, means.dp1), (spec.v, spec.v_anti)),
        Mode::Antisymmetric => ((means.dx2, means.dp2), (spec.v_anti, spec.v)),
    };
    let norm = 1.0 / (2.0 * PI * (variance.0 * variance.1).sqrt());
    let x_axis = linspace(x_range.0, x_range.1, n);
    let p_axis = linspace(p_range.0, p_range.1, n);
    let mut values = Vec::with_capacity(n * n);
    for &x in &x_axis {
        for &p in &p_axis {
            let e = (x - mean.0).powi(2) / (2.0 * variance.0) + (p - mean.1).powi(2) / (2.0 * variance.1);
            values.push(norm * (-e).exp());
        }
    }
    Ok(WignerGrid {
        x_axis,
        p_axis,
        values,
        mean,
        variance,
    })
}

impl WignerGrid {
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.p_axis.len() + ip]
    }

    /// Trapezoidal integral over the grid.
    pub fn integral(&self) -> f64 {
        let weights = |axis: &[f64]| -> Vec<f64> {
            let n = axis.len();
            (0..n)
                .map(|k| {
                    let left = if k > 0 { axis[k] - axis[k - 1] } else { 0.0 };
                    let right = if k + 1 < n { axis[k + 1] - axis[k] } else { 0.0 };
                    0.5 * (left + right)
                })
                .collect()
        };
        let wx = weights(&self.x_axis);
        let wp = weights(&self.p_axis);
        let mut total = 0.0;
        for (ix, a) in wx.iter().enumerate() {
            for (ip, b) in wp.iter().enumerate() {
                total += a * b * self.value(ix, ip);
            }
        }
        total
    }

    /// Long-format CSV with columns `x,p,w`.
    pub fn write_long_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "p", "w"])?;
        for (ix, x) in self.x_axis.iter().enumerate() {
            for (ip, p) in self.p_axis.iter().enumerate() {
                w.write_record([fmt_f64(*x), fmt_f64(*p), fmt_f64(self.value(ix, ip))])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Dense matrix: header row holds the p-axis (after a leading `x\p` cell),
    /// each following row starts with its x value.
    pub fn write_matrix_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["x\\p".to_string()];
        header.extend(self.p_axis.iter().map(|p| fmt_f64(*p)));
        w.write_record(&header)?;
        for (ix, x) in self.x_axis.iter().enumerate() {
            let mut row = vec![fmt_f64(*x)];
            row.extend((0..self.p_axis.len()).map(|ip| fmt_f64(self.value(ix, ip))));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn displacement_examples() {
        let a = stabilizing_displacement(Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert!((a - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let a = stabilizing_displacement(0.5 * I, Complex64::new(0.3, 0.0)).unwrap();
        assert!((a - 0.3 * I).norm() < 1e-15);
        let a = stabilizing_displacement(Complex64::new(0.25, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(a.norm(), 0.0);
        assert!(matches!(
            stabilizing_displacement(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            Err(Error::NoSqueezing)
        ));
    }

    #[test]
    fn bogoliubov_examples() {
        let p = OperatingPoint::new(0.5, (0.0, 0.0), (0.0, 0.0), 0.3).unwrap();
        let b = bogoliubov_amplitudes(&p, 1.0).unwrap();
        assert_eq!(b.d1.norm() + b.d2.norm() + b.upsilon_s.norm() + b.upsilon_i.norm(), 0.0);

        let p = OperatingPoint::new(0.5, (0.1, 0.4), (0.2, -1.0), 0.3).unwrap();
        let b = bogoliubov_amplitudes(&p, 0.0).unwrap();
        assert!(b.upsilon_s.norm() < 1e-15 && b.upsilon_i.norm() < 1e-15);

        // mpmath, 40 digits: 0.088479686771438052701931893208671741
        let p = OperatingPoint::new(0.5, (0.1, 0.0), (0.1, 0.0), 0.0).unwrap();
        let b = bogoliubov_amplitudes(&p, 1.0).unwrap();
        assert!((b.upsilon_s - Complex64::new(0.088_479_686_771_438_05, 0.0)).norm() < 1e-15);
        assert!((b.d1.re - 0.565_685_424_949_238).abs() < 1e-14);
        assert!((b.e_s.re - 0.4).abs() < 1e-15);
        assert!((b.e_s - (b.d1 + b.d2) * FRAC_1_SQRT_2).norm() < 1e-16);
        assert!((b.e_i - (b.d1 - b.d2) * FRAC_1_SQRT_2).norm() < 1e-16);

        let p0 = OperatingPoint::new(0.0, (0.1, 0.0), (0.1, 0.0), 0.0).unwrap();
        assert!(bogoliubov_amplitudes(&p0, 1.0).is_err());
    }

    #[test]
    fn displacement_anchor() {
        let p = OperatingPoint::new(0.3, (1.0, 0.0), (1.0, 0.0), 0.0).unwrap();
        let m = quadrature_means(&p);
        // mpmath: 7.7050012309020232521932686732766609
        assert!(close(m.dx1, 7.705_001_230_902_023, 1e-12));
        assert_eq!(m.dx2, 0.0);
        assert_eq!(m.dp2, 0.0);
        assert_eq!(m.dp1, 0.0);

        let vac = OperatingPoint::new(0.3, (0.0, 0.0), (0.0, 0.0), 1.0).unwrap();
        let m = quadrature_means(&vac);
        assert_eq!([m.dx1, m.dp1, m.dx2, m.dp2], [0.0; 4]);
    }

    #[test]
    fn spectrum_examples() {
        let p = OperatingPoint::new(0.5, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
        let s = squeezing_spectrum(&p, 0.0);
        // mpmath: -0.44355732978487469505, 0.05644267021512530495
        assert!(close(s.s, -0.443_557_329_784_874_7, 1e-15));
        assert!(close(s.v, 0.056_442_670_215_125_3, 1e-15));
        let far = squeezing_spectrum(&p, 1e8);
        assert!(far.s.abs() < 1e-15 && close(far.v, 0.5, 1e-15));
        let vac = OperatingPoint::new(0.0, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
        for w in [0.0, 0.3, 10.0] {
            assert_eq!(squeezing_spectrum(&vac, w).v, 0.5);
        }
    }

    #[test]
    fn squeezing_param_examples() {
        let sp = squeezing_params(1.0).unwrap();
        assert!(close(sp.r_int, 0.346_573_590_279_972_65, 1e-15));
        assert!(sp.r_ext.is_infinite() && sp.r_ext > 0.0);
        assert_eq!(squeezing_params(0.0).unwrap(), SqueezingParams { r_int: 0.0, r_ext: 0.0 });
        assert!(close(squeezing_params(0.5).unwrap().r_ext, 3f64.ln(), 1e-14));
        assert!(squeezing_params(1.1).is_err());
        assert!(squeezing_params(-0.1).is_err());
    }

    #[test]
    fn wigner_vacuum_peak_and_norm() {
        let vac = OperatingPoint::new(0.0, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
        let w = wigner_grid(&vac, Mode::Symmetric, (-1.0, 1.0), (-1.0, 1.0), 3).unwrap();
        assert!(close(w.value(1, 1), 1.0 / PI, 1e-15));

        let p = OperatingPoint::new(0.6, (0.2, 0.3), (0.1, -0.2), 0.4).unwrap();
        for mode in [Mode::Symmetric, Mode::Antisymmetric] {
            let w = wigner_grid(&p, mode, (-30.0, 30.0), (-30.0, 30.0), 401).unwrap();
            assert!((w.integral() - 1.0).abs() < 1e-6, "{}", w.integral());
            assert!(w.values.iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn wigner_peak_at_displacement_anchor() {
        let p = OperatingPoint::new(0.3, (1.0, 0.0), (1.0, 0.0), 0.0).unwrap();
        let w = wigner_grid(&p, Mode::Symmetric, (6.0, 9.4), (-1.0, 1.0), 341).unwrap();
        let (imax, _) = w
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let (ix, ip) = (imax / w.p_axis.len(), imax % w.p_axis.len());
        assert!((w.x_axis[ix] - 7.7).abs() < 0.02);
        assert!(w.p_axis[ip].abs() < 0.01);
    }

    #[test]
    fn wigner_csv_layouts() {
        let p = OperatingPoint::new(0.3, (0.1, 0.0), (0.1, 0.0), 0.0).unwrap();
        let w = wigner_grid(&p, Mode::Antisymmetric, (-1.0, 1.0), (-2.0, 2.0), 3).unwrap();
        let mut long = Vec::new();
        w.write_long_csv(&mut long).unwrap();
        let long = String::from_utf8(long).unwrap();
        assert_eq!(long.lines().count(), 10);
        assert!(long.starts_with("x,p,w\n"));
        let mut dense = Vec::new();
        w.write_matrix_csv(&mut dense).unwrap();
        let dense = String::from_utf8(dense).unwrap();
        let header = dense.lines().next().unwrap();
        assert_eq!(header.split(',').count(), 4);
        assert!(header.contains("-2.0000000000000000e0"));
    }

    proptest! {
        #[test]
        fn spectrum_properties(g in 0.0..0.999f64, eta in 0.001..=1.0f64, w in -50.0..50.0f64, ratio in 0.0..1.0f64) {
            let p = OperatingPoint::new(g, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap()
                .with_eta(eta).unwrap().with_mirror_ratio(ratio).unwrap();
            let s = squeezing_spectrum(&p, w);
            prop_assert_eq!(s.s, squeezing_spectrum(&p, -w).s);
            prop_assert!(s.s.abs() <= squeezing_spectrum(&p, 0.0).s.abs());
            prop_assert!(s.v > 0.0 && s.v <= 0.5);
            prop_assert!(s.v_anti >= 0.5);
            prop_assert_eq!(s.v, 0.5 + s.s);
        }

        #[test]
        fn uncertainty_product_at_dc(g in 0.0..0.999f64, ratio in 0.0..1.0f64) {
            let p = OperatingPoint::new(g, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap()
                .with_mirror_ratio(ratio).unwrap();
            let s = squeezing_spectrum(&p, 0.0);
            prop_assert!(s.v * s.v_anti >= 0.25 - 1e-15);
        }

        #[test]
        fn spectrum_independent_of_seeds(g in 0.0..0.99f64, a in 0.0..2.0f64, b in 0.0..2.0f64, ph in -3.0..3.0f64, w in -5.0..5.0f64) {
            let p0 = OperatingPoint::new(g, (0.0, 0.0), (0.0, 0.0), 0.0).unwrap();
            let p1 = OperatingPoint::new(g, (a, ph), (b, -ph), 0.0).unwrap();
            prop_assert_eq!(squeezing_spectrum(&p0, w), squeezing_spectrum(&p1, w));
        }

        #[test]
        fn r_ext_dominates_r_int(g in 0.0..=1.0f64) {
            let sp = squeezing_params(g).unwrap();
            prop_assert!(sp.r_ext >= sp.r_int);
            if g > 1e-6 { prop_assert!(sp.r_ext > sp.r_int); }
        }

        #[test]
        fn squeezing_params_monotone(g in 0.0..0.99f64, dg in 1e-6..0.01f64) {
            let a = squeezing_params(g).unwrap();
            let b = squeezing_params(g + dg).unwrap();
            prop_assert!(b.r_int > a.r_int && b.r_ext > a.r_ext);
        }

        #[test]
        fn means_linear_in_seeds(g in 0.0..0.99f64, a in 0.0..2.0f64, b in 0.0..2.0f64, ps in -3.0..3.0f64, pi_ in -3.0..3.0f64, pp in -3.0..3.0f64) {
            let p1 = OperatingPoint::new(g, (a, ps), (b, pi_), pp).unwrap();
            let p2 = OperatingPoint::new(g, (2.0 * a, ps), (2.0 * b, pi_), pp).unwrap();
            let (m1, m2) = (quadrature_means(&p1), quadrature_means(&p2));
            for (x, y) in [(m1.dx1, m2.dx1), (m1.dp1, m2.dp1), (m1.dx2, m2.dx2), (m1.dp2, m2.dp2)] {
                prop_assert!((2.0 * x - y).abs() <= 1e-12 * (1.0 + y.abs()));
            }
        }
    }
}
