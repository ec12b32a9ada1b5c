//! Root finding and minimization along one sweep axis.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::analysis::sweep::{point_on_axis, Axis, Hold};
use crate::error::{Error, Result};
use crate::measures::{pi_a, pi_l, pi_n};
use crate::params::OperatingPoint;
use crate::som::{som, Location};

pub const DEFAULT_AXIS_TOL: f64 = 1e-8;

/// Bisection for a sign change of `f` on [lo, hi].
pub fn bisect<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section minimization on [lo, hi]; returns (argmin, min).
pub fn golden_section<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    PiLCrosses1,
    PiACrosses1,
    PiNCrosses0,
}

impl Criterion {
    /// Signed distance from the classical boundary.
    pub fn offset(self, point: &OperatingPoint, location: Location) -> Result<f64> {
        Ok(match self {
            Criterion::PiLCrosses1 => pi_l(&som(point, location)?)? - 1.0,
            Criterion::PiACrosses1 => pi_a(&som(point, location)?)? - 1.0,
            Criterion::PiNCrosses0 => pi_n(point)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionQuery {
    pub criterion: Criterion,
    pub axis: Axis,
    pub hold: Option<Hold>,
    pub bracket: (f64, f64),
    pub tol: f64,
    pub point: OperatingPoint,
    pub location: Location,
}

impl TransitionQuery {
    pub fn new(criterion: Criterion, axis: Axis, bracket: (f64, f64), point: OperatingPoint) -> Self {
        Self {
            criterion,
            axis,
            hold: None,
            bracket,
            tol: DEFAULT_AXIS_TOL,
            point,
            location: Location::Extra,
        }
    }

    pub fn hold(mut self, hold: Hold) -> Self {
        self.hold = Some(hold);
        self
    }

    fn offset_at(&self, x: f64) -> Result<f64> {
        let hold = self.hold.or(match self.axis {
            Axis::ATotal => Some(Hold::Theta),
            Axis::Theta => Some(Hold::ATotal),
            Axis::AiMag => Some(Hold::AsMag),
            _ => None,
        });
        let p = point_on_axis(&self.point, self.axis, hold, x)?;
        self.criterion.offset(&p, self.location)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    pub value: f64,
    /// Criterion offsets just below and above the reported value.
    pub offset_below: f64,
    pub offset_above: f64,
}

pub fn find_transition(query: &TransitionQuery) -> Result<Transition> {
    let (lo, hi) = query.bracket;
    if !(lo < hi) || !(query.tol > 0.0) {
        return Err(Error::InvalidSweep(format!("bad bracket [{lo}, {hi}] or tolerance {}", query.tol)));
    }
    let x = bisect(|x| query.offset_at(x), lo, hi, query.tol)?;
    let h = query.tol;
    Ok(Transition {
        value: x,
        offset_below: query.offset_at((x - h).max(lo))?,
        offset_above: query.offset_at((x + h).min(hi))?,
    })
}

pub const THETA_SCAN_POINTS: usize = 64;
pub const THETA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalTheta {
    pub theta: f64,
    pub theta_over_pi: f64,
    pub pi_n: f64,
    pub unimodal: bool,
    pub warning: Option<String>,
}

/// Minimizes the normalized indicator over the seeding angle. With
/// `Hold::AiMag` the idler seed stays fixed and theta ranges over
/// [0, pi/2 - `edge`]; otherwise the total amplitude is held.
pub fn find_optimal_theta(point: &OperatingPoint, hold: Hold, edge: f64) -> Result<OptimalTheta> {
    if !matches!(hold, Hold::AiMag | Hold::ATotal) {
        return Err(Error::InvalidSweep("theta search holds ai_mag or a_total".into()));
    }
    let hi = FRAC_PI_2 - edge;
    if !(edge > 0.0 && hi > 0.0) {
        return Err(Error::InvalidSweep(format!("edge {edge} outside (0, pi/2)")));
    }
    let f = |t: f64| pi_n(&point_on_axis(point, Axis::Theta, Some(hold), t)?);
    let step = hi / (THETA_SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..THETA_SCAN_POINTS).map(|k| step * k as f64).collect();
    let vals = grid.iter().map(|&t| f(t)).collect::<Result<Vec<f64>>>()?;

    // unimodal: differences change sign at most once, from falling to rising
    let signs: Vec<i8> = vals
        .windows(2)
        .map(|w| (w[1] - w[0]).partial_cmp(&0.0).map_or(0, |o| o as i8))
        .filter(|s| *s != 0)
        .collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let unimodal = changes == 0 || (changes == 1 && signs[0] < 0);

    let k = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("non-empty grid");
    let lo = grid[k.saturating_sub(1)];
    let up = grid[(k + 1).min(THETA_SCAN_POINTS - 1)];
    let (theta, value) = golden_section(f, lo, up, THETA_TOL)?;
    let (theta, value) = if vals[k] < value { (grid[k], vals[k]) } else { (theta, value) };
    Ok(OptimalTheta {
        theta,
        theta_over_pi: theta / std::f64::consts::PI,
        pi_n: value,
        unimodal,
        warning: (!unimodal).then(|| {
            "pre-scan is not unimodal; refined the global grid minimum locally".to_string()
        }),
    })
}
