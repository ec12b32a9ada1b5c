//! One-dimensional parameter sweeps producing fixed-column tables.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{try_map, Exec};
use crate::gaussian::{fmt_f64, quadrature_means, squeezing_spectrum};
use crate::measures::{pi_a, pi_components, pi_l, pi_n, pi_raw, pi_spdc_bound};
use crate::params::OperatingPoint;
use crate::som::{som, Location};

/// Upper end used for sweeps over g, which must stay below threshold.
pub const G_SWEEP_MAX: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Phi,
    Theta,
    ATotal,
    G,
    AiMag,
    Omega,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Axis::Phi => "phi",
            Axis::Theta => "theta",
            Axis::ATotal => "a_total",
            Axis::G => "g",
            Axis::AiMag => "ai_mag",
            Axis::Omega => "omega",
        }
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "phi" => Axis::Phi,
            "theta" => Axis::Theta,
            "a_total" | "a" => Axis::ATotal,
            "g" => Axis::G,
            "ai_mag" | "ai" => Axis::AiMag,
            "omega" => Axis::Omega,
            _ => return Err(Error::InvalidSweep(format!("unknown axis `{s}`"))),
        })
    }
}

/// Which seed quantity stays fixed while the axis moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hold {
    Theta,
    ATotal,
    AsMag,
    AiMag,
}

impl FromStr for Hold {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "theta" => Hold::Theta,
            "a_total" => Hold::ATotal,
            "as_mag" => Hold::AsMag,
            "ai_mag" => Hold::AiMag,
            _ => return Err(Error::InvalidSweep(format!("unknown hold `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    PiA,
    PiL,
    PiN,
    PiRaw,
    PiSpdc,
    Components,
    S,
    V,
    VAnti,
    Means,
}

impl Quantity {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::PiA => &["pi_a"],
            Quantity::PiL => &["pi_l"],
            Quantity::PiN => &["pi_n"],
            Quantity::PiRaw => &["pi_raw"],
            Quantity::PiSpdc => &["pi_spdc"],
            Quantity::Components => &[
                "inj", "fc", "spdc", "stpdc", "n_inj", "n_fc", "n_spdc", "n_stpdc",
            ],
            Quantity::S => &["S"],
            Quantity::V => &["V"],
            Quantity::VAnti => &["V_anti"],
            Quantity::Means => &["dx1", "dp1", "dx2", "dp2"],
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "pi_a" => Quantity::PiA,
            "pi_l" => Quantity::PiL,
            "pi_n" => Quantity::PiN,
            "pi_raw" => Quantity::PiRaw,
            "pi_spdc" => Quantity::PiSpdc,
            "components" => Quantity::Components,
            "s" => Quantity::S,
            "v" => Quantity::V,
            "v_anti" => Quantity::VAnti,
            "means" => Quantity::Means,
            _ => return Err(Error::InvalidSweep(format!("unknown quantity `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub point: OperatingPoint,
    /// Defaults per axis: theta for a_total, a_total for theta, as_mag for ai_mag.
    pub hold: Option<Hold>,
    pub quantities: Vec<Quantity>,
    pub location: Location,
}

impl SweepSpec {
    pub fn new(axis: Axis, lo: f64, hi: f64, n: usize, point: OperatingPoint, quantities: Vec<Quantity>) -> Self {
        Self {
            axis,
            lo,
            hi,
            n,
            point,
            hold: None,
            quantities,
            location: Location::Extra,
        }
    }

    pub fn hold(mut self, hold: Hold) -> Self {
        self.hold = Some(hold);
        self
    }

    fn effective_hold(&self) -> Option<Hold> {
        self.hold.or(match self.axis {
            Axis::ATotal => Some(Hold::Theta),
            Axis::Theta => Some(Hold::ATotal),
            Axis::AiMag => Some(Hold::AsMag),
            _ => None,
        })
    }

    fn validate(&self) -> Result<(f64, f64)> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || !(self.lo < self.hi) {
            return Err(Error::InvalidSweep(format!("need lo < hi, got [{}, {}]", self.lo, self.hi)));
        }
        if self.n < 2 {
            return Err(Error::InvalidSweep("need at least 2 points".into()));
        }
        if self.quantities.is_empty() {
            return Err(Error::InvalidSweep("no quantities requested".into()));
        }
        let allowed: &[Hold] = match self.axis {
            Axis::ATotal => &[Hold::Theta, Hold::AiMag],
            Axis::Theta => &[Hold::ATotal, Hold::AiMag],
            Axis::AiMag => &[Hold::Theta, Hold::AsMag],
            _ => &[],
        };
        if let Some(h) = self.hold {
            if !allowed.contains(&h) {
                return Err(Error::InvalidSweep(format!("cannot hold {h:?} while sweeping {:?}", self.axis)));
            }
        }
        let hi = if self.axis == Axis::G { self.hi.min(G_SWEEP_MAX) } else { self.hi };
        if !(self.lo < hi) {
            return Err(Error::InvalidSweep(format!("empty g range after clamping to {G_SWEEP_MAX}")));
        }
        Ok((self.lo, hi))
    }

    pub fn axis_values(&self) -> Result<Vec<f64>> {
        let (lo, hi) = self.validate()?;
        let step = (hi - lo) / (self.n - 1) as f64;
        Ok((0..self.n)
            .map(|k| if k == self.n - 1 { hi } else { lo + step * k as f64 })
            .collect())
    }

    /// Operating point at axis value `x`.
    pub fn point_at(&self, x: f64) -> Result<OperatingPoint> {
        point_on_axis(&self.point, self.axis, self.effective_hold(), x)
    }
}

pub fn point_on_axis(base: &OperatingPoint, axis: Axis, hold: Option<Hold>, x: f64) -> Result<OperatingPoint> {
    match axis {
        Axis::Phi => base.with_phi(x),
        Axis::G => base.with_g(x),
        Axis::Omega => Ok(*base),
        Axis::Theta => match hold {
            Some(Hold::AiMag) => {
                if !(0.0..FRAC_PI_2).contains(&x) {
                    return Err(Error::InvalidSweep(format!("theta = {x} must lie in [0, pi/2) with ai_mag held")));
                }
                base.with_seed_mags(base.ai_mag() * x.tan(), base.ai_mag())
            }
            _ => base.with_polar(base.a_total(), x),
        },
        Axis::ATotal => match hold {
            Some(Hold::AiMag) => {
                let ai = base.ai_mag();
                if x < ai {
                    return Err(Error::InvalidSweep(format!("a_total = {x} below held ai_mag = {ai}")));
                }
                base.with_seed_mags((x * x - ai * ai).sqrt(), ai)
            }
            _ => base.with_polar(x, base.theta()),
        },
        Axis::AiMag => match hold {
            Some(Hold::Theta) => base.with_seed_mags(x * base.theta().tan(), x),
            _ => base.with_seed_mags(base.as_mag(), x),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| fmt_f64(*v)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

fn evaluate(point: &OperatingPoint, omega: f64, quantities: &[Quantity], location: Location) -> Result<Vec<f64>> {
    let mut row = Vec::new();
    let mut som_cache = None;
    let mut triple = || -> Result<_> {
        if som_cache.is_none() {
            som_cache = Some(som(point, location)?);
        }
        Ok(som_cache.unwrap())
    };
    for q in quantities {
        match q {
            Quantity::PiA => row.push(pi_a(&triple()?)?),
            Quantity::PiL => row.push(pi_l(&triple()?)?),
            Quantity::PiN => row.push(pi_n(point)?),
            Quantity::PiRaw => row.push(pi_raw(&triple()?)),
            Quantity::PiSpdc => row.push(pi_spdc_bound(point.g())),
            Quantity::Components => {
                let c = pi_components(point);
                let n = c.normalized()?;
                row.extend([c.inj, c.fc, c.spdc, c.stpdc, n.inj, n.fc, n.spdc, n.stpdc]);
            }
            Quantity::S => row.push(squeezing_spectrum(point, omega).s),
            Quantity::V => row.push(squeezing_spectrum(point, omega).v),
            Quantity::VAnti => row.push(squeezing_spectrum(point, omega).v_anti),
            Quantity::Means => {
                let m = quadrature_means(point);
                row.extend([m.dx1, m.dp1, m.dx2, m.dp2]);
            }
        }
    }
    Ok(row)
}

/// Evaluates every sample before returning, so any invalid sample fails the
/// whole sweep.
pub fn run_sweep(spec: &SweepSpec, exec: Exec) -> Result<Table> {
    let xs = spec.axis_values()?;
    let rows = try_map(exec, &xs, |&x| -> Result<Vec<f64>> {
        let p = spec.point_at(x)?;
        let omega = if spec.axis == Axis::Omega { x } else { 0.0 };
        let mut row = vec![x];
        row.extend(evaluate(&p, omega, &spec.quantities, spec.location)?);
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSweep(format!("non-finite value {bad} at {} = {x}", spec.axis.column())));
        }
        Ok(row)
    })?;
    let mut columns = vec![spec.axis.column().to_string()];
    for q in &spec.quantities {
        columns.extend(q.columns().iter().map(|c| c.to_string()));
    }
    Ok(Table { columns, rows })
}
