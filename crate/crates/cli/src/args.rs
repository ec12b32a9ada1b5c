//! Argument types shared by several subcommands.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use sscs_core::analysis::Criterion;
use sscs_core::som::Location;
use sscs_core::{normalize, OperatingPoint, Result, SystemConfig};

/// Parses a real number, allowing multiples of pi such as `0.41pi`, `-pi`,
/// `pi/2` or `1.5*pi`.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let bad = || format!("cannot parse `{s}` as a number or pi multiple");
    let Some(k) = t.find("pi").or_else(|| t.find('π')) else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let marker = if t[k..].starts_with("pi") { 2 } else { 'π'.len_utf8() };
    let coef = t[..k].trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = t[k + marker..].trim();
    let den = match rest.strip_prefix('/') {
        None if rest.is_empty() => 1.0,
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    let v = coef * PI / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Operating-point overrides applied on top of `--config` (or the default
/// unseeded point).
#[derive(Debug, Clone, Default, Args)]
pub struct PointArgs {
    /// Squeezing rate |gamma_s| / gamma12.
    #[arg(long, value_parser = parse_real)]
    pub g: Option<f64>,
    /// Signal seed magnitude.
    #[arg(long, value_parser = parse_real)]
    pub as_mag: Option<f64>,
    /// Idler seed magnitude.
    #[arg(long, value_parser = parse_real)]
    pub ai_mag: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub as_phase: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub ai_phase: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub pump_phase: Option<f64>,
    /// Global phase; applied last by shifting the signal seed phase.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Total seed amplitude (sets both magnitudes with --theta).
    #[arg(long, value_parser = parse_real)]
    pub a_total: Option<f64>,
    /// Seeding angle atan2(as, ai).
    #[arg(long, value_parser = parse_real)]
    pub theta: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    pub eta: Option<f64>,
    /// gamma1 / gamma2.
    #[arg(long, value_parser = parse_real)]
    pub mirror_ratio: Option<f64>,
}

impl PointArgs {
    pub fn resolve(&self, config: Option<&SystemConfig>) -> Result<OperatingPoint> {
        let mut p = match config {
            Some(c) => normalize(c)?,
            None => normalize(&SystemConfig::default())?,
        };
        if let Some(r) = self.mirror_ratio {
            p = p.with_mirror_ratio(r)?;
        }
        if let Some(g) = self.g {
            p = p.with_g(g)?;
        }
        if self.as_phase.is_some() || self.ai_phase.is_some() {
            p = OperatingPoint::new(
                p.g(),
                (p.as_mag(), self.as_phase.unwrap_or(p.seed_s_phase())),
                (p.ai_mag(), self.ai_phase.unwrap_or(p.seed_i_phase())),
                p.pump_phase(),
            )?
            .with_gamma2(p.gamma2())?
            .with_eta(p.eta())?;
        }
        if let Some(phase) = self.pump_phase {
            p = p.with_pump_phase(phase)?;
        }
        if self.as_mag.is_some() || self.ai_mag.is_some() {
            p = p.with_seed_mags(self.as_mag.unwrap_or(p.as_mag()), self.ai_mag.unwrap_or(p.ai_mag()))?;
        }
        if self.a_total.is_some() || self.theta.is_some() {
            p = p.with_polar(self.a_total.unwrap_or(p.a_total()), self.theta.unwrap_or(p.theta()))?;
        }
        if let Some(phi) = self.phi {
            p = p.with_phi(phi)?;
        }
        if let Some(eta) = self.eta {
            p = p.with_eta(eta)?;
        }
        Ok(p)
    }
}

pub fn read_config(path: &PathBuf) -> Result<SystemConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: SystemConfig = serde_json::from_str(&text)?;
    config.validate()?;
    Ok(config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LocationArg {
    Intra,
    Extra,
    Both,
}

impl LocationArg {
    pub fn locations(self) -> &'static [Location] {
        match self {
            LocationArg::Intra => &[Location::Intra],
            LocationArg::Extra => &[Location::Extra],
            LocationArg::Both => &[Location::Intra, Location::Extra],
        }
    }

    /// Single location for commands that take one.
    pub fn single(self) -> std::result::Result<Location, String> {
        match self {
            LocationArg::Intra => Ok(Location::Intra),
            LocationArg::Extra => Ok(Location::Extra),
            LocationArg::Both => Err("`both` is only accepted by `measures`".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    PiLCrosses1,
    PiACrosses1,
    PiNCrosses0,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::PiLCrosses1 => Criterion::PiLCrosses1,
            CriterionArg::PiACrosses1 => Criterion::PiACrosses1,
            CriterionArg::PiNCrosses0 => Criterion::PiNCrosses0,
        }
    }
}
