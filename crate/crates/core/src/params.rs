//! Physical parameters and their dimensionless operating point.
//!
//! All rates are measured in units of the total cavity decay rate
//! `gamma12 = gamma1 + gamma2 = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mirror decay-rate ratio gamma1/gamma2 used unless overridden.
pub const DEFAULT_MIRROR_RATIO: f64 = 0.002;

const UNIT_TOLERANCE: f64 = 1e-12;

/// Raw system configuration, as read from a JSON config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub gamma1: f64,
    pub gamma2: f64,
    pub squeeze_mag: f64,
    pub pump_phase: f64,
    pub seed_s_mag: f64,
    pub seed_s_phase: f64,
    pub seed_i_mag: f64,
    pub seed_i_phase: f64,
    pub eta: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        let (gamma1, gamma2) = mirror_rates(DEFAULT_MIRROR_RATIO);
        Self {
            gamma1,
            gamma2,
            squeeze_mag: 0.0,
            pump_phase: 0.0,
            seed_s_mag: 0.0,
            seed_s_phase: 0.0,
            seed_i_mag: 0.0,
            seed_i_phase: 0.0,
            eta: 1.0,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.gamma1,
            self.gamma2,
            self.squeeze_mag,
            self.pump_phase,
            self.seed_s_mag,
            self.seed_s_phase,
            self.seed_i_mag,
            self.seed_i_phase,
            self.eta,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidConfig("all fields must be finite".into()));
        }
        if self.gamma1 <= 0.0 || self.gamma2 <= 0.0 {
            return Err(Error::InvalidConfig("mirror decay rates must be positive".into()));
        }
        if (self.gamma1 + self.gamma2 - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::InvalidConfig(format!(
                "gamma1 + gamma2 = {} but rates must be expressed in units of gamma12 (sum 1)",
                self.gamma1 + self.gamma2
            )));
        }
        if self.seed_s_mag < 0.0 || self.seed_i_mag < 0.0 {
            return Err(Error::InvalidConfig("seed magnitudes must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidConfig("eta must lie in [0, 1]".into()));
        }
        check_g(self.squeeze_mag)
    }
}

/// Splits gamma12 = 1 into (gamma1, gamma2) with gamma1/gamma2 = `ratio`.
pub fn mirror_rates(ratio: f64) -> (f64, f64) {
    let gamma2 = 1.0 / (1.0 + ratio);
    (ratio * gamma2, gamma2)
}

/// Reduces an angle to (-pi, pi].
pub fn wrap_phase(phase: f64) -> f64 {
    let r = phase.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn check_g(g: f64) -> Result<()> {
    if g.is_finite() && (0.0..1.0).contains(&g) {
        Ok(())
    } else {
        Err(Error::Threshold { g })
    }
}

/// Dimensionless operating point. Immutable; every constructor validates the
/// below-threshold regime and keeps the derived fields (phi, theta, a_total)
/// consistent with the seed amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    g: f64,
    pump_phase: f64,
    as_mag: f64,
    as_phase: f64,
    ai_mag: f64,
    ai_phase: f64,
    gamma2: f64,
    eta: f64,
    phi: f64,
    theta: f64,
    a_total: f64,
}

impl OperatingPoint {
    /// Point from seed magnitudes and phases, default mirrors and eta = 1.
    pub fn new(
        g: f64,
        (as_mag, as_phase): (f64, f64),
        (ai_mag, ai_phase): (f64, f64),
        pump_phase: f64,
    ) -> Result<Self> {
        check_g(g)?;
        for v in [as_mag, as_phase, ai_mag, ai_phase, pump_phase] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig("non-finite operating point".into()));
            }
        }
        if as_mag < 0.0 || ai_mag < 0.0 {
            return Err(Error::InvalidConfig("seed magnitudes must be non-negative".into()));
        }
        let (_, gamma2) = mirror_rates(DEFAULT_MIRROR_RATIO);
        Ok(Self::assemble(
            g, pump_phase, as_mag, as_phase, ai_mag, ai_phase, gamma2, 1.0,
        ))
    }

    /// Point from total seed amplitude and seeding angle, with
    /// `pump_phase = 0`, `ai_phase = 0` and `as_phase = phi`.
    pub fn from_polar(a_total: f64, theta: f64, g: f64, phi: f64) -> Result<Self> {
        if !(a_total >= 0.0) || !a_total.is_finite() {
            return Err(Error::InvalidConfig("a_total must be finite and non-negative".into()));
        }
        if !(0.0..=PI / 2.0).contains(&theta) {
            return Err(Error::InvalidConfig(format!("theta = {theta} outside [0, pi/2]")));
        }
        Self::new(
            g,
            (a_total * theta.sin(), phi),
            (a_total * theta.cos(), 0.0),
            0.0,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        g: f64,
        pump_phase: f64,
        as_mag: f64,
        as_phase: f64,
        ai_mag: f64,
        ai_phase: f64,
        gamma2: f64,
        eta: f64,
    ) -> Self {
        let a_total = as_mag.hypot(ai_mag);
        // theta is canonically 0 when both seeds vanish
        let theta = if a_total == 0.0 {
            0.0
        } else {
            as_mag.atan2(ai_mag)
        };
        Self {
            g,
            pump_phase,
            as_mag,
            as_phase,
            ai_mag,
            ai_phase,
            gamma2,
            eta,
            phi: wrap_phase(as_phase + ai_phase - pump_phase),
            theta,
            a_total,
        }
    }

    fn rebuild(&self) -> Self {
        Self::assemble(
            self.g,
            self.pump_phase,
            self.as_mag,
            self.as_phase,
            self.ai_mag,
            self.ai_phase,
            self.gamma2,
            self.eta,
        )
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        check_g(g)?;
        Ok(Self { g, ..*self }.rebuild())
    }

    /// Changes the global phase difference by rotating the signal seed.
    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidConfig("phi must be finite".into()));
        }
        let as_phase = phi - self.ai_phase + self.pump_phase;
        Ok(Self { as_phase, ..*self }.rebuild())
    }

    /// Replaces both seed magnitudes from (a_total, theta), keeping phases.
    pub fn with_polar(&self, a_total: f64, theta: f64) -> Result<Self> {
        if !(a_total >= 0.0) || !a_total.is_finite() {
            return Err(Error::InvalidConfig("a_total must be finite and non-negative".into()));
        }
        if !(0.0..=PI / 2.0).contains(&theta) {
            return Err(Error::InvalidConfig(format!("theta = {theta} outside [0, pi/2]")));
        }
        Ok(Self {
            as_mag: a_total * theta.sin(),
            ai_mag: a_total * theta.cos(),
            ..*self
        }
        .rebuild())
    }

    pub fn with_seed_mags(&self, as_mag: f64, ai_mag: f64) -> Result<Self> {
        if !(as_mag >= 0.0 && ai_mag >= 0.0) || !as_mag.is_finite() || !ai_mag.is_finite() {
            return Err(Error::InvalidConfig("seed magnitudes must be finite and non-negative".into()));
        }
        Ok(Self {
            as_mag,
            ai_mag,
            ..*self
        }
        .rebuild())
    }

    /// Sets the output mirror rate; gamma1 follows as 1 - gamma2.
    pub fn with_gamma2(&self, gamma2: f64) -> Result<Self> {
        if !(gamma2 > 0.0 && gamma2 <= 1.0) {
            return Err(Error::InvalidConfig(format!("gamma2 = {gamma2} outside (0, 1]")));
        }
        Ok(Self { gamma2, ..*self })
    }

    pub fn with_mirror_ratio(&self, ratio: f64) -> Result<Self> {
        if !(ratio >= 0.0) || !ratio.is_finite() {
            return Err(Error::InvalidConfig("mirror ratio must be finite and non-negative".into()));
        }
        self.with_gamma2(mirror_rates(ratio).1)
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidConfig("eta must lie in [0, 1]".into()));
        }
        Ok(Self { eta, ..*self })
    }

    pub fn with_pump_phase(&self, pump_phase: f64) -> Result<Self> {
        if !pump_phase.is_finite() {
            return Err(Error::InvalidConfig("pump phase must be finite".into()));
        }
        Ok(Self { pump_phase, ..*self }.rebuild())
    }

    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn as_mag(&self) -> f64 {
        self.as_mag
    }
    pub fn ai_mag(&self) -> f64 {
        self.ai_mag
    }
    pub fn seed_s_phase(&self) -> f64 {
        self.as_phase
    }
    pub fn seed_i_phase(&self) -> f64 {
        self.ai_phase
    }
    pub fn pump_phase(&self) -> f64 {
        self.pump_phase
    }
    /// Global phase difference phi_s + phi_i - phi_p in (-pi, pi].
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn a_total(&self) -> f64 {
        self.a_total
    }
    pub fn gamma1(&self) -> f64 {
        1.0 - self.gamma2
    }
    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Complex pump coupling gamma_s = g e^{i phi_p}.
    pub fn squeeze(&self) -> Complex64 {
        Complex64::from_polar(self.g, self.pump_phase)
    }
    pub fn seed_s(&self) -> Complex64 {
        Complex64::from_polar(self.as_mag, self.as_phase)
    }
    pub fn seed_i(&self) -> Complex64 {
        Complex64::from_polar(self.ai_mag, self.ai_phase)
    }
}

pub fn normalize(config: &SystemConfig) -> Result<OperatingPoint> {
    config.validate()?;
    let gamma12 = config.gamma1 + config.gamma2;
    let point = OperatingPoint::new(
        config.squeeze_mag / gamma12,
        (config.seed_s_mag / gamma12, config.seed_s_phase),
        (config.seed_i_mag / gamma12, config.seed_i_phase),
        config.pump_phase,
    )?;
    point.with_gamma2(config.gamma2 / gamma12)?.with_eta(config.eta)
}

pub fn denormalize(point: &OperatingPoint) -> SystemConfig {
    SystemConfig {
        gamma1: point.gamma1(),
        gamma2: point.gamma2(),
        squeeze_mag: point.g(),
        pump_phase: point.pump_phase(),
        seed_s_mag: point.as_mag(),
        seed_s_phase: point.seed_s_phase(),
        seed_i_mag: point.ai_mag(),
        seed_i_phase: point.seed_i_phase(),
        eta: point.eta(),
    }
}
