//! Seeded randomized verification run combining both oracles.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exec::{map, Exec};
use crate::oracle::fock::{
    fidelity, fock_dss_state, fock_dss_state_wrong_sign, fock_sscs_state, stabilization_residual,
    verify_stabilization, with_auto_cutoff, FockSummary,
};
use crate::oracle::quadrature::QuadratureConfig;
use crate::oracle::wick::{anchor_term, evaluate_som_oracle, Correlator, OracleEntry};
use crate::params::OperatingPoint;
use crate::som::gamma_s1_term;

pub const GENERIC_COUNTS: [usize; 3] = [15, 15, 17];
pub const SOM_REL_TOL: f64 = 1e-6;
pub const ANCHOR_REL_TOL: f64 = 1e-9;
pub const IMAG_REL_TOL: f64 = 1e-10;
pub const FIDELITY_TOL: f64 = 1e-8;
pub const STABILIZATION_TOL: f64 = 1e-10;
pub const NEGATIVE_CONTROL_MIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub n_points: usize,
    pub fock_points: usize,
    pub fock_start_cutoff: usize,
    pub quadrature: QuadratureConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            n_points: 50,
            fock_points: 20,
            fock_start_cutoff: 16,
            quadrature: QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointParams {
    pub g: f64,
    pub pump_phase: f64,
    pub as_mag: f64,
    pub as_phase: f64,
    pub ai_mag: f64,
    pub ai_phase: f64,
}

impl From<&OperatingPoint> for PointParams {
    fn from(p: &OperatingPoint) -> Self {
        Self {
            g: p.g(),
            pump_phase: p.pump_phase(),
            as_mag: p.as_mag(),
            as_phase: p.seed_s_phase(),
            ai_mag: p.ai_mag(),
            ai_phase: p.seed_i_phase(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OraclePoint {
    pub params: PointParams,
    pub entries: Vec<OracleEntry>,
    /// Set when the quadrature or enumeration failed at this point.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockPoint {
    pub params: PointParams,
    pub tau: f64,
    pub fidelity: Option<f64>,
    pub sscs: Option<FockSummary>,
    pub dss: Option<FockSummary>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorReport {
    pub g: f64,
    pub gamma2: f64,
    pub oracle: Option<[f64; 2]>,
    pub closed_form: f64,
    pub rel_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationReport {
    pub g: [f64; 2],
    pub a: [f64; 2],
    pub cutoff: usize,
    pub residual: f64,
    pub perturbed_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub term_counts: [usize; 3],
    pub max_rel_deviation: f64,
    pub anchor: AnchorReport,
    pub stabilization: StabilizationReport,
    pub negative_control_fidelity: Option<f64>,
    pub oracle_points: Vec<OraclePoint>,
    pub fock_points: Vec<FockPoint>,
}

fn random_oracle_point(rng: &mut ChaCha8Rng) -> OperatingPoint {
    let g = rng.gen_range(0.05..=0.95);
    let a_s = rng.gen_range(0.0..=0.5);
    let a_i = rng.gen_range(0.0..=0.5);
    let mut phase = || rng.gen_range(-PI..PI);
    let (ps, pi_, pp) = (phase(), phase(), phase());
    OperatingPoint::new(g, (a_s, ps), (a_i, pi_), pp).expect("sampled inside the valid domain")
}

fn random_fock_point(rng: &mut ChaCha8Rng) -> (OperatingPoint, f64) {
    let g = rng.gen_range(0.1..=0.5);
    let a_s = rng.gen_range(0.0..=0.1);
    let a_i = rng.gen_range(0.0..=0.1);
    let mut phase = || rng.gen_range(-PI..PI);
    let (ps, pi_, pp) = (phase(), phase(), phase());
    let tau = rng.gen_range(0.5..=1.5);
    let p = OperatingPoint::new(g, (a_s, ps), (a_i, pi_), pp).expect("sampled inside the valid domain");
    (p, tau)
}

fn oracle_point(p: &OperatingPoint, cfg: &QuadratureConfig) -> OraclePoint {
    let entries: Result<Vec<OracleEntry>> = Correlator::ALL.iter().map(|c| evaluate_som_oracle(*c, p, cfg)).collect();
    match entries {
        Ok(entries) => OraclePoint {
            params: p.into(),
            entries,
            error: None,
        },
        Err(e) => OraclePoint {
            params: p.into(),
            entries: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

fn fock_point(p: &OperatingPoint, tau: f64, start: usize) -> FockPoint {
    let built = with_auto_cutoff(start, |n| fock_sscs_state(p, tau, n)).and_then(|a| {
        let b = with_auto_cutoff(a.cutoff, |n| fock_dss_state(p, tau, n))?;
        Ok((a, b))
    });
    match built {
        Ok((a, b)) => FockPoint {
            params: p.into(),
            tau,
            fidelity: Some(fidelity(&a, &b)),
            sscs: Some(a.summary()),
            dss: Some(b.summary()),
            error: None,
        },
        Err(e) => FockPoint {
            params: p.into(),
            tau,
            fidelity: None,
            sscs: None,
            dss: None,
            error: Some(e.to_string()),
        },
    }
}

pub fn run_verify(options: &VerifyOptions, exec: Exec) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let oracle_inputs: Vec<OperatingPoint> = (0..options.n_points).map(|_| random_oracle_point(&mut rng)).collect();
    let fock_inputs: Vec<(OperatingPoint, f64)> = (0..options.fock_points).map(|_| random_fock_point(&mut rng)).collect();

    let cfg = options.quadrature;
    let oracle_points = map(exec, &oracle_inputs, |p| oracle_point(p, &cfg));
    let start = options.fock_start_cutoff;
    let fock_points = map(exec, &fock_inputs, |(p, tau)| fock_point(p, *tau, start));

    let mut checks = Vec::new();

    // term counts: every random point is generic
    let mut term_counts = [0; 3];
    let mut counts_ok = true;
    for op in &oracle_points {
        let counts: Vec<usize> = op.entries.iter().map(|e| e.term_count).collect();
        if counts.len() == 3 {
            if term_counts == [0; 3] {
                term_counts = [counts[0], counts[1], counts[2]];
            }
            counts_ok &= counts == GENERIC_COUNTS;
        }
    }
    let no_oracle = oracle_points.is_empty();
    checks.push(Check::new(
        "term_counts",
        no_oracle || (counts_ok && term_counts == GENERIC_COUNTS),
        if no_oracle {
            "skipped: no points requested".to_string()
        } else {
            format!("(gamma_s, gamma_i, gamma_si) = {term_counts:?}, expected {GENERIC_COUNTS:?}")
        },
    ));

    let failures: Vec<&OraclePoint> = oracle_points.iter().filter(|p| p.error.is_some()).collect();
    checks.push(Check::new(
        "oracle_quadrature",
        failures.is_empty(),
        match failures.first() {
            None => format!("{} points evaluated", oracle_points.len()),
            Some(p) => format!(
                "{} of {} points failed; first: {}",
                failures.len(),
                oracle_points.len(),
                p.error.as_deref().unwrap_or_default()
            ),
        },
    ));

    let entries = oracle_points.iter().flat_map(|p| p.entries.iter());
    let max_rel_deviation = entries.clone().map(|e| e.rel_deviation).fold(0.0, f64::max);
    let max_imag = entries
        .filter(|e| e.correlator == Correlator::Gsi)
        .map(|e| e.imag_rel)
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "closed_form_agreement",
        failures.is_empty() && max_rel_deviation <= SOM_REL_TOL,
        format!("max relative deviation {max_rel_deviation:e} (tolerance {SOM_REL_TOL:e})"),
    ));
    checks.push(Check::new(
        "cross_moment_real",
        failures.is_empty() && max_imag <= IMAG_REL_TOL,
        format!("max |Im|/|Re| of gamma_si {max_imag:e} (tolerance {IMAG_REL_TOL:e})"),
    ));

    // worked anchor term at g = 0.5 with default mirrors
    let anchor_point = OperatingPoint::new(0.5, (0.0, 0.0), (0.0, 0.0), 0.0).expect("valid");
    let closed_form = gamma_s1_term(&anchor_point).expect("below threshold");
    let anchor_value = anchor_term(&anchor_point, &cfg);
    let anchor = AnchorReport {
        g: 0.5,
        gamma2: anchor_point.gamma2(),
        oracle: anchor_value.as_ref().ok().and_then(|v| v.map(|z| [z.re, z.im])),
        closed_form,
        rel_deviation: anchor_value
            .as_ref()
            .ok()
            .and_then(|v| v.map(|z| (z - closed_form).norm() / closed_form)),
    };
    checks.push(Check::new(
        "anchor_term",
        anchor.rel_deviation.is_some_and(|d| d <= ANCHOR_REL_TOL),
        match &anchor_value {
            Err(e) => e.to_string(),
            Ok(None) => "anchor term absent".into(),
            Ok(Some(_)) => format!("relative deviation {:e}", anchor.rel_deviation.unwrap_or(f64::NAN)),
        },
    ));

    let fids: Vec<f64> = fock_points.iter().filter_map(|f| f.fidelity).collect();
    let fock_fail = fock_points.iter().find(|f| f.error.is_some());
    let min_fid = fids.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(match fock_fail {
        _ if fock_points.is_empty() => Check::new("fock_fidelity", true, "skipped: no points requested"),
        Some(f) => Check::new(
            "fock_fidelity",
            false,
            format!("state build failed: {}", f.error.as_deref().unwrap_or_default()),
        ),
        None => Check::new(
            "fock_fidelity",
            min_fid >= 1.0 - FIDELITY_TOL,
            format!("min fidelity over {} points: 1 - {:e}", fids.len(), 1.0 - min_fid),
        ),
    });

    // the wrong-sign displacement must be told apart
    let control_point = OperatingPoint::new(0.5, (0.1, 0.0), (0.05, 0.0), 0.0).expect("valid");
    let negative_control_fidelity = with_auto_cutoff(start, |n| fock_sscs_state(&control_point, 1.0, n))
        .and_then(|a| Ok(fidelity(&a, &fock_dss_state_wrong_sign(&control_point, 1.0, a.cutoff)?)))
        .ok();
    checks.push(Check::new(
        "fock_negative_control",
        negative_control_fidelity.is_some_and(|f| f < 0.999),
        format!("fidelity with flipped displacement sign: {negative_control_fidelity:?}"),
    ));

    let (g, a, cutoff) = (Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0), 40);
    let stab = verify_stabilization(g, a, cutoff).expect("g is nonzero");
    let alpha = Complex64::new(stab.alpha[0], stab.alpha[1]);
    let perturbed_residual = stabilization_residual(g, a, alpha * 1.1, cutoff);
    let stabilization = StabilizationReport {
        g: [g.re, g.im],
        a: [a.re, a.im],
        cutoff,
        residual: stab.residual,
        perturbed_residual,
    };
    checks.push(Check::new(
        "stabilization",
        stab.residual < STABILIZATION_TOL && perturbed_residual > NEGATIVE_CONTROL_MIN,
        format!("residual {:e}, perturbed {:e}", stab.residual, perturbed_residual),
    ));

    VerifyReport {
        options: *options,
        pass: checks.iter().all(|c| c.pass),
        checks,
        term_counts,
        max_rel_deviation,
        anchor,
        stabilization,
        negative_control_fidelity,
        oracle_points,
        fock_points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let opts = VerifyOptions {
            seed: 7,
            n_points: 4,
            fock_points: 3,
            ..VerifyOptions::default()
        };
        let a = run_verify(&opts, Exec::Parallel);
        assert!(a.pass, "{:#?}", a.checks);
        assert_eq!(a.term_counts, GENERIC_COUNTS);
        let b = run_verify(&opts, Exec::Sequential);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn tight_budget_fails_with_diagnostic() {
        let opts = VerifyOptions {
            seed: 1,
            n_points: 2,
            fock_points: 1,
            quadrature: QuadratureConfig {
                abs_tol: 1e-12,
                max_intervals: 4,
            },
            ..VerifyOptions::default()
        };
        let r = run_verify(&opts, Exec::Parallel);
        assert!(!r.pass);
        let q = r.checks.iter().find(|c| c.name == "oracle_quadrature").unwrap();
        assert!(!q.pass && q.detail.contains("quadrature did not converge"));
    }
}
