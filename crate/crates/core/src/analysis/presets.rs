//! Named parameter sets reproducing each figure as CSV curves plus a JSON
//! sidecar of the exact parameters.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::sweep::{run_sweep, Axis, Hold, Quantity, SweepSpec};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussian::{wigner_grid, Mode};
use crate::params::OperatingPoint;

pub const PRESET_NAMES: [&str; 13] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "fig3", "fig4a", "fig4b", "fig5a", "fig5b", "fig5c", "figA",
];

const N_PHI: usize = 721;
const N_DEFAULT: usize = 401;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub name: String,
    pub spec: SweepSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerSpec {
    pub name: String,
    pub point: OperatingPoint,
    pub mode: Mode,
    pub x_range: (f64, f64),
    pub p_range: (f64, f64),
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: String,
    pub mirror_ratio: f64,
    pub curves: Vec<Curve>,
    pub wigner: Vec<WignerSpec>,
}

fn seeds(g: f64, a_s: f64, a_i: f64) -> OperatingPoint {
    OperatingPoint::new(g, (a_s, 0.0), (a_i, 0.0), 0.0).expect("preset parameters are valid")
}

fn curve(name: impl Into<String>, spec: SweepSpec) -> Curve {
    Curve { name: name.into(), spec }
}

fn phase_panel(g: f64, a_s: f64) -> Vec<Curve> {
    let spec = SweepSpec::new(
        Axis::Phi,
        -2.0 * PI,
        2.0 * PI,
        N_PHI,
        seeds(g, a_s, 2.0 * a_s),
        vec![Quantity::PiA, Quantity::PiL, Quantity::PiSpdc],
    );
    vec![curve("pi_vs_phi", spec)]
}

/// Seed point with total amplitude `a` and the idler fixed at `ai`, signal
/// phase carrying `phi`.
fn held_idler(g: f64, a: f64, ai: f64, phi: f64) -> OperatingPoint {
    OperatingPoint::new(g, ((a * a - ai * ai).sqrt(), phi), (ai, 0.0), 0.0).expect("preset parameters are valid")
}

pub fn preset(name: &str) -> Result<Preset> {
    let curves = match name {
        "fig2a" => phase_panel(0.3, 0.09),
        "fig2b" => phase_panel(0.3, 0.22),
        "fig2c" => phase_panel(0.3, 0.45),
        "fig2d" => phase_panel(0.5, 0.09),
        "fig2e" => phase_panel(0.5, 0.22),
        "fig2f" => phase_panel(0.5, 0.45),
        "fig3" => {
            let mut out = Vec::new();
            for g in [0.3, 0.5] {
                for (tag, phi) in [("0", 0.0), ("pi", PI)] {
                    let spec = SweepSpec::new(Axis::ATotal, 0.1, 0.5, N_DEFAULT, held_idler(g, 0.1, 0.1, phi), vec![Quantity::PiL])
                        .hold(Hold::AiMag);
                    out.push(curve(format!("g{g}_phi{tag}"), spec));
                }
            }
            out
        }
        "fig4a" => {
            let p = held_idler(FRAC_1_SQRT_2, 0.1, 0.1, PI);
            let spec = SweepSpec::new(Axis::Theta, 0.0, 0.48 * PI, N_DEFAULT, p, vec![Quantity::Components, Quantity::PiN])
                .hold(Hold::AiMag);
            vec![curve("components_vs_theta", spec)]
        }
        "fig4b" => [("g0.7071", FRAC_1_SQRT_2), ("g0.5", 0.5), ("g0.3", 0.3)]
            .into_iter()
            .map(|(tag, g)| {
                let spec = SweepSpec::new(Axis::Theta, 0.0, 0.48 * PI, N_DEFAULT, held_idler(g, 0.1, 0.1, PI), vec![Quantity::PiN])
                    .hold(Hold::AiMag);
                curve(tag, spec)
            })
            .collect(),
        "fig5a" => {
            let spec = SweepSpec::new(Axis::Phi, -2.0 * PI, 2.0 * PI, N_PHI, held_idler(0.3, 0.24, 0.1, 0.0), vec![Quantity::PiA, Quantity::PiL]);
            vec![curve("pi_vs_phi", spec)]
        }
        "fig5b" => [0.20, 0.24, 0.28]
            .into_iter()
            .map(|a| {
                let spec = SweepSpec::new(Axis::Phi, -2.0 * PI, 2.0 * PI, N_PHI, held_idler(0.3, a, 0.1, 0.0), vec![Quantity::PiN]);
                curve(format!("a{a:.2}"), spec)
            })
            .collect(),
        "fig5c" => [("tan0", 0.0), ("tan1", 1.0), ("tan2", 2.0)]
            .into_iter()
            .map(|(tag, t)| {
                let p = OperatingPoint::from_polar(0.1, f64::atan(t), 0.3, PI).expect("preset parameters are valid");
                let spec = SweepSpec::new(Axis::AiMag, 0.0, 0.5, N_DEFAULT, p, vec![Quantity::PiN]).hold(Hold::Theta);
                curve(tag, spec)
            })
            .collect(),
        "figA" => {
            let vac = seeds(0.0, 0.0, 0.0);
            let sq = seeds(0.8, 0.0, 0.0);
            let lossy = sq.with_eta(0.8)?;
            let spectrum = vec![Quantity::S, Quantity::V, Quantity::VAnti];
            let mut out = vec![
                curve("v_vs_omega_vacuum", SweepSpec::new(Axis::Omega, -3.0, 3.0, N_DEFAULT, vac, spectrum.clone())),
                curve("v_vs_omega_eta1", SweepSpec::new(Axis::Omega, -3.0, 3.0, N_DEFAULT, sq, spectrum.clone())),
                curve("v_vs_omega_eta0.8", SweepSpec::new(Axis::Omega, -3.0, 3.0, N_DEFAULT, lossy, spectrum.clone())),
                curve("v_vs_g", SweepSpec::new(Axis::G, 0.0, 0.999, N_DEFAULT, vac, spectrum)),
            ];
            for a in [0.5, 1.0, 1.5] {
                let spec = SweepSpec::new(Axis::G, 0.0, 0.95, N_DEFAULT, seeds(0.0, a, a), vec![Quantity::Means]);
                out.push(curve(format!("means_vs_g_a{a}"), spec));
            }
            out
        }
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let wigner = if name == "figA" {
        vec![WignerSpec {
            name: "wigner_mode1".into(),
            point: seeds(0.3, 1.0, 1.0),
            mode: Mode::Symmetric,
            x_range: (5.0, 10.5),
            p_range: (-2.75, 2.75),
            n: 201,
        }]
    } else {
        Vec::new()
    };
    Ok(Preset {
        name: name.to_string(),
        mirror_ratio: crate::params::DEFAULT_MIRROR_RATIO,
        curves,
        wigner,
    })
}

/// Writes `<name>_<curve>.csv` for every curve, `<name>_<grid>.csv` for
/// Wigner grids (long format) and `<name>.json`; returns the written paths.
pub fn emit_figure_preset(name: &str, out_dir: &Path, exec: Exec) -> Result<Vec<PathBuf>> {
    let p = preset(name)?;
    let tables = p
        .curves
        .iter()
        .map(|c| run_sweep(&c.spec, exec))
        .collect::<Result<Vec<_>>>()?;
    let grids = p
        .wigner
        .iter()
        .map(|w| wigner_grid(&w.point, w.mode, w.x_range, w.p_range, w.n))
        .collect::<Result<Vec<_>>>()?;

    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for (c, t) in p.curves.iter().zip(&tables) {
        let path = out_dir.join(format!("{name}_{}.csv", c.name));
        t.write_csv(BufWriter::new(File::create(&path)?))?;
        written.push(path);
    }
    for (w, grid) in p.wigner.iter().zip(&grids) {
        let path = out_dir.join(format!("{name}_{}.csv", w.name));
        grid.write_long_csv(BufWriter::new(File::create(&path)?))?;
        written.push(path);
    }
    let path = out_dir.join(format!("{name}.json"));
    serde_json::to_writer_pretty(BufWriter::new(File::create(&path)?), &p)?;
    written.push(path);
    Ok(written)
}
