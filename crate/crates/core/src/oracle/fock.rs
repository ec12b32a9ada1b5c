//! Truncated Fock-space construction of the two-mode states, built along two
//! independent routes: the product of displaced single-mode squeezers in the
//! symmetric/antisymmetric basis, and a displaced two-mode squeezed vacuum.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{bogoliubov_amplitudes, stabilizing_displacement, BogoliubovAmplitudes};
use crate::params::OperatingPoint;

pub const LEAKAGE_THRESHOLD: f64 = 1e-10;
pub const MAX_CUTOFF: usize = 256;

type CMat = DMatrix<Complex64>;
type CVec = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Two-mode amplitudes `amps[(n_s, n_i)]` for `n_s, n_i <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockStateTensor {
    pub cutoff: usize,
    pub amps: CMat,
    /// Largest weight found in the top two Fock layers at any build stage.
    pub leakage: f64,
}

impl FockStateTensor {
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, ns: usize, ni: usize) -> Complex64 {
        if ns <= self.cutoff && ni <= self.cutoff {
            self.amps[(ns, ni)]
        } else {
            ZERO
        }
    }

    /// Mean photon numbers (n_s, n_i).
    pub fn mean_numbers(&self) -> (f64, f64) {
        let mut out = (0.0, 0.0);
        for ns in 0..=self.cutoff {
            for ni in 0..=self.cutoff {
                let w = self.amps[(ns, ni)].norm_sqr();
                out.0 += ns as f64 * w;
                out.1 += ni as f64 * w;
            }
        }
        out
    }

    pub fn summary(&self) -> FockSummary {
        let (ns, ni) = self.mean_numbers();
        FockSummary {
            cutoff: self.cutoff,
            norm: self.norm(),
            leakage: self.leakage,
            mean_ns: ns,
            mean_ni: ni,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockSummary {
    pub cutoff: usize,
    pub norm: f64,
    pub leakage: f64,
    pub mean_ns: f64,
    pub mean_ni: f64,
}

/// Raw overlap |<a|b>|^2 on the common truncation.
pub fn fidelity(a: &FockStateTensor, b: &FockStateTensor) -> f64 {
    let n = a.cutoff.min(b.cutoff);
    let mut s = ZERO;
    for ns in 0..=n {
        for ni in 0..=n {
            s += a.amps[(ns, ni)].conj() * b.amps[(ns, ni)];
        }
    }
    s.norm_sqr()
}

fn annihilation(dim: usize) -> CMat {
    let mut a = CMat::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// D(alpha) = exp(alpha a^+ - alpha* a).
fn displacement(alpha: Complex64, dim: usize) -> CMat {
    if alpha == ZERO {
        return CMat::identity(dim, dim);
    }
    let a = annihilation(dim);
    let ad = a.adjoint();
    (ad * alpha - a * alpha.conj()).exp()
}

/// S(eta) = exp(eta* a^2 / 2 - eta a^+2 / 2).
fn squeezer(eta: Complex64, dim: usize) -> CMat {
    if eta == ZERO {
        return CMat::identity(dim, dim);
    }
    let a = annihilation(dim);
    let a2 = &a * &a;
    let ad2 = a2.adjoint();
    (a2 * (eta.conj() * 0.5) - ad2 * (eta * 0.5)).exp()
}

fn vector_leakage(v: &CVec) -> f64 {
    let n = v.len();
    v.rows(n.saturating_sub(2), n.min(2)).iter().map(|a| a.norm_sqr()).sum()
}

fn tensor_leakage(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut w = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r + 2 >= n || c + 2 >= n {
                w += m[(r, c)].norm_sqr();
            }
        }
    }
    w
}

fn vacuum(dim: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[0] = ONE;
    v
}

/// Applies the chain D(x) S(eta) D(-x) to vacuum, tracking leakage.
fn displaced_squeezed(x: Complex64, eta: Complex64, dim: usize, leak: &mut f64) -> CVec {
    let mut v = displacement(-x, dim) * vacuum(dim);
    *leak = leak.max(vector_leakage(&v));
    v = squeezer(eta, dim) * v;
    *leak = leak.max(vector_leakage(&v));
    v = displacement(x, dim) * v;
    *leak = leak.max(vector_leakage(&v));
    v
}

/// Rewrites a product state in the (A1, A2) = ((s + i), (s - i)) / sqrt(2)
/// modes as (s, i) occupation amplitudes, keeping total photon number <= cutoff.
fn to_signal_idler(psi1: &CVec, psi2: &CVec, cutoff: usize) -> CMat {
    let mut out = CMat::zeros(cutoff + 1, cutoff + 1);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // block[m2] holds |m1, m2>_A in the (s, i) basis for the current total
    // n = m1 + m2, indexed by n_s (n_i = n - n_s).
    let mut prev: Vec<Vec<Complex64>> = vec![vec![ONE]];
    for n in 0..=cutoff {
        if n > 0 {
            let mut next = Vec::with_capacity(n + 1);
            for m2 in 0..=n {
                let mut v = vec![ZERO; n + 1];
                if m2 < n {
                    // raise m1 from |m1 - 1, m2>: A1^+ = (a_s^+ + a_i^+) / sqrt(2)
                    let src = &prev[m2];
                    let m1 = n - m2;
                    let k = h / (m1 as f64).sqrt();
                    for (ns, amp) in src.iter().enumerate() {
                        let ni = n - 1 - ns;
                        v[ns + 1] += amp * k * ((ns + 1) as f64).sqrt();
                        v[ns] += amp * k * ((ni + 1) as f64).sqrt();
                    }
                } else {
                    // m1 = 0: raise m2 from |0, n - 1>: A2^+ = (a_s^+ - a_i^+) / sqrt(2)
                    let src = &prev[n - 1];
                    let k = h / (n as f64).sqrt();
                    for (ns, amp) in src.iter().enumerate() {
                        let ni = n - 1 - ns;
                        v[ns + 1] += amp * k * ((ns + 1) as f64).sqrt();
                        v[ns] -= amp * k * ((ni + 1) as f64).sqrt();
                    }
                }
                next.push(v);
            }
            prev = next;
        }
        for (m2, v) in prev.iter().enumerate() {
            let c = psi1[n - m2] * psi2[m2];
            if c == ZERO {
                continue;
            }
            for (ns, amp) in v.iter().enumerate() {
                out[(ns, n - ns)] += c * amp;
            }
        }
    }
    out
}

/// Stabilized squeezed coherent state built mode by mode in the
/// symmetric/antisymmetric basis and rotated back to (s, i).
pub fn fock_sscs_state(point: &OperatingPoint, tau: f64, cutoff: usize) -> Result<FockStateTensor> {
    let b = bogoliubov_amplitudes(point, tau)?;
    let dim = cutoff + 1;
    let mut leak = 0.0;
    let psi1 = displaced_squeezed(b.d1.conj(), b.xi / 2.0, dim, &mut leak);
    let psi2 = displaced_squeezed(-b.d2.conj(), -b.xi / 2.0, dim, &mut leak);
    let amps = to_signal_idler(&psi1, &psi2, cutoff);
    leak = leak.max(tensor_leakage(&amps));
    certify(cutoff, amps, leak)
}

/// Displaced two-mode squeezed vacuum with the given displacements.
pub fn fock_dss_state_with(
    xi: Complex64,
    upsilon_s: Complex64,
    upsilon_i: Complex64,
    cutoff: usize,
) -> Result<FockStateTensor> {
    let dim = cutoff + 1;
    // two-mode squeezer restricted to the invariant n_s = n_i chain
    let mut gen = CMat::zeros(dim, dim);
    for n in 0..cutoff {
        gen[(n + 1, n)] = -xi * ((n + 1) as f64 / 2.0);
        gen[(n, n + 1)] = xi.conj() * ((n + 1) as f64 / 2.0);
    }
    let chain = gen.exp() * vacuum(dim);
    let mut leak = vector_leakage(&chain);
    let psi = CMat::from_diagonal(&chain);
    let amps = displacement(upsilon_s, dim) * psi * displacement(upsilon_i, dim).transpose();
    leak = leak.max(tensor_leakage(&amps));
    certify(cutoff, amps, leak)
}

pub fn fock_dss_state(point: &OperatingPoint, tau: f64, cutoff: usize) -> Result<FockStateTensor> {
    let b = bogoliubov_amplitudes(point, tau)?;
    fock_dss_state_with(b.xi, b.upsilon_s, b.upsilon_i, cutoff)
}

/// Negative control: the displacement with the sign of the sinh branch flipped.
pub fn fock_dss_state_wrong_sign(point: &OperatingPoint, tau: f64, cutoff: usize) -> Result<FockStateTensor> {
    let b: BogoliubovAmplitudes = bogoliubov_amplitudes(point, tau)?;
    let half = b.xi.norm() / 2.0;
    let rot = Complex64::from_polar(1.0, point.pump_phase());
    let us = (1.0 - half.cosh()) * b.e_i.conj() - rot * half.sinh() * b.e_s;
    let ui = (1.0 - half.cosh()) * b.e_s.conj() - rot * half.sinh() * b.e_i;
    fock_dss_state_with(b.xi, us, ui, cutoff)
}

fn certify(cutoff: usize, amps: CMat, leakage: f64) -> Result<FockStateTensor> {
    if leakage >= LEAKAGE_THRESHOLD {
        return Err(Error::CutoffTooSmall {
            cutoff,
            leakage,
            suggested: (2 * cutoff).min(MAX_CUTOFF),
        });
    }
    Ok(FockStateTensor {
        cutoff,
        amps,
        leakage,
    })
}

/// Retries `build` with doubled cutoffs until leakage certifies convergence.
pub fn with_auto_cutoff<F>(start: usize, build: F) -> Result<FockStateTensor>
where
    F: Fn(usize) -> Result<FockStateTensor>,
{
    let mut cutoff = start.max(2);
    loop {
        match build(cutoff) {
            Err(Error::CutoffTooSmall { .. }) if cutoff < MAX_CUTOFF => {
                cutoff = (2 * cutoff).min(MAX_CUTOFF);
            }
            other => return other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilizationCheck {
    pub alpha: [f64; 2],
    pub residual: f64,
}

/// Linear-term residual of the single-mode Hamiltonian
/// `i(g* a^2 - g a^+2) + i(A a^+ - A* a)` in the frame displaced by `alpha`.
pub fn stabilization_residual(g: Complex64, a: Complex64, alpha: Complex64, cutoff: usize) -> f64 {
    let dim = cutoff + 1;
    let i = Complex64::new(0.0, 1.0);
    let op = annihilation(dim);
    let ad = op.adjoint();
    let h = (&op * &op * g.conj() - &ad * &ad * g) * i + (&ad * a - &op * a.conj()) * i;
    let d = displacement(alpha, dim);
    let hp = d.adjoint() * h * d;
    hp[(0, 1)].norm().max(hp[(1, 0)].norm())
}

pub fn verify_stabilization(g: Complex64, a: Complex64, cutoff: usize) -> Result<StabilizationCheck> {
    let alpha = stabilizing_displacement(g, a)?;
    Ok(StabilizationCheck {
        alpha: [alpha.re, alpha.im],
        residual: stabilization_residual(g, a, alpha, cutoff),
    })
}
