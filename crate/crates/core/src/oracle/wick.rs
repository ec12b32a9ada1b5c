//! Brute-force Wick-contraction evaluation of the second-order moments.
//!
//! Each intracavity operator is expanded in the frequency domain as
//!
//! ```text
//! a_j(w) = sqrt(g1) L(w) b_j(w) + sqrt(g2) L(w) c_j(w)
//!        - gs sqrt(g1) C(w) b_l^+(-w) - gs sqrt(g2) C(w) c_l^+(-w)
//!        + Qs A_j delta(w)
//! ```
//!
//! with `C(w) = 2 / ((1 - 2iw)^2 - g^2)`, `L(w) = (1 - 2iw) C(w)` and `l` the
//! partner mode. A four-factor moment therefore splits into 5^4 terms; the
//! vacuum expectation of each is a sum over Wick matchings of products of
//! frequency integrals, the delta lines having already been integrated.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::oracle::quadrature::{integrate_real_line, QuadratureConfig};
use crate::params::OperatingPoint;
use crate::som::{effective_amplitudes, qs, som_intracavity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Correlator {
    #[serde(rename = "gamma_s")]
    Gs,
    #[serde(rename = "gamma_i")]
    Gi,
    #[serde(rename = "gamma_si")]
    Gsi,
}

impl Correlator {
    pub const ALL: [Correlator; 3] = [Correlator::Gs, Correlator::Gi, Correlator::Gsi];

    fn factors(self) -> [Factor; 4] {
        use Field::{Idler as I, Signal as S};
        let f = |field, dagger| Factor { field, dagger };
        match self {
            Correlator::Gs => [f(S, true), f(S, true), f(S, false), f(S, false)],
            Correlator::Gi => [f(I, true), f(I, true), f(I, false), f(I, false)],
            Correlator::Gsi => [f(S, true), f(S, false), f(I, true), f(I, false)],
        }
    }

    fn closed_form(self, point: &OperatingPoint) -> Result<f64> {
        let t = som_intracavity(point)?;
        Ok(match self {
            Correlator::Gs => t.gamma_s,
            Correlator::Gi => t.gamma_i,
            Correlator::Gsi => t.gamma_si,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    Signal,
    Idler,
}

impl Field {
    fn partner(self) -> Self {
        match self {
            Field::Signal => Field::Idler,
            Field::Idler => Field::Signal,
        }
    }
    fn tag(self) -> char {
        match self {
            Field::Signal => 's',
            Field::Idler => 'i',
        }
    }
}

/// Input port: `B` enters through the coupling mirror (gamma1), `C` through
/// the output mirror (gamma2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Port {
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Part {
    Direct(Port),
    Conjugate(Port),
    Coherent,
}

pub const PARTS: [Part; 5] = [
    Part::Direct(Port::B),
    Part::Direct(Port::C),
    Part::Conjugate(Port::B),
    Part::Conjugate(Port::C),
    Part::Coherent,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Factor {
    field: Field,
    dagger: bool,
}

/// Spectral kernel multiplying an input operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Kernel {
    L,
    C,
    LConj,
    CConj,
}

impl Kernel {
    fn eval(self, g: f64, w: f64) -> Complex64 {
        let z = Complex64::new(1.0, -2.0 * w);
        let c = 2.0 / (z * z - g * g);
        match self {
            Kernel::C => c,
            Kernel::L => z * c,
            Kernel::CConj => c.conj(),
            Kernel::LConj => (z * c).conj(),
        }
    }
    fn symbol(self) -> &'static str {
        match self {
            Kernel::L => "L",
            Kernel::C => "C",
            Kernel::LConj => "L*",
            Kernel::CConj => "C*",
        }
    }
}

/// An input operator `port_field(sign * w)` (or its adjoint) in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputOperator {
    pub slot: usize,
    pub field: Field,
    pub port: Port,
    pub creation: bool,
    /// +1 for argument w, -1 for argument -w.
    pub sign: i8,
    pub kernel: Kernel,
}

impl fmt::Display for InputOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let port = match self.port {
            Port::B => 'b',
            Port::C => 'c',
        };
        let dag = if self.creation { "+" } else { "" };
        let arg = if self.sign > 0 { "w" } else { "-w" };
        write!(f, "{port}{dag}_{}({arg})", self.field.tag())
    }
}

/// One delta pairing of two slots, integrated as
/// `int dw k_left(w) k_right(sign * w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pairing {
    pub left: usize,
    pub right: usize,
    pub left_kernel: Kernel,
    pub right_kernel: Kernel,
    pub sign: i8,
}

impl Pairing {
    pub fn integrand(&self) -> String {
        let arg = if self.sign > 0 { "w" } else { "-w" };
        format!(
            "{}(w) {}({arg})",
            self.left_kernel.symbol(),
            self.right_kernel.symbol()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionTerm {
    pub parts: [Part; 4],
    pub label: String,
    #[serde(serialize_with = "ser_complex")]
    pub prefactor: Complex64,
    pub operators: Vec<InputOperator>,
    /// Every Wick matching of `operators` with nonzero vacuum contraction.
    pub matchings: Vec<Vec<Pairing>>,
}

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn contractible(a: &InputOperator, b: &InputOperator) -> bool {
    !a.creation && b.creation && a.field == b.field && a.port == b.port
}

fn matchings(ops: &[InputOperator]) -> Vec<Vec<Pairing>> {
    fn rec(ops: &[InputOperator], used: &mut Vec<bool>, cur: &mut Vec<Pairing>, out: &mut Vec<Vec<Pairing>>) {
        let Some(i) = used.iter().position(|u| !u) else {
            out.push(cur.clone());
            return;
        };
        used[i] = true;
        for j in i + 1..ops.len() {
            if !used[j] && contractible(&ops[i], &ops[j]) {
                used[j] = true;
                cur.push(Pairing {
                    left: ops[i].slot,
                    right: ops[j].slot,
                    left_kernel: ops[i].kernel,
                    right_kernel: ops[j].kernel,
                    sign: ops[i].sign * ops[j].sign,
                });
                rec(ops, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
        used[i] = false;
    }
    let mut out = Vec::new();
    if ops.len().is_multiple_of(2) {
        rec(ops, &mut vec![false; ops.len()], &mut Vec::new(), &mut out);
    }
    out
}

struct Expansion {
    rate: [f64; 2],
    squeeze: Complex64,
    coherent: [Complex64; 2],
}

impl Expansion {
    fn new(point: &OperatingPoint) -> Result<Self> {
        let q = qs(point.g())?;
        let amp = effective_amplitudes(point);
        Ok(Self {
            rate: [point.gamma1(), point.gamma2()],
            squeeze: point.squeeze(),
            coherent: [q * amp.a_s, q * amp.a_i],
        })
    }

    fn rate(&self, port: Port) -> f64 {
        match port {
            Port::B => self.rate[0],
            Port::C => self.rate[1],
        }
    }

    /// Constant coefficient and operator content of one part of one factor.
    fn part(&self, factor: Factor, part: Part, slot: usize) -> (Complex64, Option<InputOperator>) {
        let Factor { field, dagger } = factor;
        match part {
            Part::Coherent => {
                let k = match field {
                    Field::Signal => self.coherent[0],
                    Field::Idler => self.coherent[1],
                };
                (if dagger { k.conj() } else { k }, None)
            }
            Part::Direct(port) => {
                let op = InputOperator {
                    slot,
                    field,
                    port,
                    creation: dagger,
                    sign: 1,
                    kernel: if dagger { Kernel::LConj } else { Kernel::L },
                };
                (Complex64::new(self.rate(port).sqrt(), 0.0), Some(op))
            }
            Part::Conjugate(port) => {
                let gs = if dagger { self.squeeze.conj() } else { self.squeeze };
                let op = InputOperator {
                    slot,
                    field: field.partner(),
                    port,
                    creation: !dagger,
                    sign: -1,
                    kernel: if dagger { Kernel::CConj } else { Kernel::C },
                };
                (-gs * self.rate(port).sqrt(), Some(op))
            }
        }
    }
}

fn label(factors: &[Factor; 4], ops: &[InputOperator]) -> String {
    (0..4)
        .map(|slot| match ops.iter().find(|o| o.slot == slot) {
            Some(op) => op.to_string(),
            None => {
                let conj = if factors[slot].dagger { "*" } else { "" };
                format!("A{conj}_{}", factors[slot].field.tag())
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// All 5^4 part assignments, before any filtering.
pub const RAW_TERM_COUNT: usize = 625;

/// Surviving terms: structurally nonzero vacuum expectation and nonzero
/// constant prefactor.
pub fn enumerate_contractions(correlator: Correlator, point: &OperatingPoint) -> Result<Vec<ContractionTerm>> {
    let exp = Expansion::new(point)?;
    let factors = correlator.factors();
    let mut terms = Vec::new();
    for k in 0..RAW_TERM_COUNT {
        let parts = [PARTS[k / 125], PARTS[(k / 25) % 5], PARTS[(k / 5) % 5], PARTS[k % 5]];
        let mut prefactor = Complex64::new(1.0, 0.0);
        let mut ops = Vec::new();
        for slot in 0..4 {
            let (c, op) = exp.part(factors[slot], parts[slot], slot);
            prefactor *= c;
            ops.extend(op);
        }
        if prefactor == Complex64::new(0.0, 0.0) {
            continue;
        }
        let m = matchings(&ops);
        if m.is_empty() {
            continue;
        }
        terms.push(ContractionTerm {
            parts,
            label: label(&factors, &ops),
            prefactor,
            operators: ops,
            matchings: m,
        });
    }
    Ok(terms)
}

type IntegralKey = (Kernel, Kernel, i8);

struct Integrals<'a> {
    g: f64,
    config: &'a QuadratureConfig,
    cache: BTreeMap<IntegralKey, (Complex64, f64)>,
}

impl Integrals<'_> {
    fn get(&mut self, p: &Pairing) -> Result<(Complex64, f64)> {
        let key = (p.left_kernel, p.right_kernel, p.sign);
        if let Some(v) = self.cache.get(&key) {
            return Ok(*v);
        }
        let (g, s) = (self.g, p.sign as f64);
        let r = integrate_real_line(
            |w| p.left_kernel.eval(g, w) * p.right_kernel.eval(g, s * w),
            self.config,
        )?;
        self.cache.insert(key, (r.value, r.error));
        Ok((r.value, r.error))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermValue {
    pub label: String,
    pub matchings: usize,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEntry {
    pub correlator: Correlator,
    pub raw_terms: usize,
    pub term_count: usize,
    /// Number of nonzero (term, matching) contributions.
    pub pre_merge_count: usize,
    pub terms: Vec<TermValue>,
    #[serde(serialize_with = "ser_complex")]
    pub oracle_value: Complex64,
    pub closed_form: f64,
    pub rel_deviation: f64,
    /// |Im| / |Re| of the oracle value.
    pub imag_rel: f64,
    /// Accumulated quadrature error bound (absolute, before prefactors).
    pub quadrature_error: f64,
}

pub fn evaluate_terms(
    terms: &[ContractionTerm],
    g: f64,
    config: &QuadratureConfig,
) -> Result<(Vec<TermValue>, f64)> {
    let mut ints = Integrals {
        g,
        config,
        cache: BTreeMap::new(),
    };
    let mut values = Vec::with_capacity(terms.len());
    for t in terms {
        let mut sum = Complex64::new(0.0, 0.0);
        for m in &t.matchings {
            let mut prod = Complex64::new(1.0, 0.0);
            for p in m {
                prod *= ints.get(p)?.0;
            }
            sum += prod;
        }
        values.push(TermValue {
            label: t.label.clone(),
            matchings: t.matchings.len(),
            value: t.prefactor * sum,
        });
    }
    let err = ints.cache.values().map(|v| v.1).sum();
    Ok((values, err))
}

pub fn evaluate_som_oracle(
    correlator: Correlator,
    point: &OperatingPoint,
    config: &QuadratureConfig,
) -> Result<OracleEntry> {
    let terms = enumerate_contractions(correlator, point)?;
    let (values, quadrature_error) = evaluate_terms(&terms, point.g(), config)?;
    let oracle_value: Complex64 = values.iter().map(|v| v.value).sum();
    let closed_form = correlator.closed_form(point)?;
    let rel_deviation = if closed_form == 0.0 {
        oracle_value.norm()
    } else {
        (oracle_value.re - closed_form).abs() / closed_form.abs()
    };
    let imag_rel = if oracle_value.re == 0.0 {
        oracle_value.im.abs()
    } else {
        oracle_value.im.abs() / oracle_value.re.abs()
    };
    Ok(OracleEntry {
        correlator,
        raw_terms: RAW_TERM_COUNT,
        term_count: terms.len(),
        pre_merge_count: terms.iter().map(|t| t.matchings.len()).sum(),
        terms: values,
        oracle_value,
        closed_form,
        rel_deviation,
        imag_rel,
        quadrature_error,
    })
}

/// Parts of the worked anchor term: the output-port anomalous pair of the
/// cross moment, `<c_i c_s c_i^+ c_s^+>` with one conjugate and one direct
/// factor per mode.
pub const ANCHOR_PARTS: [Part; 4] = [
    Part::Conjugate(Port::C),
    Part::Direct(Port::C),
    Part::Direct(Port::C),
    Part::Conjugate(Port::C),
];

/// Oracle value of the anchor term; `None` if it vanishes at this point.
pub fn anchor_term(point: &OperatingPoint, config: &QuadratureConfig) -> Result<Option<Complex64>> {
    let terms = enumerate_contractions(Correlator::Gsi, point)?;
    let Some(t) = terms.into_iter().find(|t| t.parts == ANCHOR_PARTS) else {
        return Ok(None);
    };
    let (v, _) = evaluate_terms(std::slice::from_ref(&t), point.g(), config)?;
    Ok(Some(v[0].value))
}
