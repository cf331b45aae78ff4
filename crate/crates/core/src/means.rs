//! Generalized two-variable means.
//!
//! A mean is a positive continuous function `M(a, b)` on pairs of positive
//! reals that is symmetric, positively homogeneous, non-decreasing in each
//! argument and lies between `min(a, b)` and `max(a, b)`. The built-in
//! family covers the arithmetic, geometric and harmonic means, the power
//! means and the two extremal means `min`/`max`; arbitrary evaluators can be
//! wrapped with [`MeanSpec::custom`].
//!
//! Selection strings (CLI and JSON) follow the grammar
//! `arithmetic | geometric | harmonic | min | max | power:<float>`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Lower and upper ends of the log-uniform sampling range used by the
/// randomized axiom checks.
const SAMPLE_LO: f64 = 1e-3;
const SAMPLE_HI: f64 = 1e3;

type Evaluator = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    /// `((a^p + b^p) / 2)^(1/p)`; `p = 0` is the geometric mean.
    Power(f64),
    Min,
    Max,
    Custom { name: String, eval: Evaluator },
}

/// A generalized mean together with its analytically known dominance flag.
#[derive(Clone)]
pub struct MeanSpec {
    kind: MeanKind,
    dominates_geometric_claim: Option<bool>,
}

impl fmt::Debug for MeanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeanSpec({self})")
    }
}

impl fmt::Display for MeanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MeanKind::Arithmetic => f.write_str("arithmetic"),
            MeanKind::Geometric => f.write_str("geometric"),
            MeanKind::Harmonic => f.write_str("harmonic"),
            MeanKind::Power(p) => write!(f, "power:{p}"),
            MeanKind::Min => f.write_str("min"),
            MeanKind::Max => f.write_str("max"),
            MeanKind::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl MeanSpec {
    pub fn arithmetic() -> Self {
        Self::builtin(MeanKind::Arithmetic)
    }

    pub fn geometric() -> Self {
        Self::builtin(MeanKind::Geometric)
    }

    pub fn harmonic() -> Self {
        Self::builtin(MeanKind::Harmonic)
    }

    pub fn min() -> Self {
        Self::builtin(MeanKind::Min)
    }

    pub fn max() -> Self {
        Self::builtin(MeanKind::Max)
    }

    /// Power mean of exponent `p`. `p = 0` maps to the geometric mean.
    pub fn power(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::domain(format!("power mean exponent must be finite, got {p}")));
        }
        if p == 0.0 {
            return Ok(Self::geometric());
        }
        Ok(Self::builtin(MeanKind::Power(p)))
    }

    /// Wraps an arbitrary evaluator. Nothing is known about it analytically;
    /// use [`validate_mean_axioms`] and [`dominates_geometric`] to probe it.
    pub fn custom<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        MeanSpec {
            kind: MeanKind::Custom {
                name: name.into(),
                eval: Arc::new(eval),
            },
            dominates_geometric_claim: None,
        }
    }

    fn builtin(kind: MeanKind) -> Self {
        let claim = match kind {
            MeanKind::Arithmetic | MeanKind::Geometric | MeanKind::Max => true,
            MeanKind::Harmonic | MeanKind::Min => false,
            MeanKind::Power(p) => p >= 0.0,
            MeanKind::Custom { .. } => unreachable!("custom means are built with MeanSpec::custom"),
        };
        MeanSpec {
            kind,
            dominates_geometric_claim: Some(claim),
        }
    }

    /// The six built-in means (with `power:2` as the power representative).
    pub fn builtins() -> Vec<MeanSpec> {
        vec![
            Self::arithmetic(),
            Self::geometric(),
            Self::harmonic(),
            Self::builtin(MeanKind::Power(2.0)),
            Self::min(),
            Self::max(),
        ]
    }

    pub fn kind(&self) -> &MeanKind {
        &self.kind
    }

    /// Analytically asserted `sqrt(ab) <= M(a, b)`; `None` for custom means.
    pub fn dominates_geometric_claim(&self) -> Option<bool> {
        self.dominates_geometric_claim
    }

    /// Raw evaluation without domain checks. Callers guarantee `a, b > 0`.
    pub(crate) fn eval_unchecked(&self, a: f64, b: f64) -> f64 {
        match &self.kind {
            MeanKind::Arithmetic => 0.5 * a + 0.5 * b,
            MeanKind::Geometric => geometric(a, b),
            MeanKind::Harmonic => {
                // 2ab/(a+b) written to avoid overflow of the product
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                2.0 * lo / (1.0 + lo / hi)
            }
            MeanKind::Power(p) => power_mean(a, b, *p),
            MeanKind::Min => a.min(b),
            MeanKind::Max => a.max(b),
            MeanKind::Custom { eval, .. } => eval(a, b),
        }
    }

    /// `M(a, b)` for positive arguments.
    pub fn evaluate(&self, a: f64, b: f64) -> Result<f64> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!(
                "mean arguments must be positive and finite, got ({a}, {b})"
            )));
        }
        Ok(self.eval_unchecked(a, b))
    }
}

fn geometric(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_normal() {
        p.sqrt()
    } else {
        a.sqrt() * b.sqrt()
    }
}

// Factor out the larger argument so that a^p never overflows.
fn power_mean(a: f64, b: f64, p: f64) -> f64 {
    if a == b {
        return a;
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if p > 0.0 {
        let ratio = (lo / hi).powf(p);
        hi * ((1.0 + ratio) * 0.5).powf(1.0 / p)
    } else {
        let ratio = (hi / lo).powf(p);
        lo * ((1.0 + ratio) * 0.5).powf(1.0 / p)
    }
}

impl FromStr for MeanSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "arithmetic" => Ok(Self::arithmetic()),
            "geometric" => Ok(Self::geometric()),
            "harmonic" => Ok(Self::harmonic()),
            "min" => Ok(Self::min()),
            "max" => Ok(Self::max()),
            _ => match s.strip_prefix("power:") {
                Some(p) => {
                    let p: f64 = p
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad power mean exponent in {s:?}")))?;
                    Self::power(p)
                }
                None => Err(Error::Parse(format!(
                    "unknown mean {s:?}; expected arithmetic|geometric|harmonic|min|max|power:<p>"
                ))),
            },
        }
    }
}

/// Outcome of a single axiom over all samples.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    /// First offending sample, as the arguments that exposed it.
    pub counterexample: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ValidationReport {
    pub mean: String,
    pub samples: usize,
    pub positivity: AxiomCheck,
    pub symmetry: AxiomCheck,
    pub homogeneity: AxiomCheck,
    pub monotonicity: AxiomCheck,
    pub betweenness: AxiomCheck,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    pub fn checks(&self) -> [&AxiomCheck; 5] {
        [
            &self.positivity,
            &self.symmetry,
            &self.homogeneity,
            &self.monotonicity,
            &self.betweenness,
        ]
    }
}

struct Tracker {
    axiom: &'static str,
    witness: Option<Vec<f64>>,
}

impl Tracker {
    fn new(axiom: &'static str) -> Self {
        Tracker { axiom, witness: None }
    }

    fn record(&mut self, ok: bool, args: &[f64]) {
        if !ok && self.witness.is_none() {
            self.witness = Some(args.to_vec());
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck {
            axiom: self.axiom,
            passed: self.witness.is_none(),
            counterexample: self.witness,
        }
    }
}

fn log_uniform(rng: &mut impl Rng) -> f64 {
    let (lo, hi) = (SAMPLE_LO.ln(), SAMPLE_HI.ln());
    rng.random_range(lo..hi).exp()
}

fn close(u: f64, v: f64, tol: f64) -> bool {
    (u - v).abs() <= tol * u.abs().max(v.abs()).max(f64::MIN_POSITIVE)
}

// Deterministic probes checked before the random samples so that textbook
// counterexamples (e.g. a = b = 1) are reported verbatim.
const PROBES: [(f64, f64); 4] = [(1.0, 1.0), (1.0, 4.0), (2.0, 8.0), (0.5, 3.0)];

/// Checks the four mean axioms plus positivity on `sample_budget` random
/// triples `(a, b, r)` drawn log-uniformly from `[1e-3, 1e3]`.
///
/// `tol` is relative. Monotonicity is checked in the non-strict sense.
pub fn validate_mean_axioms(
    mean: &MeanSpec,
    sample_budget: usize,
    seed: u64,
    tol: f64,
) -> Result<ValidationReport> {
    if sample_budget == 0 {
        return Err(Error::domain("sample_budget must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positivity = Tracker::new("positivity");
    let mut symmetry = Tracker::new("symmetry");
    let mut homogeneity = Tracker::new("homogeneity");
    let mut monotonicity = Tracker::new("monotonicity");
    let mut betweenness = Tracker::new("betweenness");

    let mut check = |a: f64, b: f64, r: f64, a2: f64, b2: f64| {
        let m = mean.eval_unchecked(a, b);
        positivity.record(m.is_finite() && m > 0.0, &[a, b]);

        symmetry.record(close(m, mean.eval_unchecked(b, a), tol), &[a, b]);

        let scaled = mean.eval_unchecked(r * a, r * b);
        homogeneity.record(close(scaled, r * m, tol), &[a, b, r]);

        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let slack = tol * hi;
        betweenness.record(m >= lo - slack && m <= hi + slack, &[a, b]);

        // ordered pairs a <= a2 (first slot) and b <= b2 (second slot)
        let (a_lo, a_hi) = if a <= a2 { (a, a2) } else { (a2, a) };
        let m_lo = mean.eval_unchecked(a_lo, b);
        let m_hi = mean.eval_unchecked(a_hi, b);
        monotonicity.record(m_lo <= m_hi + tol * m_hi.abs(), &[a_lo, a_hi, b]);
        let (b_lo, b_hi) = if b <= b2 { (b, b2) } else { (b2, b) };
        let m_lo = mean.eval_unchecked(a, b_lo);
        let m_hi = mean.eval_unchecked(a, b_hi);
        monotonicity.record(m_lo <= m_hi + tol * m_hi.abs(), &[a, b_lo, b_hi]);
    };

    let probes = PROBES.len().min(sample_budget);
    for &(a, b) in &PROBES[..probes] {
        check(a, b, 2.0, 2.0 * a, 3.0 * b);
    }
    for _ in probes..sample_budget {
        let (a, b, r) = (log_uniform(&mut rng), log_uniform(&mut rng), log_uniform(&mut rng));
        let (a2, b2) = (log_uniform(&mut rng), log_uniform(&mut rng));
        check(a, b, r, a2, b2);
    }

    Ok(ValidationReport {
        mean: mean.to_string(),
        samples: sample_budget,
        positivity: positivity.finish(),
        symmetry: symmetry.finish(),
        homogeneity: homogeneity.finish(),
        monotonicity: monotonicity.finish(),
        betweenness: betweenness.finish(),
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DominanceWitness {
    pub a: f64,
    pub b: f64,
    pub mean_value: f64,
    pub geometric_value: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DominanceReport {
    pub mean: String,
    pub samples: usize,
    pub holds: bool,
    pub witness: Option<DominanceWitness>,
}

/// Samples pairs `(a, b)` and reports whether `sqrt(ab) <= M(a, b)` (up to a
/// relative `tol`) held throughout, with the first violating pair otherwise.
pub fn dominates_geometric(
    mean: &MeanSpec,
    sample_budget: usize,
    seed: u64,
    tol: f64,
) -> Result<DominanceReport> {
    if sample_budget == 0 {
        return Err(Error::domain("sample_budget must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes = PROBES.len().min(sample_budget);
    let pairs = PROBES[..probes]
        .iter()
        .copied()
        .chain((probes..sample_budget).map(|_| (log_uniform(&mut rng), log_uniform(&mut rng))));

    let mut witness = None;
    for (a, b) in pairs {
        let m = mean.eval_unchecked(a, b);
        let g = geometric(a, b);
        if !(g <= m + tol * g) {
            witness = Some(DominanceWitness {
                a,
                b,
                mean_value: m,
                geometric_value: g,
            });
            break;
        }
    }
    Ok(DominanceReport {
        mean: mean.to_string(),
        samples: sample_budget,
        holds: witness.is_none(),
        witness,
    })
}
