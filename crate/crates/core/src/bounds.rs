//! Evaluators for the Gaussian tail inequalities used in the spacing lemmas,
//! plus grid suites that sweep them.
//!
//! Each evaluator returns both sides so that callers can log margins.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::{ln_upper_tail, pdf, upper_tail};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `lhs ≥ rhs`
    AtLeast,
    /// `lhs ≤ rhs`
    AtMost,
    /// `lhs < mid < rhs`
    StrictBracket,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub x: f64,
    /// Unused (`None`) for inequalities without an ε.
    pub eps: Option<f64>,
    pub lhs: f64,
    /// Middle term of a two-sided bracket.
    pub mid: Option<f64>,
    pub rhs: f64,
    pub direction: Direction,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(x: f64, eps: Option<f64>, lhs: f64, mid: Option<f64>, rhs: f64, direction: Direction) -> Self {
        let mut check = InequalityCheck {
            x,
            eps,
            lhs,
            mid,
            rhs,
            direction,
            holds: false,
        };
        check.holds = match direction {
            Direction::AtLeast => lhs >= rhs,
            Direction::AtMost => lhs <= rhs,
            Direction::StrictBracket => {
                let m = mid.unwrap_or(f64::NAN);
                lhs < m && m < rhs
            }
        };
        check
    }

    /// Signed slack of the inequality; nonnegative exactly when it holds
    /// (strictly positive for a bracket).
    pub fn margin(&self) -> f64 {
        match self.direction {
            Direction::AtLeast => self.lhs - self.rhs,
            Direction::AtMost => self.rhs - self.lhs,
            Direction::StrictBracket => {
                let m = self.mid.unwrap_or(f64::NAN);
                (m - self.lhs).min(self.rhs - m)
            }
        }
    }

    /// Margin relative to the size of the terms compared.
    pub fn relative_margin(&self) -> f64 {
        let scale = match self.direction {
            Direction::StrictBracket => self.mid.unwrap_or(f64::NAN).abs(),
            _ => self.lhs.abs().max(self.rhs.abs()),
        };
        if scale > 0.0 { self.margin() / scale } else { 0.0 }
    }
}

fn positive(what: &'static str, name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::domain(what, format!("{name} must be a positive finite real, got {v}")))
    }
}

/// `Φ(b) − Φ(a)` for `0 < a ≤ b`, taken as a difference of upper tails.
fn tail_difference(a: f64, b: f64) -> f64 {
    upper_tail(a) - upper_tail(b)
}

/// `Φ(x + ε/x) − Φ(x) ≥ ε φ(x + ε/x) / x`.
pub fn eval_gap_bound(x: f64, eps: f64) -> Result<InequalityCheck> {
    let x = positive("eval_gap_bound", "x", x)?;
    let eps = positive("eval_gap_bound", "eps", eps)?;
    let b = x + eps / x;
    let lhs = tail_difference(x, b);
    let rhs = eps * pdf(b) / x;
    Ok(InequalityCheck::new(x, Some(eps), lhs, None, rhs, Direction::AtLeast))
}

/// `x φ(x) / (1 + x²) < 1 − Φ(x) < φ(x) / x`.
pub fn eval_mills_bounds(x: f64) -> Result<InequalityCheck> {
    let x = positive("eval_mills_bounds", "x", x)?;
    let d = pdf(x);
    Ok(InequalityCheck::new(
        x,
        None,
        x * d / (1.0 + x * x),
        Some(upper_tail(x)),
        d / x,
        Direction::StrictBracket,
    ))
}

/// `(Φ(x + ε/x) − Φ(x)) / (1 − Φ(x)) ≥ ε exp(−ε²/(2x²) − ε)`.
pub fn eval_ratio_bound(x: f64, eps: f64) -> Result<InequalityCheck> {
    let x = positive("eval_ratio_bound", "x", x)?;
    let eps = positive("eval_ratio_bound", "eps", eps)?;
    let lhs = tail_difference(x, x + eps / x) / upper_tail(x);
    let rhs = eps * (-0.5 * eps * eps / (x * x) - eps).exp();
    Ok(InequalityCheck::new(x, Some(eps), lhs, None, rhs, Direction::AtLeast))
}

/// Base of the geometric tail bound: `1 − ε e^{−1.5ε}`, always in (0, 1).
fn lemma31_base(eps: f64) -> f64 {
    1.0 - eps * (-1.5 * eps).exp()
}

/// Upper bound `(1 − ε e^{−1.5ε})^m` on the probability that an upper-half
/// order statistic times its following spacing exceeds ε, where `m` is the
/// number of observations above it.
pub fn lemma31_bound(eps: f64, m: u64) -> Result<f64> {
    let eps = positive("lemma31_bound", "eps", eps)?;
    if m < 1 {
        return Err(Error::domain("lemma31_bound", "exponent m must be at least 1"));
    }
    Ok(lemma31_base(eps).powf(m as f64))
}

/// Survival ratio `(1 − Φ(x + ε/x)) / (1 − Φ(x))`.
pub fn tail_survival_ratio(x: f64, eps: f64) -> f64 {
    let t = upper_tail(x);
    if t > 0.0 { upper_tail(x + eps / x) / t } else { 0.0 }
}

/// Logarithm of [`tail_survival_ratio`], finite even where the ratio
/// underflows.
pub fn ln_tail_survival_ratio(x: f64, eps: f64) -> f64 {
    ln_upper_tail(x + eps / x) - ln_upper_tail(x)
}

/// Outcome of sweeping one inequality over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub points: usize,
    pub failures: usize,
    /// The grid point with the smallest relative margin.
    pub worst: InequalityCheck,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn sweep(name: &str, checks: impl IntoIterator<Item = InequalityCheck>, strict: bool) -> SuiteResult {
    let mut points = 0;
    let mut failures = 0;
    let mut worst: Option<(InequalityCheck, bool)> = None;
    for c in checks {
        points += 1;
        let ok = c.holds && c.margin().is_finite() && (!strict || c.margin() > 0.0);
        if !ok {
            failures += 1;
        }
        // a failing point always outranks a passing one
        let replace = match worst {
            None => true,
            Some((w, w_ok)) => match (ok, w_ok) {
                (false, true) => true,
                (true, false) => false,
                _ => c.relative_margin() < w.relative_margin(),
            },
        };
        if replace {
            worst = Some((c, ok));
        }
    }
    let worst = worst.map(|(c, _)| c);
    SuiteResult {
        name: name.to_string(),
        points,
        failures,
        worst: worst.expect("grid must be nonempty"),
    }
}

/// Log-spaced grid of `count` points over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

fn linear_grid(step: f64, hi: f64) -> Vec<f64> {
    let count = (hi / step).round() as usize;
    (1..=count).map(|k| k as f64 * step).collect()
}

/// Runs every inequality family on its grid:
///
/// * the Mills bracket on a log grid over (0, 12];
/// * the gap and ratio lower bounds on (0, 6] × (0, 3];
/// * monotonicity of the survival ratio on (0, √ε] for ε ∈ {0.25, 1, 4};
/// * the survival ratio against `1 − ε e^{−1.5ε}` for all x > 0, including
///   the sharper intermediate bound for x > √ε.
pub fn inequality_suite() -> Vec<SuiteResult> {
    let xs = linear_grid(0.05, 6.0);
    let epss = linear_grid(0.05, 3.0);
    let pairs: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| epss.iter().map(move |&e| (x, e)))
        .collect();

    let mut out = Vec::new();
    out.push(sweep(
        "mills_bracket",
        log_grid(1e-3, 12.0, 400).into_iter().map(|x| eval_mills_bounds(x).unwrap()),
        true,
    ));
    out.push(sweep(
        "gap_bound",
        pairs.iter().map(|&(x, e)| eval_gap_bound(x, e).unwrap()),
        true,
    ));
    out.push(sweep(
        "ratio_bound",
        pairs.iter().map(|&(x, e)| eval_ratio_bound(x, e).unwrap()),
        true,
    ));

    let mut mono = Vec::new();
    for eps in [0.25_f64, 1.0, 4.0] {
        let top = eps.sqrt();
        let steps = 400;
        let grid: Vec<f64> = (1..=steps).map(|k| top * k as f64 / steps as f64).collect();
        for w in grid.windows(2) {
            // finite-difference sign on the log scale, where the ratio does
            // not underflow for small x
            let here = ln_tail_survival_ratio(w[0], eps);
            let next = ln_tail_survival_ratio(w[1], eps);
            mono.push(InequalityCheck::new(w[1], Some(eps), next, None, here, Direction::AtLeast));
        }
        // endpoint comparison used at x = √ε
        let end = upper_tail(2.0 * top) / upper_tail(top);
        mono.push(InequalityCheck::new(
            top,
            Some(eps),
            end,
            None,
            lemma31_base(eps),
            Direction::AtMost,
        ));
    }
    out.push(sweep("ratio_monotone_below_sqrt_eps", mono, true));

    let mut combined = Vec::new();
    for &(x, eps) in &pairs {
        let ratio = tail_survival_ratio(x, eps);
        combined.push(InequalityCheck::new(
            x,
            Some(eps),
            ratio,
            None,
            lemma31_base(eps),
            Direction::AtMost,
        ));
        if x > eps.sqrt() {
            let sharper = 1.0 - eps * (-0.5 * eps * eps / (x * x) - eps).exp();
            combined.push(InequalityCheck::new(x, Some(eps), ratio, None, sharper, Direction::AtMost));
            combined.push(InequalityCheck::new(
                x,
                Some(eps),
                sharper,
                None,
                lemma31_base(eps),
                Direction::AtMost,
            ));
        }
    }
    out.push(sweep("ratio_below_geometric_base", combined, true));
    out
}
