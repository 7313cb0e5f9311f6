//! Selection of the mesh size `h` and the truncation numbers `(M, N)` from a
//! certificate and a driving integer `n`.
//!
//! Four rules are provided:
//!
//! * [`Strategy::Standard`]: `h = log(2dn/mu)/n`, the long-standing near-optimal choice.
//! * [`Strategy::New1`]: `h = arsinh(q(dn/mu))/n`, keeping `max(M, N) = n`.
//! * [`Strategy::New2`]: `h = arsinh(dn/mu)/n`, with both `M` and `N` derived
//!   so that the discretization and truncation exponents coincide.
//! * [`Strategy::GeneralQ`]: `h = d/(mu q(dn/mu))` for any nonnegative,
//!   nondecreasing `q`; `q(x) = x` gives `h = 1/n`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function_space::FunctionClass;
use crate::kernels::{arsinh, q_func};

/// Relative slack subtracted before taking a ceiling, so that arguments that
/// are integers in exact arithmetic do not round up by one.
const CEIL_NUDGE: f64 = 1e-9;

/// Largest ceiling argument accepted for a truncation number.
const MAX_TRUNCATION: f64 = (1u64 << 62) as f64;

type QFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A user-supplied `q`, spot-checked at construction.
#[derive(Clone)]
pub struct CustomQ {
    f: Arc<QFn>,
    label: String,
}

impl fmt::Debug for CustomQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CustomQ").field(&self.label).finish()
    }
}

/// Choice of the function `q` used by the generalized rule.
#[derive(Debug, Clone)]
pub enum QChoice {
    /// `q(x) = x / arsinh(x)`.
    Default,
    /// `q(x) = x`.
    Identity,
    Custom(CustomQ),
}

impl PartialEq for QChoice {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (QChoice::Default, QChoice::Default) | (QChoice::Identity, QChoice::Identity) => true,
            (QChoice::Custom(a), QChoice::Custom(b)) => a.label == b.label,
            _ => false,
        }
    }
}

impl QChoice {
    /// Wraps a custom `q`, rejecting it if any of 1000 samples on `[0, 1e6]`
    /// is negative, non-finite, or breaks monotonicity.
    pub fn custom<F>(label: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let label = label.into();
        let mut prev = f64::NEG_INFINITY;
        let samples = std::iter::once(0.0).chain((0..999).map(|i| 10f64.powf(-6.0 + 12.0 * i as f64 / 998.0)));
        for x in samples {
            let v = f(x);
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!("custom q `{label}` gives {v} at x = {x}")));
            }
            if v < prev - 4.0 * f64::EPSILON * prev.abs() {
                return Err(Error::invalid(format!("custom q `{label}` decreases near x = {x}")));
            }
            prev = v;
        }
        Ok(QChoice::Custom(CustomQ { f: Arc::new(f), label }))
    }

    /// Evaluates `q(x)` for `x >= 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            QChoice::Default => q_func(x),
            QChoice::Identity => {
                if x >= 0.0 {
                    Ok(x)
                } else {
                    Err(Error::domain(format!("q requires x >= 0, got {x}")))
                }
            }
            QChoice::Custom(c) => {
                if x >= 0.0 {
                    Ok((c.f)(x))
                } else {
                    Err(Error::domain(format!("q requires x >= 0, got {x}")))
                }
            }
        }
    }

    /// Mesh size `d / (mu q(dn/mu))`, written in closed form where one exists.
    fn mesh(&self, c: &FunctionClass, n: u64, q_value: f64) -> f64 {
        let n = n as f64;
        match self {
            QChoice::Default => arsinh(c.d() * n / c.mu()) / n,
            QChoice::Identity => 1.0 / n,
            QChoice::Custom(_) => c.d() / (c.mu() * q_value),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            QChoice::Default => "default",
            QChoice::Identity => "identity",
            QChoice::Custom(c) => &c.label,
        }
    }
}

/// A selection rule for `(h, M, N)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Standard,
    New1,
    New2,
    GeneralQ(QChoice),
}

impl Strategy {
    /// The four rules exposed on the command line, in sweep order.
    pub fn all() -> Vec<Strategy> {
        vec![
            Strategy::Standard,
            Strategy::New1,
            Strategy::New2,
            Strategy::GeneralQ(QChoice::Identity),
        ]
    }

    /// Parses a command-line name: `standard`, `new1`, `new2` or `corollary`.
    pub fn from_name(name: &str) -> Result<Strategy> {
        match name {
            "standard" => Ok(Strategy::Standard),
            "new1" => Ok(Strategy::New1),
            "new2" => Ok(Strategy::New2),
            "corollary" => Ok(Strategy::GeneralQ(QChoice::Identity)),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Strategy::Standard => "standard".into(),
            Strategy::New1 => "new1".into(),
            Strategy::New2 => "new2".into(),
            Strategy::GeneralQ(QChoice::Identity) => "corollary".into(),
            Strategy::GeneralQ(q) => format!("general-{}", q.label()),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Result of a selection rule.
#[derive(Debug, Clone, PartialEq)]
pub struct SincGrid {
    /// Mesh size.
    pub h: f64,
    /// Left truncation number `M`; samples run from `k = -M`.
    pub left: u64,
    /// Right truncation number `N`; samples run up to `k = N`.
    pub right: u64,
    /// Driving integer.
    pub n: u64,
    pub strategy: Strategy,
    /// False when the rule's hypotheses on `n` fail; the grid is still usable.
    pub valid: bool,
    pub warning: Option<String>,
}

impl SincGrid {
    /// Number of function evaluations `M + N + 1`.
    pub fn evals(&self) -> u64 {
        self.left + self.right + 1
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::invalid("n must be at least 1"))
    } else {
        Ok(())
    }
}

fn ceil_nudged(y: f64) -> Result<u64> {
    if !y.is_finite() || y > MAX_TRUNCATION {
        return Err(Error::domain(format!("truncation number argument {y} out of range")));
    }
    let v = (y - CEIL_NUDGE * y.abs().max(1.0)).ceil();
    Ok(v.max(0.0) as u64)
}

/// Standard rule: `h = log(2dn/mu)/n`, the faster-decaying side shortened by
/// `floor(log(nu/mu)/h)`. Marked invalid when `n < nu e / (2d)`.
pub fn select_standard(c: &FunctionClass, n: u64) -> Result<SincGrid> {
    check_n(n)?;
    let nf = n as f64;
    let arg = 2.0 * c.d() * nf / c.mu();
    if arg <= 1.0 {
        return Err(Error::domain(format!(
            "2dn/mu = {arg} <= 1 makes the standard mesh size nonpositive"
        )));
    }
    let h = arg.ln() / nf;
    let reduction = ((c.nu() / c.mu()).ln() / h).floor();
    if reduction > MAX_TRUNCATION {
        return Err(Error::domain("decay-rate ratio too large for the standard rule"));
    }
    let shortened = n.saturating_sub(reduction as u64);
    let (left, right) = if c.alpha() <= c.beta() {
        (n, shortened)
    } else {
        (shortened, n)
    };
    let threshold = c.nu() * std::f64::consts::E / (2.0 * c.d());
    let (valid, warning) = if nf >= threshold {
        (true, None)
    } else {
        (
            false,
            Some(format!(
                "n = {n} is below nu*e/(2d) = {threshold:.6}; the standard bound is not certified"
            )),
        )
    };
    Ok(SincGrid {
        h,
        left,
        right,
        n,
        strategy: Strategy::Standard,
        valid,
        warning,
    })
}

/// First improved rule: `h = arsinh(q(dn/mu))/n`; the side with the slower
/// decay keeps `n`, the other gets `ceil(arsinh((mu/nu) q(dn/mu))/h)`.
pub fn select_new1(c: &FunctionClass, n: u64) -> Result<SincGrid> {
    check_n(n)?;
    let nf = n as f64;
    let q = q_func(c.d() * nf / c.mu())?;
    let h = arsinh(q) / nf;
    let other = ceil_nudged(arsinh(c.mu() / c.nu() * q) / h)?;
    let (left, right) = if c.alpha() <= c.beta() {
        (n, other)
    } else {
        (other, n)
    };
    Ok(SincGrid {
        h,
        left,
        right,
        n,
        strategy: Strategy::New1,
        valid: true,
        warning: None,
    })
}

/// Second improved rule: `h = arsinh(dn/mu)/n`, with
/// `M = ceil(arsinh((mu/alpha) q(dn/mu))/h)` and `N` likewise with `beta`.
/// `M` and `N` are not clamped to `n`.
pub fn select_new2(c: &FunctionClass, n: u64) -> Result<SincGrid> {
    let mut grid = select_general_q(c, n, &QChoice::Default)?;
    grid.strategy = Strategy::New2;
    Ok(grid)
}

/// Generalized rule: `h = d/(mu q(dn/mu))` with `M`, `N` as in [`select_new2`].
pub fn select_general_q(c: &FunctionClass, n: u64, q: &QChoice) -> Result<SincGrid> {
    check_n(n)?;
    let q_value = q.eval(c.d() * n as f64 / c.mu())?;
    if !(q_value > 0.0 && q_value.is_finite()) {
        return Err(Error::domain(format!("q(dn/mu) = {q_value} must be positive")));
    }
    let h = q.mesh(c, n, q_value);
    let left = ceil_nudged(arsinh(c.mu() / c.alpha() * q_value) / h)?;
    let right = ceil_nudged(arsinh(c.mu() / c.beta() * q_value) / h)?;
    Ok(SincGrid {
        h,
        left,
        right,
        n,
        strategy: Strategy::GeneralQ(q.clone()),
        valid: true,
        warning: None,
    })
}

/// Dispatches to the rule named by `strategy`.
pub fn select(c: &FunctionClass, n: u64, strategy: &Strategy) -> Result<SincGrid> {
    match strategy {
        Strategy::Standard => select_standard(c, n),
        Strategy::New1 => select_new1(c, n),
        Strategy::New2 => select_new2(c, n),
        Strategy::GeneralQ(q) => select_general_q(c, n, q),
    }
}
