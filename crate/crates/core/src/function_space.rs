//! Function-class certificates, the double-exponential decay envelope, the
//! DE transform `t = tanh((pi/2) sinh x)`, and the two built-in test functions.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Membership certificate `(L, R, alpha, beta, d)` for the class of functions
/// analytic on the strip `|Im z| < d` that decay double-exponentially with
/// rates `alpha` (left) and `beta` (right).
///
/// Certificates are asserted by the caller and never fitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionClass {
    strip_bound: f64,
    real_bound: f64,
    alpha: f64,
    beta: f64,
    d: f64,
}

impl FunctionClass {
    /// Builds a certificate, checking `L, R, alpha, beta > 0` and `0 < d < pi/2`.
    pub fn new(strip_bound: f64, real_bound: f64, alpha: f64, beta: f64, d: f64) -> Result<Self> {
        let positive = |v: f64, name: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive(strip_bound, "L")?;
        positive(real_bound, "R")?;
        positive(alpha, "alpha")?;
        positive(beta, "beta")?;
        if !(d > 0.0 && d < FRAC_PI_2) {
            return Err(Error::invalid(format!("d must satisfy 0 < d < pi/2, got {d}")));
        }
        Ok(Self {
            strip_bound,
            real_bound,
            alpha,
            beta,
            d,
        })
    }

    /// `L`, the envelope constant on the strip.
    pub fn strip_bound(&self) -> f64 {
        self.strip_bound
    }

    /// `R`, the envelope constant on the real line.
    pub fn real_bound(&self) -> f64 {
        self.real_bound
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Strip half-width.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// `min(alpha, beta)`.
    pub fn mu(&self) -> f64 {
        self.alpha.min(self.beta)
    }

    /// `max(alpha, beta)`.
    pub fn nu(&self) -> f64 {
        self.alpha.max(self.beta)
    }

    /// The same certificate with `alpha` and `beta` exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
            ..*self
        }
    }

    /// Scales `L` and `R` by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.strip_bound * factor,
            self.real_bound * factor,
            self.alpha,
            self.beta,
            self.d,
        )
    }
}

/// The DE transform `tanh((pi/2) sinh x)`, mapping the real line onto `(-1, 1)`.
pub fn de_transform(x: f64) -> f64 {
    (FRAC_PI_2 * x.sinh()).tanh()
}

/// `(1 - t, 1 + t)` for `t = de_transform(x)`, each to full relative precision.
pub fn de_endpoint_distances(x: f64) -> (f64, f64) {
    let w = FRAC_PI_2 * x.sinh();
    (2.0 / ((2.0 * w).exp() + 1.0), 2.0 / ((-2.0 * w).exp() + 1.0))
}

/// Real-line envelope `R / ((1 + e^{-pi sinh x})^alpha (1 + e^{pi sinh x})^beta)`.
///
/// Factored so that no intermediate overflows: for `x >= 0` it is
/// `R e^{-pi beta sinh x} / (1 + e^{-pi sinh x})^{alpha+beta}`, mirrored for `x < 0`.
pub fn decay_envelope(c: &FunctionClass, x: f64) -> f64 {
    let s = PI * x.sinh();
    let total = c.alpha + c.beta;
    if s >= 0.0 {
        c.real_bound * (-c.beta * s).exp() / (1.0 + (-s).exp()).powf(total)
    } else {
        c.real_bound * (c.alpha * s).exp() / (1.0 + s.exp()).powf(total)
    }
}

type IntervalFn = dyn Fn(f64, f64, f64) -> f64 + Send + Sync;
type RealFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A function on `[-1, 1]`, called as `f(t, 1 - t, 1 + t)` so that factors
/// vanishing at the endpoints can be formed without cancellation.
#[derive(Clone)]
pub struct IntervalFunction {
    eval: Arc<IntervalFn>,
    label: String,
}

impl IntervalFunction {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            label: label.into(),
        }
    }

    /// Evaluates with independently supplied endpoint distances.
    pub fn evaluate_stable(&self, t: f64, one_minus_t: f64, one_plus_t: f64) -> f64 {
        (self.eval)(t, one_minus_t, one_plus_t)
    }

    /// Convenience evaluation from `t` alone (loses accuracy next to the endpoints).
    pub fn evaluate(&self, t: f64) -> f64 {
        self.evaluate_stable(t, 1.0 - t, 1.0 + t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for IntervalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntervalFunction").field("label", &self.label).finish()
    }
}

/// A function on the real line together with its class certificate.
#[derive(Clone)]
pub struct TransformedFunction {
    eval: Arc<RealFn>,
    certificate: FunctionClass,
    label: String,
}

impl TransformedFunction {
    pub fn new<F>(label: impl Into<String>, certificate: FunctionClass, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            certificate,
            label: label.into(),
        }
    }

    /// `F(x) = f(tanh((pi/2) sinh x))`, fed with cancellation-free endpoint distances.
    pub fn from_interval(f: &IntervalFunction, certificate: FunctionClass) -> Self {
        let inner = f.eval.clone();
        Self::new(f.label.clone(), certificate, move |x| {
            let (one_minus_t, one_plus_t) = de_endpoint_distances(x);
            inner(de_transform(x), one_minus_t, one_plus_t)
        })
    }

    /// Evaluates `F(x)`. Where the certificate's envelope underflows the
    /// result is exactly zero.
    pub fn evaluate(&self, x: f64) -> f64 {
        if decay_envelope(&self.certificate, x) == 0.0 {
            0.0
        } else {
            (self.eval)(x)
        }
    }

    pub fn certificate(&self) -> &FunctionClass {
        &self.certificate
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for TransformedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformedFunction")
            .field("label", &self.label)
            .field("certificate", &self.certificate)
            .finish()
    }
}

/// A built-in test function in both coordinates, with its certificate.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub interval: IntervalFunction,
    pub class: FunctionClass,
    pub transformed: TransformedFunction,
}

/// `f1(t) = (1 - t^2)^{1/2}` with `L = R = 2`, `alpha = beta = 1/2`, `d = 3/2`.
pub fn builtin_f1() -> Builtin {
    let interval = IntervalFunction::new("f1", |_t, a, b| (a * b).sqrt());
    let class = FunctionClass::new(2.0, 2.0, 0.5, 0.5, 1.5).expect("valid certificate");
    let transformed = TransformedFunction::from_interval(&interval, class);
    Builtin {
        interval,
        class,
        transformed,
    }
}

/// `f2(t) = (1 + t^2)^{1/2} (1 + t)^{1/2} (1 - t)^{3/4}` with `L = R = 4`,
/// `alpha = 1/2`, `beta = 3/4`, `d = pi/6`.
pub fn builtin_f2() -> Builtin {
    let interval = IntervalFunction::new("f2", |t, a, b| {
        (1.0 + t * t).sqrt() * b.sqrt() * a.powf(0.75)
    });
    let class = FunctionClass::new(4.0, 4.0, 0.5, 0.75, PI / 6.0).expect("valid certificate");
    let transformed = TransformedFunction::from_interval(&interval, class);
    Builtin {
        interval,
        class,
        transformed,
    }
}

/// Looks up a built-in by its label (`"f1"` or `"f2"`).
pub fn builtin(label: &str) -> Result<Builtin> {
    match label {
        "f1" => Ok(builtin_f1()),
        "f2" => Ok(builtin_f2()),
        other => Err(Error::UnknownFunction(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn certificate_validation() {
        assert!(FunctionClass::new(1.0, 1.0, 1.0, 1.0, 1.0).is_ok());
        assert!(FunctionClass::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(FunctionClass::new(1.0, -1.0, 1.0, 1.0, 1.0).is_err());
        assert!(FunctionClass::new(1.0, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(FunctionClass::new(1.0, 1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(FunctionClass::new(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(FunctionClass::new(1.0, 1.0, 1.0, 1.0, FRAC_PI_2).is_err());
        let c = builtin_f2().class;
        assert_eq!(c.mu(), 0.5);
        assert_eq!(c.nu(), 0.75);
    }

    #[test]
    fn transform_values() {
        assert_eq!(de_transform(0.0), 0.0);
        assert!(rel(de_transform(1.0), 0.951_367_964_072_746_95) < 1e-15);
        assert_eq!(de_transform(40.0), 1.0);
        assert_eq!(de_transform(-40.0), -1.0);
    }

    #[test]
    fn endpoint_distances() {
        assert_eq!(de_endpoint_distances(0.0), (1.0, 1.0));
        let (a, b) = de_endpoint_distances(3.0);
        assert!(rel(a, 4.294_161_055_878_240_8e-14) < 1e-13);
        assert!(rel(b, 1.999_999_999_999_957_1) < 1e-15);
        let (a2, b2) = de_endpoint_distances(-3.0);
        assert_eq!((a2, b2), (b, a));
    }

    #[test]
    fn envelope_values() {
        let f1 = builtin_f1().class;
        let f2 = builtin_f2().class;
        assert!(rel(decay_envelope(&f1, 0.0), 1.0) < 1e-15);
        assert!(rel(decay_envelope(&f2, 0.0), 1.681_792_830_507_429_1) < 1e-15);
        assert!(rel(decay_envelope(&f1, 1.0), 0.308_056_807_969_044_04) < 1e-14);
        assert_eq!(decay_envelope(&f1, 50.0), 0.0);
        assert!(decay_envelope(&f1, -3.0) > 0.0);
    }

    #[test]
    fn builtin_values() {
        let f1 = builtin_f1().transformed;
        let f2 = builtin_f2().transformed;
        assert_eq!(f1.evaluate(0.0), 1.0);
        assert_eq!(f2.evaluate(0.0), 1.0);
        assert!(rel(f1.evaluate(2.0), 0.006_711_565_227_274_101_2) < 1e-13);
        assert!(rel(f2.evaluate(1.0), 0.199_673_498_200_712_93) < 1e-14);
        assert!(f2.evaluate(30.0) == 0.0);
        assert!(builtin("f3").is_err());
        assert_eq!(builtin("f2").unwrap().transformed.label(), "f2");
    }

    #[test]
    fn f2_tail_matches_high_precision_oracle() {
        let golden = [
            (3.0, 1.886_638_715_858_149_1e-10),
            (3.5, 3.972_147_492_093_482e-17),
            (4.0, 3.994_976_241_474_917_5e-28),
            (4.5, 2.992_397_559_106_881_4e-46),
            (5.0, 3.944_328_465_338_203_8e-76),
            (5.5, 2.159_912_057_336_859_3e-125),
            (6.0, 1.310_104_267_556_190_5e-206),
        ];
        let f2 = builtin_f2();
        for (x, expected) in golden {
            let got = f2.transformed.evaluate(x);
            assert!(rel(got, expected) < 1e-12, "x = {x}: {got} vs {expected}");
            // the naive route collapses to zero well before x = 6
            let naive = f2.interval.evaluate(de_transform(x));
            if x >= 4.5 {
                assert_eq!(naive, 0.0);
            }
        }
    }

    #[test]
    fn envelope_dominates_builtins() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for b in [builtin_f1(), builtin_f2()] {
            let grid = (-10_000..=10_000).map(|i| 4.0 * i as f64 / 10_000.0);
            let random = (0..10_000).map(|_| rng.gen_range(-6.0..6.0)).collect::<Vec<_>>();
            for x in grid.chain(random) {
                let v = b.transformed.evaluate(x).abs();
                let env = decay_envelope(&b.class, x);
                assert!(v <= env * (1.0 + 1e-12), "{} at {x}: {v} > {env}", b.class.alpha());
            }
        }
    }

    #[test]
    fn f1_even_f2_vanishes_right() {
        let f1 = builtin_f1().transformed;
        let f2 = builtin_f2().transformed;
        for i in 0..200 {
            let x = i as f64 * 0.03;
            assert!(rel(f1.evaluate(x), f1.evaluate(-x)) < 1e-14 || f1.evaluate(x) == 0.0);
        }
        let mut prev = f2.evaluate(2.0);
        for i in 1..40 {
            let v = f2.evaluate(2.0 + i as f64 * 0.1);
            assert!(v < prev);
            prev = v;
        }
    }

    proptest! {
        #[test]
        fn distances_sum_to_two(x in -1e3f64..1e3) {
            let (a, b) = de_endpoint_distances(x);
            prop_assert!(a >= 0.0 && b >= 0.0);
            prop_assert!((a + b - 2.0).abs() <= 1e-15);
            // past |x| ~ 6.1 the smaller distance leaves the normal range
            if x.abs() < 6.0 {
                prop_assert!(a > 0.0 && b > 0.0);
            }
        }

        #[test]
        fn transform_is_odd_and_bounded(x in -50f64..50.0) {
            let t = de_transform(x);
            prop_assert_eq!(t, -de_transform(-x));
            prop_assert!(t.abs() <= 1.0);
        }
    }
}
