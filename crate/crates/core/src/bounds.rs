//! A-priori error bounds: the per-rule constants `C`, the headline bounds
//! `C exp(-E)`, and the sharper discretization + truncation split they majorize.

use std::f64::consts::{E, FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::function_space::FunctionClass;
use crate::kernels::{arsinh, p_func, q_func};
use crate::selection::{select, QChoice, SincGrid, Strategy};

/// Bounds attached to one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub constant_c: f64,
    /// `E` such that `headline_bound = constant_c * exp(-E)`.
    pub rate_exponent: f64,
    pub headline_bound: f64,
    pub discretization_bound: f64,
    pub truncation_bound: f64,
    /// `discretization_bound + truncation_bound`.
    pub split_bound: f64,
    pub strategy: Strategy,
    /// False when the rule's hypotheses fail (standard rule with small `n`).
    pub certified: bool,
}

/// `cos^{alpha+beta}((pi/2) sin d) * cos d`.
///
/// Both cosines are rewritten around `pi/2 - d`, where they are small for
/// `d` close to `pi/2`: `cos((pi/2) sin d) = sin((pi/2)(1 - sin d))` and
/// `1 - sin d = 2 sin^2((pi/2 - d)/2)`.
pub fn strip_factor(c: &FunctionClass) -> f64 {
    let gap = FRAC_PI_2 - c.d();
    let half = (0.5 * gap).sin();
    let one_minus_sin = 2.0 * half * half;
    let inner = (FRAC_PI_2 * one_minus_sin).sin();
    inner.powf(c.alpha() + c.beta()) * gap.sin()
}

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("mesh size must be positive, got {h}")))
    }
}

/// Bound on the error of the untruncated cardinal series with mesh size `h`.
pub fn bound_discretization(c: &FunctionClass, h: f64) -> Result<f64> {
    check_h(h)?;
    let rate = PI * c.d() / h;
    let pre = 4.0 * c.strip_bound()
        / (PI * PI * c.d() * c.mu() * -(-2.0 * rate).exp_m1() * strip_factor(c));
    Ok(pre * (-rate).exp())
}

/// Bound on the dropped tails when `M`, `N` follow the ceiling rule for `q`:
/// `2R / (pi mu h sqrt(1 + q^2)) exp(-pi mu q)` with `q = q(dn/mu)`.
pub fn bound_truncation(c: &FunctionClass, n: u64, h: f64, q: &QChoice) -> Result<f64> {
    check_h(h)?;
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let qv = q.eval(c.d() * n as f64 / c.mu())?;
    Ok(2.0 * c.real_bound() / (PI * c.mu() * h * qv.hypot(1.0)) * (-PI * c.mu() * qv).exp())
}

/// Tail bound valid for arbitrary `M`, `N`:
/// `sum_{side} R exp(-pi rate sinh(K h)) / (pi rate h cosh(K h))`.
pub fn truncation_tails(c: &FunctionClass, h: f64, left: u64, right: u64) -> Result<f64> {
    check_h(h)?;
    let side = |rate: f64, k: u64| {
        let t = k as f64 * h;
        c.real_bound() * (-PI * rate * t.sinh()).exp() / (PI * rate * h * t.cosh())
    };
    Ok(side(c.alpha(), left) + side(c.beta(), right))
}

fn prefactor(c: &FunctionClass) -> f64 {
    2.0 / (PI * c.d())
}

/// Constant of the standard rule.
pub fn constant_exist(c: &FunctionClass) -> f64 {
    let mu = c.mu();
    let disc = 2.0 * c.strip_bound() / (PI * mu * -(-PI * mu * E).exp_m1() * strip_factor(c));
    prefactor(c) * (disc + c.real_bound() * (PI * c.nu() / 2.0).exp())
}

/// Constant of the first improved rule.
pub fn constant_new1(c: &FunctionClass) -> f64 {
    let mu = c.mu();
    let x = c.d() / mu;
    let p = p_func(x).expect("d/mu > 0");
    let q = q_func(x).expect("d/mu > 0");
    let disc = 2.0 * c.strip_bound() * (-PI * mu * (p - q)).exp()
        / (PI * mu * -(-2.0 * PI * mu * p).exp_m1() * strip_factor(c));
    prefactor(c) * (disc + FRAC_PI_2 * c.real_bound())
}

/// Constant of the second improved rule.
pub fn constant_new2(c: &FunctionClass) -> f64 {
    constant_general_q(c, &QChoice::Default).expect("default q is total on d/mu > 0")
}

/// Constant of the generalized rule, evaluated with the chosen `q` at `d/mu`.
/// With `q(x) = x` the denominator factor is `1 - exp(-2 pi d)`.
pub fn constant_general_q(c: &FunctionClass, q: &QChoice) -> Result<f64> {
    let mu = c.mu();
    let qv = q.eval(c.d() / mu)?;
    if !(qv > 0.0) {
        return Err(Error::domain(format!("q(d/mu) = {qv} must be positive")));
    }
    let disc = 2.0 * c.strip_bound() / (PI * mu * -(-2.0 * PI * mu * qv).exp_m1() * strip_factor(c));
    Ok(prefactor(c) * (disc + c.real_bound()))
}

/// Exponent `E` of the headline bound for `strategy` at `n`.
pub fn rate_exponent(c: &FunctionClass, n: u64, strategy: &Strategy) -> Result<f64> {
    let nf = n as f64;
    let x = c.d() * nf / c.mu();
    Ok(match strategy {
        Strategy::Standard => PI * c.d() * nf / (2.0 * x).ln(),
        Strategy::New1 | Strategy::New2 => PI * c.d() * nf / arsinh(x),
        Strategy::GeneralQ(QChoice::Identity) => PI * c.d() * nf,
        Strategy::GeneralQ(q) => PI * c.mu() * q.eval(x)?,
    })
}

/// Assembles the bounds for a grid produced by `select(c, grid.n, &grid.strategy)`.
///
/// The grid is re-derived from the certificate; a grid built for a different
/// certificate or rule is rejected.
pub fn bound_report(c: &FunctionClass, grid: &SincGrid) -> Result<BoundReport> {
    let expected = select(c, grid.n, &grid.strategy)?;
    if expected.h.to_bits() != grid.h.to_bits()
        || expected.left != grid.left
        || expected.right != grid.right
    {
        return Err(Error::Mismatch(format!(
            "grid (h = {}, M = {}, N = {}) was not produced by {} for this certificate",
            grid.h, grid.left, grid.right, grid.strategy
        )));
    }

    let constant_c = match &grid.strategy {
        Strategy::Standard => constant_exist(c),
        Strategy::New1 => constant_new1(c),
        Strategy::New2 => constant_new2(c),
        Strategy::GeneralQ(q) => constant_general_q(c, q)?,
    };
    let rate = rate_exponent(c, grid.n, &grid.strategy)?;
    let discretization_bound = bound_discretization(c, grid.h)?;
    let truncation_bound = match &grid.strategy {
        // the standard truncation numbers do not follow the ceiling rule
        Strategy::Standard => truncation_tails(c, grid.h, grid.left, grid.right)?,
        Strategy::New1 | Strategy::New2 => bound_truncation(c, grid.n, grid.h, &QChoice::Default)?,
        Strategy::GeneralQ(q) => bound_truncation(c, grid.n, grid.h, q)?,
    };
    Ok(BoundReport {
        constant_c,
        rate_exponent: rate,
        headline_bound: constant_c * (-rate).exp(),
        discretization_bound,
        truncation_bound,
        split_bound: discretization_bound + truncation_bound,
        strategy: grid.strategy.clone(),
        certified: grid.valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_space::{builtin_f1, builtin_f2, decay_envelope};
    use crate::selection::{select_new2, select_standard};
    use proptest::prelude::{prop_assert, proptest};
    use proptest::strategy::Strategy as _;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn strip_factor_matches_naive_away_from_pi_over_two() {
        let c = FunctionClass::new(1.0, 1.0, 0.4, 0.9, 0.6).unwrap();
        let naive = (FRAC_PI_2 * 0.6f64.sin()).cos().powf(1.3) * 0.6f64.cos();
        assert!(rel(strip_factor(&c), naive) < 1e-14);
    }

    #[test]
    fn constants_match_oracle() {
        let f1 = builtin_f1().class;
        let f2 = builtin_f2().class;
        let cases = [
            (constant_exist(&f1), 3_939.793_361_749_265_1),
            (constant_new1(&f1), 1_288.988_129_060_705_5),
            (constant_new2(&f1), 3_905.626_908_982_701_3),
            (constant_general_q(&f1, &QChoice::Identity).unwrap(), 3_884.027_221_190_378_4),
            (constant_exist(&f2), 26.980_864_979_636_697),
            (constant_new1(&f2), 20.538_901_159_299_575),
            (constant_new2(&f2), 16.201_004_390_297_617),
            (constant_general_q(&f2, &QChoice::Identity).unwrap(), 16.317_363_349_771_344),
        ];
        for (got, expected) in cases {
            assert!(rel(got, expected) < 1e-12, "{got} vs {expected}");
        }
        assert!(constant_new1(&f1) < constant_exist(&f1));
        assert!(constant_new1(&f2) < constant_exist(&f2));
    }

    #[test]
    fn constants_scale_linearly() {
        for c in [builtin_f1().class, builtin_f2().class] {
            let c2 = c.scaled(2.0).unwrap();
            assert!(rel(constant_exist(&c2), 2.0 * constant_exist(&c)) < 1e-14);
            assert!(rel(constant_new1(&c2), 2.0 * constant_new1(&c)) < 1e-14);
            assert!(rel(constant_new2(&c2), 2.0 * constant_new2(&c)) < 1e-14);
        }
    }

    #[test]
    fn component_bounds_match_oracle() {
        let f1 = builtin_f1().class;
        let f2 = builtin_f2().class;
        let h1 = select_new2(&f1, 10).unwrap().h;
        let h2 = select_new2(&f2, 10).unwrap().h;
        assert!(rel(bound_discretization(&f1, h1).unwrap(), 0.038_992_009_330_337_855) < 1e-12);
        assert!(rel(bound_discretization(&f2, h2).unwrap(), 0.049_625_190_185_983_082) < 1e-12);
        let t1 = bound_truncation(&f1, 10, h1, &QChoice::Default).unwrap();
        assert!(rel(t1, 8.445_671_850_586_763e-6) < 1e-12);
        let t2 = bound_truncation(&f2, 10, h2, &QChoice::Default).unwrap();
        assert!(rel(t2, 0.021_016_238_213_735_308) < 1e-12);
    }

    #[test]
    fn discretization_limits_and_errors() {
        let c = builtin_f1().class;
        assert_eq!(bound_discretization(&c, 1e-3).unwrap(), 0.0);
        assert!(bound_discretization(&c, 0.0).is_err());
        assert!(bound_discretization(&c, -1.0).is_err());
        assert!(bound_truncation(&c, 0, 0.1, &QChoice::Default).is_err());
        assert!(bound_truncation(&c, 3, 0.0, &QChoice::Default).is_err());
        let mut prev = 0.0;
        for i in 1..200 {
            let b = bound_discretization(&c, i as f64 * 0.01).unwrap();
            assert!(b > prev || (b == 0.0 && prev == 0.0));
            prev = b;
        }
    }

    #[test]
    fn truncation_dominates_brute_force_tail_sums() {
        for c in [builtin_f1().class, builtin_f2().class] {
            for n in [5u64, 10, 20] {
                let g = select_new2(&c, n).unwrap();
                let k_max = (g.left + g.right + 500) as i64;
                let right: f64 = (g.right as i64 + 1..=k_max)
                    .map(|k| decay_envelope(&c, k as f64 * g.h))
                    .sum();
                let left: f64 = (g.left as i64 + 1..=k_max)
                    .map(|k| decay_envelope(&c, -(k as f64) * g.h))
                    .sum();
                let bound = bound_truncation(&c, n, g.h, &QChoice::Default).unwrap();
                assert!(left + right <= bound, "n = {n}: {} > {bound}", left + right);
                let tails = truncation_tails(&c, g.h, g.left, g.right).unwrap();
                assert!(left + right <= tails);
            }
        }
    }

    #[test]
    fn report_examples() {
        let f1 = builtin_f1().class;
        let r = bound_report(&f1, &select_new2(&f1, 10).unwrap()).unwrap();
        assert!(rel(r.rate_exponent, 11.508_727_111_339_713) < 1e-13);
        assert!(rel(r.headline_bound, 0.039_220_585_807_442_469) < 1e-12);
        assert!(r.split_bound <= r.headline_bound);
        assert_eq!(r.split_bound, r.discretization_bound + r.truncation_bound);

        let r = bound_report(&f1, &select_standard(&f1, 10).unwrap()).unwrap();
        assert!(rel(r.rate_exponent, 11.509_507_587_283_18) < 1e-13);
        assert!(r.certified);

        let f2 = builtin_f2().class;
        let r = bound_report(&f2, &select_new2(&f2, 10).unwrap()).unwrap();
        assert!(rel(r.headline_bound, 0.072_907_230_719_049_41) < 1e-12);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let f1 = builtin_f1().class;
        let f2 = builtin_f2().class;
        let g = select_new2(&f1, 10).unwrap();
        assert!(matches!(bound_report(&f2, &g), Err(Error::Mismatch(_))));
        let mut relabeled = g.clone();
        relabeled.strategy = Strategy::New1;
        assert!(matches!(bound_report(&f1, &relabeled), Err(Error::Mismatch(_))));
    }

    #[test]
    fn uncertified_standard_rows_still_report() {
        let f2 = builtin_f2().class;
        let r = bound_report(&f2, &select_standard(&f2, 1).unwrap()).unwrap();
        assert!(!r.certified);
        assert!(r.headline_bound > 0.0);
    }

    #[test]
    fn rates_agree_asymptotically() {
        let c = builtin_f1().class;
        let a = rate_exponent(&c, 10_000, &Strategy::Standard).unwrap();
        let b = rate_exponent(&c, 10_000, &Strategy::New1).unwrap();
        assert!((a / b - 1.0).abs() < 0.02);
    }

    fn class_strategy() -> impl proptest::strategy::Strategy<Value = FunctionClass> {
        (0.1f64..5.0, 0.1f64..5.0, 0.05f64..3.0, 0.05f64..3.0, 0.01f64..1.565)
            .prop_map(|(l, r, a, b, d)| FunctionClass::new(l, r, a, b, d).unwrap())
    }

    proptest! {
        #[test]
        fn split_below_headline(c in class_strategy(), n in 1u64..400, which in 1usize..4) {
            let s = Strategy::all()[which].clone();
            let g = select(&c, n, &s).unwrap();
            let r = bound_report(&c, &g).unwrap();
            prop_assert!(r.split_bound <= r.headline_bound * (1.0 + 1e-9),
                "{}: split {} headline {}", s, r.split_bound, r.headline_bound);
            if r.headline_bound > 0.0 {
                prop_assert!(rel(r.headline_bound, r.constant_c * (-r.rate_exponent).exp()) <= 1e-12);
            }
        }

        #[test]
        fn constants_positive_and_finite(c in class_strategy()) {
            for v in [constant_exist(&c), constant_new1(&c), constant_new2(&c),
                      constant_general_q(&c, &QChoice::Identity).unwrap()] {
                prop_assert!(v > 0.0 && v.is_finite());
            }
        }
    }
}
