//! Scalar kernels: the cardinal sine, a cancellation-free inverse hyperbolic
//! sine, and the helper functions `q(x) = x / arsinh(x)`,
//! `p(x) = x / arsinh(q(x))` and `r(x) = p(x) - q(x)` that drive the
//! improved mesh-size formulas.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};

/// Below this magnitude `sinc` switches to its two-term Taylor series.
const SINC_SERIES_CUTOFF: f64 = 1e-7;

/// Above this magnitude `arsinh` uses `log(2x)`; `x * x` would overflow near 1e154.
const ARSINH_LARGE: f64 = 1e150;

/// `sin(pi * x)` with exact argument reduction, so integers give exact zeros.
pub fn sin_pi(x: f64) -> f64 {
    // x - 2*round(x/2) is exact in binary floating point and lies in [-1, 1]
    let r = x - 2.0 * (0.5 * x).round();
    let a = r.abs();
    let s = if a > 0.5 {
        (PI * (1.0 - a)).sin()
    } else {
        (PI * a).sin()
    };
    s.copysign(r)
}

/// The normalized cardinal sine `sin(pi x) / (pi x)`, with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_CUTOFF {
        let px = PI * x;
        1.0 - px * px / 6.0
    } else {
        sin_pi(x) / (PI * x)
    }
}

/// Inverse hyperbolic sine, `log(x + sqrt(1 + x^2))`.
///
/// Evaluated through `log1p` on `|x|` and then signed, so it is odd and keeps
/// full relative accuracy for tiny and huge arguments alike.
pub fn arsinh(x: f64) -> f64 {
    let a = x.abs();
    let v = if a > ARSINH_LARGE {
        a.ln() + LN_2
    } else {
        // x + sqrt(1 + x^2) - 1 = x + x^2 / (1 + sqrt(1 + x^2))
        (a + a * a / (1.0 + (1.0 + a * a).sqrt())).ln_1p()
    };
    v.copysign(x)
}

fn check_nonnegative(x: f64, name: &str) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} requires a finite x >= 0, got {x}")))
    }
}

/// `q(x) = x / arsinh(x)` for `x >= 0`, extended by its limit `q(0) = 1`.
pub fn q_func(x: f64) -> Result<f64> {
    check_nonnegative(x, "q")?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(x / arsinh(x))
}

/// `p(x) = x / arsinh(x / arsinh(x))` for `x >= 0`, extended by `p(0) = 0`.
pub fn p_func(x: f64) -> Result<f64> {
    check_nonnegative(x, "p")?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(x / arsinh(q_func(x)?))
}

/// `r(x) = p(x) - q(x)`. Increasing on `x >= 0`, with `r(0) = -1`.
pub fn r_func(x: f64) -> Result<f64> {
    Ok(p_func(x)? - q_func(x)?)
}
