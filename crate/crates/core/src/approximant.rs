//! The truncated cardinal series `sum_{k=-M}^{N} F(kh) sinc((x - kh)/h)`.

use crate::error::{Error, Result};
use crate::function_space::TransformedFunction;
use crate::kernels::sinc;
use crate::selection::SincGrid;

/// Upper limit on `M + N + 1` accepted by [`SincApproximant::build`].
pub const MAX_TERMS: u64 = 100_000_000;

/// Samples `F(kh)`, `k = -M..=N`, and the mesh they sit on.
#[derive(Debug, Clone, PartialEq)]
pub struct SincApproximant {
    h: f64,
    left: u64,
    right: u64,
    samples: Vec<f64>,
}

impl SincApproximant {
    /// Samples `f` on the grid's nodes.
    pub fn build(f: &TransformedFunction, grid: &SincGrid) -> Result<Self> {
        Self::build_with(grid, |x| f.evaluate(x))
    }

    /// Samples an arbitrary closure on the grid's nodes.
    pub fn build_with(grid: &SincGrid, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        if !(grid.h > 0.0 && grid.h.is_finite()) {
            return Err(Error::domain(format!("mesh size must be positive, got {}", grid.h)));
        }
        let terms = grid.left.checked_add(grid.right).and_then(|s| s.checked_add(1));
        match terms {
            Some(t) if t <= MAX_TERMS => {}
            _ => {
                return Err(Error::Resource(format!(
                    "{} + {} + 1 samples exceeds the limit of {MAX_TERMS}",
                    grid.left, grid.right
                )))
            }
        }
        let left = grid.left as i64;
        let samples = (-left..=grid.right as i64)
            .map(|k| f(k as f64 * grid.h))
            .collect();
        Ok(Self {
            h: grid.h,
            left: grid.left,
            right: grid.right,
            samples,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn left(&self) -> u64 {
        self.left
    }

    pub fn right(&self) -> u64 {
        self.right
    }

    /// Samples in index order, `samples()[k + M] = F(kh)`.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Node abscissae `kh`, `k = -M..=N`.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (-(self.left as i64)..=self.right as i64).map(move |k| k as f64 * self.h)
    }

    /// Evaluates the truncated series at `x`.
    ///
    /// Terms are added from the node farthest from `x` inward. The distance
    /// `|x - kh|` is V-shaped in `k`, so two cursors walking in from both
    /// ends give that order without sorting.
    pub fn evaluate(&self, x: f64) -> f64 {
        let u = x / self.h;
        let first = -(self.left as i64);
        let mut lo = first;
        let mut hi = self.right as i64;
        let mut sum = 0.0;
        while lo <= hi {
            let k = if (u - lo as f64).abs() >= (u - hi as f64).abs() {
                lo += 1;
                lo - 1
            } else {
                hi -= 1;
                hi + 1
            };
            sum += self.samples[(k - first) as usize] * sinc(u - k as f64);
        }
        sum
    }

    /// `(max |F(x) - approx(x)|, argmax)` over `points`; ties go to the smallest `x`.
    pub fn sup_error(&self, f: &TransformedFunction, points: &[f64]) -> Result<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for &x in points {
            let err = (f.evaluate(x) - self.evaluate(x)).abs();
            best = match best {
                Some((e, bx)) if e > err || (e == err && bx <= x) => Some((e, bx)),
                _ => Some((err, x)),
            };
        }
        best.ok_or_else(|| Error::invalid("sup_error needs at least one point"))
    }
}

/// `count` equispaced points on `[-half_range, half_range]`, computed as
/// `half_range * i / m` for `i = -m..=m`, `m = (count - 1) / 2`.
pub fn experiment_grid(count: usize, half_range: f64) -> Result<Vec<f64>> {
    if count < 3 || count % 2 == 0 {
        return Err(Error::invalid(format!("grid count must be odd and >= 3, got {count}")));
    }
    if !(half_range > 0.0 && half_range.is_finite()) {
        return Err(Error::invalid(format!("half range must be positive, got {half_range}")));
    }
    let m = ((count - 1) / 2) as i64;
    Ok((-m..=m).map(|i| half_range * i as f64 / m as f64).collect())
}
