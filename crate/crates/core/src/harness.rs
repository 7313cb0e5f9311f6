//! Sweeps over `(function, strategy, n)`, CSV and plot-data emission, and the
//! seeded property checks behind `check-props`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::approximant::{experiment_grid, SincApproximant};
use crate::bounds::bound_report;
use crate::error::{Error, Result};
use crate::function_space::builtin;
use crate::kernels::{arsinh, p_func, q_func};
use crate::selection::{select, Strategy};

/// CSV header, in column order.
pub const CSV_HEADER: &str = "function,strategy,n,h,M,N,evals,observed_sup_error,argmax_x,\
discretization_bound,truncation_bound,split_bound,headline_bound,constant_C,certified";

/// Parameters of one sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Built-in function label, `f1` or `f2`.
    pub function_label: String,
    pub strategies: Vec<Strategy>,
    pub n_min: u64,
    pub n_max: u64,
    /// Number of error-measurement points; must be odd.
    pub grid_count: usize,
    pub grid_half_range: f64,
    /// Where the CSV goes, if anywhere.
    pub output_path: Option<PathBuf>,
}

impl SweepConfig {
    /// All four rules on `n = 2..=40` over the 20001-point grid on `[-4, 4]`.
    pub fn new(function_label: impl Into<String>) -> Self {
        Self {
            function_label: function_label.into(),
            strategies: Strategy::all(),
            n_min: 2,
            n_max: 40,
            grid_count: 20_001,
            grid_half_range: 4.0,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.strategies.is_empty() {
            return Err(Error::invalid("at least one strategy is required"));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::invalid(format!(
                "need 1 <= n_min <= n_max, got {}..{}",
                self.n_min, self.n_max
            )));
        }
        if self.grid_count < 3 || self.grid_count % 2 == 0 {
            return Err(Error::invalid(format!(
                "grid count must be odd and >= 3, got {}",
                self.grid_count
            )));
        }
        if !(self.grid_half_range > 0.0 && self.grid_half_range.is_finite()) {
            return Err(Error::invalid("grid half range must be positive"));
        }
        Ok(())
    }
}

/// One `(function, strategy, n)` measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub function_label: String,
    pub strategy_label: String,
    pub n: u64,
    pub h: f64,
    pub left: u64,
    pub right: u64,
    /// `M + N + 1`.
    pub evals: u64,
    pub observed_sup_error: f64,
    pub argmax_x: f64,
    pub discretization_bound: f64,
    pub truncation_bound: f64,
    pub split_bound: f64,
    pub headline_bound: f64,
    pub constant_c: f64,
    pub certified: bool,
    /// Not written to CSV.
    pub warning: Option<String>,
}

/// Runs the sweep. Rows come back in strategy order, then ascending `n`,
/// independent of how many threads did the work.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let f = builtin(&cfg.function_label)?;
    let points = experiment_grid(cfg.grid_count, cfg.grid_half_range)?;
    let tasks: Vec<(&Strategy, u64)> = cfg
        .strategies
        .iter()
        .flat_map(|s| (cfg.n_min..=cfg.n_max).map(move |n| (s, n)))
        .collect();

    tasks
        .into_par_iter()
        .map(|(strategy, n)| {
            let grid = select(&f.class, n, strategy)?;
            let approx = SincApproximant::build(&f.transformed, &grid)?;
            let (observed, argmax) = approx.sup_error(&f.transformed, &points)?;
            let report = bound_report(&f.class, &grid)?;
            Ok(ExperimentRow {
                function_label: cfg.function_label.clone(),
                strategy_label: strategy.label(),
                n,
                h: grid.h,
                left: grid.left,
                right: grid.right,
                evals: grid.evals(),
                observed_sup_error: observed,
                argmax_x: argmax,
                discretization_bound: report.discretization_bound,
                truncation_bound: report.truncation_bound,
                split_bound: report.split_bound,
                headline_bound: report.headline_bound,
                constant_c: report.constant_c,
                certified: report.certified,
                warning: grid.warning,
            })
        })
        .collect()
}

/// Real number with 17 significant digits; parses back to the same bits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text for `rows`, header included, `\n` line endings.
pub fn to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::with_capacity(256 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.function_label,
            r.strategy_label,
            r.n,
            format_real(r.h),
            r.left,
            r.right,
            r.evals,
            format_real(r.observed_sup_error),
            format_real(r.argmax_x),
            format_real(r.discretization_bound),
            format_real(r.truncation_bound),
            format_real(r.split_bound),
            format_real(r.headline_bound),
            format_real(r.constant_c),
            r.certified,
        );
    }
    out
}

pub fn emit_csv(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to write"));
    }
    fs::write(path, to_csv(rows)).map_err(|e| Error::io(path, e))
}

/// Writes `<function>_<strategy>_observed.dat` and `<function>_<strategy>_bound.dat`
/// into `dir`, each holding `evals value` pairs. Returns the files written.
pub fn emit_plot_data(rows: &[ExperimentRow], dir: &Path) -> Result<Vec<PathBuf>> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to write"));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut order: Vec<(String, String)> = Vec::new();
    let mut series: BTreeMap<(String, String), (String, String)> = BTreeMap::new();
    for r in rows {
        let key = (r.function_label.clone(), r.strategy_label.clone());
        let entry = series.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            Default::default()
        });
        let _ = writeln!(entry.0, "{} {}", r.evals, format_real(r.observed_sup_error));
        let _ = writeln!(entry.1, "{} {}", r.evals, format_real(r.headline_bound));
    }

    let mut written = Vec::with_capacity(2 * order.len());
    for key in order {
        let (observed, bound) = &series[&key];
        for (suffix, body) in [("observed", observed), ("bound", bound)] {
            let path = dir.join(format!("{}_{}_{suffix}.dat", key.0, key.1));
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Outcome of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    /// Sample with the smallest margin, and that margin (negative means violated).
    pub worst_x: f64,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropsReport {
    pub samples: usize,
    pub seed: u64,
    pub results: Vec<PropertyResult>,
}

impl PropsReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("check-props samples={} seed={}\n", self.samples, self.seed);
        for r in &self.results {
            let _ = writeln!(
                out,
                "{} {}: checked={} worst_x={:.9e} worst_margin={:.9e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.checked,
                r.worst_x,
                r.worst_margin,
            );
        }
        let _ = writeln!(out, "{}", if self.all_passed() { "all properties hold" } else { "property failure" });
        out
    }
}

struct Tracker {
    name: &'static str,
    checked: usize,
    worst_x: f64,
    worst_margin: f64,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            worst_x: f64::NAN,
            worst_margin: f64::INFINITY,
        }
    }

    /// Records a check whose margin must be >= 0 (`strict`: > 0).
    fn record(&mut self, x: f64, margin: f64) {
        self.checked += 1;
        if margin < self.worst_margin || margin.is_nan() {
            self.worst_margin = margin;
            self.worst_x = x;
        }
    }

    fn finish(self, strict: bool) -> PropertyResult {
        let ok = if strict { self.worst_margin > 0.0 } else { self.worst_margin >= 0.0 };
        PropertyResult {
            name: self.name,
            passed: ok || self.checked == 0,
            checked: self.checked,
            worst_x: self.worst_x,
            worst_margin: if self.checked == 0 { 0.0 } else { self.worst_margin },
        }
    }
}

const ROUNDING: f64 = 8.0 * f64::EPSILON;

fn draw_abscissae(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    // half uniform on [0, 1e6], half log-uniform on [1e-6, 1e6] to reach small x
    let mut xs: Vec<f64> = (0..count)
        .map(|i| {
            if i % 2 == 0 {
                rng.gen_range(0.0..=1e6)
            } else {
                10f64.powf(rng.gen_range(-6.0..=6.0))
            }
        })
        .collect();
    xs.sort_by(f64::total_cmp);
    xs
}

fn monotone(name: &'static str, xs: &[f64], f: impl Fn(f64) -> (f64, f64)) -> PropertyResult {
    let mut t = Tracker::new(name);
    let mut prev: Option<(f64, f64)> = None;
    for &x in xs {
        let (v, scale) = f(x);
        if let Some((pv, ps)) = prev {
            t.record(x, v - pv + ROUNDING * scale.max(ps));
        }
        prev = Some((v, scale));
    }
    t.finish(false)
}

/// Seeded checks of the kernel properties:
/// `q`, `p` and `p - q` nondecreasing on `[0, 1e6]`;
/// `sinh t > t sinh(2t/pi)` on `(0, 50]`;
/// `arsinh(x) / arsinh(q(x)) <= pi/2` on `[1e-6, 1e6]`.
pub fn check_props(samples: usize, seed: u64) -> Result<PropsReport> {
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = draw_abscissae(&mut rng, samples);
    let q = |x: f64| q_func(x).expect("x >= 0");
    let p = |x: f64| p_func(x).expect("x >= 0");

    let mut results = vec![
        monotone("q nondecreasing", &xs, |x| (q(x), q(x).abs())),
        monotone("p nondecreasing", &xs, |x| (p(x), p(x).abs())),
        monotone("r = p - q nondecreasing", &xs, |x| {
            let (pv, qv) = (p(x), q(x));
            (pv - qv, pv.abs() + qv.abs())
        }),
    ];

    let mut sinh_check = Tracker::new("sinh t >= t sinh(2t/pi)");
    for _ in 0..samples {
        let t: f64 = rng.gen_range(0.0..=50.0);
        if t == 0.0 {
            continue;
        }
        let lhs = t.sinh();
        let rhs = t * (2.0 * t / PI).sinh();
        sinh_check.record(t, (lhs - rhs) / lhs);
    }
    results.push(sinh_check.finish(true));

    let mut ratio = Tracker::new("arsinh(x)/arsinh(q(x)) <= pi/2");
    for _ in 0..samples {
        let x = 10f64.powf(rng.gen_range(-6.0f64..=6.0));
        let r = arsinh(x) / arsinh(q(x));
        ratio.record(x, FRAC_PI_2 * (1.0 + ROUNDING) - r);
    }
    results.push(ratio.finish(false));

    Ok(PropsReport {
        samples,
        seed,
        results,
    })
}
