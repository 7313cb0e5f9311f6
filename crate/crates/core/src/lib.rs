//! DE-Sinc approximation on the real line with certified a-priori error bounds.
//!
//! A function `f` on `[-1, 1]` is pulled back to the real line with the
//! double-exponential transform `t = tanh((pi/2) sinh x)` and approximated by
//! the truncated cardinal series
//!
//! ```text
//! F(x) ~ sum_{k=-M}^{N} F(kh) sinc((x - kh)/h)
//! ```
//!
//! The crate selects `(h, M, N)` from a class certificate `(L, R, alpha, beta, d)`
//! and a driving integer `n` under four rules, and evaluates the matching
//! explicit error bound for each.
//!
//! ```
//! use desinc::{bound_report, builtin_f1, select_new2, SincApproximant};
//!
//! let f1 = builtin_f1();
//! let grid = select_new2(&f1.class, 10).unwrap();
//! assert_eq!((grid.left, grid.right), (7, 7));
//!
//! let approx = SincApproximant::build(&f1.transformed, &grid).unwrap();
//! let bound = bound_report(&f1.class, &grid).unwrap();
//! let err = (approx.evaluate(0.3) - f1.transformed.evaluate(0.3)).abs();
//! assert!(err <= bound.headline_bound);
//! ```

pub mod approximant;
pub mod bounds;
pub mod error;
pub mod function_space;
pub mod harness;
pub mod kernels;
pub mod selection;

pub use approximant::{experiment_grid, SincApproximant};
pub use bounds::{
    bound_discretization, bound_report, bound_truncation, constant_exist, constant_general_q,
    constant_new1, constant_new2, BoundReport,
};
pub use error::{Error, Result};
pub use function_space::{
    builtin, builtin_f1, builtin_f2, de_endpoint_distances, de_transform, decay_envelope, Builtin,
    FunctionClass, IntervalFunction, TransformedFunction,
};
pub use harness::{
    check_props, emit_csv, emit_plot_data, run_sweep, ExperimentRow, PropsReport, SweepConfig,
};
pub use kernels::{arsinh, p_func, q_func, r_func, sinc};
pub use selection::{
    select, select_general_q, select_new1, select_new2, select_standard, QChoice, SincGrid,
    Strategy,
};
