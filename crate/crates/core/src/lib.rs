//! Series solutions of nonlinear scalar initial value problems
//! `u' = f(t, u)` by the differential transformation method.
//!
//! The solution is carried as a [`Jet`] of scaled Taylor coefficients
//! `U(k) = u^{(k)}(t0)/k!`. Nonlinear terms such as `ln(u)` or `sqrt(1 - u^2)`
//! are handled by composing the transform of the outer function with the
//! transform of its argument through partial ordinary Bell polynomials, so
//! no symbolic derivatives are ever formed.
//!
//! ```
//! use dtm_core::{parser::parse, solver::{solve_series, IvpProblem}};
//!
//! let problem = IvpProblem::new(parse("u - t + ln(u)").unwrap(), 0.0, 1.0, 10).unwrap();
//! let report = solve_series(&problem).unwrap();
//! let e = report.jet.eval_truncated(&1.0);
//! assert!((e - std::f64::consts::E).abs() < 1e-7);
//! ```

pub mod bell;
pub mod cli;
pub mod compose;
pub mod dd;
pub mod elementary;
pub mod error;
pub mod parser;
pub mod scalar;
pub mod series;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use series::Jet;
