//! Coefficient recursion for `u' = f(t, u)`, `u(t0) = u0`.
//!
//! Transforming both sides gives `(k+1) U(k+1) = Φ(k)`, where `Φ(k)` is the
//! `k`-th transform coefficient of the right-hand side. `Φ(k)` depends only
//! on `U(0..=k)`, so the coefficients follow one at a time.

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::parser::{evaluate_jet, DomainWarning, Expr, LoweringConfig, LoweringContext};
use crate::scalar::Scalar;
use crate::series::Jet;

#[derive(Debug, Clone, PartialEq)]
pub struct IvpProblem {
    pub rhs: Expr,
    pub t0: f64,
    pub u0: f64,
    /// Truncation order `N` of the solution jet.
    pub order: usize,
    pub lowering: LoweringConfig,
}

impl IvpProblem {
    pub fn new(rhs: Expr, t0: f64, u0: f64, order: usize) -> Result<Self> {
        let p = IvpProblem {
            rhs,
            t0,
            u0,
            order,
            lowering: LoweringConfig::default(),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::invalid("truncation order must be at least 1"));
        }
        if !self.t0.is_finite() || !self.u0.is_finite() {
            return Err(Error::invalid("initial point must be finite"));
        }
        Ok(())
    }

    /// The same equation restarted from `(t0, u0)`.
    pub fn restarted(&self, t0: f64, u0: f64) -> Self {
        IvpProblem {
            t0,
            u0,
            ..self.clone()
        }
    }
}

/// How well coefficient `k` satisfies `(k+1) U(k+1) = Φ(k)` when `Φ` is
/// recomputed from the finished jet by the batch route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub k: usize,
    /// `(k+1) U(k+1)`
    pub derivative: f64,
    /// `Φ(k)`
    pub rhs: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub jet: Jet<f64>,
    pub residuals: Vec<Residual>,
    pub warnings: Vec<DomainWarning>,
}

impl SolveReport {
    pub fn max_relative_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.relative)
            .fold(0.0, f64::max)
    }
}

/// Runs the recursion in double-double arithmetic and rounds the
/// coefficients to `f64`; see [`solve_coefficients`] for other precisions.
pub fn solve_series(p: &IvpProblem) -> Result<SolveReport> {
    let (wide, warnings) = solve_coefficients::<DoubleDouble>(p)?;
    let coeffs = wide.coeffs().iter().map(|c| c.to_f64()).collect();
    let jet = Jet::new(p.t0, coeffs)?;
    let residuals = residuals(p, &wide)?;
    Ok(SolveReport {
        jet,
        residuals,
        warnings,
    })
}

/// The coefficient recursion in scalar type `T`.
pub fn solve_coefficients<T: Scalar>(p: &IvpProblem) -> Result<(Jet<T>, Vec<DomainWarning>)> {
    p.validate()?;
    let n = p.order;
    let mut ctx = LoweringContext::new(&p.rhs, T::from_f64(p.t0), n - 1, p.lowering);
    let mut u = Vec::with_capacity(n + 1);
    u.push(T::from_f64(p.u0));
    for k in 0..n {
        ctx.push_u(u[k].clone());
        let phi = ctx.coefficient(k).map_err(|e| e.at_order(k))?;
        let next = phi / T::from_int(k as i64 + 1);
        if !next.is_finite() || !next.to_f64().is_finite() {
            return Err(Error::NonFinite { index: k + 1 }.at_order(k));
        }
        u.push(next);
    }
    let jet = Jet::new(T::from_f64(p.t0), u)?;
    Ok((jet, ctx.warnings().to_vec()))
}

/// Residuals of the rounded jet, with `Φ` re-evaluated in double-double.
/// Residuals of the working-precision jet. Rounding to `f64` perturbs
/// the fast-decaying tail by far more than 1e-11 relative, so the check is
/// made before that step.
fn residuals(p: &IvpProblem, wide: &Jet<DoubleDouble>) -> Result<Vec<Residual>> {
    let lhs = wide.derivative_shift(1)?;
    let rhs = evaluate_jet(&p.rhs, wide, &p.lowering)?;
    Ok(lhs
        .coeffs()
        .iter()
        .zip(rhs.coeffs())
        .enumerate()
        .map(|(k, (d, r))| {
            let diff = (*d - *r).abs().to_f64();
            let (d, r) = (d.to_f64(), r.to_f64());
            let relative = if diff == 0.0 {
                0.0
            } else {
                diff / d.abs().max(r.abs())
            };
            Residual {
                k,
                derivative: d,
                rhs: r,
                relative,
            }
        })
        .collect())
}

/// Solves on `[t0, t0 + steps·h]` by re-expanding: segment `i` is the series
/// about `t0 + i·h`, seeded with the previous segment's truncated sum there.
///
/// Nothing guards against `h` exceeding the radius of convergence; check
/// the residuals and compare against a smaller step when in doubt.
pub fn continue_multistep(p: &IvpProblem, h: f64, steps: usize) -> Result<Vec<SolveReport>> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::invalid("step must be finite and non-zero"));
    }
    if steps == 0 {
        return Err(Error::invalid("at least one step is required"));
    }
    let mut segments: Vec<SolveReport> = Vec::with_capacity(steps);
    for i in 0..steps {
        let problem = match segments.last() {
            None => p.clone(),
            Some(prev) => {
                let t = p.t0 + i as f64 * h;
                p.restarted(t, prev.jet.eval_truncated(&t))
            }
        };
        segments.push(solve_series(&problem).map_err(|e| e.at_step(i))?);
    }
    Ok(segments)
}

/// Evaluates a multistep solution at `t`, using the segment whose interval
/// `[t0 + i·h, t0 + (i+1)·h]` contains `t` (the first or last segment
/// outside the covered range).
pub fn eval_piecewise(segments: &[SolveReport], h: f64, t: f64) -> f64 {
    let first = segments.first().expect("at least one segment");
    let t0 = *first.jet.t0();
    let pos = ((t - t0) / h + 1e-9).floor();
    let idx = if pos <= 0.0 {
        0
    } else {
        (pos as usize).min(segments.len() - 1)
    };
    segments[idx].jet.eval_truncated(&t)
}
