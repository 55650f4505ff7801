//! Lowering of an [`Expr`] to transform coefficients.
//!
//! [`LoweringContext`] is the streaming route used by the solver: it compiles
//! the tree into a node list (children before parents) and extends every
//! node's coefficient prefix by one order at a time, memoizing each
//! `(node, k)` value. [`evaluate_jet`] is the batch route over whole jets.

use super::{Expr, Func};
use crate::compose::{compose, CompositionContext};
use crate::elementary::{outer_coeffs_at, OuterFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{convolve_at, m_fold_product, Jet};

/// Distance to a domain boundary below which a warning is raised.
pub const DOMAIN_WARNING_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoweringConfig {
    /// Non-negative integer exponents up to this value are expanded into
    /// repeated Cauchy products; larger or fractional ones go through the
    /// `x^λ` composition.
    pub max_product_power: u32,
}

impl Default for LoweringConfig {
    fn default() -> Self {
        LoweringConfig {
            max_product_power: 4,
        }
    }
}

impl LoweringConfig {
    fn product_power(&self, e: f64) -> Option<usize> {
        (e >= 0.0 && e.fract() == 0.0 && e <= self.max_product_power as f64).then_some(e as usize)
    }
}

/// An outer function evaluated close to where it stops being analytic.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainWarning {
    pub function: String,
    pub value: f64,
    pub margin: f64,
}

#[derive(Debug, Clone)]
enum Op<T> {
    Const(T),
    VarT,
    VarU,
    Neg(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Compose {
        arg: usize,
        func: OuterFunction,
        division: bool,
        ctx: Option<CompositionContext<T>>,
    },
}

#[derive(Debug, Clone)]
struct Node<T> {
    op: Op<T>,
    coeffs: Vec<T>,
}

/// Per-solve state for computing right-hand-side coefficients order by order.
///
/// The scalar type defaults to `f64`; the solver instantiates it with
/// [`crate::dd::DoubleDouble`].
#[derive(Debug, Clone)]
pub struct LoweringContext<T = f64> {
    t0: T,
    order: usize,
    u: Vec<T>,
    nodes: Vec<Node<T>>,
    computed: usize,
    warnings: Vec<DomainWarning>,
}

impl<T: Scalar> LoweringContext<T> {
    /// Compiles `expr` for expansions about `t0` up to coefficient `order`.
    pub fn new(expr: &Expr, t0: T, order: usize, config: LoweringConfig) -> Self {
        let mut ctx = LoweringContext {
            t0,
            order,
            u: Vec::with_capacity(order + 1),
            nodes: Vec::new(),
            computed: 0,
            warnings: Vec::new(),
        };
        ctx.compile(expr, &config);
        ctx
    }

    fn push(&mut self, op: Op<T>) -> usize {
        self.nodes.push(Node {
            op,
            coeffs: Vec::with_capacity(self.order + 1),
        });
        self.nodes.len() - 1
    }

    fn composition(&mut self, arg: usize, func: OuterFunction, division: bool) -> usize {
        self.push(Op::Compose {
            arg,
            func,
            division,
            ctx: None,
        })
    }

    fn compile(&mut self, e: &Expr, config: &LoweringConfig) -> usize {
        match e {
            Expr::Const(c) => self.push(Op::Const(T::from_f64(*c))),
            Expr::VarT => self.push(Op::VarT),
            Expr::VarU => self.push(Op::VarU),
            Expr::Neg(a) => {
                let a = self.compile(a, config);
                self.push(Op::Neg(a))
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                let a = self.compile(a, config);
                let b = self.compile(b, config);
                self.push(match e {
                    Expr::Add(..) => Op::Add(a, b),
                    Expr::Sub(..) => Op::Sub(a, b),
                    _ => Op::Mul(a, b),
                })
            }
            Expr::Div(a, b) => {
                let a = self.compile(a, config);
                let b = self.compile(b, config);
                let recip = self.composition(b, OuterFunction::recip(), true);
                self.push(Op::Mul(a, recip))
            }
            Expr::Pow(a, exp) => {
                let a = self.compile(a, config);
                match config.product_power(*exp) {
                    Some(0) => self.push(Op::Const(T::one())),
                    Some(n) => (1..n).fold(a, |acc, _| self.push(Op::Mul(acc, a))),
                    None => self.composition(a, OuterFunction::Pow(*exp), false),
                }
            }
            Expr::Apply(f, a) => {
                let a = self.compile(a, config);
                self.composition(a, f.outer(), false)
            }
        }
    }

    pub fn t0(&self) -> &T {
        &self.t0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Appends the next solution coefficient `U(k)`.
    pub fn push_u(&mut self, value: T) {
        self.u.push(value);
    }

    pub fn u(&self) -> &[T] {
        &self.u
    }

    pub fn warnings(&self) -> &[DomainWarning] {
        &self.warnings
    }

    /// Coefficient `k` of the expression about `t0`, with `U(0..=k)` already
    /// pushed. Orders below `k` that have not been computed yet are filled
    /// in first; orders already computed are read from the memo.
    pub fn coefficient(&mut self, k: usize) -> Result<T> {
        if k > self.order {
            return Err(Error::invalid(format!(
                "order {k} beyond the context order {}",
                self.order
            )));
        }
        if self.u.len() <= k {
            return Err(Error::invalid(format!(
                "coefficient {k} needs U(0..={k}), only {} known",
                self.u.len()
            )));
        }
        while self.computed <= k {
            let j = self.computed;
            for i in 0..self.nodes.len() {
                let v = self.node_value(i, j)?;
                self.nodes[i].coeffs.push(v);
            }
            self.computed += 1;
        }
        Ok(self
            .nodes
            .last()
            .expect("compiled expression is non-empty")
            .coeffs[k]
            .clone())
    }

    fn node_value(&mut self, i: usize, k: usize) -> Result<T> {
        let nodes = &self.nodes;
        let c = |n: usize| nodes[n].coeffs[k].clone();
        let v = match &nodes[i].op {
            Op::Const(v) => {
                if k == 0 {
                    v.clone()
                } else {
                    T::zero()
                }
            }
            Op::VarT => match k {
                0 => self.t0.clone(),
                1 => T::one(),
                _ => T::zero(),
            },
            Op::VarU => self.u[k].clone(),
            Op::Neg(a) => -c(*a),
            Op::Add(a, b) => c(*a) + c(*b),
            Op::Sub(a, b) => c(*a) - c(*b),
            Op::Mul(a, b) => convolve_at(&nodes[*a].coeffs, &nodes[*b].coeffs, k),
            Op::Compose { arg, .. } => {
                let g = c(*arg);
                return self.compose_step(i, g, k);
            }
        };
        Ok(v)
    }

    fn compose_step(&mut self, i: usize, g: T, k: usize) -> Result<T> {
        let order = self.order;
        let Op::Compose {
            func,
            division,
            ctx,
            ..
        } = &mut self.nodes[i].op
        else {
            unreachable!("compose_step on a non-composition node");
        };
        if k == 0 {
            if *division && g.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let outer = outer_coeffs_at(*func, &g, order)?;
            let gf = g.to_f64();
            let margin = func.domain_margin(gf);
            if margin < DOMAIN_WARNING_MARGIN {
                self.warnings.push(DomainWarning {
                    function: func.to_string(),
                    value: gf,
                    margin,
                });
            }
            *ctx = Some(CompositionContext::new(outer));
        }
        ctx.as_mut()
            .expect("composition context is created at order 0")
            .push(g)
    }
}

/// Batch route: the transform of `expr(t, u(t))` about `u.t0()`, built from
/// whole jets with the series and compose operations.
pub fn evaluate_jet<T: Scalar>(expr: &Expr, u: &Jet<T>, config: &LoweringConfig) -> Result<Jet<T>> {
    let t0 = u.t0().clone();
    let n = u.order();
    let through = |f: OuterFunction, arg: &Jet<T>| -> Result<Jet<T>> {
        let outer = outer_coeffs_at(f, arg.coeff(0), n)?;
        compose(&outer, arg)
    };
    match expr {
        Expr::Const(c) => Ok(Jet::constant(t0, T::from_f64(*c), n)),
        Expr::VarT => Ok(Jet::identity(t0, n)),
        Expr::VarU => Ok(u.clone()),
        Expr::Neg(a) => Ok(evaluate_jet(a, u, config)?.neg()),
        Expr::Add(a, b) => evaluate_jet(a, u, config)?.add(&evaluate_jet(b, u, config)?),
        Expr::Sub(a, b) => evaluate_jet(a, u, config)?.sub(&evaluate_jet(b, u, config)?),
        Expr::Mul(a, b) => evaluate_jet(a, u, config)?.cauchy_product(&evaluate_jet(b, u, config)?),
        Expr::Div(a, b) => {
            let num = evaluate_jet(a, u, config)?;
            let den = evaluate_jet(b, u, config)?;
            if den.coeff(0).is_zero() {
                return Err(Error::DivisionByZero);
            }
            num.cauchy_product(&through(OuterFunction::recip(), &den)?)
        }
        Expr::Pow(a, e) => {
            let base = evaluate_jet(a, u, config)?;
            match config.product_power(*e) {
                Some(0) => Ok(Jet::constant(t0, T::one(), n)),
                Some(m) => m_fold_product(&vec![base; m]),
                None => through(OuterFunction::Pow(*e), &base),
            }
        }
        Expr::Apply(f, a) => {
            let arg = evaluate_jet(a, u, config)?;
            through(Func::outer(*f), &arg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn ctx_for(src: &str, t0: f64, u: &[f64]) -> LoweringContext {
        let mut ctx = LoweringContext::new(
            &parse(src).unwrap(),
            t0,
            u.len() - 1,
            LoweringConfig::default(),
        );
        for &x in u {
            ctx.push_u(x);
        }
        ctx
    }

    #[test]
    fn variables() {
        let u = [0.3, -1.2, 0.7, 2.0];
        let mut ctx = ctx_for("u", 0.0, &u);
        for k in 0..4 {
            assert_eq!(ctx.coefficient(k).unwrap(), u[k]);
        }
        let mut ctx = ctx_for("t", 0.0, &u);
        let got: Vec<f64> = (0..4).map(|k| ctx.coefficient(k).unwrap()).collect();
        assert_eq!(got, [0.0, 1.0, 0.0, 0.0]);
        let mut ctx = ctx_for("t", 2.5, &u);
        assert_eq!(ctx.coefficient(0).unwrap(), 2.5);
    }

    #[test]
    fn first_example_rhs_at_order_two() {
        let mut ctx = ctx_for("u - t + ln(u)", 0.0, &[1.0, 1.0, 0.5]);
        assert!((ctx.coefficient(2).unwrap() - 0.5).abs() < 1e-15);
        // memoized lower orders: U(1) - 1 + H(1) = 1
        assert!((ctx.coefficient(1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn domain_and_division_errors() {
        let mut ctx = ctx_for("ln(u)", 0.0, &[0.0, 1.0]);
        assert!(matches!(ctx.coefficient(0), Err(Error::Domain { value, .. }) if value == 0.0));
        let mut ctx = ctx_for("1 / (u - 1)", 0.0, &[1.0, 1.0]);
        assert_eq!(ctx.coefficient(1), Err(Error::DivisionByZero));
    }

    #[test]
    fn needs_known_prefix() {
        let mut ctx = ctx_for("u", 0.0, &[1.0, 2.0]);
        assert!(ctx.coefficient(2).is_err());
        let mut ctx = LoweringContext::new(&Expr::VarU, 0.0, 3, LoweringConfig::default());
        ctx.push_u(1.0);
        assert!(ctx.coefficient(1).is_err());
    }

    #[test]
    fn warns_near_boundary() {
        let mut ctx = ctx_for("sqrt(u)", 0.0, &[1e-8, 1.0]);
        ctx.coefficient(1).unwrap();
        assert_eq!(ctx.warnings().len(), 1);
        assert_eq!(ctx.warnings()[0].value, 1e-8);
    }

    #[test]
    fn integer_powers_use_products_or_composition() {
        let u = [0.5, 1.0, -0.25, 0.125];
        let jet = Jet::new(0.0, u.to_vec()).unwrap();
        for cfg in [
            LoweringConfig::default(),
            LoweringConfig {
                max_product_power: 0,
            },
        ] {
            let mut ctx = LoweringContext::new(&parse("u^3").unwrap(), 0.0, 3, cfg);
            for &x in &u {
                ctx.push_u(x);
            }
            let batch = evaluate_jet(&parse("u^3").unwrap(), &jet, &cfg).unwrap();
            for k in 0..=3 {
                let s = ctx.coefficient(k).unwrap();
                assert!((s - batch.coeffs()[k]).abs() < 1e-15);
            }
        }
        let cube = evaluate_jet(&parse("u^3").unwrap(), &jet, &LoweringConfig::default()).unwrap();
        assert_eq!(cube.coeffs()[0], 0.125);
    }
}
