//! Jet arithmetic invariants.

mod common;

use common::{q, qr};
use dtm_core::elementary::{outer_coeffs, OuterFunction};
use dtm_core::series::{m_fold_product, Jet};
use num_rational::BigRational;
use proptest::prelude::*;

fn float_jet(order: usize) -> impl Strategy<Value = Jet<f64>> {
    prop::collection::vec(-1.0f64..1.0, order + 1).prop_map(|c| Jet::new(0.0, c).unwrap())
}

fn rational_jet(order: usize) -> impl Strategy<Value = Jet<BigRational>> {
    prop::collection::vec((-7i64..=7, 1i64..=5), order + 1)
        .prop_map(|c| Jet::new(q(0), c.into_iter().map(|(n, d)| qr(n, d)).collect()).unwrap())
}

/// Nested sum for a product of two jets:
/// `F(k) = Σ_{s=0}^{k} U_1(s) U_2(k - s)`, written independently of the
/// library's convolution.
fn nested_double_sum(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = 0.0;
        for s1 in 0..=k {
            s += a[s1] * b[k - s1];
        }
        out.push(s);
    }
    out
}

fn nested_triple_sum(a: &[BigRational], b: &[BigRational], c: &[BigRational]) -> Vec<BigRational> {
    let n = a.len();
    (0..n)
        .map(|k| {
            let mut s = q(0);
            for s1 in 0..=k {
                for s2 in 0..=(k - s1) {
                    s += a[s1].clone() * b[s2].clone() * c[k - s1 - s2].clone();
                }
            }
            s
        })
        .collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = a
        .iter()
        .chain(b)
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

proptest! {
    #[test]
    fn product_commutes_and_associates_exactly(a in rational_jet(8), b in rational_jet(8), c in rational_jet(8)) {
        prop_assert_eq!(a.cauchy_product(&b).unwrap(), b.cauchy_product(&a).unwrap());
        let left = a.cauchy_product(&b).unwrap().cauchy_product(&c).unwrap();
        let right = a.cauchy_product(&b.cauchy_product(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let folded = m_fold_product(&[a.clone(), b.clone(), c.clone()]).unwrap();
        prop_assert_eq!(folded.coeffs(), &nested_triple_sum(a.coeffs(), b.coeffs(), c.coeffs())[..]);
    }

    #[test]
    fn product_commutes_and_associates_in_floats(a in float_jet(12), b in float_jet(12), c in float_jet(12)) {
        let ab = a.cauchy_product(&b).unwrap();
        prop_assert!(close(ab.coeffs(), b.cauchy_product(&a).unwrap().coeffs(), 1e-13));
        let left = ab.cauchy_product(&c).unwrap();
        let right = a.cauchy_product(&b.cauchy_product(&c).unwrap()).unwrap();
        prop_assert!(close(left.coeffs(), right.coeffs(), 1e-13));
    }

    #[test]
    fn two_fold_product_is_cauchy_product(a in float_jet(4), b in float_jet(4)) {
        let folded = m_fold_product(&[a.clone(), b.clone()]).unwrap();
        prop_assert_eq!(&folded, &a.cauchy_product(&b).unwrap());
        prop_assert!(close(folded.coeffs(), &nested_double_sum(a.coeffs(), b.coeffs()), 1e-15));
    }

    #[test]
    fn derivative_steps_compose(a in rational_jet(10), n in 1usize..=5) {
        let mut stepped = a.clone();
        for _ in 0..n {
            stepped = stepped.derivative_shift(1).unwrap();
        }
        prop_assert_eq!(stepped, a.derivative_shift(n).unwrap());
    }

    #[test]
    fn evaluation_is_linear(a in float_jet(10), b in float_jet(10), t in -0.9f64..0.9) {
        let lhs = a.add(&b).unwrap().eval_truncated(&t);
        let rhs = a.eval_truncated(&t) + b.eval_truncated(&t);
        let scale = a.coeffs().iter().chain(b.coeffs()).map(|c| c.abs()).sum::<f64>().max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-13 * scale);
    }
}

/// Round trip through the transform: build the jet of a closed-form
/// function, evaluate the truncated sum and compare with the function.
/// For a series whose coefficients are bounded by `M r^{-k}`, the tail past
/// `N` at distance `d < r` is at most `M (d/r)^{N+1} / (1 - d/r)`.
#[test]
fn closed_form_round_trips() {
    let n = 20;
    let tail = |m: f64, d: f64, r: f64| m * (d / r).powi(n as i32 + 1) / (1.0 - d / r);

    // e^t about 0: entire, coefficients 1/k!
    let exp = outer_coeffs(OuterFunction::Exp(1.0), 0.0, n).unwrap();
    for t in [-0.8, 0.3, 1.0] {
        let err = (exp.eval_truncated(&t) - f64::exp(t)).abs();
        assert!(
            err <= 1e-14 + 1.0 / common::factorial(n + 1) * 3.0,
            "e^{t}: {err}"
        );
    }

    // ln t about 1: radius 1, |F(k)| ≤ 1
    let ln = outer_coeffs(OuterFunction::Ln, 1.0, n).unwrap();
    for t in [0.7, 1.2, 1.5] {
        let d: f64 = (t - 1.0f64).abs();
        let err = (ln.eval_truncated(&t) - f64::ln(t)).abs();
        assert!(err <= tail(1.0, d, 1.0) + 1e-15, "ln {t}: {err}");
    }

    // (1 + s)^λ about s = 0 is x^λ about x = 1; radius 1, |C(λ,k)| ≤ 1 for λ ∈ (-1, 1)
    for lambda in [0.5, -0.5, 1.0 / 3.0] {
        let pow = outer_coeffs(OuterFunction::Pow(lambda), 1.0, n).unwrap();
        for s in [-0.4, 0.25, 0.5] {
            let err = (pow.eval_truncated(&(1.0 + s)) - (1.0 + s).powf(lambda)).abs();
            assert!(
                err <= tail(1.0, f64::abs(s), 1.0) + 1e-15,
                "(1+{s})^{lambda}: {err}"
            );
        }
    }
}

#[test]
fn exp_scaled_jet() {
    let e = outer_coeffs(OuterFunction::Exp(1.0), 0.0, 8).unwrap();
    let doubled = e.scale(&2.0);
    for k in 0..=8 {
        assert!((doubled.coeff(k) - 2.0 / common::factorial(k)).abs() < 1e-16);
    }
    let sq = e.cauchy_product(&e).unwrap();
    let two_t = outer_coeffs(OuterFunction::Exp(2.0), 0.0, 8).unwrap();
    assert!(close(sq.coeffs(), two_t.coeffs(), 1e-15));
}
