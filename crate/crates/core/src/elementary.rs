//! Taylor coefficients of the outer functions that can appear in a
//! composition, expanded about an arbitrary admissible point `a`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{powu, Scalar};
use crate::series::Jet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterFunction {
    /// `x ↦ e^{λx}`
    Exp(f64),
    Ln,
    /// `x ↦ x^λ`
    Pow(f64),
}

impl OuterFunction {
    pub fn sqrt() -> Self {
        OuterFunction::Pow(0.5)
    }

    pub fn recip() -> Self {
        OuterFunction::Pow(-1.0)
    }

    fn domain_error(&self, a: f64) -> Error {
        Error::Domain {
            function: self.to_string(),
            value: a,
        }
    }

    /// Checks that the function is analytic at `a`.
    pub fn check_domain(&self, a: f64) -> Result<()> {
        if !a.is_finite() {
            return Err(self.domain_error(a));
        }
        match *self {
            OuterFunction::Exp(lambda) if !lambda.is_finite() => Err(self.domain_error(a)),
            OuterFunction::Exp(_) => Ok(()),
            OuterFunction::Ln if a <= 0.0 => Err(self.domain_error(a)),
            OuterFunction::Ln => Ok(()),
            OuterFunction::Pow(lambda) => {
                if !lambda.is_finite() {
                    return Err(self.domain_error(a));
                }
                let integral = lambda.fract() == 0.0;
                if (!integral && a <= 0.0) || (integral && lambda < 0.0 && a == 0.0) {
                    return Err(self.domain_error(a));
                }
                Ok(())
            }
        }
    }

    /// Distance from `a` to the nearest point where the function stops
    /// being analytic; infinite for entire functions.
    pub fn domain_margin(&self, a: f64) -> f64 {
        match *self {
            OuterFunction::Exp(_) => f64::INFINITY,
            OuterFunction::Ln => a,
            OuterFunction::Pow(lambda) if lambda.fract() == 0.0 && lambda >= 0.0 => f64::INFINITY,
            OuterFunction::Pow(_) => a.abs(),
        }
    }
}

impl fmt::Display for OuterFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterFunction::Exp(l) if *l == 1.0 => write!(f, "exp"),
            OuterFunction::Exp(l) => write!(f, "exp({l}·x)"),
            OuterFunction::Ln => write!(f, "ln"),
            OuterFunction::Pow(l) if *l == 0.5 => write!(f, "sqrt"),
            OuterFunction::Pow(l) => write!(f, "x^{l}"),
        }
    }
}

/// `F(0..=order)` with `F(k) = f^{(k)}(a) / k!`, as a jet about `a`.
pub fn outer_coeffs(f: OuterFunction, a: f64, order: usize) -> Result<Jet<f64>> {
    outer_coeffs_at(f, &a, order)
}

/// [`outer_coeffs`] in any scalar type.
///
/// Transcendental factors shared by all `F(k)` (`e^{aλ}`, `a^λ` for
/// fractional `λ`, and `ln a` in `F(0)`) come from `f64`; everything else is
/// formed in `T`, so a common relative error of one `f64` rounding is the
/// only precision lost.
pub fn outer_coeffs_at<T: Scalar>(f: OuterFunction, a: &T, order: usize) -> Result<Jet<T>> {
    let af = a.to_f64();
    f.check_domain(af)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    match f {
        OuterFunction::Exp(lambda) => {
            let lambda_t = T::from_f64(lambda);
            let mut c = T::from_f64((af * lambda).exp());
            coeffs.push(c.clone());
            for k in 1..=order {
                c = c * lambda_t.clone() / T::from_int(k as i64);
                coeffs.push(c.clone());
            }
        }
        OuterFunction::Ln => {
            coeffs.push(T::from_f64(af.ln()));
            let inv = T::one() / a.clone();
            let mut pow = T::one();
            for k in 1..=order {
                pow = pow * inv.clone();
                let term = pow.clone() / T::from_int(k as i64);
                coeffs.push(if k % 2 == 1 { term } else { -term });
            }
        }
        OuterFunction::Pow(lambda) => {
            let lambda_t = T::from_f64(lambda);
            let integral = lambda.fract() == 0.0;
            // binom tracks C(λ, k); for a non-negative integer λ it reaches
            // exactly zero at k = λ + 1 and the series terminates.
            let mut binom = T::one();
            if integral && lambda >= 0.0 {
                let n = lambda as usize;
                for k in 0..=order {
                    if k > 0 {
                        binom = binom * (lambda_t.clone() - T::from_int(k as i64 - 1))
                            / T::from_int(k as i64);
                    }
                    if k > n {
                        coeffs.push(T::zero());
                    } else {
                        coeffs.push(binom.clone() * powu(a, n - k));
                    }
                }
            } else {
                let inv = T::one() / a.clone();
                let common = if integral {
                    powu(&inv, (-lambda) as usize)
                } else {
                    T::from_f64(af.powf(lambda))
                };
                let mut pow = T::one();
                for k in 0..=order {
                    if k > 0 {
                        binom = binom * (lambda_t.clone() - T::from_int(k as i64 - 1))
                            / T::from_int(k as i64);
                        pow = pow * inv.clone();
                    }
                    coeffs.push(common.clone() * binom.clone() * pow.clone());
                }
            }
        }
    }
    Jet::new(a.clone(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-15 * (1.0 + b.abs())
    }

    #[test]
    fn ln_at_one() {
        let j = outer_coeffs(OuterFunction::Ln, 1.0, 5).unwrap();
        let expect = [0.0, 1.0, -0.5, 1.0 / 3.0, -0.25, 0.2];
        for (c, e) in j.coeffs().iter().zip(expect) {
            assert!(close(*c, e), "{c} vs {e}");
        }
        assert_eq!(*j.t0(), 1.0);
    }

    #[test]
    fn sqrt_at_one_is_binomial_series() {
        let j = outer_coeffs(OuterFunction::sqrt(), 1.0, 4).unwrap();
        let expect = [1.0, 0.5, -0.125, 0.0625, -0.0390625];
        for (c, e) in j.coeffs().iter().zip(expect) {
            assert!(close(*c, e), "{c} vs {e}");
        }
    }

    #[test]
    fn exp_at_zero() {
        let j = outer_coeffs(OuterFunction::Exp(1.0), 0.0, 6).unwrap();
        let mut f = 1.0;
        for k in 0..=6 {
            if k > 0 {
                f *= k as f64;
            }
            assert!(close(j.coeffs()[k], 1.0 / f));
        }
    }

    #[test]
    fn integer_powers_terminate() {
        let a = 2.5;
        assert_eq!(
            outer_coeffs(OuterFunction::Pow(1.0), a, 4)
                .unwrap()
                .coeffs(),
            &[a, 1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            outer_coeffs(OuterFunction::Pow(0.0), a, 3)
                .unwrap()
                .coeffs(),
            &[1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            outer_coeffs(OuterFunction::Pow(2.0), 0.0, 4)
                .unwrap()
                .coeffs(),
            &[0.0, 0.0, 1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn domain_errors() {
        for (f, a) in [
            (OuterFunction::Ln, 0.0),
            (OuterFunction::Ln, -1.0),
            (OuterFunction::sqrt(), -0.5),
            (OuterFunction::sqrt(), 0.0),
            (OuterFunction::recip(), 0.0),
            (OuterFunction::Exp(1.0), f64::NAN),
        ] {
            match outer_coeffs(f, a, 3) {
                Err(Error::Domain { value, .. }) => {
                    assert!(value == a || (value.is_nan() && a.is_nan()))
                }
                other => panic!("{f} at {a}: {other:?}"),
            }
        }
        // negative base is fine for integer exponents
        assert!(outer_coeffs(OuterFunction::recip(), -2.0, 3).is_ok());
        assert!(outer_coeffs(OuterFunction::Pow(3.0), -2.0, 3).is_ok());
    }

    #[test]
    fn margins() {
        assert_eq!(OuterFunction::Ln.domain_margin(0.25), 0.25);
        assert_eq!(OuterFunction::sqrt().domain_margin(2.0), 2.0);
        assert!(OuterFunction::Exp(1.0).domain_margin(-5.0).is_infinite());
        assert!(OuterFunction::Pow(2.0).domain_margin(0.0).is_infinite());
    }
}
