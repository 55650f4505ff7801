//! Jets: truncated differential transforms `U(0..=N)` about a point `t0`,
//! with `U(k) = u^{(k)}(t0) / k!`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T = f64> {
    t0: T,
    coeffs: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    /// Builds a jet from `U(0..=N)`. The sequence must be non-empty and
    /// finite.
    pub fn new(t0: T, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a jet needs at least U(0)"));
        }
        if !t0.is_finite() {
            return Err(Error::invalid("expansion point is not finite"));
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Jet { t0, coeffs })
    }

    pub fn zero(t0: T, order: usize) -> Self {
        Jet {
            t0,
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn constant(t0: T, value: T, order: usize) -> Self {
        let mut j = Self::zero(t0, order);
        j.coeffs[0] = value;
        j
    }

    /// The transform of `t` itself about `t0`: `(t0, 1, 0, ...)`.
    pub fn identity(t0: T, order: usize) -> Self {
        let mut j = Self::constant(t0.clone(), t0, order);
        if order >= 1 {
            j.coeffs[1] = T::one();
        }
        j
    }

    /// Kronecker delta at index `n` about `t0 = 0`; the zero jet if `n > order`.
    pub fn monomial(n: usize, order: usize) -> Self {
        let mut j = Self::zero(T::zero(), order);
        if n <= order {
            j.coeffs[n] = T::one();
        }
        j
    }

    /// `t^n` re-expanded about an arbitrary `t0`: coefficients
    /// `C(n, k) t0^{n-k}`.
    pub fn monomial_at(n: usize, t0: T, order: usize) -> Self {
        let mut j = Self::zero(t0.clone(), order);
        // walk k downward from n so each step multiplies by t0 once
        let mut binom = T::one();
        let mut pow = T::one();
        for k in (0..=n).rev() {
            if k <= order {
                j.coeffs[k] = binom.clone() * pow.clone();
            }
            // C(n, k-1) = C(n, k) * k / (n - k + 1)
            if k > 0 {
                binom = binom * T::ratio(k as i64, (n - k + 1) as i64);
                pow = pow * t0.clone();
            }
        }
        j
    }

    pub fn t0(&self) -> &T {
        &self.t0
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Keeps `U(0..=order)`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Jet {
            t0: self.t0.clone(),
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.t0 != other.t0 {
            return Err(Error::PointMismatch {
                left: self.t0.to_f64(),
                right: other.t0.to_f64(),
            });
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Jet {
            t0: self.t0.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Jet {
            t0: self.t0.clone(),
            coeffs: self.coeffs.iter().map(|a| c.clone() * a.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    /// Transform of a product: `F(k) = Σ_{l=0}^{k} G(l) H(k-l)`.
    pub fn cauchy_product(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = (0..=self.order())
            .map(|k| convolve_at(&self.coeffs, &other.coeffs, k))
            .collect();
        Ok(Jet {
            t0: self.t0.clone(),
            coeffs,
        })
    }

    /// Transform of an `n`-th derivative: `F(k) = (k+n)!/k! · G(k+n)`.
    /// The result has order `order - n`.
    pub fn derivative_shift(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("derivative order must be positive"));
        }
        if n > self.order() {
            return Err(Error::invalid(format!(
                "cannot differentiate {n} times a jet of order {}",
                self.order()
            )));
        }
        let coeffs = (0..=self.order() - n)
            .map(|k| {
                let rising =
                    ((k + 1)..=(k + n)).fold(T::one(), |acc, m| acc * T::from_int(m as i64));
                rising * self.coeffs[k + n].clone()
            })
            .collect();
        Ok(Jet {
            t0: self.t0.clone(),
            coeffs,
        })
    }

    /// `Σ_{k=0}^{N} U(k) (t - t0)^k` by Horner's rule.
    pub fn eval_truncated(&self, t: &T) -> T {
        let dt = t.clone() - self.t0.clone();
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * dt.clone() + c.clone())
    }
}

/// `Σ_{j=0}^{k} a[j] b[k-j]`.
pub(crate) fn convolve_at<T: Scalar>(a: &[T], b: &[T], k: usize) -> T {
    (0..=k).fold(T::zero(), |acc, j| acc + a[j].clone() * b[k - j].clone())
}

/// Product of several jets, folded left with [`Jet::cauchy_product`].
pub fn m_fold_product<T: Scalar>(jets: &[Jet<T>]) -> Result<Jet<T>> {
    let (first, rest) = jets
        .split_first()
        .ok_or_else(|| Error::invalid("product of an empty sequence of jets"))?;
    rest.iter()
        .try_fold(first.clone(), |acc, j| acc.cauchy_product(j))
}
