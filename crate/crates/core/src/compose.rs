//! Transform of a composition `h = f ∘ g`.
//!
//! Given `F`, the transform of `f` about `g(t0)`, and `G`, the transform of
//! `g` about `t0`, the transform of `h` about `t0` is
//!
//! ```text
//! H(0) = F(0),   H(k) = Σ_{l=1}^{k} F(l) · B̂_{k,l}(G(1), ..., G(k-l+1))
//! ```
//!
//! which needs no derivatives of `f`, only its transform.

use crate::bell::{BellKind, BellTable};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};
use crate::series::Jet;

fn check_pair<T: Scalar>(outer: &Jet<T>, inner: &Jet<T>) -> Result<()> {
    let g0 = inner.coeff(0);
    if !outer.t0().same_point(g0) {
        return Err(Error::PointMismatch {
            left: outer.t0().to_f64(),
            right: g0.to_f64(),
        });
    }
    if outer.order() != inner.order() {
        return Err(Error::OrderMismatch {
            left: outer.order(),
            right: inner.order(),
        });
    }
    Ok(())
}

/// `H = F ∘ G` through partial ordinary Bell polynomials.
///
/// `outer` must be expanded about `inner`'s value `G(0)`.
pub fn compose<T: Scalar>(outer: &Jet<T>, inner: &Jet<T>) -> Result<Jet<T>> {
    check_pair(outer, inner)?;
    let n = inner.order();
    let table = BellTable::ordinary(&inner.coeffs()[1..], n)?;
    let f = outer.coeffs();
    let coeffs = (0..=n)
        .map(|k| {
            if k == 0 {
                f[0].clone()
            } else {
                weighted_row(f, table.row(k))
            }
        })
        .collect();
    Jet::new(inner.t0().clone(), coeffs)
}

/// `Σ_{l=1}^{k} F(l) · row[l]`.
fn weighted_row<T: Scalar>(f: &[T], row: &[T]) -> T {
    (1..row.len()).fold(T::zero(), |acc, l| acc + f[l].clone() * row[l].clone())
}

/// The same composition computed from derivatives and exponential Bell
/// polynomials: `h_k = Σ f_l B_{k,l}(g_1, g_2, ...)` with `f_l = l! F(l)`,
/// `g_m = m! G(m)` and `H(k) = h_k / k!`.
///
/// Equivalent to [`compose`]; kept as an independent cross-check.
pub fn compose_via_exponential<T: Scalar>(outer: &Jet<T>, inner: &Jet<T>) -> Result<Jet<T>> {
    check_pair(outer, inner)?;
    let n = inner.order();
    let derivs: Vec<T> = inner.coeffs()[1..]
        .iter()
        .enumerate()
        .map(|(i, g)| factorial::<T>(i + 1) * g.clone())
        .collect();
    let table = BellTable::exponential(&derivs, n)?;
    let f = outer.coeffs();
    let mut coeffs = vec![f[0].clone()];
    for k in 1..=n {
        let h_k = (1..=k).fold(T::zero(), |acc, l| {
            acc + factorial::<T>(l) * f[l].clone() * table.get(k, l)
        });
        coeffs.push(h_k / factorial::<T>(k));
    }
    Jet::new(inner.t0().clone(), coeffs)
}

/// `H(k)` from `F` and the inner prefix `G(0..=k)` alone.
pub fn composite_coefficient<T: Scalar>(outer: &Jet<T>, inner_prefix: &[T], k: usize) -> Result<T> {
    if inner_prefix.len() != k + 1 {
        return Err(Error::invalid(format!(
            "H({k}) needs the prefix G(0..={k}), got {} entries",
            inner_prefix.len()
        )));
    }
    if outer.order() < k {
        return Err(Error::invalid(format!(
            "outer transform of order {} cannot give H({k})",
            outer.order()
        )));
    }
    if !outer.t0().same_point(&inner_prefix[0]) {
        return Err(Error::PointMismatch {
            left: outer.t0().to_f64(),
            right: inner_prefix[0].to_f64(),
        });
    }
    if k == 0 {
        return Ok(outer.coeff(0).clone());
    }
    let table = BellTable::ordinary(&inner_prefix[1..], k)?;
    Ok(weighted_row(outer.coeffs(), table.row(k)))
}

/// Streaming composition: feed `G(0), G(1), ...` one at a time and get
/// `H(0), H(1), ...` back. Each push adds one Bell row, so `N` pushes cost
/// `O(N³)` in total.
#[derive(Debug, Clone)]
pub struct CompositionContext<T> {
    outer: Jet<T>,
    table: BellTable<T>,
    started: bool,
}

impl<T: Scalar> CompositionContext<T> {
    pub fn new(outer: Jet<T>) -> Self {
        CompositionContext {
            outer,
            table: BellTable::new(BellKind::Ordinary),
            started: false,
        }
    }

    pub fn outer(&self) -> &Jet<T> {
        &self.outer
    }

    /// Number of `H` coefficients produced so far.
    pub fn len(&self) -> usize {
        if self.started {
            self.table.order() + 1
        } else {
            0
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.started
    }

    /// Feeds the next inner coefficient and returns the matching `H(k)`.
    pub fn push(&mut self, g: T) -> Result<T> {
        if !self.started {
            if !self.outer.t0().same_point(&g) {
                return Err(Error::PointMismatch {
                    left: self.outer.t0().to_f64(),
                    right: g.to_f64(),
                });
            }
            self.started = true;
            return Ok(self.outer.coeff(0).clone());
        }
        let k = self.table.order() + 1;
        if k > self.outer.order() {
            return Err(Error::invalid(format!(
                "outer transform of order {} cannot give H({k})",
                self.outer.order()
            )));
        }
        self.table.push_input(g);
        Ok(weighted_row(self.outer.coeffs(), self.table.row(k)))
    }
}
