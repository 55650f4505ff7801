//! Partial Bell polynomials.
//!
//! Two families are provided, evaluated numerically over a supplied input
//! sequence `x_1, x_2, ...` (stored zero-based, so `xs[0]` is `x_1`):
//!
//! * exponential `B_{k,l}`, the weight-`k` part of `(Σ x_m t^m / m!)^l / l!`
//!   scaled by `k!`;
//! * ordinary `B̂_{k,l}`, the coefficient of `t^k` in `(Σ x̂_m t^m)^l`.
//!
//! Each can be evaluated from the explicit sum over partitions or from a
//! row-by-row recurrence held in a [`BellTable`]. The two families are
//! related by `B_{k,l}(x) = k!/l! · B̂_{k,l}(x_1/1!, x_2/2!, ...)`.

use crate::error::{Error, Result};
use crate::scalar::{factorial, powu, Scalar};

/// Multiplicities `(j_1, ..., j_{k-l+1})` of one term in the explicit
/// Bell sum: part `i` is used `j_i` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionVector {
    multiplicities: Vec<usize>,
    weight: usize,
    degree: usize,
}

impl PartitionVector {
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `k = Σ i·j_i`.
    pub fn weight(&self) -> usize {
        self.weight
    }

    /// `l = Σ j_i`.
    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// All multiplicity vectors of length `k - l + 1` with `Σ j_i = l` and
/// `Σ i·j_i = k`, in descending lexicographic order of `(j_1, j_2, ...)`.
pub fn enumerate_partitions(k: usize, l: usize) -> Result<Vec<PartitionVector>> {
    if l > k {
        return Err(Error::invalid(format!("degree {l} exceeds weight {k}")));
    }
    let len = k - l + 1;
    let mut out = Vec::new();
    let mut current = vec![0usize; len];
    fill_partitions(0, l, k, &mut current, &mut out, k, l);
    Ok(out)
}

fn fill_partitions(
    idx: usize,
    parts_left: usize,
    weight_left: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<PartitionVector>,
    k: usize,
    l: usize,
) {
    if idx == current.len() {
        if parts_left == 0 && weight_left == 0 {
            out.push(PartitionVector {
                multiplicities: current.clone(),
                weight: k,
                degree: l,
            });
        }
        return;
    }
    let size = idx + 1;
    // Every remaining part has size at least `size`.
    if weight_left < parts_left * size {
        return;
    }
    let max = parts_left.min(weight_left / size);
    for j in (0..=max).rev() {
        current[idx] = j;
        fill_partitions(
            idx + 1,
            parts_left - j,
            weight_left - j * size,
            current,
            out,
            k,
            l,
        );
    }
    current[idx] = 0;
}

/// Number of inputs a `(k, l)` evaluation reads.
fn inputs_needed(k: usize, l: usize) -> usize {
    if l == 0 {
        0
    } else {
        k - l + 1
    }
}

fn check_args<T>(k: usize, l: usize, xs: &[T]) -> Result<()> {
    if l > k {
        return Err(Error::invalid(format!("degree {l} exceeds weight {k}")));
    }
    let needed = inputs_needed(k, l);
    if xs.len() < needed {
        return Err(Error::invalid(format!(
            "B({k},{l}) needs {needed} inputs, got {}",
            xs.len()
        )));
    }
    Ok(())
}

/// `B_{k,l}` from the explicit sum over [`enumerate_partitions`].
pub fn bell_exp_explicit<T: Scalar>(k: usize, l: usize, xs: &[T]) -> Result<T> {
    check_args(k, l, xs)?;
    let k_fact: T = factorial(k);
    let mut sum = T::zero();
    for p in enumerate_partitions(k, l)? {
        let mut denom = T::one();
        let mut term = T::one();
        for (i, &j) in p.multiplicities().iter().enumerate() {
            if j == 0 {
                continue;
            }
            denom = denom * factorial::<T>(j) * powu(&factorial::<T>(i + 1), j);
            term = term * powu(&xs[i], j);
        }
        sum = sum + k_fact.clone() / denom * term;
    }
    Ok(sum)
}

/// `B_{k,l}` via the binomial recurrence.
pub fn bell_exp_recurrence<T: Scalar>(k: usize, l: usize, xs: &[T]) -> Result<T> {
    check_args(k, l, xs)?;
    Ok(single_entry(BellKind::Exponential, k, l, xs))
}

/// `B̂_{k,l}` via the `i·l/k` recurrence.
pub fn bell_ord_recurrence<T: Scalar>(k: usize, l: usize, xhats: &[T]) -> Result<T> {
    check_args(k, l, xhats)?;
    Ok(single_entry(BellKind::Ordinary, k, l, xhats))
}

/// `B_{k,l}` computed through the ordinary family:
/// `k!/l! · B̂_{k,l}(x_1/1!, x_2/2!, ...)`.
pub fn exp_from_ord<T: Scalar>(k: usize, l: usize, xs: &[T]) -> Result<T> {
    check_args(k, l, xs)?;
    let scaled: Vec<T> = xs
        .iter()
        .take(inputs_needed(k, l))
        .enumerate()
        .map(|(i, x)| x.clone() / factorial::<T>(i + 1))
        .collect();
    let hat = bell_ord_recurrence(k, l, &scaled)?;
    Ok(factorial::<T>(k) / factorial::<T>(l) * hat)
}

/// One `(k, l)` entry of the recurrence, filling only the cells it depends
/// on: `(m, j)` with `j ≤ l` and `m - j ≤ k - l`. `band[j][d]` holds the
/// entry at `(j + d, j)`.
fn single_entry<T: Scalar>(kind: BellKind, k: usize, l: usize, xs: &[T]) -> T {
    let width = k - l + 1;
    let pascal = match kind {
        BellKind::Exponential => pascal_rows::<T>(k),
        BellKind::Ordinary => Vec::new(),
    };
    let mut prev: Vec<T> = (0..width)
        .map(|d| if d == 0 { T::one() } else { T::zero() })
        .collect();
    for j in 1..=l {
        let mut cur = Vec::with_capacity(width);
        for d in 0..width {
            let m = j + d;
            let mut acc = T::zero();
            for i in 1..=(d + 1) {
                let below = &prev[d + 1 - i];
                if below.is_zero() || xs[i - 1].is_zero() {
                    continue;
                }
                let coef = match kind {
                    BellKind::Exponential => pascal[m - 1][i - 1].clone(),
                    BellKind::Ordinary => T::ratio((i * j) as i64, m as i64),
                };
                acc = acc + coef * xs[i - 1].clone() * below.clone();
            }
            cur.push(acc);
        }
        prev = cur;
    }
    prev.swap_remove(width - 1)
}

/// Pascal rows `C(n, ·)` for `n < count`.
fn pascal_rows<T: Scalar>(count: usize) -> Vec<Vec<T>> {
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(count);
    while rows.len() < count {
        rows.push(next_pascal_row(rows.last()));
    }
    rows
}

fn next_pascal_row<T: Scalar>(prev: Option<&Vec<T>>) -> Vec<T> {
    let mut r = vec![T::one()];
    if let Some(prev) = prev {
        for w in prev.windows(2) {
            r.push(w[0].clone() + w[1].clone());
        }
        r.push(T::one());
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    Exponential,
    Ordinary,
}

/// Triangular table of `B_{k,l}` or `B̂_{k,l}` for `0 ≤ l ≤ k ≤ order`.
///
/// Rows are filled by increasing `k`; row `k` needs only inputs up to `x_k`,
/// so the table can grow one input at a time with [`BellTable::push_input`].
#[derive(Debug, Clone)]
pub struct BellTable<T> {
    kind: BellKind,
    inputs: Vec<T>,
    rows: Vec<Vec<T>>,
    // Pascal rows C(n, ·) for n < order; only used by the exponential kind.
    pascal: Vec<Vec<T>>,
}

impl<T: Scalar> BellTable<T> {
    /// Table holding only the `k = 0` row.
    pub fn new(kind: BellKind) -> Self {
        BellTable {
            kind,
            inputs: Vec::new(),
            rows: vec![vec![T::one()]],
            pascal: Vec::new(),
        }
    }

    pub fn exponential(xs: &[T], order: usize) -> Result<Self> {
        Self::with_inputs(BellKind::Exponential, xs, order)
    }

    pub fn ordinary(xhats: &[T], order: usize) -> Result<Self> {
        Self::with_inputs(BellKind::Ordinary, xhats, order)
    }

    fn with_inputs(kind: BellKind, xs: &[T], order: usize) -> Result<Self> {
        if xs.len() < order {
            return Err(Error::invalid(format!(
                "table of order {order} needs {order} inputs, got {}",
                xs.len()
            )));
        }
        let mut table = Self::new(kind);
        for x in &xs[..order] {
            table.push_input(x.clone());
        }
        Ok(table)
    }

    pub fn kind(&self) -> BellKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn inputs(&self) -> &[T] {
        &self.inputs
    }

    /// Appends `x_{order+1}` and fills the row of that weight.
    pub fn push_input(&mut self, x: T) {
        self.inputs.push(x);
        let k = self.inputs.len();
        if self.kind == BellKind::Exponential {
            self.extend_pascal(k - 1);
        }
        let mut row = Vec::with_capacity(k + 1);
        row.push(T::zero());
        for l in 1..=k {
            let mut acc = T::zero();
            for i in 1..=(k - l + 1) {
                let prev = &self.rows[k - i][l - 1];
                if prev.is_zero() {
                    continue;
                }
                let coef = match self.kind {
                    BellKind::Exponential => self.pascal[k - 1][i - 1].clone(),
                    BellKind::Ordinary => T::ratio((i * l) as i64, k as i64),
                };
                acc = acc + coef * self.inputs[i - 1].clone() * prev.clone();
            }
            row.push(acc);
        }
        self.rows.push(row);
    }

    fn extend_pascal(&mut self, n: usize) {
        while self.pascal.len() <= n {
            let next = next_pascal_row(self.pascal.last());
            self.pascal.push(next);
        }
    }

    /// Value at `(k, l)`; zero when `l > k`.
    ///
    /// Panics if `k` exceeds the table order.
    pub fn get(&self, k: usize, l: usize) -> T {
        assert!(
            k <= self.order(),
            "weight {k} beyond table order {}",
            self.order()
        );
        self.rows[k].get(l).cloned().unwrap_or_else(T::zero)
    }

    pub fn row(&self, k: usize) -> &[T] {
        &self.rows[k]
    }
}
