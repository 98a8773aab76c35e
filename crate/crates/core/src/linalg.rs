//! Exact determinants over integral domains.
//!
//! The only algorithm here is fraction-free (Bareiss) elimination. Every
//! division it performs is exact over an integral domain, so the ring only has
//! to provide a division primitive that reports failure instead of rounding.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Integral domain with an exact-division primitive.
///
/// Elements know their own ring (a cyclotomic integer carries its prime), so
/// constants are produced from an existing element rather than from `Self`.
pub trait ExactRing: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elt(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `Some(q)` with `q * divisor == self`, or `None` when no such `q` exists.
    fn exact_div(&self, divisor: &Self) -> Option<Self>;
}

impl ExactRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elt(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if divisor.is_one() {
            return Some(self.clone());
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }
}

/// Dense `n x n` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<R> {
    n: usize,
    entries: Vec<R>,
}

impl<R: Clone> SquareMatrix<R> {
    pub fn new(n: usize, entries: Vec<R>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        if entries.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(SquareMatrix { n, entries })
    }

    /// Builds the matrix from `f(row, col)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &R {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: R) {
        self.entries[row * self.n + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        self.entries.chunks(self.n)
    }

    /// Applies `f` to every entry.
    pub fn map<S: Clone>(&self, f: impl FnMut(&R) -> S) -> SquareMatrix<S> {
        SquareMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

/// Row count above which elimination steps update rows in parallel.
const PARALLEL_ROWS: usize = 48;

/// Determinant by fraction-free elimination.
///
/// Pivots on the first nonzero entry down the current column; if there is
/// none the determinant is zero.
pub fn det_bareiss<R: ExactRing>(m: &SquareMatrix<R>) -> Result<R> {
    let n = m.n;
    let mut rows: Vec<Vec<R>> = m.rows().map(|r| r.to_vec()).collect();
    let one = m.entries[0].one_like();
    if n == 1 {
        return Ok(rows[0][0].clone());
    }

    let mut negate = false;
    let mut prev = one;
    for k in 0..n - 1 {
        let Some(pivot_row) = (k..n).find(|&i| !rows[i][k].is_zero_elt()) else {
            return Ok(m.entries[0].zero_like());
        };
        if pivot_row != k {
            rows.swap(k, pivot_row);
            negate = !negate;
        }

        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_line = &head[k];
        let pivot = &pivot_line[k];
        let eliminate = |row: &mut Vec<R>| -> Result<()> {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = row[j].mul_ref(pivot).sub_ref(&lead.mul_ref(&pivot_line[j]));
                row[j] = num.exact_div(&prev).ok_or_else(|| {
                    Error::InexactDivision(format!("Bareiss step {k}, column {j}"))
                })?;
            }
            row[k] = lead.zero_like();
            Ok(())
        };
        if tail.len() >= PARALLEL_ROWS {
            tail.par_iter_mut().try_for_each(eliminate)?;
        } else {
            tail.iter_mut().try_for_each(eliminate)?;
        }
        prev = rows[k][k].clone();
    }

    let det = rows[n - 1][n - 1].clone();
    Ok(if negate { det.neg_ref() } else { det })
}
