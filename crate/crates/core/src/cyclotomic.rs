//! Exact arithmetic in the cyclotomic integers `Z[w] = Z[x]/Phi_p(x)`, `w` a
//! primitive `p`-th root of unity.
//!
//! Elements are kept in the power basis `1, w, ..., w^{p-2}` and reduced
//! eagerly, so equality is coefficient equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::ExactRing;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

/// u-adic valuation; the zero element has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u32) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt {
            p,
            coeffs: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn from_int(p: u32, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = n.into();
        z
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    /// `w^k`.
    pub fn root_power(p: u32, k: i64) -> Self {
        let mut acc = vec![BigInt::zero(); p as usize];
        acc[k.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::from_cyclic(p, acc)
    }

    /// `u = 1 - w`.
    pub fn u(p: u32) -> Self {
        &Self::one(p) - &Self::root_power(p, 1)
    }

    /// Builds an element from power-basis coordinates; requires `p - 1` of them.
    pub fn from_coeffs(p: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        check_prime(p)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::invalid(format!(
                "expected {} power-basis coordinates for p = {p}, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycInt { p, coeffs })
    }

    /// `sum_e c[e] w^e` for `c` indexed by exponents modulo `p` (length `p`).
    pub fn from_cyclic(p: u32, mut c: Vec<BigInt>) -> Self {
        debug_assert_eq!(c.len(), p as usize);
        let top = c.pop().expect("p >= 2");
        if !top.is_zero() {
            for x in c.iter_mut() {
                *x -= &top;
            }
        }
        CycInt { p, coeffs: c }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it lies in `Z`.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.p as usize;
        if let Some(c) = other.to_integer() {
            return self.scale(&c);
        }
        if let Some(c) = self.to_integer() {
            return other.scale(&c);
        }
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e = (i + j) % p;
                acc[e] += a * b;
            }
        }
        Self::from_cyclic(self.p, acc)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Galois automorphism `w -> w^k`, `p` not dividing `k`.
    pub fn galois(&self, k: u32) -> Result<Self> {
        if k.is_multiple_of(self.p) {
            return Err(Error::invalid(format!(
                "w -> w^{k} is not an automorphism for p = {}",
                self.p
            )));
        }
        let p = self.p as usize;
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            acc[(i * k as usize) % p] += a;
        }
        Ok(Self::from_cyclic(self.p, acc))
    }

    /// Product of all Galois conjugates, a rational integer.
    pub fn norm(&self) -> Result<BigInt> {
        let mut acc = self.clone();
        for k in 2..self.p {
            acc = acc.mul_unchecked(&self.galois(k)?);
        }
        acc.to_integer()
            .ok_or_else(|| Error::NotInteger("norm of a cyclotomic integer".into()))
    }

    /// Trace `sum_k sigma_k(self)`, a rational integer.
    pub fn trace(&self) -> BigInt {
        // sum_{k=1}^{p-1} w^{ik} = p - 1 for i = 0, else -1.
        let sum: BigInt = self.coeffs.iter().sum();
        &self.coeffs[0] * BigInt::from(self.p) - sum
    }

    /// Lift to a polynomial of degree < p - 1 and evaluate at 1.
    fn lift_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact division by `u = 1 - w`, or `None` if `u` does not divide.
    ///
    /// `u | a` iff `p | A(1)` for the canonical lift `A`. Subtracting
    /// `(A(1)/p) Phi_p` gives a lift vanishing at 1, which is then divided by
    /// `1 - x` synthetically.
    pub fn div_by_u(&self) -> Option<Self> {
        let p = self.p as usize;
        let (t, r) = self.lift_at_one().div_rem(&BigInt::from(self.p));
        if !r.is_zero() {
            return None;
        }
        // A'(x) = A(x) - t * Phi_p(x), degree p - 1.
        let mut a: Vec<BigInt> = self.coeffs.iter().map(|c| c - &t).collect();
        a.push(-t);
        // A'(x) = (1 - x) Q(x)  <=>  A'(x) = (x - 1)(-Q(x)).
        // Synthetic division by (x - 1) from the top: b_{n-1} = a_n, b_{i-1} = a_i + b_i.
        let mut q = vec![BigInt::zero(); p - 1];
        let mut carry = BigInt::zero();
        for i in (1..p).rev() {
            carry += &a[i];
            q[i - 1] = -carry.clone();
        }
        debug_assert!((carry + &a[0]).is_zero());
        Some(CycInt {
            p: self.p,
            coeffs: q,
        })
    }

    /// Largest `m` with `u^m | self`.
    pub fn u_valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinity;
        }
        let mut v = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_by_u() {
            cur = q;
            v += 1;
        }
        Valuation::Finite(v)
    }

    /// Exact quotient in `Z[w]`, via multiplication by the conjugate product.
    pub fn div_exact(&self, d: &Self) -> Result<Option<Self>> {
        self.same_prime(d)?;
        if d.is_zero() {
            return Ok(None);
        }
        if let Some(c) = d.to_integer() {
            return Ok(self.div_integer(&c));
        }
        let mut conj = Self::one(self.p);
        for k in 2..self.p {
            conj = conj.mul_unchecked(&d.galois(k)?);
        }
        let norm = d
            .mul_unchecked(&conj)
            .to_integer()
            .ok_or_else(|| Error::NotInteger("norm in exact division".into()))?;
        Ok(self.mul_unchecked(&conj).div_integer(&norm))
    }

    fn div_integer(&self, c: &BigInt) -> Option<Self> {
        if c.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CycInt {
            p: self.p,
            coeffs: out,
        })
    }
}

/// `f(w^k)` for an integer polynomial `f` given by ascending coefficients.
pub fn cyc_eval(f: &[BigInt], k: u32, p: u32) -> CycInt {
    let mut acc = vec![BigInt::zero(); p as usize];
    for (e, c) in f.iter().enumerate() {
        acc[(e * k as usize) % p as usize] += c;
    }
    CycInt::from_cyclic(p, acc)
}

pub fn cyc_mul(a: &CycInt, b: &CycInt) -> Result<CycInt> {
    a.checked_mul(b)
}

pub fn u_valuation(a: &CycInt) -> Valuation {
    a.u_valuation()
}

pub fn cyc_is_integer(a: &CycInt) -> Option<BigInt> {
    a.to_integer()
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn p_valuation(n: &BigInt, p: u32) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut cur = n.abs();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        cur = q;
        v += 1;
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[p={}](", self.p)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*w")?,
                _ => write!(f, "{c}*w^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator impls panic on mismatched primes; use the `checked_*` methods
// where the primes come from user input.
impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).expect("cyclotomic prime mismatch")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_sub(rhs).expect("cyclotomic prime mismatch")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).expect("cyclotomic prime mismatch")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl ExactRing for CycInt {
    fn zero_like(&self) -> Self {
        CycInt::zero(self.p)
    }
    fn one_like(&self) -> Self {
        CycInt::one(self.p)
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
        self.div_exact(divisor).ok().flatten()
    }
}
