//! Mahler-type measures for `D_inf`, `D_inf h` and the discrete Heisenberg
//! group, all reduced to one-variable logarithmic Mahler measures.
//!
//! One-variable measures are computed from roots:
//! `m(f) = log|lc f| + sum log max(1, |r|)`. Integer inputs are first split
//! into squarefree parts so the root finder only sees simple roots.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly_expr::{format_terms, parse_terms};

pub const MAX_ITERATIONS: u32 = 200;
const STEP_TOL: f64 = 1e-13;
/// Accepted final step when the iteration cap is reached.
const FALLBACK_TOL: f64 = 1e-8;

/// Integer Laurent polynomial in one variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_terms([(0, c.into())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            *p.terms.entry(e).or_insert_with(BigInt::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    /// `sum c_i x^i` for `i = 0..`.
    pub fn from_coeffs(c: &[i64]) -> Self {
        Self::from_terms(c.iter().enumerate().map(|(i, &v)| (i as i64, BigInt::from(v))))
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).map(|(&e, c)| (e, c.clone())))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (e, -c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *out.entry(ea + eb).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Self::from_terms(out)
    }

    /// `f(x^{-1})`.
    pub fn reflect(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, c)| (-e, c.clone())))
    }

    /// `f(x) f(x^{-1})`, i.e. `|f|^2` on the unit circle.
    pub fn norm_sq(&self) -> Self {
        self.mul(&self.reflect())
    }

    /// Coefficients of `x^{-v} f(x)` where `v` is the lowest exponent.
    pub fn to_dense(&self) -> Vec<BigInt> {
        let (Some((&lo, _)), Some((&hi, _))) = (self.terms.first_key_value(), self.terms.last_key_value())
        else {
            return vec![];
        };
        let mut v = vec![BigInt::zero(); (hi - lo) as usize + 1];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        v
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = parse_terms(s, &['x'])?;
        Ok(Self::from_terms(t.into_iter().map(|(e, c)| (e[0], c))))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.terms.iter().map(|(&e, c)| (vec![e], c.clone())).collect();
        f.write_str(&format_terms(&t, &['x']))
    }
}

/// Integer Laurent polynomial in `y` (the `theta` variable) and `z` (`xi`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariateLaurent {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl BivariateLaurent {
    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), BigInt)>) -> Self {
        let mut p = Self::default();
        for (e, c) in terms {
            *p.terms.entry(e).or_insert_with(BigInt::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_terms([((0, 0), c.into())])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficients in `y` (lowest exponent first) at `z = e^{2 pi i xi}`.
    fn slice(&self, xi: f64) -> Vec<Complex64> {
        let Some(lo) = self.terms.keys().map(|&(j, _)| j).min() else {
            return vec![];
        };
        let hi = self.terms.keys().map(|&(j, _)| j).max().unwrap_or(lo);
        let mut v = vec![Complex64::zero(); (hi - lo) as usize + 1];
        let mut scale = 0.0f64;
        for (&(j, k), c) in &self.terms {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * xi * k as f64;
            v[(j - lo) as usize] += Complex64::from_polar(1.0, angle) * c;
            scale = scale.max(c.abs());
        }
        // cancellation down to rounding level means an exact zero
        for a in v.iter_mut() {
            if a.norm() < 1e-12 * scale {
                *a = Complex64::zero();
            }
        }
        v
    }
}

impl FromStr for BivariateLaurent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = parse_terms(s, &['y', 'z'])?;
        Ok(Self::from_terms(t.into_iter().map(|(e, c)| ((e[0], e[1]), c))))
    }
}

impl fmt::Display for BivariateLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.terms.iter().map(|(&(a, b), c)| (vec![a, b], c.clone())).collect();
        f.write_str(&format_terms(&t, &['y', 'z']))
    }
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    // c is highest degree first
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All roots of `sum c_i x^i` (`c` lowest degree first, nonzero leading and
/// constant coefficient) by Aberth iteration.
pub fn polynomial_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().rev().map(|&a| a / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[1]]);
    }
    // Fujiwara-type radius, centred on the root mean
    let radius = (1..=n)
        .map(|k| monic[k].norm().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let centre = -monic[1] / n as f64;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            centre + Complex64::new(radius * t.cos(), 0.9 * radius * t.sin())
        })
        .collect();
    let mut last_step = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&monic, z[k]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::one() - ratio * repulsion);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[k] -= w;
            max_step = max_step.max(w.norm() / (1.0 + z[k].norm()));
        }
        last_step = max_step;
        if max_step < STEP_TOL {
            return Ok(z);
        }
    }
    if last_step < FALLBACK_TOL {
        Ok(z)
    } else {
        Err(Error::RootFindingFailed {
            iterations: MAX_ITERATIONS,
            degree: n,
        })
    }
}

/// `m` of a polynomial with complex coefficients (lowest degree first).
/// Coefficients below `1e-12` of the largest are treated as zero.
pub fn mahler_measure_complex(c: &[Complex64]) -> Result<f64> {
    let scale = c.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let tiny = 1e-12 * scale;
    let lo = c.iter().position(|a| a.norm() > tiny).expect("nonzero entry");
    let hi = c.iter().rposition(|a| a.norm() > tiny).expect("nonzero entry");
    let core = &c[lo..=hi];
    let roots = polynomial_roots(core)?;
    Ok(core[core.len() - 1].norm().ln() + roots.iter().map(|r| r.norm().max(1.0).ln()).sum::<f64>())
}

// Dense integer polynomials, lowest degree first, no trailing zeros.

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    if v.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    v.iter().map(|c| c / &g).collect()
}

fn derivative(v: &[BigInt]) -> Vec<BigInt> {
    if v.len() <= 1 {
        return vec![BigInt::zero()];
    }
    trim(v.iter().enumerate().skip(1).map(|(i, c)| c * i).collect())
}

fn degree(v: &[BigInt]) -> usize {
    v.len() - 1
}

fn is_zero_poly(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Pseudo-remainder of `a` by `b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = degree(b);
    let lb = &b[db];
    while !is_zero_poly(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bc;
        }
        r = trim(r);
        if r.len() == 1 && dr == 0 {
            break;
        }
    }
    r
}

/// Primitive gcd over `Z`, positive leading coefficient.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = primitive(a);
    let mut b = primitive(b);
    if is_zero_poly(&b) {
        return a;
    }
    if degree(&a) < degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !is_zero_poly(&b) {
        let r = prem(&a, &b);
        a = b;
        b = primitive(&r);
    }
    primitive(&a)
}

/// Exact quotient `a / b` for `b | a` in `Q[x]` with `b` primitive.
fn exact_quotient(a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>> {
    let db = degree(b);
    if degree(a) < db {
        return if is_zero_poly(a) {
            Ok(vec![BigInt::zero()])
        } else {
            Err(Error::InexactDivision("polynomial quotient".into()))
        };
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); degree(a) - db + 1];
    for k in (0..q.len()).rev() {
        let (qk, rem) = r[k + db].div_rem(&b[db]);
        if !rem.is_zero() {
            return Err(Error::InexactDivision("polynomial quotient".into()));
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &qk * bc;
        }
        q[k] = qk;
    }
    if !is_zero_poly(&r) {
        return Err(Error::InexactDivision("polynomial quotient".into()));
    }
    Ok(trim(q))
}

fn sub_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

/// Yun's algorithm: primitive squarefree `a_i` with `prim(f) = prod a_i^i`.
pub(crate) fn squarefree_parts(f: &[BigInt]) -> Result<Vec<(Vec<BigInt>, usize)>> {
    let f = primitive(f);
    if degree(&f) == 0 {
        return Ok(vec![]);
    }
    let df = derivative(&f);
    let b = poly_gcd(&f, &df);
    let mut c = exact_quotient(&f, &b)?;
    let mut d = sub_poly(&exact_quotient(&df, &b)?, &derivative(&c));
    let mut parts = vec![];
    let mut i = 1;
    while degree(&c) > 0 {
        let a = poly_gcd(&c, &d);
        let next_c = exact_quotient(&c, &a)?;
        let quotient = exact_quotient(&d, &a)?;
        d = sub_poly(&quotient, &derivative(&next_c));
        if degree(&a) > 0 {
            parts.push((a, i));
        }
        c = next_c;
        i += 1;
    }
    Ok(parts)
}

fn measure_of_dense(v: &[BigInt]) -> Result<f64> {
    let c: Vec<Complex64> = v
        .iter()
        .map(|x| Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    mahler_measure_complex(&c)
}

fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x.abs() >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Logarithmic Mahler measure of an integer Laurent polynomial.
pub fn mahler_measure(f: &LaurentPoly) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let dense = f.to_dense();
    let mut total = ln_abs(&content(&dense));
    for (part, mult) in squarefree_parts(&dense)? {
        total += mult as f64 * measure_of_dense(&part)?;
    }
    Ok(total)
}

/// `(1/2) m(f f~ - g g~)`.
pub fn d_infinity_measure(f: &LaurentPoly, g: &LaurentPoly) -> Result<f64> {
    let h = f.norm_sq().sub(&g.norm_sq());
    Ok(mahler_measure(&h)? / 2.0)
}

/// `(1/4) [m(f f~ - g g~) + m(f f~ + g g~)]`.
pub fn d_infinity_h_measure(f: &LaurentPoly, g: &LaurentPoly) -> Result<f64> {
    let (ff, gg) = (f.norm_sq(), g.norm_sq());
    Ok((mahler_measure(&ff.sub(&gg))? + mahler_measure(&ff.add(&gg))?) / 4.0)
}

/// `(1/4) m(|f0 + f2|^2 - |f1 + f3|^2) + (1/4) m(|f0 - f2|^2 + |f1 - f3|^2)`.
pub fn d_infinity_h_fourcomponent(f: [&LaurentPoly; 4]) -> Result<f64> {
    let [f0, f1, f2, f3] = f;
    let first = f0.add(f2).norm_sq().sub(&f1.add(f3).norm_sq());
    let second = f0.sub(f2).norm_sq().add(&f1.sub(f3).norm_sq());
    Ok((mahler_measure(&first)? + mahler_measure(&second)?) / 4.0)
}

/// `int_0^1 max(m(f0(., e(xi))), m(fk(., e(xi)))) dxi` on `n` equally spaced
/// `xi`, for `F = f0(y, z) + x^k fk(y, z)`.
pub fn heisenberg_infinite_measure(
    f0: &BivariateLaurent,
    fk: &BivariateLaurent,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("quadrature needs at least one point"));
    }
    let slice_measure = |f: &BivariateLaurent, xi: f64| -> Result<f64> {
        match mahler_measure_complex(&f.slice(xi)) {
            Err(Error::ZeroPolynomial) => Err(Error::ZeroSlice { xi }),
            other => other,
        }
    };
    let values = (0..n)
        .into_par_iter()
        .map(|s| {
            let xi = s as f64 / n as f64;
            Ok(slice_measure(f0, xi)?.max(slice_measure(fk, xi)?))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().sum::<f64>() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const LEHMER: f64 = 0.162_357_612_007_738_14;
    /// `m(f f~ + g g~)` for `f = x^2 - 1`, `g = x^5 + x^4 - 1`, from a
    /// 40-digit polynomial root computation.
    const LEHMER_PLUS: f64 = 1.365_132_658_991_097_3;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn elementary_measures() {
        assert!(close(mahler_measure(&lp("2")).unwrap(), 2f64.ln(), 1e-15));
        assert!(close(mahler_measure(&lp("x - 2")).unwrap(), 2f64.ln(), 1e-13));
        assert!(close(mahler_measure(&lp("x^-3 - 2x^-4")).unwrap(), 2f64.ln(), 1e-13));
        assert!(close(mahler_measure(&lp("x^5")).unwrap(), 0.0, 1e-15));
        assert!(matches!(mahler_measure(&LaurentPoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn lehmer_polynomial() {
        let f = lp("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
        assert!(close(mahler_measure(&f).unwrap(), LEHMER, 1e-9));
        assert!(close(mahler_measure(&f).unwrap().exp(), 1.176280818, 1e-9));
        // repeated factors
        let f3 = f.mul(&f).mul(&f).mul(&lp("x+1")).mul(&lp("x+1"));
        assert!(close(mahler_measure(&f3).unwrap(), 3.0 * LEHMER, 1e-9));
    }

    #[test]
    fn squarefree_decomposition() {
        let f = lp("x-1").mul(&lp("x+2")).mul(&lp("x+2")).mul(&lp("2x^2+1")).mul(&lp("2x^2+1")).mul(&lp("2x^2+1"));
        let parts = squarefree_parts(&f.to_dense()).unwrap();
        let degrees: Vec<(usize, usize)> = parts.iter().map(|(p, m)| (p.len() - 1, *m)).collect();
        assert_eq!(degrees, vec![(1, 1), (1, 2), (2, 3)]);
    }

    /// `Phi_n` by repeated division of `x^n - 1`.
    fn cyclotomic(n: usize) -> Vec<BigInt> {
        let mut num: Vec<BigInt> = vec![BigInt::zero(); n + 1];
        num[0] = BigInt::from(-1);
        num[n] = BigInt::one();
        for d in 1..n {
            if n.is_multiple_of(d) {
                num = exact_quotient(&num, &cyclotomic(d)).unwrap();
            }
        }
        num
    }

    #[test]
    fn cyclotomics_have_measure_zero() {
        for n in 1..=36 {
            let c = cyclotomic(n);
            let f = LaurentPoly::from_terms(c.into_iter().enumerate().map(|(i, v)| (i as i64, v)));
            assert!(mahler_measure(&f).unwrap().abs() < 1e-9, "Phi_{n}");
        }
        let prod = lp("x^4+x^3+x^2+x+1").mul(&lp("x^2+1")).mul(&lp("x^2-x+1"));
        assert!(mahler_measure(&prod).unwrap().abs() < 1e-9);
    }

    #[test]
    fn dihedral_lehmer_example() {
        let f = lp("x^2-1");
        let g = lp("x^5+x^4-1");
        let h = f.norm_sq().sub(&g.norm_sq());
        assert_eq!(h, lp("x^5+x^4-x^2-x-1-x^-1-x^-2+x^-4+x^-5"));
        assert!(close(d_infinity_measure(&f, &g).unwrap(), LEHMER / 2.0, 1e-9));
        assert!(close(d_infinity_measure(&f, &g).unwrap(), 0.08117880600, 1e-10));
        let dh = d_infinity_h_measure(&f, &g).unwrap();
        assert!(close(dh, (LEHMER + LEHMER_PLUS) / 4.0, 1e-9));
        let four = d_infinity_h_fourcomponent([&f, &g, &LaurentPoly::zero(), &LaurentPoly::zero()]).unwrap();
        assert!(close(four, dh, 1e-12));
    }

    #[test]
    fn trivial_dihedral_cases() {
        let one = lp("1");
        let zero = LaurentPoly::zero();
        let x2 = lp("x-2");
        assert!(close(d_infinity_measure(&x2, &zero).unwrap(), 2f64.ln(), 1e-12));
        assert!(close(d_infinity_measure(&one, &zero).unwrap(), 0.0, 1e-15));
        assert!(close(d_infinity_h_measure(&x2, &zero).unwrap(), 2f64.ln(), 1e-12));
        assert!(close(d_infinity_h_measure(&one, &zero).unwrap(), 0.0, 1e-15));
        assert!(matches!(d_infinity_measure(&one, &one), Err(Error::ZeroPolynomial)));
        let c = lp("5");
        let only_f2 = d_infinity_h_fourcomponent([&zero, &zero, &c, &zero]).unwrap();
        assert!(close(only_f2, 5f64.ln(), 1e-12));
        let lehmer = lp("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
        let only_f0 = d_infinity_h_fourcomponent([&lehmer, &zero, &zero, &zero]).unwrap();
        assert!(close(only_f0, LEHMER, 1e-9));
        assert!(matches!(
            d_infinity_h_fourcomponent([&one, &one, &zero, &zero]),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn heisenberg_limit_measure() {
        let two = BivariateLaurent::constant(2);
        let one = BivariateLaurent::constant(1);
        assert!(close(heisenberg_infinite_measure(&two, &one, 64).unwrap(), 2f64.ln(), 1e-12));
        let y: BivariateLaurent = "y".parse().unwrap();
        assert!(close(heisenberg_infinite_measure(&y, &one, 64).unwrap(), 0.0, 1e-12));
        let zero = BivariateLaurent::default();
        assert!(matches!(
            heisenberg_infinite_measure(&zero, &one, 8),
            Err(Error::ZeroSlice { .. })
        ));
        // 1 + z vanishes identically as a polynomial in y at xi = 1/2
        let one_plus_z: BivariateLaurent = "1 + z".parse().unwrap();
        assert!(matches!(
            heisenberg_infinite_measure(&one_plus_z, &one, 8),
            Err(Error::ZeroSlice { xi }) if xi == 0.5
        ));
    }

    /// Double Riemann sum of `max(log|f0|, log|fk|)` inner-integrated first.
    fn riemann_oracle(f0: &BivariateLaurent, fk: &BivariateLaurent, n: usize) -> f64 {
        let eval = |f: &BivariateLaurent, th: f64, xi: f64| -> f64 {
            f.terms
                .iter()
                .map(|(&(j, k), c)| {
                    Complex64::from_polar(c.to_f64().unwrap(), 2.0 * std::f64::consts::PI * (j as f64 * th + k as f64 * xi))
                })
                .sum::<Complex64>()
                .norm()
                .ln()
        };
        let mut total = 0.0;
        for s in 0..n {
            let xi = (s as f64 + 0.5) / n as f64;
            let (mut a, mut b) = (0.0, 0.0);
            for t in 0..n {
                let th = (t as f64 + 0.5) / n as f64;
                a += eval(f0, th, xi);
                b += eval(fk, th, xi);
            }
            total += (a / n as f64).max(b / n as f64);
        }
        total / n as f64
    }

    #[test]
    fn heisenberg_limit_against_riemann_sum() {
        let f0: BivariateLaurent = "y + z + 3".parse().unwrap();
        let one = BivariateLaurent::constant(1);
        let got = heisenberg_infinite_measure(&f0, &one, 512).unwrap();
        assert!(close(got, riemann_oracle(&f0, &one, 4096), 1e-3));
        // Jensen: the inner measure is log|3 + z|, whose mean is log 3
        assert!(close(got, 3f64.ln(), 1e-9));
        let f1: BivariateLaurent = "2y^2 - y z + 1".parse().unwrap();
        let fk: BivariateLaurent = "y + 2 + z^-1".parse().unwrap();
        let got = heisenberg_infinite_measure(&f1, &fk, 512).unwrap();
        assert!(close(got, riemann_oracle(&f1, &fk, 1024), 1e-3), "{got}");
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        (prop::collection::vec(-9i64..=9, 1..=8), -3i64..=3).prop_filter_map("nonzero", |(c, shift)| {
            let p = LaurentPoly::from_terms(
                c.iter().enumerate().map(|(i, &v)| (i as i64 + shift, BigInt::from(v))),
            );
            (!p.is_zero()).then_some(p)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn multiplicative(f in small_poly(), g in small_poly()) {
            let lhs = mahler_measure(&f.mul(&g)).unwrap();
            let rhs = mahler_measure(&f).unwrap() + mahler_measure(&g).unwrap();
            prop_assert!(close(lhs, rhs, 1e-8), "{} vs {}", lhs, rhs);
        }

        #[test]
        fn kronecker_bound(c in prop::collection::vec(-9i64..=9, 1..=15)) {
            let mut c = c;
            c.push(1);
            let m = mahler_measure(&LaurentPoly::from_coeffs(&c)).unwrap();
            prop_assert!(m >= -1e-9);
        }

        #[test]
        fn dihedral_with_zero_g(f in small_poly()) {
            let d = d_infinity_measure(&f, &LaurentPoly::zero()).unwrap();
            prop_assert!(close(d, mahler_measure(&f).unwrap(), 1e-8));
        }

        #[test]
        fn measure_matches_quadrature(f in small_poly()) {
            // roots well away from the circle keep the Riemann sum accurate
            let shifted = f.mul(&LaurentPoly::constant(1)).add(&LaurentPoly::constant(100));
            let dense = shifted.to_dense();
            let n = 2048;
            let q: f64 = (0..n).map(|s| {
                let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / n as f64);
                dense.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c.to_f64().unwrap()).norm().ln()
            }).sum::<f64>() / n as f64;
            prop_assert!(close(mahler_measure(&shifted).unwrap(), q, 1e-8));
        }
    }
}
