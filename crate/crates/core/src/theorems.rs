//! Congruences, achievability constructions and sharp divisibility families
//! for `Z_p^2` and `H_p` determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::cyclotomic::{check_prime, p_valuation};
use crate::error::{Error, Result};
use crate::fast::{cyclic_measure, heisenberg_measure, zp2_measure};
use crate::groups::{heisenberg_from_words, HeisenbergPoly};
use crate::rng::{random_coeffs, random_heisenberg, trial_rng};

fn big_pow(base: impl Into<BigInt>, e: u64) -> BigInt {
    num_traits::pow(base.into(), e as usize)
}

/// `x mod m` in `[0, m)`.
pub fn residue(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

/// Whether `gcd(x, p) = 1` and `x^{p-1} = 1 mod p^n`.
pub fn t_n_member(x: &BigInt, p: u32, n: u32) -> bool {
    let pb = BigInt::from(p);
    if (x % &pb).is_zero() {
        return false;
    }
    let modulus = big_pow(p, n as u64);
    residue(x, &modulus).modpow(&BigInt::from(p - 1), &modulus).is_one()
}

/// `M` against `F(1,1,1)^{p^3}` modulo `p^3`.
#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceReport {
    pub m: BigInt,
    pub base: BigInt,
    pub modulus: BigInt,
    pub lhs_residue: BigInt,
    pub rhs_residue: BigInt,
    pub holds: bool,
}

pub fn verify_congruence_main(f: &HeisenbergPoly) -> Result<CongruenceReport> {
    let p = f.prime();
    let m = heisenberg_measure(f)?.m;
    let base = f.value_at_one();
    let modulus = big_pow(p, 3);
    let lhs_residue = residue(&m, &modulus);
    let e = BigInt::from(p).pow(3);
    let rhs_residue = residue(&base, &modulus).modpow(&e, &modulus);
    Ok(CongruenceReport {
        holds: lhs_residue == rhs_residue,
        m,
        base,
        modulus,
        lhs_residue,
        rhs_residue,
    })
}

/// Outcome of a seeded batch of congruence checks.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSummary {
    pub trials: u64,
    pub failures: Vec<u64>,
    /// Measures coprime to `p`, all of which must lie in `T_3`.
    pub coprime_values: u64,
    pub coprime_failures: Vec<u64>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.coprime_failures.is_empty()
    }
}

/// Checks the `p^3` congruence (and `T_3` membership of coprime values) on
/// `trials` random polynomials with coefficients in `[-height, height]`.
pub fn congruence_suite(p: u32, trials: u64, seed: u64, height: i64) -> Result<SuiteSummary> {
    check_prime(p)?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let f = random_heisenberg(&mut trial_rng(seed, t), p, height)?;
            let r = verify_congruence_main(&f)?;
            let coprime = !(&r.m % BigInt::from(p)).is_zero();
            Ok((r.holds, coprime, !coprime || t_n_member(&r.m, p, 3)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut summary = SuiteSummary {
        trials,
        failures: vec![],
        coprime_values: 0,
        coprime_failures: vec![],
    };
    for (t, (holds, coprime, in_t3)) in outcomes.into_iter().enumerate() {
        if !holds {
            summary.failures.push(t as u64);
        }
        summary.coprime_values += coprime as u64;
        if !in_t3 {
            summary.coprime_failures.push(t as u64);
        }
    }
    Ok(summary)
}

/// `f^e` in `Z[y]/(y^p - 1)`.
fn cyclic_pow(f: &[BigInt], e: u64) -> Vec<BigInt> {
    let n = f.len();
    let mul = |a: &[BigInt], b: &[BigInt]| {
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate() {
                out[(i + j) % n] += ai * bj;
            }
        }
        out
    };
    let mut result = vec![BigInt::zero(); n];
    result[0] = BigInt::one();
    let mut base = f.to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    result
}

fn div_all(v: &mut [BigInt], d: &BigInt, what: &str) -> Result<()> {
    for c in v.iter_mut() {
        let (q, r) = c.div_rem(d);
        if !r.is_zero() {
            return Err(Error::InexactDivision(what.to_string()));
        }
        *c = q;
    }
    Ok(())
}

/// `F` with `M_{H_p}(F) = a^{p^2} + m p^3`, and its computed measure.
///
/// With `(1 + y + ... + y^{a-1})^p = a + p g(y)` and `(a + p g(y))^p = a^p + p^2 h(y)`
/// modulo `y^p - 1`, the polynomial is
/// `(1 + z + ... + z^{a-1}) + g(y) Phi(z) + h(x) Phi(y) Phi(z) + m Phi(x) Phi(y) Phi(z)`.
pub fn achieve_construction(a: u64, m: &BigInt, p: u32) -> Result<(HeisenbergPoly, BigInt)> {
    check_prime(p)?;
    if a == 0 || a.is_multiple_of(p as u64) {
        return Err(Error::PreconditionViolated(format!(
            "a = {a} must be positive and coprime to p = {p}"
        )));
    }
    let pu = p as usize;
    let pb = BigInt::from(p);
    let mut geometric = vec![BigInt::zero(); pu];
    for i in 0..a {
        geometric[(i % p as u64) as usize] += 1;
    }
    let mut g = cyclic_pow(&geometric, p as u64);
    g[0] -= a;
    div_all(&mut g, &pb, "(1 + ... + y^{a-1})^p - a by p")?;
    let mut h = cyclic_pow(&geometric, (p as u64).pow(2));
    h[0] -= big_pow(a, p as u64);
    div_all(&mut h, &(&pb * &pb), "(a + p g)^p - a^p by p^2")?;

    let mut f = HeisenbergPoly::zero(p)?;
    for i in 0..a {
        f.add_term(0, 0, i as i64, &BigInt::one());
    }
    for j in 0..pu {
        for k in 0..pu {
            f.add_term(0, j as i64, k as i64, &g[j]);
            for i in 0..pu {
                f.add_term(i as i64, j as i64, k as i64, &(&h[i] + m));
            }
        }
    }
    let measure = heisenberg_measure(&f)?.m;
    Ok((f, measure))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Zp2,
    Heisenberg,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Zp2 => "zp2",
            Family::Heisenberg => "heisenberg",
        }
    }
}

/// `p`-adic valuation of a measure against a target exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct SharpnessReport {
    pub family: Family,
    pub p: u32,
    pub k: Option<u32>,
    pub measure: BigInt,
    pub expected_valuation: u64,
    /// `None` when the measure is zero.
    pub actual_valuation: Option<u64>,
    /// `p` divides the measure, so the divisibility statement applies.
    pub applicable: bool,
    /// `p^expected` divides the measure.
    pub divisible: bool,
    /// The valuation is exactly `expected_valuation`.
    pub exact: bool,
}

impl SharpnessReport {
    fn new(family: Family, p: u32, k: Option<u32>, measure: BigInt, expected: u64) -> Self {
        let actual = p_valuation(&measure, p);
        SharpnessReport {
            family,
            p,
            k,
            applicable: actual != Some(0),
            divisible: actual.is_none_or(|v| v >= expected),
            exact: actual == Some(expected),
            expected_valuation: expected,
            actual_valuation: actual,
            measure,
        }
    }
}

/// `A1 p^{1+k} + A2 (1 - x) + A3 (1 - y)^2` as `Z_p^2` coefficients
/// (index `a p + b` for `x^a y^b`) with its valuation report.
pub fn zp2_sharp_family(
    p: u32,
    k: u32,
    a: [i64; 3],
) -> Result<(Vec<BigInt>, SharpnessReport)> {
    check_prime(p)?;
    if p < 5 {
        return Err(Error::invalid(format!("the Z_p^2 sharp family needs p >= 5, got {p}")));
    }
    if a.iter().any(|&ai| ai % p as i64 == 0) {
        return Err(Error::PreconditionViolated(format!(
            "A1, A2, A3 = {a:?} must be coprime to {p}"
        )));
    }
    let pu = p as usize;
    let [a1, a2, a3] = a.map(BigInt::from);
    let mut c = vec![BigInt::zero(); pu * pu];
    c[0] = &a1 * big_pow(p, 1 + k as u64) + &a2 + &a3;
    c[pu] = -&a2;
    c[1] = -BigInt::from(2) * &a3;
    c[2] = a3;
    let m = zp2_measure(p, &c)?;
    let report = SharpnessReport::new(Family::Zp2, p, Some(k), m, p as u64 + 3 + k as u64);
    Ok((c, report))
}

/// Valuation of `M_{Z_p^2}(F)` against `p + 3`.
pub fn zp2_divisibility_check(c: &[BigInt], p: u32) -> Result<SharpnessReport> {
    let m = zp2_measure(p, c)?;
    Ok(SharpnessReport::new(Family::Zp2, p, None, m, p as u64 + 3))
}

/// Smallest `A` in `[2, p - 2]` with `A^p != A mod p^2`.
pub fn non_wieferich_base(p: u32) -> Option<u64> {
    let p2 = BigInt::from(p as u64 * p as u64);
    let e = BigInt::from(p);
    (2..=(p as u64).saturating_sub(2)).find(|&a| {
        let a = BigInt::from(a);
        a.modpow(&e, &p2) != a
    })
}

/// `p + (A - 1)^2 (1 - x) - (1 - y)^2` over `H_p`, valuation `p^2 + 3`.
pub fn heisenberg_sharp_family(p: u32) -> Result<(HeisenbergPoly, SharpnessReport)> {
    check_prime(p)?;
    if p < 5 {
        return Err(Error::invalid(format!("the H_p sharp family needs p >= 5, got {p}")));
    }
    let a = non_wieferich_base(p)
        .ok_or_else(|| Error::PreconditionViolated(format!("no base A found for p = {p}")))?;
    let s = big_pow(a as i64 - 1, 2);
    let mut f = HeisenbergPoly::zero(p)?;
    f.add_term(0, 0, 0, &(BigInt::from(p) + &s - 1));
    f.add_term(1, 0, 0, &-&s);
    f.add_term(0, 1, 0, &BigInt::from(2));
    f.add_term(0, 2, 0, &BigInt::from(-1));
    let m = heisenberg_measure(&f)?.m;
    let expected = (p as u64).pow(2) + 3;
    Ok((f, SharpnessReport::new(Family::Heisenberg, p, None, m, expected)))
}

/// Valuation of `M_{H_p}(F)` against `p^2 + 3`.
pub fn heisenberg_divisibility_check(f: &HeisenbergPoly) -> Result<SharpnessReport> {
    let p = f.prime();
    let m = heisenberg_measure(f)?.m;
    Ok(SharpnessReport::new(Family::Heisenberg, p, None, m, (p as u64).pow(2) + 3))
}

/// One member of the explicit `H_3` families.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyValue {
    pub label: String,
    pub poly: HeisenbergPoly,
    pub claimed: BigInt,
    pub computed: BigInt,
}

impl FamilyValue {
    pub fn matches(&self) -> bool {
        self.claimed == self.computed
    }
}

fn phi3_words(prefix: &str, suffix: &str, c: i64) -> Vec<(String, i64)> {
    ["", "y", "yy"]
        .iter()
        .map(|y| {
            let word = format!("{prefix}{y}{suffix}");
            (if word.is_empty() { "1".to_string() } else { word }, c)
        })
        .collect()
}

/// The five `H_3` families realising every multiple of `3^12`, each with its
/// negation, for a given `m`.
///
/// Products are taken in the normal form `sum_i x^i f_i(y, z)`, so the
/// coefficient written `(y + 1) x` is `x (y + 1)`.
pub fn h3_family_values(m: &BigInt) -> Result<Vec<FamilyValue>> {
    let three = |e: u64| big_pow(3, e);
    let mut families: Vec<(&str, Vec<(String, i64)>, BigInt)> = vec![];
    let w = |pairs: &[(&str, i64)]| -> Vec<(String, i64)> {
        pairs.iter().map(|(s, c)| (s.to_string(), *c)).collect()
    };
    families.push((
        "z+y-y^2+(y+1)x",
        w(&[("z", 1), ("y", 1), ("yy", -1), ("xy", 1), ("x", 1)]),
        three(12) * (1 + 9 * m),
    ));
    let mut f2 = w(&[("1", 1), ("x", 2)]);
    f2.extend(phi3_words("xx", "", 1));
    families.push(("1+2x+x^2Phi(y)", f2, three(12) * (2 + 9 * m)));
    let mut f3 = w(&[("1", 1), ("x", 2)]);
    f3.extend(phi3_words("", "z", 1));
    f3.extend(phi3_words("xx", "", 1));
    families.push(("1+2x+(z+x^2)Phi(y)", f3, three(13) * (1 + 3 * m)));
    let mut f4 = w(&[("1", 1), ("x", 2)]);
    f4.extend(phi3_words("x", "", -1));
    families.push(("1+2x-xPhi(y)", f4, three(14) * m));
    let mut f5 = w(&[("1", 1), ("y", 1), ("yy", -1), ("xy", 1), ("x", 1)]);
    for xi in ["", "x", "xx"] {
        f5.extend(phi3_words(xi, "", 1));
    }
    f5.extend(phi3_words("", "z", 1));
    f5.extend(phi3_words("", "", -1));
    f5.extend(phi3_words("x", "zz", 1));
    f5.extend(phi3_words("x", "z", -2));
    f5.extend(phi3_words("x", "", 1));
    families.push((
        "1+y-y^2+(y+1)x+Phi(x)Phi(y)+(z-1)Phi(y)+(z-1)^2xPhi(y)",
        f5,
        three(12) * (4 + 9 * m),
    ));

    let mut out = Vec::with_capacity(10);
    for (label, words, claimed) in families {
        let borrowed: Vec<(&str, i64)> = words.iter().map(|(s, c)| (s.as_str(), *c)).collect();
        let mut f = heisenberg_from_words(&borrowed, 3)?;
        for g in 0..27i64 {
            f.add_term(g / 9, g / 3, g, m);
        }
        let computed = heisenberg_measure(&f)?.m;
        let neg = f.neg();
        let neg_computed = heisenberg_measure(&neg)?.m;
        out.push(FamilyValue {
            label: format!("{label}+m*Phi(x)Phi(y)Phi(z)"),
            poly: f,
            claimed: claimed.clone(),
            computed,
        });
        out.push(FamilyValue {
            label: format!("-({label}+m*Phi(x)Phi(y)Phi(z))"),
            poly: neg,
            claimed: -claimed,
            computed: neg_computed,
        });
    }
    Ok(out)
}

/// Both sides of `(1/p) sum_{y^p=1} f(y)^p = prod_{y^p=1} f(y) mod p^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Report {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub holds: bool,
}

pub fn lemma1_check(f: &[BigInt], p: u32) -> Result<Lemma1Report> {
    check_prime(p)?;
    let pu = p as usize;
    let mut reduced = vec![BigInt::zero(); pu];
    for (e, c) in f.iter().enumerate() {
        reduced[e % pu] += c;
    }
    // sum_{y^p=1} y^k is p when p | k and 0 otherwise
    let lhs = cyclic_pow(&reduced, p as u64).swap_remove(0);
    let rhs = cyclic_measure(&reduced, p)?;
    let p2 = big_pow(p, 2);
    Ok(Lemma1Report {
        holds: residue(&lhs, &p2) == residue(&rhs, &p2),
        lhs,
        rhs,
    })
}

/// `e_i(alpha_1^p, ..., alpha_n^p)` for `1 + sum e_i x^i = prod (1 + alpha_i x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Report {
    pub coeffs: Vec<BigInt>,
    pub holds: bool,
}

/// `e` holds `e_1..e_n`; requires `n < p` and `p | e_i`.
pub fn lemma2_check(e: &[BigInt], p: u32) -> Result<Lemma2Report> {
    check_prime(p)?;
    let n = e.len();
    if n >= p as usize {
        return Err(Error::PreconditionViolated(format!("degree {n} must be below p = {p}")));
    }
    let pb = BigInt::from(p);
    if let Some((i, _)) = e.iter().enumerate().find(|(_, c)| !(*c % &pb).is_zero()) {
        return Err(Error::PreconditionViolated(format!("p = {p} does not divide e_{}", i + 1)));
    }
    let sign = |i: usize| if i % 2 == 1 { BigInt::one() } else { -BigInt::one() };
    // power sums s_k(alpha), k = 0..n p
    let top = n * p as usize;
    let mut s = vec![BigInt::zero(); top + 1];
    s[0] = BigInt::from(n);
    for k in 1..=top {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(n) {
            let term = if i == k {
                BigInt::from(k) * &e[i - 1]
            } else {
                &e[i - 1] * &s[k - i]
            };
            acc += sign(i) * term;
        }
        s[k] = acc;
    }
    // k E_k = sum_{i=1}^k (-1)^{i-1} E_{k-i} S_i with S_i = s_{ip}
    let mut big_e: Vec<BigRational> = vec![BigRational::one()];
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let si = BigRational::from_integer(s[i * p as usize].clone());
            acc += BigRational::from_integer(sign(i)) * &big_e[k - i] * si;
        }
        big_e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    let mut coeffs = Vec::with_capacity(n);
    for (k, c) in big_e.into_iter().enumerate().skip(1) {
        if !c.is_integer() {
            return Err(Error::InexactDivision(format!("Newton identity for E_{k}")));
        }
        coeffs.push(c.to_integer());
    }
    let p3 = big_pow(p, 3);
    Ok(Lemma2Report {
        holds: coeffs.iter().all(|c| (c % &p3).is_zero()),
        coeffs,
    })
}

/// `T_3` membership of a measure coprime to `p`.
pub fn s1_classification_check(m: &BigInt, p: u32) -> Result<bool> {
    if (m % BigInt::from(p)).is_zero() {
        return Err(Error::PreconditionViolated(format!("{m} is divisible by {p}")));
    }
    Ok(t_n_member(m, p, 3))
}

/// Seeded batch of [`lemma1_check`] runs on random `f` of degree `< p`.
pub fn lemma1_suite(p: u32, trials: u64, seed: u64, height: i64) -> Result<Vec<u64>> {
    check_prime(p)?;
    let fails = (0..trials)
        .into_par_iter()
        .map(|t| {
            let f = random_coeffs(&mut trial_rng(seed, t), p as usize, height);
            Ok((t, lemma1_check(&f, p)?.holds))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fails.into_iter().filter(|(_, ok)| !ok).map(|(t, _)| t).collect())
}

/// Seeded batch of [`lemma2_check`] runs on random `e_i = p * r_i`, degree `< p`.
pub fn lemma2_suite(p: u32, trials: u64, seed: u64, height: i64) -> Result<Vec<u64>> {
    check_prime(p)?;
    let fails = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let n = rng.gen_range(1..p as usize);
            let e: Vec<BigInt> = random_coeffs(&mut rng, n, height)
                .into_iter()
                .map(|r| r * p)
                .collect();
            Ok((t, lemma2_check(&e, p)?.holds))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fails.into_iter().filter(|(_, ok)| !ok).map(|(t, _)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fast::abelian_measure;
    use crate::groups::{build_group, GroupKind, GroupRingElt};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn t_n_examples() {
        for p in [3u32, 5, 7] {
            assert!(t_n_member(&BigInt::one(), p, 4));
        }
        let members: Vec<i64> = (0..27).filter(|&x| t_n_member(&BigInt::from(x), 3, 3)).collect();
        assert_eq!(members, vec![1, 26]);
        assert!(t_n_member(&BigInt::from(8), 3, 2));
        assert!(t_n_member(&BigInt::from(-1), 3, 3));
        assert!(!t_n_member(&BigInt::from(3), 3, 1));
    }

    #[test]
    fn congruence_examples() {
        let one = heisenberg_from_words(&[("1", 1)], 3).unwrap();
        let r = verify_congruence_main(&one).unwrap();
        assert!(r.holds);
        assert_eq!((r.lhs_residue, r.rhs_residue), (BigInt::one(), BigInt::one()));
        let f = heisenberg_from_words(&[("1", 2), ("xy", 1), ("z", -1), ("yx", 1)], 3).unwrap();
        assert_eq!(f.value_at_one(), BigInt::from(3));
        let r = verify_congruence_main(&f).unwrap();
        assert!(r.holds);
        assert!(r.lhs_residue.is_zero());
    }

    #[test]
    fn congruence_random_suites() {
        let s3 = congruence_suite(3, 400, 11, 4).unwrap();
        assert!(s3.passed(), "{s3:?}");
        assert!(s3.coprime_values > 100);
        let s5 = congruence_suite(5, 120, 12, 4).unwrap();
        assert!(s5.passed(), "{s5:?}");
    }

    #[test]
    fn achieve_examples() {
        let (f, m) = achieve_construction(1, &BigInt::zero(), 3).unwrap();
        assert_eq!(m, BigInt::one());
        assert_eq!(f, heisenberg_from_words(&[("1", 1)], 3).unwrap());
        assert_eq!(achieve_construction(2, &BigInt::zero(), 3).unwrap().1, BigInt::from(512));
        assert_eq!(achieve_construction(2, &BigInt::one(), 3).unwrap().1, BigInt::from(539));
        assert!(achieve_construction(3, &BigInt::zero(), 3).is_err());
        assert!(achieve_construction(0, &BigInt::zero(), 3).is_err());
    }

    #[test]
    fn achieve_grid() {
        for p in [3u32, 5] {
            for a in [1u64, 2, 4, 7, 8, 11] {
                if a % p as u64 == 0 {
                    continue;
                }
                for m in [-3i64, 0, 2] {
                    let (f, got) = achieve_construction(a, &BigInt::from(m), p).unwrap();
                    let want = big_pow(a, (p as u64).pow(2)) + m * big_pow(p, 3);
                    assert_eq!(got, want, "a={a} m={m} p={p}");
                    assert!(verify_congruence_main(&f).unwrap().holds);
                }
            }
        }
    }

    #[test]
    fn zp2_sharp_examples() {
        for (p, k, v) in [(5u32, 0u32, 8u64), (5, 2, 10), (7, 0, 10), (5, 1, 9)] {
            let (_, r) = zp2_sharp_family(p, k, [1, 1, 1]).unwrap();
            assert!(r.exact, "{r:?}");
            assert_eq!(r.actual_valuation, Some(v));
        }
        let (_, r) = zp2_sharp_family(5, 0, [2, 3, -1]).unwrap();
        assert!(r.exact);
        assert!(zp2_sharp_family(3, 0, [1, 1, 1]).is_err());
        assert!(zp2_sharp_family(5, 0, [5, 1, 1]).is_err());
    }

    #[test]
    fn zp2_divisibility_examples() {
        for p in [3u32, 5] {
            let pu = p as usize;
            let c = vec![BigInt::one(); pu * pu];
            let r = zp2_divisibility_check(&c, p).unwrap();
            assert!(r.applicable && r.divisible);
        }
        let r = zp2_divisibility_check(&ints(&[2, 0, 0, 0, 0, 0, 0, 0, 0]), 3).unwrap();
        assert!(!r.applicable);
    }

    #[test]
    fn wieferich_bases() {
        assert_eq!(non_wieferich_base(5), Some(2));
        assert_eq!(non_wieferich_base(7), Some(2));
        assert_eq!(non_wieferich_base(1093), Some(3));
        assert_eq!(non_wieferich_base(3511), Some(3));
        assert!(heisenberg_sharp_family(3).is_err());
    }

    #[test]
    fn heisenberg_sharp_examples() {
        let (f, r) = heisenberg_sharp_family(5).unwrap();
        assert_eq!(r.actual_valuation, Some(28));
        assert!(r.exact);
        assert_eq!(heisenberg_divisibility_check(&f).unwrap(), r);
        let (_, r) = heisenberg_sharp_family(7).unwrap();
        assert_eq!(r.actual_valuation, Some(52));
        assert!(r.exact);
    }

    #[test]
    fn scalar_multiple_of_three() {
        let f = heisenberg_from_words(&[("1", 3), ("xyz", 6), ("y", -3)], 3).unwrap();
        let r = heisenberg_divisibility_check(&f).unwrap();
        assert!(r.actual_valuation.unwrap() >= 27);
        assert!(r.divisible);
    }

    #[test]
    fn h3_families_closed_forms() {
        let values = h3_family_values(&BigInt::zero()).unwrap();
        assert_eq!(values.len(), 10);
        assert_eq!(values[0].computed, BigInt::from(531441));
        assert_eq!(values[2].computed, BigInt::from(1062882));
        for m in -5..=5 {
            for v in h3_family_values(&BigInt::from(m)).unwrap() {
                assert!(v.matches(), "m={m} {}: {} vs {}", v.label, v.claimed, v.computed);
            }
        }
        assert_eq!(h3_family_values(&BigInt::one()).unwrap()[6].computed, BigInt::from(4782969));
    }

    #[test]
    fn lemma1_examples() {
        let r = lemma1_check(&ints(&[7]), 5).unwrap();
        assert_eq!(r.lhs, r.rhs);
        let r = lemma1_check(&ints(&[1, 1]), 3).unwrap();
        // (1+y)^3 = 2 + 3y + 3y^2 mod y^3 - 1; product (1+1)(1+w)(1+w^2) = 2
        assert_eq!((r.lhs, r.rhs, r.holds), (BigInt::from(2), BigInt::from(2), true));
        for p in [3u32, 5, 7] {
            assert!(lemma1_suite(p, 200, 5, 9).unwrap().is_empty());
        }
    }

    /// Brute-force oracle: for `n = 1`, `e_1 = alpha`.
    #[test]
    fn lemma2_examples() {
        let r = lemma2_check(&ints(&[5]), 5).unwrap();
        assert_eq!(r.coeffs, vec![BigInt::from(3125)]);
        assert!(r.holds);
        let r = lemma2_check(&ints(&[3, 3]), 5);
        assert!(matches!(r, Err(Error::PreconditionViolated(_))));
        assert!(lemma2_check(&ints(&[5, 5, 5, 5, 5]), 5).is_err());
        for p in [5u32, 7] {
            assert!(lemma2_suite(p, 100, 9, 6).unwrap().is_empty());
        }
    }

    /// `prod_j P(w^j t) = R(t^p)` with `R = prod (1 - alpha_i^p t)` up to sign.
    #[test]
    fn lemma2_against_cyclotomic_oracle() {
        use crate::cyclotomic::CycInt;
        let p = 5u32;
        let e = ints(&[10, -15, 5]);
        let n = e.len();
        // P(t) = 1 + sum e_i t^i; multiply P(w^j t) over j in Z[w][t]
        let mut acc = vec![CycInt::one(p)];
        for j in 0..p as i64 {
            let factor: Vec<CycInt> = std::iter::once(CycInt::one(p))
                .chain(e.iter().enumerate().map(|(i, c)| {
                    CycInt::root_power(p, j * (i as i64 + 1)).scale(c)
                }))
                .collect();
            let mut next = vec![CycInt::zero(p); acc.len() + n];
            for (a, x) in acc.iter().enumerate() {
                for (b, y) in factor.iter().enumerate() {
                    next[a + b] = &next[a + b] + &(x * y);
                }
            }
            acc = next;
        }
        // prod_j (1 + alpha w^j t) = 1 + alpha^p t^p, so R(t^p) = prod (1 + alpha_i^p t^p)
        let got: Vec<BigInt> = (1..=n).map(|k| acc[k * p as usize].to_integer().unwrap()).collect();
        assert_eq!(lemma2_check(&e, p).unwrap().coeffs, got);
    }

    #[test]
    fn s1_examples() {
        assert!(s1_classification_check(&BigInt::from(512), 3).unwrap());
        assert!(s1_classification_check(&BigInt::from(539), 3).unwrap());
        assert!(!s1_classification_check(&BigInt::from(2), 3).unwrap());
        assert!(s1_classification_check(&BigInt::from(9), 3).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn zp2_divisibility_random(p in prop::sample::select(vec![3u32, 5]),
                                   v in prop::collection::vec(-4i64..=4, 25)) {
            let pu = p as usize;
            let mut c = ints(&v[..pu * pu]);
            // force p | F(1, 1)
            let s: BigInt = c.iter().sum();
            c[0] -= s.mod_floor(&BigInt::from(p));
            let r = zp2_divisibility_check(&c, p).unwrap();
            prop_assert!(r.divisible, "{:?}", r);
            let g = Arc::new(build_group(&GroupKind::Elementary { p, n: 2 }).unwrap());
            let f = GroupRingElt::new(g, c).unwrap();
            prop_assert_eq!(abelian_measure(&f).unwrap(), r.measure);
        }

        #[test]
        fn heisenberg_divisibility_random(v in prop::collection::vec(-4i64..=4, 27)) {
            let mut f = HeisenbergPoly::from_flat(3, ints(&v)).unwrap();
            let s = f.value_at_one().mod_floor(&BigInt::from(3));
            f.add_term(0, 0, 0, &-s);
            let r = heisenberg_divisibility_check(&f).unwrap();
            prop_assert!(r.divisible, "{:?}", r);
        }

        #[test]
        fn achieve_random(a in 1u64..40, m in -50i64..50) {
            prop_assume!(a % 3 != 0);
            let (_, got) = achieve_construction(a, &BigInt::from(m), 3).unwrap();
            prop_assert_eq!(got.clone(), big_pow(a, 9) + m * 27);
            prop_assert!(t_n_member(&got, 3, 3));
        }
    }
}
