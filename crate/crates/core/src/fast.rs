//! Factorized group determinants.
//!
//! * Elementary abelian groups: product of character values in `Z[w]`.
//! * `H_p`: `M = M1 * M2^p`, with `M1` the `Z_p^2` measure of `F(x, y, 1)` and
//!   `M2 = prod_j det phi_{w^j}(F)` over the `p - 1` representations of degree `p`.
//! * `D_{2n}` and `Q_{4n}`: circulant and negacyclic determinants of
//!   `f f~ -/+ g g~`, where `f~(x) = f(x^{-1})`.
//!
//! Integrality of products that must be rational integers is always checked
//! at runtime rather than assumed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::cyclotomic::{check_prime, CycInt};
use crate::error::{Error, Result};
use crate::groups::{group_determinant, GroupKind, GroupRingElt, HeisenbergPoly, YzPoly};
use crate::linalg::{det_bareiss, SquareMatrix};

/// `M_{H_p}(F) = M1 * M2^p` together with the values it was assembled from.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergFactorization {
    pub p: u32,
    pub m1: BigInt,
    pub m2: BigInt,
    pub m: BigInt,
    /// `D(w^j)` for `j = 1..p-1`.
    pub d_values: Vec<CycInt>,
    /// Constant coefficient of `prod_{x^p=1} F(x, y, 1) mod y^p - 1`, when requested.
    pub c0: Option<BigInt>,
}

fn certify(c: &CycInt, what: &str) -> Result<BigInt> {
    c.to_integer()
        .ok_or_else(|| Error::NotInteger(format!("{what} = {c}")))
}

fn product(values: impl IntoIterator<Item = CycInt>, p: u32) -> CycInt {
    values
        .into_iter()
        .fold(CycInt::one(p), |acc, v| &acc * &v)
}

/// `prod_chi chi(F)` over the characters of `Z_p^n`, for coefficients given
/// with their coordinate vectors.
fn elementary_character_product<'a>(
    p: u32,
    n: usize,
    terms: impl Iterator<Item = (&'a [usize], &'a BigInt)> + Clone,
) -> Result<BigInt> {
    let pu = p as usize;
    let total = pu.pow(n as u32);
    let mut acc = CycInt::one(p);
    let mut chi = vec![0usize; n];
    let mut buf = vec![BigInt::zero(); pu];
    for idx in 0..total {
        let mut t = idx;
        for slot in chi.iter_mut().rev() {
            *slot = t % pu;
            t /= pu;
        }
        buf.iter_mut().for_each(|b| b.set_zero());
        for (coords, c) in terms.clone() {
            if c.is_zero() {
                continue;
            }
            let e = coords.iter().zip(&chi).map(|(m, j)| m * j).sum::<usize>() % pu;
            buf[e] += c;
        }
        let value = CycInt::from_cyclic(p, buf.clone());
        if value.is_zero() {
            return Ok(BigInt::zero());
        }
        acc = &acc * &value;
    }
    certify(&acc, "character product")
}

/// Group determinant of an element of an elementary abelian `p`-group,
/// as the product of its character values.
pub fn abelian_measure(f: &GroupRingElt) -> Result<BigInt> {
    let group = f.group();
    let (p, n) = match group.kind() {
        GroupKind::Elementary { p, n } => (*p, *n as usize),
        GroupKind::Cyclic { n } if crate::cyclotomic::is_prime(*n as u64) => (*n as u32, 1),
        GroupKind::Product { factors }
            if factors.iter().all(|&q| q == factors[0])
                && crate::cyclotomic::is_prime(factors[0] as u64) =>
        {
            (factors[0] as u32, factors.len())
        }
        other => {
            return Err(Error::invalid(format!(
                "character products need an elementary abelian p-group, got {other:?}"
            )))
        }
    };
    let coords: Vec<Vec<usize>> = (0..group.order()).map(|g| group.coords(g)).collect();
    elementary_character_product(
        p,
        n,
        coords.iter().map(Vec::as_slice).zip(f.coeffs().iter()),
    )
}

/// `Z_p^2` measure of `sum c[a p + b] x^a y^b`.
pub fn zp2_measure(p: u32, c: &[BigInt]) -> Result<BigInt> {
    let pu = p as usize;
    if c.len() != pu * pu {
        return Err(Error::invalid("Z_p^2 polynomial needs p^2 coefficients"));
    }
    let coords: Vec<[usize; 2]> = (0..pu * pu).map(|i| [i / pu, i % pu]).collect();
    elementary_character_product(p, 2, coords.iter().map(|c| c.as_slice()).zip(c.iter()))
}

/// `f_i(w^{yk}, w^{zk})`-style evaluation of a slice: `sum a_{jk} w^{ye j + ze k}`.
fn eval_yz(f: &YzPoly, y_exp: usize, z_exp: usize) -> CycInt {
    let p = f.p as usize;
    let mut buf = vec![BigInt::zero(); p];
    for j in 0..p {
        for k in 0..p {
            let c = &f.c[j * p + k];
            if !c.is_zero() {
                buf[(j * y_exp + k * z_exp) % p] += c;
            }
        }
    }
    CycInt::from_cyclic(f.p, buf)
}

/// `phi_lambda(F)` for `lambda = w^j`: entry `(r, c)` (0-indexed) is
/// `f_{(r - c) mod p}(lambda^c, lambda)`.
///
/// `x` acts as the cyclic shift `e_c -> e_{c+1}`, `y` as `diag(lambda^c)` and
/// `z` as `lambda`, so `x^i f_i(y, z)` sends `e_c` to `f_i(lambda^c, lambda) e_{c+i}`.
pub fn heisenberg_phi_matrix(f: &HeisenbergPoly, j: u32) -> Result<SquareMatrix<CycInt>> {
    let p = f.prime();
    if j == 0 || j >= p {
        return Err(Error::invalid(format!("representation index must be in 1..{p}, got {j}")));
    }
    let pu = p as usize;
    let ju = j as usize;
    let slices: Vec<YzPoly> = (0..pu).map(|i| f.x_slice(i)).collect();
    SquareMatrix::from_fn(pu, |r, c| {
        let i = (r + pu - c) % pu;
        eval_yz(&slices[i], (ju * c) % pu, ju)
    })
}

/// `M1 = M_{Z_p^2}(F(x, y, 1))`.
pub fn heisenberg_m1(f: &HeisenbergPoly) -> Result<BigInt> {
    let p = f.prime() as usize;
    let collapsed: Vec<BigInt> = f
        .flat()
        .chunks(p)
        .map(|zs| zs.iter().sum())
        .collect();
    zp2_measure(f.prime(), &collapsed)
}

fn assemble(p: u32, m1: BigInt, d_values: Vec<CycInt>) -> Result<HeisenbergFactorization> {
    let m2 = certify(&product(d_values.iter().cloned(), p), "M2")?;
    let m = &m1 * num_traits::pow(m2.clone(), p as usize);
    Ok(HeisenbergFactorization {
        p,
        m1,
        m2,
        m,
        d_values,
        c0: None,
    })
}

/// Group determinant of `F` over `H_p` through its irreducible representations.
pub fn heisenberg_measure(f: &HeisenbergPoly) -> Result<HeisenbergFactorization> {
    let p = f.prime();
    let m1 = heisenberg_m1(f)?;
    let det = |j: u32| heisenberg_phi_matrix(f, j).and_then(|m| det_bareiss(&m));
    let d_values = if p >= 7 {
        (1..p).into_par_iter().map(det).collect::<Result<Vec<_>>>()?
    } else {
        (1..p).map(det).collect::<Result<Vec<_>>>()?
    };
    assemble(p, m1, d_values)
}

/// [`heisenberg_measure`] plus the coefficient `c0`.
pub fn heisenberg_measure_with_c0(f: &HeisenbergPoly) -> Result<HeisenbergFactorization> {
    let mut out = heisenberg_measure(f)?;
    out.c0 = Some(x_product_coeffs(f)?.swap_remove(0));
    Ok(out)
}

/// Coefficients `c_0..c_{p-1}` of `P(y) = prod_{x^p=1} F(x, y, 1) mod y^p - 1`.
///
/// `Z[y]/(y^p - 1)` embeds in `Z x Z[w]` by `y -> 1` and `y -> w`; both images
/// are computed as products of character values and `P` is recovered from
/// them. The recovery divides by `p`, and that division is checked.
pub fn x_product_coeffs(f: &HeisenbergPoly) -> Result<Vec<BigInt>> {
    let p = f.prime();
    let pu = p as usize;
    // F(x, y, 1) with coefficient g[a][b] of x^a y^b.
    let g: Vec<BigInt> = f.flat().chunks(pu).map(|zs| zs.iter().sum()).collect();
    let eval = |x_exp: usize, y_exp: usize| {
        let mut buf = vec![BigInt::zero(); pu];
        for a in 0..pu {
            for b in 0..pu {
                buf[(a * x_exp + b * y_exp) % pu] += &g[a * pu + b];
            }
        }
        CycInt::from_cyclic(p, buf)
    };
    let at_one = certify(&product((0..pu).map(|k| eval(k, 0)), p), "P(1)")?;
    let at_w = product((0..pu).map(|k| eval(k, 1)), p);
    let b = at_w.coeffs();
    let s: BigInt = b.iter().sum();
    let (top, r) = (&at_one - s).div_rem(&BigInt::from(p));
    if !r.is_zero() {
        return Err(Error::InexactDivision(
            "recovering prod_x F(x, y, 1) from its values".into(),
        ));
    }
    let mut c: Vec<BigInt> = b.iter().map(|bm| bm + &top).collect();
    c.push(top);
    Ok(c)
}

/// `M_{H_p}` of `F = f0(y, z) + x^k fk(y, z)` via the two-product formula for
/// `D(lambda)` and the factorized `M1`.
pub fn heisenberg_binomial_measure(
    f0: &YzPoly,
    fk: &YzPoly,
    k: u32,
) -> Result<HeisenbergFactorization> {
    let p = f0.p;
    if fk.p != p {
        return Err(Error::PrimeMismatch { left: p, right: fk.p });
    }
    if k == 0 || k >= p {
        return Err(Error::invalid(format!("binomial exponent must be in 1..{p}, got {k}")));
    }
    let pu = p as usize;
    let mut m1 = CycInt::one(p);
    for j in 0..pu {
        let a = eval_yz(f0, j, 0).pow(p as u64);
        let b = eval_yz(fk, j, 0).pow(p as u64);
        m1 = &m1 * &(&a + &b);
    }
    let m1 = certify(&m1, "M1")?;
    let d_values = (1..pu)
        .map(|l| {
            let a = product((0..pu).map(|j| eval_yz(f0, j, l)), p);
            let b = product((0..pu).map(|j| eval_yz(fk, j, l)), p);
            &a + &b
        })
        .collect();
    assemble(p, m1, d_values)
}

/// `F = f0 + x^k fk` as a Heisenberg polynomial.
pub fn binomial_poly(f0: &YzPoly, fk: &YzPoly, k: u32) -> Result<HeisenbergPoly> {
    let p = f0.p;
    let mut f = HeisenbergPoly::zero(p)?;
    let pu = p as usize;
    for j in 0..pu {
        for c in 0..pu {
            f.add_term(0, j as i64, c as i64, f0.get(j, c));
            f.add_term(k as i64, j as i64, c as i64, fk.get(j, c));
        }
    }
    Ok(f)
}

/// Reduces `sum f_i x^i` modulo `x^n - sign` (`sign` is +1 or -1).
fn reduce_mod(f: &[BigInt], n: usize, sign: i32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (e, c) in f.iter().enumerate() {
        let (q, r) = (e / n, e % n);
        if sign < 0 && q % 2 == 1 {
            out[r] -= c;
        } else {
            out[r] += c;
        }
    }
    out
}

/// `f(x) f(x^{-1}) + s g(x) g(x^{-1})` in `Z[x]/(x^n - sign)`, inputs already reduced.
fn hermitian_combination(f: &[BigInt], g: &[BigInt], s: i32, n: usize, sign: i32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    let mut add = |a: &[BigInt], scale: i32| {
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, aj) in a.iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                // x^i * x^{-j}
                let e = i as i64 - j as i64;
                let idx = e.rem_euclid(n as i64) as usize;
                let wraps = e.div_euclid(n as i64);
                let negate = (sign < 0 && wraps.rem_euclid(2) == 1) != (scale < 0);
                let term = ai * aj;
                if negate {
                    out[idx] -= term;
                } else {
                    out[idx] += term;
                }
            }
        }
    };
    add(f, 1);
    add(g, s);
    out
}

/// Determinant of multiplication by `h` on `Z[x]/(x^n - sign)`, i.e.
/// `prod_{x^n = sign} h(x)`.
fn multiplication_det(h: &[BigInt], sign: i32) -> Result<BigInt> {
    let n = h.len();
    let m = SquareMatrix::from_fn(n, |r, c| {
        if r >= c {
            h[r - c].clone()
        } else if sign < 0 {
            -&h[n + r - c]
        } else {
            h[n + r - c].clone()
        }
    })?;
    det_bareiss(&m)
}

/// `M_{D_{2n}}(f + y g) = prod_{x^n=1} (f(x) f(x^{-1}) - g(x) g(x^{-1}))`.
pub fn dihedral_measure(f: &[BigInt], g: &[BigInt], n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("dihedral parameter n must be positive"));
    }
    let (f, g) = (reduce_mod(f, n, 1), reduce_mod(g, n, 1));
    multiplication_det(&hermitian_combination(&f, &g, -1, n, 1), 1)
}

/// `M_{Q_{4n}}(f + y g) = prod_{x^n=1} (f f~ - g g~) * prod_{x^n=-1} (f f~ + g g~)`.
pub fn dicyclic_measure(f: &[BigInt], g: &[BigInt], n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::invalid("dicyclic parameter n must be positive"));
    }
    let (f1, g1) = (reduce_mod(f, n, 1), reduce_mod(g, n, 1));
    let first = multiplication_det(&hermitian_combination(&f1, &g1, -1, n, 1), 1)?;
    let (f2, g2) = (reduce_mod(f, n, -1), reduce_mod(g, n, -1));
    let second = multiplication_det(&hermitian_combination(&f2, &g2, 1, n, -1), -1)?;
    Ok(first * second)
}

/// Splits `F = f(X) + Y g(X)` over `D_{2n}` or `Q_{4n}` into `(f, g)`.
pub fn split_dihedral_like(f: &GroupRingElt) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let group = f.group();
    let n = match group.kind() {
        GroupKind::Dihedral { order } | GroupKind::Dicyclic { order } => order / 2,
        other => return Err(Error::invalid(format!("{other:?} is not dihedral or dicyclic"))),
    };
    let mut fx = vec![BigInt::zero(); n];
    let mut gx = vec![BigInt::zero(); n];
    for (g, c) in f.coeffs().iter().enumerate() {
        let co = group.coords(g);
        if co[1] == 0 {
            fx[co[0]] += c;
        } else {
            // X^i Y = Y X^{-i}
            gx[(n - co[0]) % n] += c;
        }
    }
    Ok((fx, gx))
}

/// Which route produced a determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Characters,
    Heisenberg,
    Dihedral,
    Dicyclic,
    Cayley,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Characters => "characters",
            Method::Heisenberg => "heisenberg-factorization",
            Method::Dihedral => "dihedral-circulant",
            Method::Dicyclic => "dicyclic-circulant",
            Method::Cayley => "cayley-bareiss",
        }
    }
}

/// Group determinant by the fastest available route, falling back to the
/// full Cayley matrix.
pub fn fast_group_determinant(f: &GroupRingElt) -> Result<(BigInt, Method)> {
    match f.group().kind() {
        GroupKind::Heisenberg { .. } => {
            let h = HeisenbergPoly::from_group_ring(f)?;
            Ok((heisenberg_measure(&h)?.m, Method::Heisenberg))
        }
        GroupKind::Dihedral { order } => {
            let (fx, gx) = split_dihedral_like(f)?;
            Ok((dihedral_measure(&fx, &gx, order / 2)?, Method::Dihedral))
        }
        GroupKind::Dicyclic { order } => {
            let (fx, gx) = split_dihedral_like(f)?;
            Ok((dicyclic_measure(&fx, &gx, order / 4)?, Method::Dicyclic))
        }
        kind => {
            let elementary = match kind {
                GroupKind::Elementary { .. } => true,
                GroupKind::Cyclic { n } => crate::cyclotomic::is_prime(*n as u64),
                GroupKind::Product { factors } => {
                    factors.iter().all(|&q| q == factors[0])
                        && crate::cyclotomic::is_prime(factors[0] as u64)
                }
                _ => false,
            };
            if elementary {
                Ok((abelian_measure(f)?, Method::Characters))
            } else {
                Ok((group_determinant(f)?, Method::Cayley))
            }
        }
    }
}

/// `Z_p` measure of a univariate polynomial, `prod_{x^p=1} f(x)`.
pub fn cyclic_measure(f: &[BigInt], p: u32) -> Result<BigInt> {
    check_prime(p)?;
    let pu = p as usize;
    let reduced = reduce_mod(f, pu, 1);
    let coords: Vec<[usize; 1]> = (0..pu).map(|i| [i]).collect();
    elementary_character_product(p, 1, coords.iter().map(|c| c.as_slice()).zip(reduced.iter()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::groups::{build_group, heisenberg_from_words};
    use std::sync::Arc;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn abelian_examples() {
        for p in [3u32, 5, 7] {
            let g = Arc::new(build_group(&GroupKind::Cyclic { n: p as usize }).unwrap());
            let mut c = vec![BigInt::one(); p as usize];
            c[0] += 1;
            let f = GroupRingElt::new(g.clone(), c).unwrap();
            assert_eq!(abelian_measure(&f).unwrap(), BigInt::from(p + 1));
            assert_eq!(abelian_measure(&f).unwrap(), group_determinant(&f).unwrap());
        }
        let g = Arc::new(build_group(&GroupKind::Elementary { p: 3, n: 2 }).unwrap());
        assert_eq!(abelian_measure(&GroupRingElt::scalar(g, 1)).unwrap(), BigInt::one());
        let z9 = Arc::new(build_group(&GroupKind::Cyclic { n: 9 }).unwrap());
        assert!(abelian_measure(&GroupRingElt::scalar(z9, 1)).is_err());
    }

    #[test]
    fn phi_of_generators() {
        let p = 3;
        let z = heisenberg_from_words(&[("z", 1)], p).unwrap();
        let m = heisenberg_phi_matrix(&z, 1).unwrap();
        let w = CycInt::root_power(p, 1);
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { w.clone() } else { CycInt::zero(p) };
                assert_eq!(m.get(r, c), &expect);
            }
        }
        let x = heisenberg_from_words(&[("x", 1)], p).unwrap();
        let m = heisenberg_phi_matrix(&x, 1).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let one = (r + 3 - c) % 3 == 1;
                assert_eq!(m.get(r, c).to_integer(), Some(BigInt::from(one as i64)));
            }
        }
        let y = heisenberg_from_words(&[("y", 1)], p).unwrap();
        let m = heisenberg_phi_matrix(&y, 1).unwrap();
        for r in 0..3 {
            assert_eq!(m.get(r, r), &CycInt::root_power(p, r as i64));
        }
        assert!(heisenberg_phi_matrix(&y, 0).is_err());
        assert!(heisenberg_phi_matrix(&y, 3).is_err());
    }

    /// The matrices satisfy the defining relations for every lambda.
    #[test]
    fn phi_is_a_representation() {
        let p = 5;
        let gens: Vec<SquareMatrix<CycInt>> = ["x", "y", "z"]
            .iter()
            .map(|w| heisenberg_phi_matrix(&heisenberg_from_words(&[(w, 1)], p).unwrap(), 2).unwrap())
            .collect();
        let mul = |a: &SquareMatrix<CycInt>, b: &SquareMatrix<CycInt>| {
            SquareMatrix::from_fn(5, |r, c| {
                (0..5).fold(CycInt::zero(p), |acc, k| &acc + &(a.get(r, k) * b.get(k, c)))
            })
            .unwrap()
        };
        let (x, y, z) = (&gens[0], &gens[1], &gens[2]);
        assert_eq!(mul(y, x), mul(&mul(x, y), z));
        assert_eq!(mul(x, z), mul(z, x));
    }

    #[test]
    fn measure_matches_oracle_on_fixed_inputs() {
        let mut f = heisenberg_from_words(&[("1", 1), ("x", 1), ("xy", -1), ("xyy", -1)], 3).unwrap();
        // + Phi(x) Phi(y) Phi(z)
        for g in 0..27i64 {
            f.add_term(g / 9, g / 3, g, &BigInt::one());
        }
        let fact = heisenberg_measure(&f).unwrap();
        assert_eq!(fact.m, BigInt::from(4782969));
        assert_eq!(fact.m, &fact.m1 * num_traits::pow(fact.m2.clone(), 3));
        let g = heisenberg_from_words(&[("z", 2), ("yx", 1), ("xxyz", -3), ("y", 1)], 3).unwrap();
        assert_eq!(
            heisenberg_measure(&g).unwrap().m,
            group_determinant(&g.to_group_ring().unwrap()).unwrap()
        );
    }

    #[test]
    fn subgroup_shapes() {
        // F = f0(y, z): M = M_{Z_p^2}(f0)^p
        let p = 3;
        let f0 = heisenberg_from_words(&[("1", 2), ("y", 1), ("yz", -1), ("zz", 1)], p).unwrap();
        let mut c = vec![BigInt::zero(); 9];
        for ([_, j, k], v) in f0.terms() {
            c[j * 3 + k] += v;
        }
        let base = zp2_measure(p, &c).unwrap();
        assert_eq!(heisenberg_measure(&f0).unwrap().m, num_traits::pow(base, 3));
        // F = G(x, z)
        let g = heisenberg_from_words(&[("1", 1), ("x", 2), ("xz", -1), ("xxzz", 1)], p).unwrap();
        let mut c = vec![BigInt::zero(); 9];
        for ([i, _, k], v) in g.terms() {
            c[i * 3 + k] += v;
        }
        let base = zp2_measure(p, &c).unwrap();
        assert_eq!(heisenberg_measure(&g).unwrap().m, num_traits::pow(base, 3));
    }

    #[test]
    fn binomial_examples() {
        let p = 3;
        let two = YzPoly::from_terms(p, &[(0, 0, 2)]);
        let zero = YzPoly::zero(p);
        let fact = heisenberg_binomial_measure(&two, &zero, 1).unwrap();
        assert_eq!(fact.m, BigInt::from(2).pow(27));
        // z + x y
        let f0 = YzPoly::from_terms(p, &[(0, 1, 1)]);
        let f1 = YzPoly::from_terms(p, &[(1, 0, 1)]);
        let via_binomial = heisenberg_binomial_measure(&f0, &f1, 1).unwrap();
        let f = heisenberg_from_words(&[("z", 1), ("xy", 1)], p).unwrap();
        assert_eq!(binomial_poly(&f0, &f1, 1).unwrap(), f);
        assert_eq!(via_binomial.m, heisenberg_measure(&f).unwrap().m);
        assert!(heisenberg_binomial_measure(&f0, &f1, 0).is_err());
    }

    #[test]
    fn dihedral_laurent_combination() {
        // f = x^2 - 1, g = x^5 + x^4 - 1 over a large n so nothing wraps.
        let n = 64;
        let f = reduce_mod(&ints(&[-1, 0, 1]), n, 1);
        let g = reduce_mod(&ints(&[-1, 0, 0, 0, 1, 1]), n, 1);
        let h = hermitian_combination(&f, &g, -1, n, 1);
        let mut expect = vec![BigInt::zero(); n];
        for (e, c) in [(5i64, 1), (4, 1), (2, -1), (1, -1), (0, -1), (-1, -1), (-2, -1), (-4, 1), (-5, 1)] {
            expect[e.rem_euclid(n as i64) as usize] = BigInt::from(c);
        }
        assert_eq!(h, expect);
    }

    #[test]
    fn trivial_dihedral_and_dicyclic() {
        assert_eq!(dihedral_measure(&ints(&[1]), &[], 4).unwrap(), BigInt::one());
        assert_eq!(dicyclic_measure(&ints(&[1]), &[], 3).unwrap(), BigInt::one());
    }

    #[test]
    fn negacyclic_determinant_is_product_over_roots() {
        // x^2 = -1: h = a + b x has prod over x = +-i of (a + b x) = a^2 + b^2.
        let h = ints(&[3, 5]);
        assert_eq!(multiplication_det(&h, -1).unwrap(), BigInt::from(34));
        assert_eq!(multiplication_det(&h, 1).unwrap(), BigInt::from(9 - 25));
    }

    #[test]
    fn x_product_constant_term() {
        // F = 1 + y: P(y) = (1 + y)^p
        let p = 3;
        let f = heisenberg_from_words(&[("1", 1), ("y", 1)], p).unwrap();
        // (1+y)^3 = 1 + 3y + 3y^2 + y^3 = 2 + 3y + 3y^2 mod y^3 - 1
        assert_eq!(x_product_coeffs(&f).unwrap(), ints(&[2, 3, 3]));
    }

    fn heis(p: u32, v: &[i64]) -> HeisenbergPoly {
        HeisenbergPoly::from_flat(p, ints(v)).unwrap()
    }

    fn group(kind: GroupKind) -> Arc<crate::groups::GroupSpec> {
        Arc::new(build_group(&kind).unwrap())
    }

    /// `prod_k F(w^k, y, 1)` multiplied out in `Z[w][y]/(y^p - 1)`.
    fn x_product_oracle(f: &HeisenbergPoly) -> Vec<BigInt> {
        let p = f.prime();
        let pu = p as usize;
        let mut acc: Vec<CycInt> = (0..pu)
            .map(|b| if b == 0 { CycInt::one(p) } else { CycInt::zero(p) })
            .collect();
        for k in 0..pu {
            // factor: sum_b (sum_{a,c} a_{abc} w^{ka}) y^b
            let factor: Vec<CycInt> = (0..pu)
                .map(|b| {
                    let mut buf = vec![BigInt::zero(); pu];
                    for a in 0..pu {
                        for c in 0..pu {
                            buf[(a * k) % pu] += f.get(a as i64, b as i64, c as i64);
                        }
                    }
                    CycInt::from_cyclic(p, buf)
                })
                .collect();
            let mut next = vec![CycInt::zero(p); pu];
            for (i, ai) in acc.iter().enumerate() {
                for (j, fj) in factor.iter().enumerate() {
                    next[(i + j) % pu] = &next[(i + j) % pu] + &(ai * fj);
                }
            }
            acc = next;
        }
        acc.iter().map(|c| c.to_integer().expect("integer coefficient")).collect()
    }

    #[test]
    fn x_product_matches_direct_expansion() {
        let f = heisenberg_from_words(&[("1", 2), ("xy", -1), ("xxyyz", 3), ("y", 1)], 5).unwrap();
        assert_eq!(x_product_coeffs(&f).unwrap(), x_product_oracle(&f));
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn heisenberg_p3_matches_cayley(v in prop::collection::vec(-5i64..=5, 27)) {
            let f = heis(3, &v);
            let fact = heisenberg_measure(&f).unwrap();
            let oracle = group_determinant(&f.to_group_ring().unwrap()).unwrap();
            prop_assert_eq!(&fact.m, &oracle);
            prop_assert_eq!(fact.m, &fact.m1 * num_traits::pow(fact.m2.clone(), 3));
        }

        #[test]
        fn x_product_p3(v in prop::collection::vec(-5i64..=5, 27)) {
            let f = heis(3, &v);
            let c = x_product_coeffs(&f).unwrap();
            prop_assert_eq!(&c, &x_product_oracle(&f));
            let p = BigInt::from(3);
            // c0 = F(1,1,1)^p mod p, and p | c_m for m > 0
            let s = f.value_at_one();
            prop_assert!(((&c[0] - s.pow(3u32)) % &p).is_zero());
            for cm in &c[1..] {
                prop_assert!((cm % &p).is_zero());
            }
            // M2 = c0^{p-1} mod p^2
            let fact = heisenberg_measure_with_c0(&f).unwrap();
            let p2 = BigInt::from(9);
            prop_assert!(((&fact.m2 - c[0].pow(2u32)) % &p2).is_zero());
            prop_assert_eq!(fact.c0.as_ref(), Some(&c[0]));
        }

        #[test]
        fn binomial_matches_general(
            a in prop::collection::vec(-4i64..=4, 9),
            b in prop::collection::vec(-4i64..=4, 9),
            k in 1u32..3,
        ) {
            let mut f0 = YzPoly::zero(3);
            let mut fk = YzPoly::zero(3);
            for i in 0..9 {
                f0.add_term(i / 3, i % 3, &BigInt::from(a[i as usize]));
                fk.add_term(i / 3, i % 3, &BigInt::from(b[i as usize]));
            }
            let via = heisenberg_binomial_measure(&f0, &fk, k).unwrap();
            let general = heisenberg_measure(&binomial_poly(&f0, &fk, k).unwrap()).unwrap();
            prop_assert_eq!(via.m1, general.m1);
            prop_assert_eq!(via.m2, general.m2);
            prop_assert_eq!(via.m, general.m);
        }

        #[test]
        fn abelian_matches_cayley(p in prop::sample::select(vec![3u32, 5]), n in 1u32..=2,
                                  v in prop::collection::vec(-5i64..=5, 25)) {
            let g = group(GroupKind::Elementary { p, n });
            let f = GroupRingElt::new(g.clone(), ints(&v[..g.order()])).unwrap();
            prop_assert_eq!(abelian_measure(&f).unwrap(), group_determinant(&f).unwrap());
        }

        #[test]
        fn dihedral_and_dicyclic_match_cayley(
            kind in prop::sample::select(vec![
                GroupKind::Dihedral { order: 8 },
                GroupKind::Dihedral { order: 10 },
                GroupKind::Dicyclic { order: 8 },
                GroupKind::Dicyclic { order: 12 },
            ]),
            v in prop::collection::vec(-4i64..=4, 12),
        ) {
            let g = group(kind);
            let f = GroupRingElt::new(g.clone(), ints(&v[..g.order()])).unwrap();
            let (fast, _) = fast_group_determinant(&f).unwrap();
            prop_assert_eq!(fast, group_determinant(&f).unwrap());
        }

        #[test]
        fn dihedral_symmetric_in_g_reversal(f in prop::collection::vec(-4i64..=4, 6),
                                            g in prop::collection::vec(-4i64..=4, 6)) {
            let n = 6;
            let rev: Vec<i64> = (0..n).map(|i| g[(n - i) % n]).collect();
            prop_assert_eq!(
                dihedral_measure(&ints(&f), &ints(&g), n).unwrap(),
                dihedral_measure(&ints(&f), &ints(&rev), n).unwrap()
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn heisenberg_p5_matches_cayley(v in prop::collection::vec(-5i64..=5, 125)) {
            let f = heis(5, &v);
            let g = group(GroupKind::Heisenberg { p: 5 });
            let oracle = group_determinant(&f.to_group_ring_in(g).unwrap()).unwrap();
            prop_assert_eq!(heisenberg_measure(&f).unwrap().m, oracle);
        }

        #[test]
        fn x_product_p5(v in prop::collection::vec(-5i64..=5, 125)) {
            let f = heis(5, &v);
            prop_assert_eq!(x_product_coeffs(&f).unwrap(), x_product_oracle(&f));
        }
    }

    #[test]
    fn one_plus_phi_over_h5_and_z5() {
        let z5 = group(GroupKind::Cyclic { n: 5 });
        let mut c = vec![BigInt::one(); 5];
        c[0] += 1;
        let f = GroupRingElt::new(z5, c).unwrap();
        assert_eq!(fast_group_determinant(&f).unwrap(), (BigInt::from(6), Method::Characters));
        let q8 = group(GroupKind::Dicyclic { order: 8 });
        assert_eq!(fast_group_determinant(&GroupRingElt::scalar(q8, 2)).unwrap().0, BigInt::from(256));
        let z2z4 = group(GroupKind::Product { factors: vec![2, 4] });
        let (d, m) = fast_group_determinant(&GroupRingElt::scalar(z2z4, 3)).unwrap();
        assert_eq!((d, m), (BigInt::from(3).pow(8u32), Method::Cayley));
    }

    #[test]
    fn divisibility_over_z3_squared() {
        let g = group(GroupKind::Elementary { p: 3, n: 2 });
        let f = GroupRingElt::new(g, ints(&[1, 1, 0, -1, 2, 0, 0, 1, -1])).unwrap();
        assert_eq!(f.augmentation(), BigInt::from(3));
        let d = abelian_measure(&f).unwrap();
        assert!((d % BigInt::from(729)).is_zero());
    }
}
