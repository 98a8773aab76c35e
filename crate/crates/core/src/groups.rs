//! Finite groups as Cayley tables, their group rings, and the generic group
//! determinant `det(a_{g_i g_j^{-1}})`.
//!
//! Elements are stored by index; index 0 is the identity. Every kind carries a
//! coordinate system (exponents of its generators in normal form) and elements
//! are ordered lexicographically by coordinates.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::is_prime;
use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, SquareMatrix};

/// Largest group the table builder accepts.
pub const MAX_TABLE_ORDER: usize = 4096;
/// Associativity is checked on construction up to this order.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupKind {
    /// `Z_n`.
    Cyclic { n: usize },
    /// `Z_p^n`.
    Elementary { p: u32, n: u32 },
    /// `H_p`, unipotent upper-triangular 3x3 matrices over `Z_p`.
    Heisenberg { p: u32 },
    /// `D_{2n} = <X, Y : X^n = Y^2 = 1, XY = YX^{-1}>`, `order = 2n`.
    Dihedral { order: usize },
    /// `Q_{4n} = <X, Y : X^{2n} = 1, Y^2 = X^n, XY = YX^{-1}>`, `order = 4n`.
    Dicyclic { order: usize },
    /// `Z_{n_1} x ... x Z_{n_r}`.
    Product { factors: Vec<usize> },
}

impl GroupKind {
    /// Radix of each normal-form coordinate.
    fn radices(&self) -> Vec<usize> {
        match self {
            GroupKind::Cyclic { n } => vec![*n],
            GroupKind::Elementary { p, n } => vec![*p as usize; *n as usize],
            GroupKind::Heisenberg { p } => vec![*p as usize; 3],
            GroupKind::Dihedral { order } => vec![order / 2, 2],
            GroupKind::Dicyclic { order } => vec![order / 2, 2],
            GroupKind::Product { factors } => factors.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GroupKind::Cyclic { n } if *n >= 1 => Ok(()),
            GroupKind::Elementary { p, n } if is_prime(*p as u64) && *n >= 1 => Ok(()),
            GroupKind::Heisenberg { p } if *p > 2 && is_prime(*p as u64) => Ok(()),
            GroupKind::Dihedral { order } if *order >= 2 && order % 2 == 0 => Ok(()),
            GroupKind::Dicyclic { order } if *order >= 4 && order % 4 == 0 => Ok(()),
            GroupKind::Product { factors } if !factors.is_empty() && factors.iter().all(|&f| f >= 1) => {
                Ok(())
            }
            other => Err(Error::invalid(format!("invalid group parameters: {other:?}"))),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupKind::Cyclic { .. } | GroupKind::Elementary { .. } | GroupKind::Product { .. } => true,
            GroupKind::Heisenberg { .. } => false,
            GroupKind::Dihedral { order } => *order <= 4,
            GroupKind::Dicyclic { order } => *order <= 4,
        }
    }

    pub fn order(&self) -> usize {
        self.radices().iter().product()
    }

    /// Multiplies two elements given in normal-form coordinates.
    fn mul_coords(&self, a: &[usize], b: &[usize], out: &mut [usize]) {
        let r = self.radices();
        match self {
            GroupKind::Heisenberg { p } => {
                let p = *p as usize;
                out[0] = (a[0] + b[0]) % p;
                out[1] = (a[1] + b[1]) % p;
                out[2] = (a[2] + b[2] + a[1] * b[0]) % p;
            }
            GroupKind::Dihedral { .. } | GroupKind::Dicyclic { .. } => {
                let n = r[0];
                // Y^j X^k = X^{(-1)^j k} Y^j
                let moved = if a[1] == 1 { (n - b[0]) % n } else { b[0] };
                let mut x = a[0] + moved;
                if matches!(self, GroupKind::Dicyclic { .. }) && a[1] == 1 && b[1] == 1 {
                    x += n / 2;
                }
                out[0] = x % n;
                out[1] = (a[1] + b[1]) % 2;
            }
            _ => {
                for i in 0..r.len() {
                    out[i] = (a[i] + b[i]) % r[i];
                }
            }
        }
    }

    fn generator_letters(&self) -> Vec<String> {
        match self {
            GroupKind::Heisenberg { .. } => vec!["x".into(), "y".into(), "z".into()],
            GroupKind::Dihedral { .. } | GroupKind::Dicyclic { .. } => vec!["x".into(), "y".into()],
            _ => {
                let k = self.radices().len();
                if k <= 3 {
                    ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
                } else {
                    (1..=k).map(|i| format!("x{i}")).collect()
                }
            }
        }
    }

    /// The prime `p` if the order is a power of `p`.
    pub fn prime(&self) -> Option<u32> {
        let order = self.order();
        if order < 2 {
            return None;
        }
        let p = (2..=order).find(|d| order.is_multiple_of(*d))?;
        let mut m = order;
        while m.is_multiple_of(p) {
            m /= p;
        }
        (m == 1).then_some(p as u32)
    }

    /// Short name, e.g. `h3`, `d8`, `q12`, `z3^2`, `z2xz4`.
    pub fn short_name(&self) -> String {
        match self {
            GroupKind::Cyclic { n } => format!("z{n}"),
            GroupKind::Elementary { p, n } => format!("z{p}^{n}"),
            GroupKind::Heisenberg { p } => format!("h{p}"),
            GroupKind::Dihedral { order } => format!("d{order}"),
            GroupKind::Dicyclic { order } => format!("q{order}"),
            GroupKind::Product { factors } => factors
                .iter()
                .map(|f| format!("z{f}"))
                .collect::<Vec<_>>()
                .join("x"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    /// Parses the short names produced by [`GroupKind::short_name`].
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let num = |t: &str| -> Result<usize> {
            t.parse::<usize>()
                .map_err(|_| Error::parse(t, "expected a positive integer"))
        };
        let kind = if s.contains('x') {
            let factors = s
                .split('x')
                .map(|f| {
                    f.strip_prefix('z')
                        .ok_or_else(|| Error::parse(f, "product factors look like z<n>"))
                        .and_then(num)
                })
                .collect::<Result<Vec<_>>>()?;
            GroupKind::Product { factors }
        } else if let Some(rest) = s.strip_prefix('h') {
            GroupKind::Heisenberg { p: num(rest)? as u32 }
        } else if let Some(rest) = s.strip_prefix('d') {
            GroupKind::Dihedral { order: num(rest)? }
        } else if let Some(rest) = s.strip_prefix('q') {
            GroupKind::Dicyclic { order: num(rest)? }
        } else if let Some(rest) = s.strip_prefix('z') {
            match rest.split_once('^') {
                Some((base, exp)) => GroupKind::Elementary {
                    p: num(base)? as u32,
                    n: num(exp)? as u32,
                },
                None => GroupKind::Cyclic { n: num(rest)? },
            }
        } else {
            return Err(Error::parse(&s, "unknown group kind (try h3, d8, q12, z3^2, z9, z2xz4)"));
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// A finite group as a validated Cayley table.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    kind: GroupKind,
    order: usize,
    radices: Vec<usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
    generators: Vec<usize>,
}

pub fn build_group(kind: &GroupKind) -> Result<GroupSpec> {
    GroupSpec::build(kind, true)
}

impl GroupSpec {
    /// Builds and validates the table; associativity is only checked when
    /// `check_associativity` is set and the order is at most
    /// [`ASSOCIATIVITY_CHECK_LIMIT`].
    pub fn build(kind: &GroupKind, check_associativity: bool) -> Result<Self> {
        kind.validate()?;
        let radices = kind.radices();
        let order = kind.order();
        if order > MAX_TABLE_ORDER {
            return Err(Error::invalid(format!(
                "group order {order} exceeds the table limit {MAX_TABLE_ORDER}"
            )));
        }
        let coords: Vec<Vec<usize>> = (0..order).map(|i| decode(&radices, i)).collect();
        let mut mul = vec![0u32; order * order];
        let mut out = vec![0usize; radices.len()];
        for (a, ca) in coords.iter().enumerate() {
            for (b, cb) in coords.iter().enumerate() {
                kind.mul_coords(ca, cb, &mut out);
                mul[a * order + b] = encode(&radices, &out) as u32;
            }
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        let letters = kind.generator_letters();
        let labels = coords.iter().map(|c| monomial_label(&letters, c)).collect();
        let generators = (0..radices.len())
            .map(|i| {
                let mut c = vec![0; radices.len()];
                c[i] = 1 % radices[i];
                encode(&radices, &c)
            })
            .collect();
        let spec = GroupSpec {
            kind: kind.clone(),
            order,
            radices,
            mul,
            inv,
            labels,
            generators,
        };
        spec.validate(check_associativity && order <= ASSOCIATIVITY_CHECK_LIMIT)?;
        Ok(spec)
    }

    fn validate(&self, associativity: bool) -> Result<()> {
        let n = self.order;
        let bad = |what: &str| Err(Error::invalid(format!("{:?}: {what}", self.kind)));
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return bad("index 0 is not the identity");
            }
        }
        let mut seen = vec![0u32; n];
        for a in 0..n {
            for stamp in [2 * a as u32 + 1, 2 * a as u32 + 2] {
                for b in 0..n {
                    let e = if stamp % 2 == 1 { self.mul(a, b) } else { self.mul(b, a) };
                    if seen[e] == stamp {
                        return bad("multiplication table is not a Latin square");
                    }
                    seen[e] = stamp;
                }
            }
        }
        for a in 0..n {
            let i = self.inv[a] as usize;
            if i >= n || self.mul(a, i) != 0 || self.mul(i, a) != 0 {
                return bad("inverse table is not two-sided");
            }
        }
        if associativity {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return bad("multiplication is not associative");
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Normal-form coordinates of element `a`.
    pub fn coords(&self, a: usize) -> Vec<usize> {
        decode(&self.radices, a)
    }

    /// Index of the element with the given (already reduced) coordinates.
    pub fn index_of(&self, coords: &[usize]) -> Option<usize> {
        (coords.len() == self.radices.len() && coords.iter().zip(&self.radices).all(|(c, r)| c < r))
            .then(|| encode(&self.radices, coords))
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `g_1^{e_1} g_2^{e_2} ...` over the generators, in order. Negative
    /// exponents use inverses.
    pub fn element_from_exps(&self, exps: &[i64]) -> Result<usize> {
        if exps.len() != self.generators.len() {
            return Err(Error::invalid(format!(
                "{} expects {} exponents, got {}",
                self.kind.short_name(),
                self.generators.len(),
                exps.len()
            )));
        }
        let mut acc = 0;
        for (&g, &e) in self.generators.iter().zip(exps) {
            let order = self.element_order(g) as i64;
            acc = self.mul(acc, self.pow(g, e.rem_euclid(order)));
        }
        Ok(acc)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sign of the permutation `h -> g h`.
    pub fn left_translation_sign(&self, g: usize) -> i32 {
        let mut seen = vec![false; self.order];
        let mut sign = 1;
        for start in 0..self.order {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.mul(g, x);
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

fn decode(radices: &[usize], mut idx: usize) -> Vec<usize> {
    let mut c = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        c[i] = idx % radices[i];
        idx /= radices[i];
    }
    c
}

fn encode(radices: &[usize], coords: &[usize]) -> usize {
    coords.iter().zip(radices).fold(0, |acc, (c, r)| acc * r + c)
}

fn monomial_label(letters: &[String], coords: &[usize]) -> String {
    let mut s = String::new();
    for (l, &c) in letters.iter().zip(coords) {
        match c {
            0 => {}
            1 => s.push_str(l),
            _ => {
                let _ = write!(s, "{l}^{c}");
            }
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// `F = sum_g a_g g` in `Z[G]`.
#[derive(Clone, Debug)]
pub struct GroupRingElt {
    group: Arc<GroupSpec>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for GroupRingElt {
    fn eq(&self, other: &Self) -> bool {
        self.group.kind == other.group.kind && self.coeffs == other.coeffs
    }
}

impl GroupRingElt {
    pub fn new(group: Arc<GroupSpec>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::invalid(format!(
                "group of order {} needs {} coefficients, got {}",
                group.order(),
                group.order(),
                coeffs.len()
            )));
        }
        Ok(GroupRingElt { group, coeffs })
    }

    pub fn zero(group: Arc<GroupSpec>) -> Self {
        let coeffs = vec![BigInt::zero(); group.order()];
        GroupRingElt { group, coeffs }
    }

    /// `c` times the identity.
    pub fn scalar(group: Arc<GroupSpec>, c: impl Into<BigInt>) -> Self {
        let mut f = Self::zero(group);
        f.coeffs[0] = c.into();
        f
    }

    /// Sums `coef * g` for terms given by generator exponents.
    pub fn from_terms(group: Arc<GroupSpec>, terms: &[(Vec<i64>, BigInt)]) -> Result<Self> {
        let mut f = Self::zero(group);
        for (exps, c) in terms {
            let g = f.group.element_from_exps(exps)?;
            f.coeffs[g] += c;
        }
        Ok(f)
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &BigInt {
        &self.coeffs[g]
    }

    pub fn add_to(&mut self, g: usize, c: &BigInt) {
        self.coeffs[g] += c;
    }

    /// Sum of the coefficients, i.e. `F(1, ..., 1)`.
    pub fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn neg(&self) -> Self {
        GroupRingElt {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `(F1 * F2)(g) = sum_h F1(h) F2(h^{-1} g)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.group.kind != other.group.kind {
            return Err(Error::invalid("convolution of elements from different groups"));
        }
        let mut out = Self::zero(self.group.clone());
        for (h, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[self.group.mul(h, k)] += a * b;
            }
        }
        Ok(out)
    }

    /// `g * F`.
    pub fn left_translate(&self, g: usize) -> Self {
        let mut out = Self::zero(self.group.clone());
        for (h, a) in self.coeffs.iter().enumerate() {
            out.coeffs[self.group.mul(g, h)] = a.clone();
        }
        out
    }

    /// Terms with nonzero coefficients, as (normal-form exponents, coefficient).
    pub fn terms(&self) -> Vec<(Vec<i64>, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| {
                let e = self.group.coords(g).into_iter().map(|x| x as i64).collect();
                (e, c.clone())
            })
            .collect()
    }
}

/// The matrix `(a_{g_i g_j^{-1}})`.
pub fn group_matrix(f: &GroupRingElt) -> SquareMatrix<BigInt> {
    let g = &f.group;
    SquareMatrix::from_fn(g.order(), |i, j| f.coeffs[g.mul(i, g.inv(j))].clone())
        .expect("group order is positive")
}

/// The group determinant, by exact elimination on the full Cayley matrix.
pub fn group_determinant(f: &GroupRingElt) -> Result<BigInt> {
    det_bareiss(&group_matrix(f))
}

/// Coefficient cube `a[i][j][k]` of `sum a_{ijk} x^i y^j z^k` over `H_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergPoly {
    p: u32,
    a: Vec<BigInt>,
}

impl HeisenbergPoly {
    pub fn zero(p: u32) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::invalid(format!("Heisenberg prime must be odd, got {p}")));
        }
        Ok(HeisenbergPoly {
            p,
            a: vec![BigInt::zero(); (p * p * p) as usize],
        })
    }

    /// Builds from the flat cube, `a[(i p + j) p + k]`.
    pub fn from_flat(p: u32, a: Vec<BigInt>) -> Result<Self> {
        let mut f = Self::zero(p)?;
        if a.len() != f.a.len() {
            return Err(Error::invalid(format!(
                "Heisenberg polynomial for p = {p} needs {} coefficients, got {}",
                f.a.len(),
                a.len()
            )));
        }
        f.a = a;
        Ok(f)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    fn idx(&self, i: i64, j: i64, k: i64) -> usize {
        let p = self.p as i64;
        ((i.rem_euclid(p) * p + j.rem_euclid(p)) * p + k.rem_euclid(p)) as usize
    }

    /// Coefficient of `x^i y^j z^k`; exponents are read modulo `p`.
    pub fn get(&self, i: i64, j: i64, k: i64) -> &BigInt {
        &self.a[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: i64, j: i64, k: i64, c: impl Into<BigInt>) {
        let idx = self.idx(i, j, k);
        self.a[idx] = c.into();
    }

    pub fn add_term(&mut self, i: i64, j: i64, k: i64, c: &BigInt) {
        let idx = self.idx(i, j, k);
        self.a[idx] += c;
    }

    pub fn flat(&self) -> &[BigInt] {
        &self.a
    }

    /// `F(1, 1, 1)`.
    pub fn value_at_one(&self) -> BigInt {
        self.a.iter().sum()
    }

    pub fn neg(&self) -> Self {
        HeisenbergPoly {
            p: self.p,
            a: self.a.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::invalid("adding Heisenberg polynomials over different primes"));
        }
        Ok(HeisenbergPoly {
            p: self.p,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        })
    }

    /// `f_i(y, z) = sum_{j,k} a_{ijk} y^j z^k`, the coefficient of `x^i`.
    pub fn x_slice(&self, i: usize) -> YzPoly {
        let p = self.p as usize;
        YzPoly {
            p: self.p,
            c: self.a[i * p * p..(i + 1) * p * p].to_vec(),
        }
    }

    /// Indices `i` whose slice `f_i` is nonzero.
    pub fn x_support(&self) -> Vec<usize> {
        (0..self.p as usize)
            .filter(|&i| !self.x_slice(i).is_zero())
            .collect()
    }

    pub fn to_group_ring(&self) -> Result<GroupRingElt> {
        let group = Arc::new(build_group(&GroupKind::Heisenberg { p: self.p })?);
        self.to_group_ring_in(group)
    }

    /// Same as [`Self::to_group_ring`] with a prebuilt `H_p` table.
    pub fn to_group_ring_in(&self, group: Arc<GroupSpec>) -> Result<GroupRingElt> {
        if group.kind() != &(GroupKind::Heisenberg { p: self.p }) {
            return Err(Error::invalid("group is not the matching Heisenberg group"));
        }
        // The lexicographic (a, b, c) order makes the flat cube the coefficient vector.
        GroupRingElt::new(group, self.a.clone())
    }

    pub fn from_group_ring(f: &GroupRingElt) -> Result<Self> {
        match f.group().kind() {
            GroupKind::Heisenberg { p } => Self::from_flat(*p, f.coeffs().to_vec()),
            other => Err(Error::invalid(format!("{other:?} is not a Heisenberg group"))),
        }
    }

    /// Nonzero terms as `((i, j, k), coefficient)`.
    pub fn terms(&self) -> Vec<([usize; 3], BigInt)> {
        let p = self.p as usize;
        self.a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| ([n / (p * p), (n / p) % p, n % p], c.clone()))
            .collect()
    }
}

/// Polynomial in `y, z` with exponents below `p`: `c[j p + k]` is the coefficient of `y^j z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YzPoly {
    pub(crate) p: u32,
    pub(crate) c: Vec<BigInt>,
}

impl YzPoly {
    pub fn zero(p: u32) -> Self {
        YzPoly {
            p,
            c: vec![BigInt::zero(); (p * p) as usize],
        }
    }

    pub fn from_terms(p: u32, terms: &[(i64, i64, i64)]) -> Self {
        let mut f = Self::zero(p);
        for &(j, k, c) in terms {
            f.add_term(j, k, &BigInt::from(c));
        }
        f
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn add_term(&mut self, j: i64, k: i64, c: &BigInt) {
        let p = self.p as i64;
        self.c[(j.rem_euclid(p) * p + k.rem_euclid(p)) as usize] += c;
    }

    pub fn get(&self, j: usize, k: usize) -> &BigInt {
        &self.c[j * self.p as usize + k]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    X,
    Y,
    Z,
}

/// A word in `x, y, z` and their inverses, e.g. `yx`, `x^-1 y^2 z`, `XYx`
/// (upper case letters are inverses).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(pub Vec<(Generator, i64)>);

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (g, sign) = match chars[i] {
                'x' => (Generator::X, 1),
                'y' => (Generator::Y, 1),
                'z' => (Generator::Z, 1),
                'X' => (Generator::X, -1),
                'Y' => (Generator::Y, -1),
                'Z' => (Generator::Z, -1),
                '1' if chars.len() == 1 => break,
                c => return Err(Error::parse(c.to_string(), "expected one of x, y, z, X, Y, Z")),
            };
            i += 1;
            let mut e = 1i64;
            if i < chars.len() && chars[i] == '^' {
                let start = i + 1;
                let mut end = start;
                if end < chars.len() && chars[end] == '-' {
                    end += 1;
                }
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let tok: String = chars[start..end].iter().collect();
                e = tok
                    .parse()
                    .map_err(|_| Error::parse(format!("^{tok}"), "bad exponent"))?;
                i = end;
            }
            out.push((g, sign * e));
        }
        Ok(Word(out))
    }
}

impl Word {
    /// Normal form `(a, b, c)` of the word in the discrete Heisenberg group,
    /// using `(a,b,c)(d,e,f) = (a+d, b+e, c+f+bd)`.
    pub fn integer_normal_form(&self) -> (i64, i64, i64) {
        let mut acc = (0i64, 0i64, 0i64);
        for &(g, e) in &self.0 {
            let (d, ee, f) = match g {
                Generator::X => (e, 0, 0),
                Generator::Y => (0, e, 0),
                Generator::Z => (0, 0, e),
            };
            acc = (acc.0 + d, acc.1 + ee, acc.2 + f + acc.1 * d);
        }
        acc
    }
}

/// Rewrites each word to `x^a y^b z^c`, `0 <= a, b, c < p`, and sums
/// coefficients of equal monomials.
pub fn heisenberg_normal_form(terms: &[(Word, BigInt)], p: u32) -> Result<HeisenbergPoly> {
    let mut f = HeisenbergPoly::zero(p)?;
    for (w, c) in terms {
        let (a, b, cc) = w.integer_normal_form();
        f.add_term(a, b, cc, c);
    }
    Ok(f)
}

/// Convenience wrapper over [`heisenberg_normal_form`] for string words.
pub fn heisenberg_from_words(terms: &[(&str, i64)], p: u32) -> Result<HeisenbergPoly> {
    let parsed = terms
        .iter()
        .map(|(w, c)| Ok((w.parse::<Word>()?, BigInt::from(*c))))
        .collect::<Result<Vec<_>>>()?;
    heisenberg_normal_form(&parsed, p)
}

/// One term of the JSON polynomial format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exps: Vec<i64>,
    /// Decimal string, arbitrary precision.
    pub coef: String,
}

/// `{"group": {...}, "terms": [{"exps": [...], "coef": "..."}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub group: GroupKind,
    pub terms: Vec<JsonTerm>,
}

impl PolyFile {
    pub fn parse(json: &str) -> Result<Self> {
        let file: PolyFile = serde_json::from_str(json).map_err(|e| {
            let token = json
                .lines()
                .nth(e.line().saturating_sub(1))
                .map(|l| {
                    let start = e.column().saturating_sub(1).min(l.len());
                    l[start..].chars().take(16).collect::<String>()
                })
                .unwrap_or_default();
            Error::parse(token, e.to_string())
        })?;
        file.group.validate()?;
        Ok(file)
    }

    pub fn to_element(&self, group: Arc<GroupSpec>) -> Result<GroupRingElt> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let c = t
                    .coef
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::parse(&t.coef, "coefficient must be a decimal integer string"))?;
                Ok((t.exps.clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupRingElt::from_terms(group, &terms)
    }

    pub fn from_element(f: &GroupRingElt) -> Self {
        PolyFile {
            group: f.group().kind().clone(),
            terms: f
                .terms()
                .into_iter()
                .map(|(exps, c)| JsonTerm {
                    exps,
                    coef: c.to_string(),
                })
                .collect(),
        }
    }
}

/// `sum_{i < p} t^i`.
pub fn phi_coeffs(p: u32) -> Vec<BigInt> {
    vec![BigInt::one(); p as usize]
}
