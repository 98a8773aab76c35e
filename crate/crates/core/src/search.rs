//! Enumeration and sampling of group determinants.
//!
//! Work is cut into shards that do not depend on the thread count: in
//! exhaustive mode a shard fixes a prefix of the coefficient vector, in random
//! mode it is a fixed block of trial indices. Shards are merged in index
//! order, so results are reproducible.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fast::fast_group_determinant;
use crate::groups::{build_group, GroupKind, GroupRingElt, GroupSpec, HeisenbergPoly};
use crate::rng::{random_coeffs, trial_rng};
use crate::theorems::{achieve_construction, t_n_member};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
pub const DEFAULT_VALUE_CAP: usize = 1_000_000;
const RANDOM_SHARD: u64 = 1024;
const TARGET_SHARDS: u128 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random { trials: u64, seed: u64 },
}

/// Which values are recorded, relative to the smallest prime dividing `|G|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueFilter {
    All,
    CoprimeToP,
    MultiplesOfP,
}

impl ValueFilter {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueFilter::All => "all",
            ValueFilter::CoprimeToP => "coprime",
            ValueFilter::MultiplesOfP => "multiples",
        }
    }
}

impl std::str::FromStr for ValueFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ValueFilter::All),
            "coprime" | "coprime-to-p" => Ok(ValueFilter::CoprimeToP),
            "multiples" | "multiples-of-p" => Ok(ValueFilter::MultiplesOfP),
            other => Err(Error::parse(other, "expected all, coprime or multiples")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub group: GroupKind,
    pub height: i64,
    pub mode: SearchMode,
    pub filter: ValueFilter,
    pub budget: u128,
    pub value_cap: usize,
}

impl SearchConfig {
    pub fn new(group: GroupKind, height: i64, mode: SearchMode) -> Self {
        SearchConfig {
            group,
            height,
            mode,
            filter: ValueFilter::All,
            budget: DEFAULT_BUDGET,
            value_cap: DEFAULT_VALUE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub prime: u32,
    pub evaluated: u64,
    /// Smallest `|M| >= 2` among recorded values, with its coefficient vector.
    pub min_nontrivial: Option<(BigInt, Vec<i64>)>,
    /// Sorted, deduplicated; at most `value_cap` entries of smallest magnitude.
    pub attained_values: Vec<BigInt>,
    /// Distinct values dropped because of the cap.
    pub overflow: u64,
    pub lambda_estimate: Option<f64>,
}

impl SearchResult {
    /// Witness as a group-ring element.
    pub fn witness(&self, group: Arc<GroupSpec>) -> Option<Result<GroupRingElt>> {
        self.min_nontrivial.as_ref().map(|(_, c)| {
            GroupRingElt::new(group, c.iter().map(|&x| BigInt::from(x)).collect())
        })
    }
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Twelve digits after the decimal point.
pub fn format_lambda(x: f64) -> String {
    format!("{x:.12}")
}

/// Smallest prime dividing `n`.
fn smallest_prime_factor(n: usize) -> u32 {
    (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(1) as u32
}

/// Values ordered by magnitude, then sign.
#[derive(Default)]
struct ValueSet {
    set: BTreeSet<(BigInt, BigInt)>,
    overflow: u64,
}

impl ValueSet {
    fn insert(&mut self, v: BigInt, cap: usize) {
        let key = (v.abs(), v);
        if self.set.contains(&key) {
            return;
        }
        if self.set.len() >= cap {
            match self.set.last() {
                Some(last) if *last > key => {
                    self.set.pop_last();
                }
                _ => {
                    self.overflow += 1;
                    return;
                }
            }
            self.overflow += 1;
        }
        self.set.insert(key);
    }
}

struct Shard {
    evaluated: u64,
    min: Option<(BigInt, Vec<i64>)>,
    values: ValueSet,
}

struct Evaluator {
    group: Arc<GroupSpec>,
    prime: BigInt,
    filter: ValueFilter,
    cap: usize,
}

impl Evaluator {
    fn new_shard(&self) -> Shard {
        Shard {
            evaluated: 0,
            min: None,
            values: ValueSet::default(),
        }
    }

    fn visit(&self, shard: &mut Shard, coeffs: &[i64]) -> Result<()> {
        let elt = GroupRingElt::new(
            self.group.clone(),
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        )?;
        let (m, _) = fast_group_determinant(&elt)?;
        shard.evaluated += 1;
        let divisible = (&m % &self.prime).is_zero();
        let keep = match self.filter {
            ValueFilter::All => true,
            ValueFilter::CoprimeToP => !divisible,
            ValueFilter::MultiplesOfP => divisible,
        };
        if !keep {
            return Ok(());
        }
        let abs = m.abs();
        if abs >= BigInt::from(2) && shard.min.as_ref().is_none_or(|(best, _)| abs < *best) {
            shard.min = Some((abs, coeffs.to_vec()));
        }
        shard.values.insert(m, self.cap);
        Ok(())
    }
}

fn merge(shards: Vec<Shard>, cap: usize) -> (u64, Option<(BigInt, Vec<i64>)>, ValueSet) {
    let mut evaluated = 0;
    let mut min: Option<(BigInt, Vec<i64>)> = None;
    let mut values = ValueSet::default();
    for s in shards {
        evaluated += s.evaluated;
        if let Some((v, w)) = s.min {
            if min.as_ref().is_none_or(|(best, _)| v < *best) {
                min = Some((v, w));
            }
        }
        values.overflow += s.values.overflow;
        for (_, v) in s.values.set {
            values.insert(v, cap);
        }
    }
    (evaluated, min, values)
}

/// Evaluates every element with coefficients in `[-H, H]` (exhaustive mode)
/// or `trials` seeded random elements, collecting the attained values.
pub fn enumerate_values(cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.height < 0 {
        return Err(Error::invalid("height must be nonnegative"));
    }
    if cfg.value_cap == 0 {
        return Err(Error::invalid("value cap must be positive"));
    }
    let group = Arc::new(build_group(&cfg.group)?);
    let order = group.order();
    let prime = smallest_prime_factor(order);
    let ev = Evaluator {
        group: group.clone(),
        prime: BigInt::from(prime.max(2)),
        filter: cfg.filter,
        cap: cfg.value_cap,
    };
    let width = 2 * cfg.height + 1;

    let shards: Vec<Shard> = match cfg.mode {
        SearchMode::Exhaustive => {
            let required = (width as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
            if required > cfg.budget {
                return Err(Error::BudgetExceeded {
                    required,
                    budget: cfg.budget,
                });
            }
            let mut prefix_len = 0usize;
            let mut shard_count: u128 = 1;
            while prefix_len < order && shard_count < TARGET_SHARDS {
                prefix_len += 1;
                shard_count *= width as u128;
            }
            (0..shard_count as u64)
                .into_par_iter()
                .map(|s| {
                    let mut shard = ev.new_shard();
                    let mut coeffs = vec![-cfg.height; order];
                    let mut rest = s;
                    for slot in coeffs[..prefix_len].iter_mut().rev() {
                        *slot = (rest % width as u64) as i64 - cfg.height;
                        rest /= width as u64;
                    }
                    loop {
                        ev.visit(&mut shard, &coeffs)?;
                        // odometer over the free suffix
                        let mut i = order;
                        loop {
                            if i == prefix_len {
                                return Ok(shard);
                            }
                            i -= 1;
                            if coeffs[i] < cfg.height {
                                coeffs[i] += 1;
                                break;
                            }
                            coeffs[i] = -cfg.height;
                        }
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
        SearchMode::Random { trials, seed } => {
            let count = trials.div_ceil(RANDOM_SHARD);
            (0..count)
                .into_par_iter()
                .map(|s| {
                    let mut shard = ev.new_shard();
                    for t in s * RANDOM_SHARD..((s + 1) * RANDOM_SHARD).min(trials) {
                        let mut rng = trial_rng(seed, t);
                        let c: Vec<i64> = random_coeffs(&mut rng, order, cfg.height)
                            .iter()
                            .map(|x| x.to_i64().unwrap_or(0))
                            .collect();
                        ev.visit(&mut shard, &c)?;
                    }
                    Ok(shard)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };

    let (evaluated, min_nontrivial, values) = merge(shards, cfg.value_cap);
    let mut attained_values: Vec<BigInt> = values.set.into_iter().map(|(_, v)| v).collect();
    attained_values.sort();
    let lambda_estimate = min_nontrivial
        .as_ref()
        .map(|(v, _)| ln_big(v) / order as f64);
    Ok(SearchResult {
        config: cfg.clone(),
        prime,
        evaluated,
        min_nontrivial,
        attained_values,
        overflow: values.overflow,
        lambda_estimate,
    })
}

/// `min { x >= 2 : x^{p-1} = 1 mod p^3 }` with a polynomial attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaReport {
    pub p: u32,
    pub minimum: BigInt,
    /// `log(minimum) / p^3`.
    pub lambda: f64,
    pub witness: HeisenbergPoly,
    pub witness_measure: BigInt,
    /// Parameters `(a, m)` of the construction with `a^{p^2} + m p^3 = minimum`.
    pub construction: (u64, BigInt),
}

/// Scans `x = 2..p^3` and builds a witness through [`achieve_construction`].
///
/// Every residue in `T_3` is `a^{p^2} mod p^3` for some `a` in `[1, p - 1]`,
/// which fixes `a`; then `m = (x - a^{p^2}) / p^3`.
pub fn lambda_heisenberg(p: u32) -> Result<LambdaReport> {
    crate::cyclotomic::check_prime(p)?;
    let p3 = (p as u64).pow(3);
    let minimum = (2..=p3)
        .map(BigInt::from)
        .find(|x| t_n_member(x, p, 3))
        .ok_or_else(|| Error::PreconditionViolated(format!("no element of T_3 found for p = {p}")))?;
    let p3b = BigInt::from(p3);
    let e = BigInt::from(p as u64 * p as u64);
    let a = (1..p as u64)
        .find(|&a| BigInt::from(a).modpow(&e, &p3b) == minimum.mod_floor(&p3b))
        .ok_or_else(|| Error::PreconditionViolated(format!("{minimum} is not a p^2-th power mod p^3")))?;
    let ap = num_traits::pow(BigInt::from(a), (p as usize).pow(2));
    let (m, r) = (&minimum - ap).div_rem(&p3b);
    if !r.is_zero() {
        return Err(Error::InexactDivision("witness parameter m".into()));
    }
    let (witness, witness_measure) = achieve_construction(a, &m, p)?;
    Ok(LambdaReport {
        p,
        lambda: ln_big(&minimum) / p3 as f64,
        minimum,
        witness,
        witness_measure,
        construction: (a, m),
    })
}
