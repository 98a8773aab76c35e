use std::sync::Arc;

use gdet_core::cyclotomic::p_valuation;
use gdet_core::fast::{fast_group_determinant, heisenberg_measure, Method};
use gdet_core::groups::{build_group, group_determinant, GroupKind, GroupRingElt, HeisenbergPoly, PolyFile};
use gdet_core::infinite::{
    d_infinity_h_fourcomponent, d_infinity_h_measure, d_infinity_measure, heisenberg_infinite_measure,
    mahler_measure,
};
use gdet_core::search::{
    enumerate_values, format_lambda, lambda_heisenberg, SearchConfig, SearchMode, ValueFilter,
};
use gdet_core::theorems::{
    achieve_construction, congruence_suite, h3_family_values, heisenberg_sharp_family, lemma1_suite,
    lemma2_suite, non_wieferich_base, residue, t_n_member, zp2_sharp_family, SharpnessReport,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::report::{Failure, Outcome};
use crate::{Command, FamilyArg, MeasureCommand, VerifyCommand};

/// Largest group handed to the Cayley-matrix oracle.
const ORACLE_MAX_ORDER: usize = 512;
const BUDGET_VAR: &str = "GDET_BUDGET";

type CmdResult = Result<Outcome, Failure>;

pub fn run(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Compute { input } => compute(input),
        Command::Oracle { input } => oracle(input),
        Command::Verify { check } => verify(check),
        Command::Achieve { p, a, m } => achieve(*p, *a, m),
        Command::Sharp { family, p, k, units } => sharp(*family, *p, *k, units),
        Command::H3Values { m_range } => h3_values(*m_range),
        Command::Search {
            group,
            height,
            exhaustive,
            trials,
            seed,
            filter,
            value_cap,
            values,
        } => {
            let mode = match (exhaustive, trials) {
                (true, _) => SearchMode::Exhaustive,
                (false, Some(trials)) => SearchMode::Random { trials: *trials, seed: *seed },
                (false, None) => return Err(Failure::Input("give --exhaustive or --trials".into())),
            };
            search(group, *height, mode, filter, *value_cap, *values)
        }
        Command::Lambda { p } => lambda(*p),
        Command::Measure { kind } => measure(kind),
    }
}

fn big(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn poly_json(f: &HeisenbergPoly) -> Result<Value, Failure> {
    let elt = f.to_group_ring()?;
    Ok(serde_json::to_value(PolyFile::from_element(&elt)).expect("poly file serializes"))
}

fn load(path: &std::path::Path) -> Result<(Vec<u8>, GroupRingElt), Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Failure::Input(format!("{} is not UTF-8", path.display())))?;
    let file = PolyFile::parse(text)?;
    let group = Arc::new(build_group(&file.group)?);
    let elt = file.to_element(group)?;
    Ok((bytes, elt))
}

fn check(name: &str, holds: bool) -> Value {
    json!({ "name": name, "holds": holds })
}

fn compute(path: &std::path::Path) -> CmdResult {
    let (bytes, f) = load(path)?;
    let kind = f.group().kind().clone();
    let mut results = serde_json::Map::new();
    let m = if let GroupKind::Heisenberg { .. } = kind {
        let fac = heisenberg_measure(&HeisenbergPoly::from_group_ring(&f)?)?;
        results.insert("M1".into(), big(&fac.m1));
        results.insert("M2".into(), big(&fac.m2));
        results.insert("method".into(), json!(Method::Heisenberg.as_str()));
        fac.m
    } else {
        let (m, method) = fast_group_determinant(&f)?;
        results.insert("method".into(), json!(method.as_str()));
        m
    };
    results.insert("group".into(), json!(kind.short_name()));
    results.insert("order".into(), json!(kind.order()));
    results.insert("M".into(), big(&m));
    results.insert("augmentation".into(), big(&f.augmentation()));

    let mut checks = vec![];
    if let Some(p) = kind.prime() {
        let pb = BigInt::from(p);
        let p3 = pb.pow(3);
        let v = p_valuation(&m, p);
        let coprime = v == Some(0);
        results.insert("p".into(), json!(p));
        results.insert("valuation".into(), v.map_or(Value::Null, |v| json!(v)));
        results.insert("M_mod_p3".into(), big(&residue(&m, &p3)));
        results.insert("class".into(), json!(if coprime { "coprime" } else { "multiple" }));
        // (coprime: required membership of T_n, multiple: required valuation)
        let rules = match &kind {
            GroupKind::Heisenberg { p } => {
                let base = residue(&f.augmentation(), &p3).modpow(&p3, &p3);
                checks.push(check("congruence_mod_p3", residue(&m, &p3) == base));
                Some((3, (*p as u64).pow(2) + 3))
            }
            GroupKind::Elementary { n: 2, .. } => Some((2, p as u64 + 3)),
            GroupKind::Product { factors } if factors.len() == 2 && factors[0] == factors[1] => {
                Some((2, p as u64 + 3))
            }
            GroupKind::Cyclic { n } if *n == p as usize => Some((1, 2)),
            _ => None,
        };
        if let Some((n, min_valuation)) = rules {
            if coprime {
                checks.push(check(&format!("in_T{n}"), t_n_member(&m, p, n)));
            } else {
                let holds = v.is_none_or(|v| v >= min_valuation);
                checks.push(check(&format!("valuation_at_least_{min_valuation}"), holds));
            }
        }
    }
    let passed = checks.iter().all(|c| c["holds"] == json!(true));
    results.insert("checks".into(), json!(checks));
    Ok(Outcome::new(Value::Object(results), passed).with_input(bytes))
}

fn oracle(path: &std::path::Path) -> CmdResult {
    let (bytes, f) = load(path)?;
    let order = f.group().order();
    if order > ORACLE_MAX_ORDER {
        return Err(Failure::Input(format!(
            "group order {order} exceeds the oracle limit {ORACLE_MAX_ORDER}"
        )));
    }
    let cayley = group_determinant(&f)?;
    let (fast, method) = fast_group_determinant(&f)?;
    let agrees = cayley == fast;
    let results = json!({
        "group": f.group().kind().short_name(),
        "order": order,
        "M": big(&cayley),
        "fast": big(&fast),
        "fast_method": method.as_str(),
        "agrees": agrees,
    });
    Ok(Outcome::new(results, agrees).with_input(bytes))
}

fn verify(cmd: &VerifyCommand) -> CmdResult {
    match *cmd {
        VerifyCommand::Congruence { p, trials, height, seed } => {
            let s = congruence_suite(p, trials, seed, height)?;
            let results = json!({
                "check": "congruence",
                "p": p,
                "trials": trials,
                "height": height,
                "failures": s.failures,
                "coprime_values": s.coprime_values,
                "coprime_failures": s.coprime_failures,
            });
            Ok(Outcome::new(results, s.passed()).with_seed(seed))
        }
        VerifyCommand::Lemma1 { p, trials, height, seed } => {
            let failures = lemma1_suite(p, trials, seed, height)?;
            lemma_outcome("lemma1", p, trials, height, seed, failures)
        }
        VerifyCommand::Lemma2 { p, trials, height, seed } => {
            let failures = lemma2_suite(p, trials, seed, height)?;
            lemma_outcome("lemma2", p, trials, height, seed, failures)
        }
    }
}

fn lemma_outcome(name: &str, p: u32, trials: u64, height: i64, seed: u64, failures: Vec<u64>) -> CmdResult {
    let passed = failures.is_empty();
    let results = json!({
        "check": name,
        "p": p,
        "trials": trials,
        "height": height,
        "failures": failures,
    });
    Ok(Outcome::new(results, passed).with_seed(seed))
}

fn achieve(p: u32, a: u64, m: &BigInt) -> CmdResult {
    let (f, measure) = achieve_construction(a, m, p)?;
    let pb = BigInt::from(p);
    let expected = num_traits::pow(BigInt::from(a), (p as usize).pow(2)) + m * pb.pow(3);
    let verified = measure == expected;
    let results = json!({
        "p": p,
        "a": a,
        "m": big(m),
        "M": big(&measure),
        "expected": big(&expected),
        "verified": verified,
        "poly": poly_json(&f)?,
    });
    Ok(Outcome::new(results, verified))
}

fn sharpness_json(r: &SharpnessReport) -> Value {
    json!({
        "family": r.family.as_str(),
        "p": r.p,
        "k": r.k,
        "M": big(&r.measure),
        "expected_valuation": r.expected_valuation,
        "actual_valuation": r.actual_valuation,
        "divisible": r.divisible,
        "exact": r.exact,
    })
}

fn sharp(family: FamilyArg, p: u32, k: Option<u32>, units: &[i64]) -> CmdResult {
    match family {
        FamilyArg::Heisenberg => {
            if k.is_some() {
                return Err(Failure::Input("--k applies only to --family zp2".into()));
            }
            let (f, report) = heisenberg_sharp_family(p)?;
            let mut results = sharpness_json(&report);
            results["A"] = json!(non_wieferich_base(p));
            results["poly"] = poly_json(&f)?;
            Ok(Outcome::new(results, report.exact))
        }
        FamilyArg::Zp2 => {
            let units: [i64; 3] = units
                .try_into()
                .map_err(|_| Failure::Input(format!("--units needs three values, got {}", units.len())))?;
            let (coeffs, report) = zp2_sharp_family(p, k.unwrap_or(0), units)?;
            let mut results = sharpness_json(&report);
            results["units"] = json!(units);
            results["coeffs"] = json!(coeffs.iter().map(BigInt::to_string).collect::<Vec<_>>());
            Ok(Outcome::new(results, report.exact))
        }
    }
}

fn h3_values((lo, hi): (i64, i64)) -> CmdResult {
    let mut rows = vec![];
    let mut passed = true;
    for m in lo..=hi {
        for v in h3_family_values(&BigInt::from(m))? {
            passed &= v.matches();
            rows.push(json!({
                "m": m,
                "family": v.label,
                "claimed": big(&v.claimed),
                "computed": big(&v.computed),
                "matches": v.matches(),
            }));
        }
    }
    Ok(Outcome::new(json!({ "m_range": [lo, hi], "values": rows }), passed))
}

fn budget() -> Result<Option<u128>, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(s) => s
            .trim()
            .parse::<u128>()
            .map(Some)
            .map_err(|_| Failure::Input(format!("{BUDGET_VAR}=`{s}` is not a nonnegative integer"))),
        Err(_) => Ok(None),
    }
}

fn search(
    group: &str,
    height: i64,
    mode: SearchMode,
    filter: &str,
    value_cap: Option<usize>,
    list_values: bool,
) -> CmdResult {
    let kind: GroupKind = group.parse()?;
    let mut cfg = SearchConfig::new(kind.clone(), height, mode);
    cfg.filter = filter.parse::<ValueFilter>()?;
    if let Some(cap) = value_cap {
        cfg.value_cap = cap;
    }
    if let Some(b) = budget()? {
        cfg.budget = b;
    }
    let r = enumerate_values(&cfg)?;
    let mut results = json!({
        "group": kind.short_name(),
        "order": kind.order(),
        "prime": r.prime,
        "height": height,
        "mode": match mode { SearchMode::Exhaustive => "exhaustive", SearchMode::Random { .. } => "random" },
        "filter": cfg.filter.as_str(),
        "evaluated": r.evaluated,
        "distinct_values": r.attained_values.len(),
        "overflow": r.overflow,
        "min_nontrivial": r.min_nontrivial.as_ref().map(|(v, c)| json!({ "value": big(v), "coeffs": c })),
        "lambda_estimate": r.lambda_estimate.map(format_lambda),
    });
    if list_values {
        results["attained_values"] = json!(r.attained_values.iter().map(BigInt::to_string).collect::<Vec<_>>());
    }
    let outcome = Outcome::new(results, true);
    Ok(match mode {
        SearchMode::Random { seed, .. } => outcome.with_seed(seed),
        SearchMode::Exhaustive => outcome,
    })
}

fn lambda(p: u32) -> CmdResult {
    let r = lambda_heisenberg(p)?;
    let verified = r.witness_measure.abs() == r.minimum && !r.minimum.is_zero();
    let results = json!({
        "p": p,
        "minimum": big(&r.minimum),
        "lambda": format_lambda(r.lambda),
        "construction": { "a": r.construction.0, "m": big(&r.construction.1) },
        "witness_measure": big(&r.witness_measure),
        "witness": poly_json(&r.witness)?,
        "verified": verified,
    });
    Ok(Outcome::new(results, verified))
}

fn measure(cmd: &MeasureCommand) -> CmdResult {
    let results = match cmd {
        MeasureCommand::Mahler { f } => json!({
            "kind": "mahler",
            "f": f.to_string(),
            "value": mahler_measure(f)?,
        }),
        MeasureCommand::Dinf { f, g } => json!({
            "kind": "dinf",
            "f": f.to_string(),
            "g": g.to_string(),
            "value": d_infinity_measure(f, g)?,
        }),
        MeasureCommand::Dinfh { f, g } => json!({
            "kind": "dinfh",
            "f": f.to_string(),
            "g": g.to_string(),
            "value": d_infinity_h_measure(f, g)?,
        }),
        MeasureCommand::Dinfh4 { f0, f1, f2, f3 } => json!({
            "kind": "dinfh4",
            "f": [f0.to_string(), f1.to_string(), f2.to_string(), f3.to_string()],
            "value": d_infinity_h_fourcomponent([f0, f1, f2, f3])?,
        }),
        MeasureCommand::Heis { f, g, points } => json!({
            "kind": "heis",
            "f": f.to_string(),
            "g": g.to_string(),
            "points": points,
            "value": heisenberg_infinite_measure(f, g, *points)?,
        }),
    };
    Ok(Outcome::new(results, true))
}
