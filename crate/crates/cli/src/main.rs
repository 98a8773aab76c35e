//! `gdet`: integer group determinants, theorem spot-checks, value searches
//! and Mahler-type measures, each run emitting a reproducible JSON report.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gdet_core::infinite::{BivariateLaurent, LaurentPoly};
use num_bigint::BigInt;

use crate::report::Report;

#[derive(Parser, Debug)]
#[command(name = "gdet", version, about = "Integer group determinants and Lind-Mahler measures")]
struct Cli {
    /// Add `elapsed_ms` to the report (the report is then no longer reproducible).
    #[arg(long, global = true)]
    timing: bool,

    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group determinant of a JSON polynomial by the fast path, with
    /// valuation and residue checks.
    Compute { input: PathBuf },

    /// Group determinant from the full Cayley matrix, compared with the fast path.
    Oracle { input: PathBuf },

    /// Randomized checks of the congruence and the two lemmas.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },

    /// Build F over H_p with M(F) = a^{p^2} + m p^3 and confirm it.
    Achieve {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        a: u64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_big)]
        m: BigInt,
    },

    /// Valuation of the sharp divisibility families.
    Sharp {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        p: u32,
        /// Extra power of p in the Z_p^2 family.
        #[arg(long)]
        k: Option<u32>,
        /// Units A1,A2,A3 of the Z_p^2 family.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,1,1")]
        units: Vec<i64>,
    },

    /// The five explicit H_3 families and their negations over a range of m.
    H3Values {
        /// Inclusive range `LO..HI`, e.g. `-5..5`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        m_range: (i64, i64),
    },

    /// Enumerate attained determinant values over a coefficient box.
    Search {
        /// Group name such as h3, d8, q12, z9, z3^2, z2xz4.
        #[arg(long)]
        group: String,
        #[arg(long)]
        height: i64,
        #[arg(long, conflicts_with_all = ["trials", "seed"])]
        exhaustive: bool,
        #[arg(long, required_unless_present = "exhaustive")]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// all, coprime or multiples (relative to the smallest prime dividing |G|).
        #[arg(long, default_value = "all")]
        filter: String,
        /// Maximum number of distinct values kept.
        #[arg(long)]
        value_cap: Option<usize>,
        /// List every kept value in the report.
        #[arg(long)]
        values: bool,
    },

    /// Smallest nontrivial |M| over H_p with a witness polynomial.
    Lambda {
        #[arg(long)]
        p: u32,
    },

    /// Numeric Mahler-type measures for infinite groups.
    Measure {
        #[command(subcommand)]
        kind: MeasureCommand,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// M = F(1,1,1)^{p^3} mod p^3 on random F over H_p.
    Congruence {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 5)]
        height: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// (1/p) sum f(y)^p = prod f(y) mod p^2 over the p-th roots of unity.
    Lemma1 {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 10)]
        height: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// p | e_i implies p^3 | E_i for the p-th powers of the roots.
    Lemma2 {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 10)]
        height: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum MeasureCommand {
    /// m(f).
    Mahler {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent)]
        f: LaurentPoly,
    },
    /// (1/2) m(f f~ - g g~) for D_inf.
    Dinf {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent)]
        f: LaurentPoly,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent)]
        g: LaurentPoly,
    },
    /// (1/4) [m(f f~ - g g~) + m(f f~ + g g~)] for D_inf h.
    Dinfh {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent)]
        f: LaurentPoly,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent)]
        g: LaurentPoly,
    },
    /// D_inf h measure from four components f0..f3.
    Dinfh4 {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent, default_value = "0")]
        f0: LaurentPoly,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent, default_value = "0")]
        f1: LaurentPoly,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent, default_value = "0")]
        f2: LaurentPoly,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_laurent, default_value = "0")]
        f3: LaurentPoly,
    },
    /// m_H(f0(y,z) + x^k fk(y,z)) for the discrete Heisenberg group.
    Heis {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_bivariate)]
        f: BivariateLaurent,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_bivariate)]
        g: BivariateLaurent,
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Zp2,
    Heisenberg,
}

fn parse_big(s: &str) -> Result<BigInt, String> {
    s.trim().parse().map_err(|_| format!("`{s}` is not an integer"))
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("`{s}` is not of the form LO..HI"))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

fn parse_laurent(s: &str) -> Result<LaurentPoly, String> {
    s.parse().map_err(|e: gdet_core::Error| e.to_string())
}

fn parse_bivariate(s: &str) -> Result<BivariateLaurent, String> {
    s.parse().map_err(|e: gdet_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    match commands::run(&cli.command) {
        Ok(outcome) => {
            let elapsed = cli.timing.then(|| start.elapsed().as_millis());
            let passed = outcome.passed;
            let report = Report::new(argv, outcome, elapsed);
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{}", report.render(cli.pretty));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
