use std::fmt;

use gdet_core::Error;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// What a subcommand produced, before it is wrapped into a [`Report`].
pub struct Outcome {
    pub results: Value,
    /// All verifications in `results` succeeded.
    pub passed: bool,
    pub seed: Option<u64>,
    /// Contents of the input file, if the command read one.
    pub input: Option<Vec<u8>>,
}

impl Outcome {
    pub fn new(results: Value, passed: bool) -> Self {
        Outcome {
            results,
            passed,
            seed: None,
            input: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_input(mut self, input: Vec<u8>) -> Self {
        self.input = Some(input);
        self
    }
}

/// The JSON document printed on stdout. Keys are sorted, so equal inputs
/// give byte-identical output.
pub struct Report(Value);

impl Report {
    pub fn new(argv: Vec<String>, outcome: Outcome, elapsed_ms: Option<u128>) -> Self {
        let mut hasher = Sha256::new();
        for arg in &argv {
            hasher.update(arg.as_bytes());
            hasher.update([0u8]);
        }
        if let Some(input) = &outcome.input {
            hasher.update(input);
        }
        let digest: String = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();

        let mut map = Map::new();
        map.insert("command".into(), json!(argv));
        map.insert("input_digest".into(), json!(digest));
        map.insert("results".into(), outcome.results);
        map.insert("passed".into(), json!(outcome.passed));
        if let Some(seed) = outcome.seed {
            map.insert("seed".into(), json!(seed));
        }
        if let Some(ms) = elapsed_ms {
            map.insert("elapsed_ms".into(), json!(ms as u64));
        }
        Report(Value::Object(map))
    }

    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(&self.0)
        } else {
            serde_json::to_string(&self.0)
        }
        .expect("JSON values always serialize")
    }
}

/// Why a command produced no report.
#[derive(Debug)]
pub enum Failure {
    /// Malformed or out-of-range input; exit code 2.
    Input(String),
    /// Numerical or internal failure; exit code 1.
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidParameter(_)
            | Error::PreconditionViolated(_)
            | Error::PrimeMismatch { .. }
            | Error::BudgetExceeded { .. }
            | Error::ZeroPolynomial
            | Error::ZeroSlice { .. } => Failure::Input(e.to_string()),
            Error::InexactDivision(_) | Error::NotInteger(_) | Error::RootFindingFailed { .. } => {
                Failure::Runtime(e.to_string())
            }
        }
    }
}
