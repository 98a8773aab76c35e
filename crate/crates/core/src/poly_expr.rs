//! Text syntax for Laurent polynomials.
//!
//! ```text
//! poly   := [sign] term (sign term)*
//! term   := factor (['*'] factor)*
//! factor := integer | var ['^' [sign] integer]
//! sign   := '+' | '-'
//! ```
//!
//! Whitespace is ignored. Variables are single letters from the caller's
//! list. Exponents may be negative, e.g. `x^5 + x^4 - 1` or `2*y^-2 z`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exponent vector (one entry per variable) to coefficient, zeros removed.
pub type Terms = BTreeMap<Vec<i64>, BigInt>;

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    /// Remaining input from the current position, for error messages.
    fn here(&self) -> String {
        match self.chars.get(self.pos) {
            Some(&(i, _)) => self.src[i..].chars().take(12).collect(),
            None => "<end>".to_string(),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            self.pos = start;
            return Err(Error::parse(self.here(), "expected an integer"));
        }
        Ok(digits.parse().expect("ascii digits"))
    }
}

/// Parses `src` over the variables `vars` (e.g. `['x']` or `['y', 'z']`).
pub fn parse_terms(src: &str, vars: &[char]) -> Result<Terms> {
    let mut lx = Lexer::new(src);
    if lx.peek().is_none() {
        return Err(Error::parse("<end>", "empty polynomial"));
    }
    let mut out = Terms::new();
    let mut first = true;
    while lx.peek().is_some() {
        let mut negative = false;
        match lx.peek() {
            Some('+') => {
                lx.bump();
            }
            Some('-') => {
                lx.bump();
                negative = true;
            }
            _ if first => {}
            _ => return Err(Error::parse(lx.here(), "expected '+' or '-'")),
        }
        first = false;
        let (exps, mut coef) = term(&mut lx, vars)?;
        if negative {
            coef = -coef;
        }
        let slot = out.entry(exps).or_insert_with(BigInt::zero);
        *slot += coef;
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn term(lx: &mut Lexer, vars: &[char]) -> Result<(Vec<i64>, BigInt)> {
    let mut exps = vec![0i64; vars.len()];
    let mut coef = BigInt::one();
    let mut factors = 0;
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => coef *= lx.integer()?,
            Some(c) if c.is_alphabetic() => {
                let Some(slot) = vars.iter().position(|&v| v == c) else {
                    return Err(Error::parse(
                        lx.here(),
                        format!("unknown variable '{c}', expected one of {vars:?}"),
                    ));
                };
                lx.bump();
                let mut e = 1i64;
                if lx.peek() == Some('^') {
                    lx.bump();
                    let neg = match lx.peek() {
                        Some('-') => {
                            lx.bump();
                            true
                        }
                        Some('+') => {
                            lx.bump();
                            false
                        }
                        _ => false,
                    };
                    let at = lx.here();
                    let n = lx.integer()?;
                    e = i64::try_from(n).map_err(|_| Error::parse(at, "exponent out of range"))?;
                    if neg {
                        e = -e;
                    }
                }
                exps[slot] += e;
            }
            _ if factors == 0 => return Err(Error::parse(lx.here(), "expected a term")),
            _ => return Err(Error::parse(lx.here(), "expected a factor after '*'")),
        }
        factors += 1;
        match lx.peek() {
            Some('*') => {
                lx.bump();
            }
            Some(c) if c.is_alphanumeric() => {}
            _ => return Ok((exps, coef)),
        }
    }
}

/// Renders terms in the same syntax, highest exponent first.
pub fn format_terms(terms: &Terms, vars: &[char]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (exps, c)) in terms.iter().rev().enumerate() {
        let neg = c.sign() == num_bigint::Sign::Minus;
        let mag = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut parts = vec![];
        for (v, &e) in vars.iter().zip(exps) {
            match e {
                0 => {}
                1 => parts.push(v.to_string()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        if !mag.is_one() || parts.is_empty() {
            parts.insert(0, mag.to_string());
        }
        out.push_str(&parts.join("*"));
    }
    out
}
