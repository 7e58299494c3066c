//! Parameter words over a finite ordered alphabet, the substitution monoid,
//! partial substitution and the correspondence with rigid surjections.
//!
//! An m-parameter word of length n over an alphabet of k letters is a word
//! over letters and variables in which every variable `Var(0)..Var(m-1)`
//! occurs and first occurrences appear in increasing variable order.
//! Variables are 0-indexed. Words with m = 0 (no variables) are admitted:
//! they arise as outputs of the truncating partial substitution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rigidsurj::RigidSurjection;

/// One position of a parameter word: a letter of the alphabet or a variable.
/// Letters order before variables, matching a₁ < … < a_k < x₁ < … < x_m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Letter(usize),
    Var(usize),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Letter(i) => write!(f, "L{i}"),
            Symbol::Var(j) => write!(f, "V{j}"),
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let parse = |rest: &str| rest.parse::<usize>().ok();
        match s.split_at_checked(1) {
            Some(("L", rest)) => parse(rest).map(Symbol::Letter),
            Some(("V", rest)) => parse(rest).map(Symbol::Var),
            _ => None,
        }
        .ok_or_else(|| serde::de::Error::custom(format!("bad symbol {s:?}")))
    }
}

/// An m-parameter word of positive length over `alphabet` letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord", into = "RawWord")]
pub struct ParameterWord {
    alphabet: usize,
    params: usize,
    symbols: Vec<Symbol>,
}

#[derive(Serialize, Deserialize)]
struct RawWord {
    alphabet: usize,
    symbols: Vec<Symbol>,
}

impl TryFrom<RawWord> for ParameterWord {
    type Error = Error;
    fn try_from(raw: RawWord) -> Result<Self> {
        ParameterWord::new(raw.alphabet, raw.symbols)
    }
}

impl From<ParameterWord> for RawWord {
    fn from(w: ParameterWord) -> Self {
        RawWord {
            alphabet: w.alphabet,
            symbols: w.symbols,
        }
    }
}

impl fmt::Display for ParameterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl ParameterWord {
    /// Validates the word: letters within the alphabet, every variable below
    /// the inferred parameter count occurring, first occurrences in order.
    pub fn new(alphabet: usize, symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Invalid {
                kind: "parameter word",
                reason: "length must be positive".to_string(),
            });
        }
        let mut next_var = 0;
        for s in &symbols {
            match *s {
                Symbol::Letter(i) => {
                    if i >= alphabet {
                        return Err(Error::Invalid {
                            kind: "parameter word",
                            reason: format!("letter L{i} outside alphabet of size {alphabet}"),
                        });
                    }
                }
                Symbol::Var(j) => {
                    if j > next_var {
                        return Err(Error::Invalid {
                            kind: "parameter word",
                            reason: format!("V{j} occurs before V{next_var}"),
                        });
                    }
                    if j == next_var {
                        next_var += 1;
                    }
                }
            }
        }
        Ok(ParameterWord {
            alphabet,
            params: next_var,
            symbols,
        })
    }

    /// The identity word x₀x₁…x_{m-1}.
    pub fn identity(alphabet: usize, m: usize) -> Result<Self> {
        ParameterWord::new(alphabet, (0..m).map(Symbol::Var).collect())
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always positive
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }
}

/// All m-parameter words of length n over k letters, lexicographic by
/// symbol vector.
pub fn enumerate_parameter_words(k: usize, n: usize, m: usize) -> Result<Vec<ParameterWord>> {
    if n < m {
        return Err(Error::DomainTooShort { n, m });
    }
    if n == 0 {
        return Err(Error::Invalid {
            kind: "parameter word",
            reason: "length must be positive".to_string(),
        });
    }
    let mut out = Vec::new();
    let mut symbols = Vec::with_capacity(n);
    extend_word(k, n, m, 0, &mut symbols, &mut out);
    Ok(out)
}

fn extend_word(
    k: usize,
    n: usize,
    m: usize,
    seen_vars: usize,
    symbols: &mut Vec<Symbol>,
    out: &mut Vec<ParameterWord>,
) {
    if symbols.len() == n {
        if seen_vars == m {
            out.push(ParameterWord {
                alphabet: k,
                params: m,
                symbols: symbols.clone(),
            });
        }
        return;
    }
    if seen_vars + (n - symbols.len()) < m {
        return; // not enough room for the missing variables
    }
    for i in 0..k {
        symbols.push(Symbol::Letter(i));
        extend_word(k, n, m, seen_vars, symbols, out);
        symbols.pop();
    }
    let top = if seen_vars < m { seen_vars } else { m.saturating_sub(1) };
    for j in 0..=top {
        if m == 0 {
            break;
        }
        symbols.push(Symbol::Var(j));
        extend_word(k, n, m, seen_vars.max(j + 1), symbols, out);
        symbols.pop();
    }
}

/// Full substitution u·v: every occurrence of Var(i) in u is replaced by
/// v's i-th symbol. When u has no variables the substitution is vacuous and
/// any v is accepted; otherwise v must have length u.params.
pub fn substitute(u: &ParameterWord, v: &ParameterWord) -> Result<ParameterWord> {
    if u.alphabet() != v.alphabet() {
        return Err(Error::SubstitutionMismatch(
            "alphabets differ".to_string(),
        ));
    }
    if u.params() == 0 {
        return Ok(u.clone());
    }
    if v.len() != u.params() {
        return Err(Error::SubstitutionMismatch(format!(
            "u has {} parameters but v has length {}",
            u.params(),
            v.len()
        )));
    }
    let symbols = u
        .symbols()
        .iter()
        .map(|s| match *s {
            Symbol::Letter(i) => Symbol::Letter(i),
            Symbol::Var(i) => v.symbols()[i],
        })
        .collect();
    ParameterWord::new(u.alphabet(), symbols)
        .map_err(|e| Error::Internal(format!("substitution broke word invariants: {e}")))
}

/// Partial substitution u⋆v with ℓ = |v| ≤ u.params: substitutes v for the
/// first ℓ variables and truncates u before the first occurrence of
/// Var(ℓ), if that variable occurs.
pub fn partial_substitute(u: &ParameterWord, v: &ParameterWord) -> Result<ParameterWord> {
    if u.alphabet() != v.alphabet() {
        return Err(Error::SubstitutionMismatch(
            "alphabets differ".to_string(),
        ));
    }
    let l = v.len();
    if l > u.params() {
        return Err(Error::SubstitutionMismatch(format!(
            "v has length {} but u has only {} parameters",
            l,
            u.params()
        )));
    }
    if l == u.params() {
        return substitute(u, v);
    }
    let cut = u
        .symbols()
        .iter()
        .position(|s| *s == Symbol::Var(l))
        .expect("Var(l) occurs for l < params");
    if cut == 0 {
        return Err(Error::EmptyWord);
    }
    let symbols = u.symbols()[..cut]
        .iter()
        .map(|s| match *s {
            Symbol::Letter(i) => Symbol::Letter(i),
            Symbol::Var(i) => v.symbols()[i],
        })
        .collect();
    ParameterWord::new(u.alphabet(), symbols)
}

/// The rigid surjection f_u attached to u: letters first, then positions.
/// The k letters map identically; position j maps to its letter, or to
/// k + i for Var(i).
pub fn to_rigid_surjection(u: &ParameterWord) -> RigidSurjection {
    let k = u.alphabet();
    let mut values: Vec<usize> = (0..k).collect();
    for s in u.symbols() {
        values.push(match *s {
            Symbol::Letter(i) => i,
            Symbol::Var(j) => k + j,
        });
    }
    RigidSurjection::new(values, k + u.params())
        .expect("f_u is rigid by construction")
}
