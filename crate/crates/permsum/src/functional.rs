//! The seven reciprocal-sum functionals over permutations and their exact
//! evaluation.
//!
//! Each functional sums one reciprocal term per adjacent pair
//! `(π(k), π(k+1))`; the cyclic variants add the wrap-around term for
//! `(π(n), π(1))`. Terms are oriented so that the identity permutation
//! evaluates to `n − 1` under `dif` (each ascent of 1 contributes `+1`):
//!
//! - `dif`, `cycdif`:       `1 / (π(k+1) − π(k))`
//! - `prod`:                `1 / (π(k) · π(k+1))`
//! - `sum`, `cycsum`:       `1 / (π(k) + π(k+1))`
//! - `sqdif`, `cycsqdif`:   `1 / (π(k+1)² − π(k)²)`
//!
//! Entries are distinct, so no term denominator can vanish. All evaluation
//! is exact rational arithmetic.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Permutation;
use crate::rational::Rational;

/// Tag selecting one of the seven functionals.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Functional {
    Dif,
    CycDif,
    Prod,
    Sum,
    CycSum,
    SqDif,
    CycSqDif,
}

/// All seven tags, in display order.
pub const ALL_FUNCTIONALS: [Functional; 7] = [
    Functional::Dif,
    Functional::CycDif,
    Functional::Prod,
    Functional::Sum,
    Functional::CycSum,
    Functional::SqDif,
    Functional::CycSqDif,
];

impl Functional {
    pub fn tag(self) -> &'static str {
        match self {
            Functional::Dif => "dif",
            Functional::CycDif => "cycdif",
            Functional::Prod => "prod",
            Functional::Sum => "sum",
            Functional::CycSum => "cycsum",
            Functional::SqDif => "sqdif",
            Functional::CycSqDif => "cycsqdif",
        }
    }

    /// Whether the wrap-around term `(π(n), π(1))` is included.
    pub fn is_cyclic(self) -> bool {
        matches!(
            self,
            Functional::CycDif | Functional::CycSum | Functional::CycSqDif
        )
    }

    /// Whether reversing a permutation negates the value (difference-style
    /// terms). The remaining tags are reversal-invariant.
    pub fn is_antisymmetric(self) -> bool {
        matches!(
            self,
            Functional::Dif | Functional::CycDif | Functional::SqDif | Functional::CycSqDif
        )
    }

    /// Minimum permutation length: cyclic tags need `n ≥ 3` so the wrap term
    /// never duplicates the single adjacent term of a 2-element permutation.
    pub fn min_len(self) -> usize {
        if self.is_cyclic() {
            3
        } else {
            2
        }
    }

    /// Signed denominator of the term for the directed adjacency `a → b`.
    /// Nonzero whenever `a ≠ b`.
    pub(crate) fn term_denominator(self, a: u32, b: u32) -> i128 {
        let (a, b) = (a as i128, b as i128);
        match self {
            Functional::Dif | Functional::CycDif => b - a,
            Functional::Prod => a * b,
            Functional::Sum | Functional::CycSum => a + b,
            Functional::SqDif | Functional::CycSqDif => b * b - a * a,
        }
    }

    /// The exact term for the directed adjacency `a → b`.
    pub fn term(self, a: u32, b: u32) -> Rational {
        Rational::reciprocal(self.term_denominator(a, b))
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Unknown functional tag in user input.
#[derive(Debug, Error, PartialEq, Eq)]
#[error(
    "unknown functional {0:?} (expected one of dif, cycdif, prod, sum, cycsum, sqdif, cycsqdif)"
)]
pub struct ParseFunctionalError(pub String);

impl FromStr for Functional {
    type Err = ParseFunctionalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_FUNCTIONALS
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| ParseFunctionalError(s.to_string()))
    }
}

/// Rejection reasons for evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("{functional} needs at least {min} entries, got {n}")]
    TooShort {
        functional: Functional,
        n: usize,
        min: usize,
    },
    #[error("prefix must be nonempty")]
    EmptyPrefix,
    #[error("duplicate value {value} in prefix")]
    PrefixDuplicate { value: u32 },
    #[error("prefix entries must be positive, got 0")]
    PrefixZeroEntry,
}

/// Exact value of functional `f` on permutation `p`.
pub fn evaluate(f: Functional, p: &Permutation) -> Result<Rational, EvalError> {
    let n = p.len();
    if n < f.min_len() {
        return Err(EvalError::TooShort {
            functional: f,
            n,
            min: f.min_len(),
        });
    }
    let entries = p.entries();
    let mut acc = Rational::zero();
    for pair in entries.windows(2) {
        acc += &f.term(pair[0], pair[1]);
    }
    if f.is_cyclic() {
        acc += &f.term(entries[n - 1], entries[0]);
    }
    Ok(acc)
}

/// Sum of the terms over consecutive pairs of a prefix only, no wrap term.
///
/// A one-entry prefix evaluates to 0, and extending the prefix by one entry
/// adds exactly one term, which is what the incremental search relies on.
/// On a full permutation this equals [`evaluate`] for non-cyclic tags.
pub fn evaluate_prefix(f: Functional, prefix: &[u32]) -> Result<Rational, EvalError> {
    if prefix.is_empty() {
        return Err(EvalError::EmptyPrefix);
    }
    let mut seen = std::collections::HashSet::new();
    for &v in prefix {
        if v == 0 {
            return Err(EvalError::PrefixZeroEntry);
        }
        if !seen.insert(v) {
            return Err(EvalError::PrefixDuplicate { value: v });
        }
    }
    let mut acc = Rational::zero();
    for pair in prefix.windows(2) {
        acc += &f.term(pair[0], pair[1]);
    }
    Ok(acc)
}

/// A permutation paired with a functional and its exact value, re-derived on
/// construction so a `Witness` can never carry a stale or unverified claim.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    perm: Permutation,
    functional: Functional,
    value: Rational,
}

impl Witness {
    pub fn new(perm: Permutation, functional: Functional) -> Result<Self, EvalError> {
        let value = evaluate(functional, &perm)?;
        Ok(Witness {
            perm,
            functional,
            value,
        })
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn functional(&self) -> Functional {
        self.functional
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }
}
