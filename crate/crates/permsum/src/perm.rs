//! Permutations of `{1..n}` and the structural operators used by every
//! construction: reversal, complement, linking, letter insertion, and
//! shift-reverse concatenation.
//!
//! Permutations are immutable values; every operator returns a fresh value,
//! so they can be shared freely across search workers. Positions and entry
//! values are 1-based throughout the public surface.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A permutation of `{1, 2, …, n}`, stored as the sequence `π(1), …, π(n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<u32>,
}

/// Rejection reasons for [`Permutation::new`] and the structural operators.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("a permutation must have at least one entry")]
    Empty,
    #[error("duplicate value {value}")]
    DuplicateValue { value: u32 },
    #[error("value {value} outside 1..={n}")]
    ValueOutOfRange { value: u32, n: usize },
    #[error(
        "link requires the left permutation to end in its own length (found {last}, length {len})"
    )]
    LinkLeftEnd { last: u32, len: usize },
    #[error("link requires the right permutation to start at 1 (found {first})")]
    LinkRightStart { first: u32 },
    #[error("insertion position {j} outside 1..={max}")]
    InsertPositionOutOfRange { j: usize, max: usize },
    #[error(
        "shift-reverse concatenation needs |tau| = |sigma| + 1 (got {sigma_len} and {tau_len})"
    )]
    ConcatLengthMismatch { sigma_len: usize, tau_len: usize },
    #[error("empty permutation text")]
    ParseEmpty,
    #[error("invalid entry {text:?} in permutation text")]
    ParseEntry { text: String },
}

impl Permutation {
    /// Validates that `entries` is a bijection on `{1..n}` and wraps it.
    pub fn new(entries: Vec<u32>) -> Result<Self, PermError> {
        if entries.is_empty() {
            return Err(PermError::Empty);
        }
        let n = entries.len();
        let mut seen = vec![false; n];
        for &v in &entries {
            if v == 0 || v as usize > n {
                return Err(PermError::ValueOutOfRange { value: v, n });
            }
            if std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(PermError::DuplicateValue { value: v });
            }
        }
        Ok(Permutation { entries })
    }

    /// The identity permutation `(1, 2, …, n)`. Panics if `n == 0`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity of empty set");
        Permutation {
            entries: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false: the empty permutation is rejected at construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `π(pos)` with 1-based `pos`. Panics when `pos` is 0 or exceeds `n`.
    pub fn entry(&self, pos: usize) -> u32 {
        assert!(
            pos >= 1 && pos <= self.entries.len(),
            "position {pos} out of range"
        );
        self.entries[pos - 1]
    }

    pub fn first(&self) -> u32 {
        self.entries[0]
    }

    pub fn last(&self) -> u32 {
        *self.entries.last().expect("nonempty")
    }

    /// The reverse `(π(n), …, π(1))`.
    pub fn reverse(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        Permutation { entries }
    }

    /// The complement: entry `k` becomes `n + 1 − π(k)`.
    pub fn complement(&self) -> Self {
        let n = self.entries.len() as u32;
        Permutation {
            entries: self.entries.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    /// Joins `self` (which must end in its own length `s`) with `tau` (which
    /// must start at 1) into a permutation of length `s + t − 1`: the first
    /// `s` entries are `self`, and entry `s + i` is `s − 1 + tau(i + 1)`.
    ///
    /// If `tau` also ends in `t`, the result ends in `s + t − 1`, so links
    /// can be chained.
    pub fn link(&self, tau: &Permutation) -> Result<Self, PermError> {
        let s = self.len();
        if self.last() as usize != s {
            return Err(PermError::LinkLeftEnd {
                last: self.last(),
                len: s,
            });
        }
        if tau.first() != 1 {
            return Err(PermError::LinkRightStart { first: tau.first() });
        }
        let shift = s as u32 - 1;
        let mut entries = self.entries.clone();
        entries.extend(tau.entries[1..].iter().map(|&v| shift + v));
        Ok(Permutation { entries })
    }

    /// Inserts the new maximum letter `n = |self| + 1` between positions `j`
    /// and `j + 1`, for `1 ≤ j ≤ n − 2`. Prepending and appending are
    /// excluded: the insertion is strictly interior.
    pub fn insert_letter(&self, j: usize) -> Result<Self, PermError> {
        let n = self.len() + 1;
        if n < 3 || j < 1 || j > n - 2 {
            return Err(PermError::InsertPositionOutOfRange {
                j,
                max: n.saturating_sub(2),
            });
        }
        let mut entries = Vec::with_capacity(n);
        entries.extend_from_slice(&self.entries[..j]);
        entries.push(n as u32);
        entries.extend_from_slice(&self.entries[j..]);
        Ok(Permutation { entries })
    }

    /// Concatenates `self` (of length `k`) with the reverse of `tau` (of
    /// length `k + 1`) shifted up by `k`, producing a permutation of length
    /// `2k + 1`. The appended block is `(k+tau(k+1), …, k+tau(1))`, so the
    /// result ends in `k + tau(1)`.
    pub fn shift_reverse_concat(&self, tau: &Permutation) -> Result<Self, PermError> {
        let k = self.len();
        if tau.len() != k + 1 {
            return Err(PermError::ConcatLengthMismatch {
                sigma_len: k,
                tau_len: tau.len(),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(tau.entries.iter().rev().map(|&v| k as u32 + v));
        Ok(Permutation { entries })
    }
}

impl fmt::Display for Permutation {
    /// The interchange format: comma-separated 1-based values, e.g. `1,4,2,5,3,6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PermError::ParseEmpty);
        }
        let entries = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<u32>().map_err(|_| PermError::ParseEntry {
                    text: part.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(entries)
    }
}
