//! Deterministic constructions: permutations hitting exact targets under
//! `dif`, `cycdif`, and `prod` for arbitrary lengths, and witnesses for
//! every attainable integer value of `dif`.
//!
//! All constructions bottom out in the verified seed tables
//! ([`crate::seeds`]) and compose them with the structural operators of
//! [`crate::perm`]. Constructors are pure after a one-time lazy build of
//! the small brute-forced base tables.

use std::collections::BTreeMap;

use once_cell::sync::Lazy;
use thiserror::Error;

use crate::functional::{evaluate, Functional};
use crate::perm::Permutation;
use crate::seeds;

/// Rejection reasons for the constructors.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("{what} requires n >= {min}, got {n}")]
    LengthTooSmall {
        what: &'static str,
        n: usize,
        min: usize,
    },
    #[error("target {m} is excluded for n = {n}: no permutation of that length attains it")]
    ExcludedTarget { n: usize, m: i64 },
    #[error("target {m} is out of range for n = {n}: |target| can be at most n - 1")]
    TargetOutOfRange { n: usize, m: i64 },
    /// The product-one insertion step found no adjacent pair with the
    /// required sum. This would falsify the construction itself, so it is
    /// surfaced as a distinct error and never swallowed.
    #[error("no adjacent pair sums to {letter} in {current}; product-one construction falsified")]
    NoInsertionPoint { letter: u32, current: Permutation },
}

/// A permutation with `π(1) = 1`, `π(n) = n`, and `dif` value exactly 0,
/// for every `n ≥ 6`. Built by selecting a seed of length `6`, `4`, or `8`
/// by `n mod 3` and repeatedly linking the 4-block `(1,3,2,4)`, which adds
/// 3 to the length and 0 to the value.
pub fn zero_dif_fixed_ends(n: usize) -> Result<Permutation, ConstructError> {
    if n < 6 {
        return Err(ConstructError::LengthTooSmall {
            what: "zero_dif_fixed_ends",
            n,
            min: 6,
        });
    }
    let t = seeds::verified();
    let mut p = match n % 3 {
        0 => t.sigma0.clone(),
        1 => t.sigma1.clone(),
        _ => t.sigma2.clone(),
    };
    while p.len() < n {
        p = p
            .link(&t.tau)
            .expect("seed ends in its maximum and tau starts at 1");
    }
    debug_assert_eq!(p.len(), n);
    Ok(p)
}

/// A permutation with `π(1) = 1`, `π(n) = n − 1`, and `dif` value exactly
/// 0, for every `n ≥ 8`: the `alpha` seeds cover `8..=12`, and longer
/// lengths link a fixed-end zero block of length `n − 7` with the length-8
/// seed.
pub fn zero_dif_end_shy(n: usize) -> Result<Permutation, ConstructError> {
    if n < 8 {
        return Err(ConstructError::LengthTooSmall {
            what: "zero_dif_end_shy",
            n,
            min: 8,
        });
    }
    let t = seeds::verified();
    if n <= 12 {
        return Ok(t.alpha(n).clone());
    }
    let left = zero_dif_fixed_ends(n - 7)?;
    Ok(left
        .link(t.alpha(8))
        .expect("left block ends in its maximum"))
}

/// A permutation whose `cycdif` value is exactly 0, for every `n ≥ 8`.
///
/// Even `n = 2k`: `(1, …, k, 2k, 2k−1, …, k+1)`; the ascent run and the
/// descent run cancel, and the junction term `1/k` cancels the wrap term.
/// Odd `n ∈ {9, 11, 13}`: a `beta` seed. Odd `n = 2k+1 ≥ 15`: the
/// shift-reverse concatenation of a fixed-end zero block of length `k`
/// with an end-shy zero block of length `k + 1`.
pub fn zero_cycdif(n: usize) -> Result<Permutation, ConstructError> {
    if n < 8 {
        return Err(ConstructError::LengthTooSmall {
            what: "zero_cycdif",
            n,
            min: 8,
        });
    }
    if n.is_multiple_of(2) {
        let k = (n / 2) as u32;
        let entries: Vec<u32> = (1..=k).chain((k + 1..=2 * k).rev()).collect();
        return Ok(Permutation::new(entries).expect("two runs cover 1..=2k"));
    }
    if n <= 13 {
        return Ok(seeds::verified().beta(n).clone());
    }
    let k = n / 2;
    let sigma = zero_dif_fixed_ends(k)?;
    let tau = zero_dif_end_shy(k + 1)?;
    Ok(sigma
        .shift_reverse_concat(&tau)
        .expect("|tau| = |sigma| + 1"))
}

/// Insertion position rule for the product-one chain: the ordered adjacent
/// pair `(a, b)` with `a + b = m` between which the new maximum `m` goes.
///
/// The rule follows the residue-class structure visible in the length-32
/// expansion seed: odd letters extend the descending odd chain behind the
/// entry 2, letters `≡ 2 (mod 4)` extend the even chain in front of the
/// entry 4, and multiples of 4 split an interior pair of the even chain
/// (`m ≡ 0 (mod 8)`) or of the odd chain (`m ≡ 4 (mod 8)`). Each rule
/// re-establishes the adjacency the next letter of its class needs, so the
/// chain never sticks.
fn insertion_pair(m: u32) -> (u32, u32) {
    if m % 2 == 1 {
        (2, m - 2)
    } else if m % 4 == 2 {
        (m - 4, 4)
    } else if m.is_multiple_of(8) {
        (m / 2 - 2, m / 2 + 2)
    } else {
        (m / 2 + 1, m / 2 - 1)
    }
}

/// The full insertion chain from length 8 up to length `n` (so index `i`
/// holds the permutation of length `8 + i`). Requires `n ≥ 8`.
///
/// Every step inserts the new maximum between an adjacent pair summing to
/// it, which leaves the `prod` value unchanged; the chain therefore holds
/// the value 1 at every intermediate length, not merely at the end.
pub fn prod_one_steps(n: usize) -> Result<Vec<Permutation>, ConstructError> {
    if n < 8 {
        return Err(ConstructError::LengthTooSmall {
            what: "prod_one_steps",
            n,
            min: 8,
        });
    }
    let mut chain = Vec::with_capacity(n - 7);
    chain.push(seeds::verified().delta(8).clone());
    for m in 9..=n as u32 {
        let current = chain.last().expect("chain starts nonempty");
        let (a, b) = insertion_pair(m);
        let j = current
            .entries()
            .windows(2)
            .position(|w| w[0] == a && w[1] == b)
            .map(|idx| idx + 1)
            .ok_or_else(|| ConstructError::NoInsertionPoint {
                letter: m,
                current: current.clone(),
            })?;
        chain.push(current.insert_letter(j).expect("interior position"));
    }
    Ok(chain)
}

/// A permutation whose `prod` value is exactly 1, for every `n ≥ 6`:
/// dedicated seeds for lengths 6 and 7, the insertion chain for `n ≥ 8`.
pub fn prod_one(n: usize) -> Result<Permutation, ConstructError> {
    if n < 6 {
        return Err(ConstructError::LengthTooSmall {
            what: "prod_one",
            n,
            min: 6,
        });
    }
    if n <= 7 {
        return Ok(seeds::verified().delta(n).clone());
    }
    Ok(prod_one_steps(n)?.pop().expect("chain reaches n"))
}

/// Integer values of `dif` attainable over permutations of `{1..n}`:
/// `±2` for `n = 3`; `±1, ±2, ±4` for `n = 5`; otherwise every `m` with
/// `|m| ≤ n − 1` except `|m| = n − 2`.
pub fn admissible_integers(n: usize) -> Vec<i64> {
    let top = n as i64 - 1;
    let magnitudes: Vec<i64> = match n {
        0 | 1 => return Vec::new(),
        3 => vec![2],
        5 => vec![1, 2, 4],
        _ => (0..=top).filter(|&j| j != top - 1).collect(),
    };
    let mut all: Vec<i64> = magnitudes.iter().filter(|&&m| m > 0).map(|&m| -m).collect();
    all.extend(magnitudes);
    all.sort_unstable();
    all
}

fn check_admissible(n: usize, m: i64) -> Result<(), ConstructError> {
    if n < 2 {
        return Err(ConstructError::LengthTooSmall {
            what: "integer_witness",
            n,
            min: 2,
        });
    }
    let a = m.unsigned_abs() as i64;
    if a > n as i64 - 1 {
        return Err(ConstructError::TargetOutOfRange { n, m });
    }
    let excluded = match n {
        3 => a != 2,
        5 => !matches!(a, 1 | 2 | 4),
        _ => a == n as i64 - 2,
    };
    if excluded {
        return Err(ConstructError::ExcludedTarget { n, m });
    }
    Ok(())
}

/// Brute-forced witnesses for all integer `dif` values at `n ≤ 6`, keyed by
/// `(n, value)`. For each value the lexicographically first witness ending
/// in `n` is kept when one exists (every nonnegative value has one, which
/// is what keeps the append-`n` induction sound), falling back to the
/// lexicographically first witness overall.
static SMALL_WITNESSES: Lazy<BTreeMap<(usize, i64), Permutation>> = Lazy::new(|| {
    let mut table = BTreeMap::new();
    for n in 2..=6usize {
        let mut entries: Vec<u32> = (1..=n as u32).collect();
        // Lexicographic order so the first hit is the canonical witness.
        loop {
            let p = Permutation::new(entries.clone()).expect("generated bijection");
            let value = evaluate(Functional::Dif, &p).expect("n >= 2");
            if let Some(m) = value.to_i64() {
                let ends_in_n = p.last() as usize == n;
                table
                    .entry((n, m))
                    .and_modify(|held: &mut Permutation| {
                        if ends_in_n && (held.last() as usize) != n {
                            *held = p.clone();
                        }
                    })
                    .or_insert(p);
            }
            if !next_lex(&mut entries) {
                break;
            }
        }
    }
    table
});

/// Advances to the lexicographic successor in place; false at the last one.
fn next_lex(entries: &mut [u32]) -> bool {
    let n = entries.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rfind(|&i| entries[i] < entries[i + 1]) else {
        return false;
    };
    let j = (i + 1..n)
        .rfind(|&j| entries[j] > entries[i])
        .expect("suffix has a larger entry");
    entries.swap(i, j);
    entries[i + 1..].reverse();
    true
}

/// A permutation of `{1..n}` whose `dif` value is exactly `m`, for every
/// admissible `(n, m)`.
///
/// Nonnegative targets are built so the result ends in `n` (the identity
/// for `m = n − 1`, a fixed-end zero block for `m = 0`, and otherwise a
/// length-`(n−1)` witness for `m − 1` with `n` appended, which adds exactly
/// `+1`); negative targets are the reverse of the witness for `−m`.
pub fn integer_witness(n: usize, m: i64) -> Result<Permutation, ConstructError> {
    check_admissible(n, m)?;
    if m < 0 {
        return Ok(integer_witness(n, -m)?.reverse());
    }
    if n <= 6 {
        let p = SMALL_WITNESSES
            .get(&(n, m))
            .unwrap_or_else(|| panic!("brute-forced table missing admissible value {m} at n = {n}"))
            .clone();
        return Ok(p);
    }
    if m == 0 {
        return zero_dif_fixed_ends(n);
    }
    if m == n as i64 - 1 {
        return Ok(Permutation::identity(n));
    }
    let tau = integer_witness(n - 1, m - 1)?;
    debug_assert_eq!(tau.last() as usize, n - 1);
    let mut entries = tau.entries().to_vec();
    entries.push(n as u32);
    Ok(Permutation::new(entries).expect("appending n to a permutation of 1..n-1"))
}
