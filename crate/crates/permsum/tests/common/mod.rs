//! Brute-force oracles shared by the integration suites.
//!
//! Everything here is deliberately independent of the search engine's
//! incremental accounting: permutations are generated by a plain
//! lexicographic successor and values come straight from the exact
//! evaluator, so search verdicts can be checked against an implementation
//! that shares no pruning, symmetry, or scaled-integer code with them.

use std::collections::BTreeSet;

use permsum::{evaluate, Functional, Permutation, Rational};

/// Calls `visit` with every permutation of `{1..n}` in lexicographic order.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[u32])) {
    let mut entries: Vec<u32> = (1..=n as u32).collect();
    loop {
        visit(&entries);
        // Lexicographic successor, in place.
        let Some(i) = (0..n.saturating_sub(1)).rfind(|&i| entries[i] < entries[i + 1]) else {
            return;
        };
        let j = (i + 1..n)
            .rfind(|&j| entries[j] > entries[i])
            .expect("larger suffix entry");
        entries.swap(i, j);
        entries[i + 1..].reverse();
    }
}

/// The exact value set of `f` over all of `S_n`, by plain enumeration.
pub fn brute_force_values(f: Functional, n: usize) -> BTreeSet<Rational> {
    let mut values = BTreeSet::new();
    for_each_permutation(n, |entries| {
        let p = Permutation::new(entries.to_vec()).expect("generated bijection");
        values.insert(evaluate(f, &p).expect("length checked by caller"));
    });
    values
}

/// Whether any permutation of `{1..n}` attains `target` under `f`.
#[allow(dead_code)]
pub fn brute_force_exists(f: Functional, n: usize, target: &Rational) -> bool {
    let mut exists = false;
    for_each_permutation(n, |entries| {
        if exists {
            return;
        }
        let p = Permutation::new(entries.to_vec()).expect("generated bijection");
        if evaluate(f, &p).expect("length checked by caller") == *target {
            exists = true;
        }
    });
    exists
}

/// Tiny deterministic xorshift generator so randomized suites are
/// reproducible without extra dependencies.
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// A uniformly shuffled permutation of `{1..n}`.
    pub fn permutation(&mut self, n: usize) -> Vec<u32> {
        let mut entries: Vec<u32> = (1..=n as u32).collect();
        for i in (1..n).rev() {
            let j = self.below(i + 1);
            entries.swap(i, j);
        }
        entries
    }
}
