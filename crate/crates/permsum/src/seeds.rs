//! Embedded seed permutations and their load-time verification.
//!
//! Every construction in [`crate::construct`] bottoms out in one of these
//! hand-picked permutations. Each seed carries the exact value it must
//! attain (and, where the constructions rely on them, fixed first/last
//! entries); [`verified`] re-derives every claim with the exact evaluator
//! before any constructor may run, so a corrupted table aborts loudly with
//! the seed's name instead of propagating a wrong permutation.

use once_cell::sync::Lazy;

use crate::functional::{evaluate, Functional};
use crate::perm::Permutation;
use crate::rational::Rational;

/// One verifiable claim about one embedded permutation.
#[derive(Clone, Debug)]
pub struct SeedCheck {
    pub name: &'static str,
    pub perm: Permutation,
    pub functional: Functional,
    pub expected: Rational,
    /// Required first entry, when a construction relies on it.
    pub first: Option<u32>,
    /// Required last entry, when a construction relies on it.
    pub last: Option<u32>,
}

/// Outcome of re-checking one seed.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub functional: Functional,
    pub expected: Rational,
    pub actual: Option<Rational>,
    pub ok: bool,
    pub detail: String,
}

/// The verified seed tables. Zero-difference seeds for the fixed-end and
/// end-shy families, cyclic-difference seeds for small odd lengths, and the
/// product-one seeds including the explicit length-32 expansion.
pub struct SeedTable {
    pub sigma0: Permutation,
    pub sigma1: Permutation,
    pub sigma2: Permutation,
    /// The linking block: identical to `sigma1`.
    pub tau: Permutation,
    /// Index 0 → length 8, …, index 4 → length 12.
    pub alpha: [Permutation; 5],
    /// Lengths 9, 11, 13.
    pub beta: [Permutation; 3],
    /// Lengths 6, 7, 8.
    pub delta: [Permutation; 3],
    pub delta32: Permutation,
}

impl SeedTable {
    /// `alpha` seed of length `n`, for `8 ≤ n ≤ 12`.
    pub fn alpha(&self, n: usize) -> &Permutation {
        &self.alpha[n - 8]
    }

    /// `beta` seed of odd length `n ∈ {9, 11, 13}`.
    pub fn beta(&self, n: usize) -> &Permutation {
        &self.beta[(n - 9) / 2]
    }

    /// `delta` seed of length `n ∈ {6, 7, 8}`.
    pub fn delta(&self, n: usize) -> &Permutation {
        &self.delta[n - 6]
    }
}

fn perm(entries: &[u32]) -> Permutation {
    Permutation::new(entries.to_vec()).expect("embedded seed is a valid permutation")
}

fn raw_table() -> SeedTable {
    SeedTable {
        sigma0: perm(&[1, 4, 2, 5, 3, 6]),
        sigma1: perm(&[1, 3, 2, 4]),
        sigma2: perm(&[1, 3, 6, 4, 7, 5, 2, 8]),
        tau: perm(&[1, 3, 2, 4]),
        alpha: [
            perm(&[1, 2, 4, 8, 6, 5, 3, 7]),
            perm(&[1, 4, 2, 5, 9, 3, 7, 6, 8]),
            perm(&[1, 2, 6, 3, 7, 8, 5, 4, 10, 9]),
            perm(&[1, 2, 3, 4, 6, 5, 9, 8, 7, 11, 10]),
            perm(&[1, 2, 3, 6, 4, 8, 12, 10, 9, 7, 5, 11]),
        ],
        beta: [
            perm(&[2, 1, 4, 5, 9, 3, 7, 6, 8]),
            perm(&[1, 2, 11, 5, 4, 8, 7, 9, 3, 6, 10]),
            perm(&[1, 2, 13, 3, 5, 4, 9, 8, 10, 6, 11, 7, 12]),
        ],
        delta: [
            perm(&[2, 1, 3, 4, 5, 6]),
            perm(&[2, 1, 3, 7, 4, 5, 6]),
            perm(&[6, 4, 1, 2, 7, 5, 3, 8]),
        ],
        delta32: perm(&[
            6, 16, 10, 24, 14, 32, 18, 22, 26, 30, 4, 1, 2, 31, 29, 27, 25, 23, 21, 19, 17, 15, 28,
            13, 11, 20, 9, 7, 12, 5, 3, 8,
        ]),
    }
}

/// Sixteen permutations of lengths 12..27 attaining `cycsqdif = 0`, the
/// smallest lengths where such permutations exist at all.
const CYCSQDIF_ZERO: [&[u32]; 16] = [
    &[1, 4, 3, 5, 7, 2, 12, 8, 10, 11, 9, 6],
    &[1, 2, 12, 8, 9, 6, 11, 10, 7, 5, 13, 4, 3],
    &[1, 2, 12, 9, 6, 4, 3, 13, 8, 7, 5, 10, 14, 11],
    &[1, 9, 2, 3, 12, 10, 11, 5, 4, 14, 6, 15, 13, 8, 7],
    &[1, 3, 2, 4, 5, 11, 16, 14, 10, 8, 6, 12, 9, 15, 13, 7],
    &[1, 3, 2, 4, 5, 9, 15, 6, 12, 16, 11, 10, 14, 13, 8, 7, 17],
    &[
        1, 3, 2, 4, 6, 5, 7, 13, 8, 14, 12, 16, 10, 18, 17, 9, 11, 15,
    ],
    &[
        1, 3, 2, 4, 6, 5, 7, 8, 12, 18, 17, 13, 9, 15, 11, 10, 16, 19, 14,
    ],
    &[
        1, 3, 2, 4, 6, 5, 7, 18, 8, 13, 12, 17, 9, 20, 16, 19, 10, 11, 15, 14,
    ],
    &[
        1, 3, 2, 4, 6, 5, 7, 17, 8, 20, 16, 9, 12, 18, 15, 13, 19, 21, 11, 14, 10,
    ],
    &[
        1, 3, 2, 4, 6, 5, 7, 8, 20, 13, 17, 22, 18, 12, 9, 15, 21, 19, 16, 11, 10, 14,
    ],
    &[
        1, 3, 2, 4, 6, 14, 10, 18, 12, 8, 20, 7, 5, 21, 15, 11, 17, 13, 22, 23, 16, 19, 9,
    ],
    &[
        1, 3, 2, 4, 6, 14, 10, 18, 12, 8, 5, 9, 21, 11, 24, 16, 20, 22, 17, 15, 13, 19, 23, 7,
    ],
    &[
        1, 3, 2, 4, 6, 14, 10, 18, 12, 8, 5, 16, 24, 9, 21, 23, 7, 17, 15, 11, 13, 22, 20, 19, 25,
    ],
    &[
        1, 3, 2, 4, 6, 14, 10, 18, 12, 8, 22, 13, 5, 23, 16, 20, 19, 21, 9, 7, 17, 11, 25, 15, 24,
        26,
    ],
    &[
        1, 3, 2, 4, 6, 14, 10, 18, 12, 8, 22, 13, 9, 5, 11, 21, 23, 16, 26, 19, 25, 27, 17, 15, 24,
        20, 7,
    ],
];

const WITNESS_NAMES: [&str; 16] = [
    "pi12", "pi13", "pi14", "pi15", "pi16", "pi17", "pi18", "pi19", "pi20", "pi21", "pi22", "pi23",
    "pi24", "pi25", "pi26", "pi27",
];

/// The checks backing the construction seeds.
pub fn seed_checks() -> Vec<SeedCheck> {
    let t = raw_table();
    let mut checks = vec![
        SeedCheck {
            name: "sigma0",
            perm: t.sigma0,
            functional: Functional::Dif,
            expected: Rational::zero(),
            first: Some(1),
            last: Some(6),
        },
        SeedCheck {
            name: "sigma1",
            perm: t.sigma1,
            functional: Functional::Dif,
            expected: Rational::zero(),
            first: Some(1),
            last: Some(4),
        },
        SeedCheck {
            name: "sigma2",
            perm: t.sigma2,
            functional: Functional::Dif,
            expected: Rational::zero(),
            first: Some(1),
            last: Some(8),
        },
    ];
    for (i, a) in t.alpha.iter().enumerate() {
        let j = (8 + i) as u32;
        let name: &'static str = ["alpha8", "alpha9", "alpha10", "alpha11", "alpha12"][i];
        checks.push(SeedCheck {
            name,
            perm: a.clone(),
            functional: Functional::Dif,
            expected: Rational::zero(),
            first: Some(1),
            last: Some(j - 1),
        });
    }
    for (i, b) in t.beta.iter().enumerate() {
        let name: &'static str = ["beta9", "beta11", "beta13"][i];
        checks.push(SeedCheck {
            name,
            perm: b.clone(),
            functional: Functional::CycDif,
            expected: Rational::zero(),
            first: None,
            last: None,
        });
    }
    for (i, d) in t.delta.iter().enumerate() {
        let name: &'static str = ["delta6", "delta7", "delta8"][i];
        checks.push(SeedCheck {
            name,
            perm: d.clone(),
            functional: Functional::Prod,
            expected: Rational::one(),
            first: None,
            last: None,
        });
    }
    checks.push(SeedCheck {
        name: "delta32",
        perm: t.delta32,
        functional: Functional::Prod,
        expected: Rational::one(),
        first: None,
        last: None,
    });
    checks
}

/// The checks backing the sixteen embedded `cycsqdif = 0` permutations.
pub fn witness_checks() -> Vec<SeedCheck> {
    CYCSQDIF_ZERO
        .iter()
        .zip(WITNESS_NAMES)
        .map(|(entries, name)| SeedCheck {
            name,
            perm: perm(entries),
            functional: Functional::CycSqDif,
            expected: Rational::zero(),
            first: None,
            last: None,
        })
        .collect()
}

/// The embedded `cycsqdif = 0` permutation of length `n`, for `12 ≤ n ≤ 27`.
pub fn cycsqdif_zero(n: usize) -> Option<Permutation> {
    if !(12..=27).contains(&n) {
        return None;
    }
    Some(perm(CYCSQDIF_ZERO[n - 12]))
}

/// Re-derives every claim in `checks` from the exact evaluator.
pub fn run_checks(checks: &[SeedCheck]) -> Vec<CheckResult> {
    checks
        .iter()
        .map(|c| {
            let actual = evaluate(c.functional, &c.perm).ok();
            let mut problems = Vec::new();
            match &actual {
                Some(v) if *v == c.expected => {}
                Some(v) => problems.push(format!("value {} (expected {})", v, c.expected)),
                None => problems.push("evaluation failed".to_string()),
            }
            if let Some(first) = c.first {
                if c.perm.first() != first {
                    problems.push(format!("first entry {} (expected {first})", c.perm.first()));
                }
            }
            if let Some(last) = c.last {
                if c.perm.last() != last {
                    problems.push(format!("last entry {} (expected {last})", c.perm.last()));
                }
            }
            CheckResult {
                name: c.name,
                functional: c.functional,
                expected: c.expected.clone(),
                actual,
                ok: problems.is_empty(),
                detail: problems.join("; "),
            }
        })
        .collect()
}

static VERIFIED: Lazy<SeedTable> = Lazy::new(|| {
    for result in run_checks(&seed_checks())
        .iter()
        .chain(run_checks(&witness_checks()).iter())
    {
        assert!(
            result.ok,
            "seed table corrupted: {}: {}",
            result.name, result.detail
        );
    }
    raw_table()
});

/// The seed table, verified exactly once per process before first use.
/// Panics (naming the offending seed) if any embedded claim fails.
pub fn verified() -> &'static SeedTable {
    &VERIFIED
}
