//! Property suites for the structural operators, the evaluators, and the
//! search engine's soundness knobs.

mod common;

use proptest::prelude::*;

use common::{brute_force_exists, brute_force_values, for_each_permutation};
use permsum::search::{find_witness, SearchOptions, SearchOutcome};
use permsum::{evaluate, evaluate_prefix, Functional, Permutation, Rational, ALL_FUNCTIONALS};

fn perm(entries: &[u32]) -> Permutation {
    Permutation::new(entries.to_vec()).unwrap()
}

fn dif(p: &Permutation) -> Rational {
    evaluate(Functional::Dif, p).unwrap()
}

/// σ with σ(s) = s: a shuffle of {1..s−1} with s appended.
fn link_left_strategy() -> impl Strategy<Value = Permutation> {
    (1usize..=9, any::<u64>()).prop_map(|(s, seed)| {
        let mut rng = common::XorShift::new(seed);
        let mut entries = if s > 1 {
            rng.permutation(s - 1)
        } else {
            Vec::new()
        };
        entries.push(s as u32);
        Permutation::new(entries).unwrap()
    })
}

/// τ with τ(1) = 1: 1 followed by a shuffle of {2..t}.
fn link_right_strategy() -> impl Strategy<Value = Permutation> {
    (2usize..=9, any::<u64>()).prop_map(|(t, seed)| {
        let mut rng = common::XorShift::new(seed);
        let mut entries = vec![1u32];
        entries.extend(rng.permutation(t - 1).into_iter().map(|v| v + 1));
        Permutation::new(entries).unwrap()
    })
}

fn any_perm(max_len: usize) -> impl Strategy<Value = Permutation> {
    (2usize..=max_len, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = common::XorShift::new(seed);
        Permutation::new(rng.permutation(n)).unwrap()
    })
}

proptest! {
    /// The `dif` value of a link is the sum of the pieces' values, for any
    /// pieces meeting the boundary conditions; zero values are not required.
    #[test]
    fn link_adds_dif_values(sigma in link_left_strategy(), tau in link_right_strategy()) {
        let rho = sigma.link(&tau).unwrap();
        prop_assert_eq!(rho.len(), sigma.len() + tau.len() - 1);
        if sigma.len() >= 2 {
            prop_assert_eq!(dif(&rho), &dif(&sigma) + &dif(&tau));
        } else {
            prop_assert_eq!(dif(&rho), dif(&tau));
        }
        if tau.last() as usize == tau.len() {
            prop_assert_eq!(rho.last() as usize, rho.len());
        }
    }

    /// Reversal negates dif and sqdif; complement negates dif only (its
    /// squared differences do not transform simply).
    #[test]
    fn reversal_and_complement_negate(p in any_perm(40)) {
        for f in [Functional::Dif, Functional::SqDif] {
            let v = evaluate(f, &p).unwrap();
            prop_assert_eq!(evaluate(f, &p.reverse()).unwrap(), -&v);
        }
        let v = dif(&p);
        prop_assert_eq!(dif(&p.complement()), -v);
    }

    /// Reversal preserves prod and sum exactly.
    #[test]
    fn reversal_preserves_symmetric_tags(p in any_perm(40)) {
        for f in [Functional::Prod, Functional::Sum] {
            prop_assert_eq!(evaluate(f, &p.reverse()).unwrap(), evaluate(f, &p).unwrap());
        }
    }

    /// Cyclic values are invariant under rotation of the entries.
    #[test]
    fn cyclic_tags_rotation_invariant(p in any_perm(20), shift in 0usize..20) {
        let n = p.len();
        let mut rotated = p.entries().to_vec();
        rotated.rotate_left(shift % n);
        let rotated = Permutation::new(rotated).unwrap();
        if n >= 3 {
            for f in [Functional::CycDif, Functional::CycSum, Functional::CycSqDif] {
                prop_assert_eq!(evaluate(f, &rotated).unwrap(), evaluate(f, &p).unwrap());
            }
        }
    }

    /// A full prefix evaluates like the functional itself, up to the wrap
    /// term for cyclic tags.
    #[test]
    fn prefix_consistent_with_evaluate(p in any_perm(20)) {
        for f in ALL_FUNCTIONALS {
            if p.len() < f.min_len() {
                continue;
            }
            let prefix = evaluate_prefix(f, p.entries()).unwrap();
            let full = evaluate(f, &p).unwrap();
            if f.is_cyclic() {
                let wrap = f.term(p.last(), p.first());
                prop_assert_eq!(full, &prefix + &wrap);
            } else {
                prop_assert_eq!(full, prefix);
            }
        }
    }

    /// Inserting the new maximum letter preserves the prod value exactly
    /// when the straddled neighbors sum to it, and changes it otherwise.
    #[test]
    fn insertion_iff_neighbor_sum(p in any_perm(12), j_seed in any::<u64>()) {
        let n = p.len() + 1;
        if n >= 3 && p.len() >= 2 {
            let j = 1 + (j_seed as usize) % (n - 2);
            let extended = p.insert_letter(j).unwrap();
            let before = evaluate(Functional::Prod, &p).unwrap();
            let after = evaluate(Functional::Prod, &extended).unwrap();
            let neighbors_sum = p.entry(j) + p.entry(j + 1) == n as u32;
            prop_assert_eq!(before == after, neighbors_sum);
        }
    }

    /// Rational text form round-trips.
    #[test]
    fn rational_text_round_trip(num in -10_000i64..10_000, den in 1i64..500) {
        let r = Rational::from_ratio(num.into(), den.into());
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    /// Search verdicts agree with brute force on arbitrary small targets,
    /// with symmetry reduction on or off, either candidate ordering, and
    /// any worker count.
    #[test]
    fn search_verdict_matches_brute_force(
        num in -4i64..=4,
        den in 1i64..=6,
        n in 2usize..=6,
        f_idx in 0usize..7,
        sym in any::<bool>(),
        heuristic in any::<bool>(),
        workers in 1usize..=3,
    ) {
        let f = ALL_FUNCTIONALS[f_idx];
        if n >= f.min_len() {
            let target = Rational::from_ratio(num.into(), den.into());
            let opts = SearchOptions {
                symmetry_reduction: sym,
                heuristic_ordering: heuristic,
                worker_count: workers,
                ..SearchOptions::default()
            };
            let report = find_witness(f, n, &target, &opts).unwrap();
            let expected = brute_force_exists(f, n, &target);
            match report.outcome {
                SearchOutcome::Found(w) => {
                    prop_assert!(expected, "search found a witness brute force says cannot exist");
                    prop_assert_eq!(w.value(), &target);
                }
                SearchOutcome::ExhaustedNonexistent => prop_assert!(!expected,
                    "search claims nonexistence but brute force finds a witness"),
                SearchOutcome::BudgetExceeded => prop_assert!(false, "no budget was configured"),
            }
        }
    }
}

#[test]
fn dif_bound_attained_only_by_monotone_runs() {
    // |dif| <= n−1 with equality exactly at the identity and its reverse.
    for n in 2..=6 {
        let bound = Rational::from_integer(n as i64 - 1);
        common::for_each_permutation(n, |entries| {
            let p = Permutation::new(entries.to_vec()).unwrap();
            let v = dif(&p);
            assert!(v.abs() <= bound, "{p:?} exceeds the bound");
            if v.abs() == bound {
                let identity = Permutation::identity(n);
                assert!(
                    p == identity || p == identity.reverse(),
                    "{p:?} attains the bound"
                );
            }
        });
    }
}

#[test]
fn cyclic_rotation_invariance_exhaustive_small() {
    for n in 3..=6 {
        for f in [Functional::CycDif, Functional::CycSum, Functional::CycSqDif] {
            for_each_permutation(n, |entries| {
                let p = perm(entries);
                let mut rotated = entries.to_vec();
                rotated.rotate_left(1);
                let r = perm(&rotated);
                assert_eq!(evaluate(f, &p).unwrap(), evaluate(f, &r).unwrap());
            });
        }
    }
}

#[test]
fn value_sets_match_brute_force_through_seven() {
    // The engine's enumeration equals plain enumeration for every tag,
    // with and without the rotation/reflection reductions.
    for f in ALL_FUNCTIONALS {
        for n in f.min_len()..=7 {
            let brute: Vec<Rational> = brute_force_values(f, n).into_iter().collect();
            for sym in [true, false] {
                let opts = SearchOptions {
                    symmetry_reduction: sym,
                    ..SearchOptions::default()
                };
                let engine = permsum::search::enumerate_values(f, n, &opts).unwrap();
                assert_eq!(engine.values(), &brute[..], "{f} over S_{n}, sym = {sym}");
            }
        }
    }
}

#[test]
fn evaluate_is_pure() {
    let p = perm(&[2, 1, 4, 5, 9, 3, 7, 6, 8]);
    let first = evaluate(Functional::CycDif, &p).unwrap();
    for _ in 0..3 {
        assert_eq!(evaluate(Functional::CycDif, &p).unwrap(), first);
    }
    assert_eq!(
        p.entries(),
        &[2, 1, 4, 5, 9, 3, 7, 6, 8],
        "inputs are never mutated"
    );
}
