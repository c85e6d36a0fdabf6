//! Exhaustive and pruned backtracking search: witness finding for arbitrary
//! `(functional, n, target)` triples, exact value-set enumeration, and the
//! integer-value characterization of `dif`.
//!
//! # Exactness
//!
//! The search never touches floating point and never trusts its own
//! bookkeeping: partial sums are maintained as integers scaled by the fixed
//! common denominator `L = lcm` of every term denominator the functional can
//! produce at size `n`, so a value is hit iff the scaled integers are equal.
//! An `i128` engine handles every desk-scale search; when `L`, the target,
//! or the intermediate bounds would not comfortably fit, the same generic
//! engine runs over `BigInt`. Every witness that leaves this module is
//! re-verified through the independent [`evaluate`] path.
//!
//! # Pruning and symmetry
//!
//! A node is cut only when the target is provably unreachable from it: with
//! `r` edges still to place, signed functionals can move the sum by at most
//! `r` times the largest remaining term magnitude, and the all-positive
//! functionals must land inside `[partial + r·min_term, partial + r·max_term]`.
//! Symmetry reduction canonicalizes rotations (cyclic tags: fix `π(1) = 1`)
//! and reflections (reversal-invariant tags always, reversal-negated tags
//! when the target is 0). Verdicts with and without reduction agree; the
//! test suites check this against an unpruned brute-force oracle.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::construct::{self, ConstructError};
use crate::functional::{evaluate, Functional, Witness};
use crate::perm::Permutation;
use crate::rational::Rational;

/// Largest permutation length the search accepts. The state space is `n!`;
/// beyond this limit no budget could make progress meaningful.
pub const MAX_SEARCH_LEN: usize = 64;

/// Exhaustion threshold for [`integer_values`]: up to this `n` the integer
/// values are read off a full enumeration of `S_n`, beyond it they are
/// produced constructively and re-verified.
pub const INTEGER_VALUES_EXHAUSTIVE_MAX: usize = 9;

/// Periodic report for long searches.
#[derive(Clone, Debug)]
pub struct Progress {
    /// Nodes explored so far across all workers.
    pub nodes: u64,
    /// Depth of the reporting worker's current prefix.
    pub depth: usize,
    /// Smallest `|target − partial|` seen so far, if any node was evaluated.
    pub best_deviation: Option<Rational>,
}

pub type ProgressHook = Arc<dyn Fn(&Progress) + Send + Sync>;

/// Knobs for [`find_witness`] and [`enumerate_values`].
///
/// With neither `time_budget` nor `node_budget` set the search runs to
/// exhaustion, however long that takes; exhaustive modes over small `n` are
/// the intended use of that configuration.
#[derive(Clone)]
pub struct SearchOptions {
    pub time_budget: Option<Duration>,
    pub node_budget: Option<u64>,
    pub worker_count: usize,
    pub symmetry_reduction: bool,
    /// Stop at the first witness instead of exhausting the space to report
    /// the lexicographically smallest one.
    pub first_only: bool,
    /// Order candidate entries by how much they shrink `|target − partial|`
    /// instead of ascending value order. Same verdicts, different hit order.
    pub heuristic_ordering: bool,
    pub progress: Option<ProgressHook>,
    /// Nodes between progress callbacks.
    pub progress_interval: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            time_budget: None,
            node_budget: None,
            worker_count: 1,
            symmetry_reduction: true,
            first_only: true,
            heuristic_ordering: false,
            progress: None,
            progress_interval: 1 << 22,
        }
    }
}

/// What a completed search established.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Witness),
    /// The (symmetry-reduced) space was fully traversed: no witness exists.
    /// This is a mathematical statement, not a timeout.
    ExhaustedNonexistent,
    /// A budget was hit first: inconclusive.
    BudgetExceeded,
}

/// A search outcome with its accounting.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.outcome, SearchOutcome::ExhaustedNonexistent)
    }
}

/// The exact set of values a functional attains over `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSet {
    n: usize,
    functional: Functional,
    values: Vec<Rational>,
}

impl ValueSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn functional(&self) -> Functional {
        self.functional
    }

    /// All attained values, ascending.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.values.binary_search(value).is_ok()
    }

    /// Whether `v ∈ set ⇒ −v ∈ set` holds, as it must for the
    /// reversal-negated functionals.
    pub fn is_negation_closed(&self) -> bool {
        self.values.iter().all(|v| self.contains(&-v))
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{functional} needs n >= {min}, got {n}")]
    InvalidLength {
        functional: Functional,
        n: usize,
        min: usize,
    },
    #[error("n = {n} exceeds the search limit {max}")]
    LengthTooLarge { n: usize, max: usize },
    #[error("invalid search options: {0}")]
    BadOptions(String),
    #[error("budget exceeded after {nodes} nodes; enumeration incomplete ({} values so far)", partial.len())]
    EnumerationBudget { partial: ValueSet, nodes: u64 },
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

// ---------------------------------------------------------------------------
// Scaled exact arithmetic
// ---------------------------------------------------------------------------

/// Integer arithmetic over the fixed common denominator: implemented by
/// `i128` for desk-scale searches and `BigInt` beyond.
trait Scaled: Clone + Ord + std::hash::Hash + Send + Sync {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn abs_val(&self) -> Self;
    fn mul_count(&self, k: usize) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl Scaled for i128 {
    fn zero() -> Self {
        0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn abs_val(&self) -> Self {
        i128::abs(*self)
    }
    fn mul_count(&self, k: usize) -> Self {
        self * k as i128
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scaled for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }
    fn mul_count(&self, k: usize) -> Self {
        self * BigInt::from(k)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// `lcm` of every term denominator the functional can produce on distinct
/// values from `1..=n`.
fn common_denominator(f: Functional, n: usize) -> BigInt {
    let mut l = BigInt::from(1);
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            l = l.lcm(&BigInt::from(f.term_denominator(a, b)));
        }
    }
    l
}

/// Scaled term table for all ordered pairs: entry `(a-1)*n + (b-1)` holds
/// `L / term_denominator(a → b)`.
fn term_table<S: Scaled>(
    f: Functional,
    n: usize,
    l: &BigInt,
    convert: impl Fn(&BigInt) -> S,
) -> Vec<S> {
    let mut table = vec![S::zero(); n * n];
    for a in 1..=n as u32 {
        for b in 1..=n as u32 {
            if a == b {
                continue;
            }
            let d = BigInt::from(f.term_denominator(a, b));
            table[((a - 1) as usize) * n + (b - 1) as usize] = convert(&(l / d));
        }
    }
    table
}

// ---------------------------------------------------------------------------
// Search plan and shared coordination state
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Plan {
    n: usize,
    cyclic: bool,
    /// prod/sum/cycsum: every term is positive.
    positive: bool,
    /// Fix `π(1) = 1` (cyclic tags under symmetry reduction).
    rotate: bool,
    /// Canonicalize reflections: `π(1) < π(n)` (non-cyclic) or
    /// `π(2) < π(n)` (cyclic, with rotation).
    reflect: bool,
    heuristic: bool,
    first_only: bool,
    /// Witness search (prune against a target) vs. full enumeration.
    enumerate: bool,
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    budget_hit: AtomicBool,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
    progress: Option<ProgressHook>,
    progress_interval: u64,
    progress_next: AtomicU64,
    best_deviation: Mutex<Option<BigInt>>,
}

impl Shared {
    fn new(opts: &SearchOptions, start: Instant) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            budget_hit: AtomicBool::new(false),
            node_budget: opts.node_budget,
            deadline: opts.time_budget.map(|d| start + d),
            progress: opts.progress.clone(),
            progress_interval: opts.progress_interval,
            progress_next: AtomicU64::new(opts.progress_interval),
            best_deviation: Mutex::new(None),
        }
    }
}

/// Why a worker unwound before exhausting its subtrees.
enum Stop {
    /// Budget exhausted (node or time).
    Budget,
    /// Another worker requested shutdown (first witness found, or budget).
    External,
}

struct WorkerOutput<S> {
    /// Lexicographically smallest full sequence this worker accepted.
    best: Option<Vec<u32>>,
    /// Distinct leaf values (enumeration mode only).
    values: HashSet<S>,
    /// True iff the worker finished every seed without being stopped.
    exhausted: bool,
}

// ---------------------------------------------------------------------------
// The DFS worker
// ---------------------------------------------------------------------------

struct Worker<'a, S: Scaled> {
    plan: Plan,
    terms: &'a [S],
    target: &'a S,
    shared: &'a Shared,
    l: &'a BigInt,
    used: Vec<bool>,
    seq: Vec<u32>,
    local_nodes: u64,
    local_best_dev: Option<S>,
    out: WorkerOutput<S>,
    /// Reusable candidate buffers, one per depth (heuristic ordering).
    bufs: Vec<Vec<(S, u32)>>,
}

impl<'a, S: Scaled> Worker<'a, S> {
    fn new(plan: Plan, terms: &'a [S], target: &'a S, shared: &'a Shared, l: &'a BigInt) -> Self {
        Worker {
            plan,
            terms,
            target,
            shared,
            l,
            used: vec![false; plan.n + 1],
            seq: Vec::with_capacity(plan.n),
            local_nodes: 0,
            local_best_dev: None,
            out: WorkerOutput {
                best: None,
                values: HashSet::new(),
                exhausted: true,
            },
            bufs: (0..plan.n).map(|_| Vec::new()).collect(),
        }
    }

    #[inline]
    fn term(&self, a: u32, b: u32) -> &S {
        &self.terms[((a - 1) as usize) * self.plan.n + (b - 1) as usize]
    }

    /// Counts one node; flushes counters and polls budgets periodically.
    fn tick(&mut self) -> Result<(), Stop> {
        self.local_nodes += 1;
        if self.local_nodes & 1023 == 0 {
            self.flush()?;
        } else if self.shared.stop.load(Ordering::Relaxed) {
            return Err(Stop::External);
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), Stop> {
        let total = self.shared.nodes.fetch_add(1024, Ordering::Relaxed) + 1024;
        if self.shared.stop.load(Ordering::Relaxed) {
            return Err(Stop::External);
        }
        if let Some(budget) = self.shared.node_budget {
            if total >= budget {
                self.shared.budget_hit.store(true, Ordering::Relaxed);
                self.shared.stop.store(true, Ordering::Relaxed);
                return Err(Stop::Budget);
            }
        }
        if let Some(deadline) = self.shared.deadline {
            if Instant::now() >= deadline {
                self.shared.budget_hit.store(true, Ordering::Relaxed);
                self.shared.stop.store(true, Ordering::Relaxed);
                return Err(Stop::Budget);
            }
        }
        self.report_progress(total);
        Ok(())
    }

    fn report_progress(&mut self, total: u64) {
        let Some(hook) = &self.shared.progress else {
            return;
        };
        let next = self.shared.progress_next.load(Ordering::Relaxed);
        if total < next {
            return;
        }
        if self
            .shared
            .progress_next
            .compare_exchange(
                next,
                next + self.shared.progress_interval,
                Ordering::Relaxed,
                Ordering::Relaxed,
            )
            .is_err()
        {
            return;
        }
        let best = {
            let mut guard = self.shared.best_deviation.lock().expect("progress lock");
            if let Some(dev) = &self.local_best_dev {
                let dev = dev.to_bigint();
                match guard.as_ref() {
                    Some(held) if *held <= dev => {}
                    _ => *guard = Some(dev),
                }
            }
            guard.clone()
        };
        let best_deviation = best.map(|dev| Rational::from_ratio(dev, self.l.clone()));
        hook(&Progress {
            nodes: total,
            depth: self.seq.len(),
            best_deviation,
        });
    }

    /// Scans the values still relevant to future edges (unused entries plus
    /// the current endpoint and, for cyclic tags, the first entry) and
    /// returns the largest and smallest possible single-term magnitudes and
    /// the largest unused value.
    fn remaining_profile(&self) -> RemainingProfile<S> {
        let n = self.plan.n;
        let last = self.seq.last().copied();
        let first = if self.plan.cyclic {
            self.seq.first().copied()
        } else {
            None
        };
        let mut prev: Option<u32> = None;
        let mut penult: Option<u32> = None;
        let mut max_term: Option<S> = None;
        let mut max_unused = 0u32;
        for v in 1..=n as u32 {
            let relevant = !self.used[v as usize] || last == Some(v) || first == Some(v);
            if !relevant {
                continue;
            }
            if !self.used[v as usize] {
                max_unused = v;
            }
            if let Some(p) = prev {
                // For every functional the extreme single-term magnitudes
                // live on consecutive values of the relevant set.
                let t = self.term(p, v).abs_val();
                if max_term.as_ref().is_none_or(|m| *m < t) {
                    max_term = Some(t);
                }
            }
            penult = prev;
            prev = Some(v);
        }
        let min_term = match (penult, prev) {
            (Some(a), Some(b)) => Some(self.term(a, b).abs_val()),
            _ => None,
        };
        RemainingProfile {
            max_term,
            min_term,
            max_unused,
        }
    }

    /// True iff no completion of the current prefix can reach the target.
    fn unreachable(&self, partial: &S) -> bool {
        let depth = self.seq.len();
        let n = self.plan.n;
        let remaining_edges =
            if depth == 0 { n - 1 } else { n - depth } + usize::from(self.plan.cyclic);
        if remaining_edges == 0 {
            return false;
        }
        let profile = self.remaining_profile();
        // Reflection canonicalization: the final entry must exceed the
        // anchor, so a prefix whose unused values all sit below it is dead.
        if let Some(anchor) = self.reflect_anchor() {
            if depth < n && profile.max_unused < anchor {
                return true;
            }
        }
        let Some(max_term) = profile.max_term else {
            return false;
        };
        if self.plan.positive {
            let min_term = profile
                .min_term
                .expect("two relevant values when edges remain");
            let lo = partial.add(&min_term.mul_count(remaining_edges));
            let hi = partial.add(&max_term.mul_count(remaining_edges));
            *self.target < lo || *self.target > hi
        } else {
            let deviation = self.target.sub(partial).abs_val();
            deviation > max_term.mul_count(remaining_edges)
        }
    }

    fn reflect_anchor(&self) -> Option<u32> {
        if !self.plan.reflect {
            return None;
        }
        if self.plan.cyclic {
            self.seq.get(1).copied()
        } else {
            self.seq.first().copied()
        }
    }

    /// Handles a completed sequence: exact comparison, witness recording.
    fn leaf(&mut self, partial: &S) -> Result<(), Stop> {
        let total = if self.plan.cyclic {
            let wrap = self
                .term(*self.seq.last().expect("full"), self.seq[0])
                .clone();
            partial.add(&wrap)
        } else {
            partial.clone()
        };
        if self.plan.enumerate {
            self.out.values.insert(total);
            return Ok(());
        }
        if total == *self.target {
            let better = match &self.out.best {
                Some(held) => self.seq < *held,
                None => true,
            };
            if better {
                self.out.best = Some(self.seq.clone());
            }
            if self.plan.first_only {
                self.shared.stop.store(true, Ordering::Relaxed);
                return Err(Stop::External);
            }
        }
        Ok(())
    }

    fn note_deviation(&mut self, partial: &S) {
        if self.plan.enumerate || self.shared.progress.is_none() {
            return;
        }
        let dev = self.target.sub(partial).abs_val();
        if self.local_best_dev.as_ref().is_none_or(|held| dev < *held) {
            self.local_best_dev = Some(dev);
        }
    }

    /// Places `v`, recurses, and unwinds. `partial` is the edge sum of the
    /// prefix *including* `v`.
    fn place(&mut self, v: u32, partial: S) -> Result<(), Stop> {
        self.tick()?;
        self.used[v as usize] = true;
        self.seq.push(v);
        self.note_deviation(&partial);
        let result = self.extend(&partial);
        self.seq.pop();
        self.used[v as usize] = false;
        result
    }

    /// Expands the current prefix by every admissible next entry.
    fn extend(&mut self, partial: &S) -> Result<(), Stop> {
        let depth = self.seq.len();
        let n = self.plan.n;
        if depth == n {
            return self.leaf(partial);
        }
        if !self.plan.enumerate && self.unreachable(partial) {
            return Ok(());
        }
        if self.plan.enumerate {
            if let Some(anchor) = self.reflect_anchor() {
                if self.remaining_profile().max_unused < anchor {
                    return Ok(());
                }
            }
        }
        let last = self.seq.last().copied();
        let final_slot = depth + 1 == n;
        let anchor = self.reflect_anchor();

        if self.plan.heuristic {
            let mut candidates = std::mem::take(&mut self.bufs[depth]);
            candidates.clear();
            for v in 1..=n as u32 {
                if self.used[v as usize] {
                    continue;
                }
                if final_slot {
                    if let Some(anchor) = anchor {
                        if v < anchor {
                            continue;
                        }
                    }
                }
                let cand_partial = match last {
                    Some(prev) => partial.add(self.term(prev, v)),
                    None => S::zero(),
                };
                candidates.push((cand_partial, v));
            }
            candidates.sort_by(|(pa, va), (pb, vb)| {
                let da = self.target.sub(pa).abs_val();
                let db = self.target.sub(pb).abs_val();
                da.cmp(&db).then(va.cmp(vb))
            });
            let mut outcome = Ok(());
            for (cand_partial, v) in &candidates {
                if let Err(stop) = self.place(*v, cand_partial.clone()) {
                    outcome = Err(stop);
                    break;
                }
            }
            candidates.clear();
            self.bufs[depth] = candidates;
            outcome
        } else {
            for v in 1..=n as u32 {
                if self.used[v as usize] {
                    continue;
                }
                if final_slot {
                    if let Some(anchor) = anchor {
                        if v < anchor {
                            continue;
                        }
                    }
                }
                let cand_partial = match last {
                    Some(prev) => partial.add(self.term(prev, v)),
                    None => S::zero(),
                };
                self.place(v, cand_partial)?;
            }
            Ok(())
        }
    }

    /// Runs the worker over its assigned seed prefixes.
    fn run(&mut self, seeds: &[Vec<u32>]) {
        for seed in seeds {
            let mut seed_partial = S::zero();
            let mut placed = 0;
            let mut stopped = false;
            for (i, &v) in seed.iter().enumerate() {
                if i > 0 {
                    seed_partial = seed_partial.add(self.term(seed[i - 1], v));
                }
                if self.place_seed(v).is_err() {
                    stopped = true;
                    break;
                }
                placed += 1;
            }
            let stopped = stopped || (!seed.is_empty() && self.extend(&seed_partial).is_err());
            self.unwind(placed);
            if stopped {
                self.out.exhausted = false;
                break;
            }
        }
        // Publish the unflushed remainder so totals are exact.
        let remainder = self.local_nodes & 1023;
        self.shared.nodes.fetch_add(remainder, Ordering::Relaxed);
    }

    fn place_seed(&mut self, v: u32) -> Result<(), Stop> {
        self.tick()?;
        self.used[v as usize] = true;
        self.seq.push(v);
        Ok(())
    }

    fn unwind(&mut self, placed: usize) {
        for _ in 0..placed {
            let v = self.seq.pop().expect("seed entries placed");
            self.used[v as usize] = false;
        }
    }
}

struct RemainingProfile<S> {
    max_term: Option<S>,
    min_term: Option<S>,
    max_unused: u32,
}

// ---------------------------------------------------------------------------
// Coordinator
// ---------------------------------------------------------------------------

fn validate(f: Functional, n: usize, opts: &SearchOptions) -> Result<(), SearchError> {
    if n < f.min_len() {
        return Err(SearchError::InvalidLength {
            functional: f,
            n,
            min: f.min_len(),
        });
    }
    if n > MAX_SEARCH_LEN {
        return Err(SearchError::LengthTooLarge {
            n,
            max: MAX_SEARCH_LEN,
        });
    }
    if opts.worker_count == 0 {
        return Err(SearchError::BadOptions(
            "worker_count must be at least 1".into(),
        ));
    }
    if opts.node_budget == Some(0) {
        return Err(SearchError::BadOptions(
            "node_budget must be positive".into(),
        ));
    }
    if opts.progress_interval == 0 {
        return Err(SearchError::BadOptions(
            "progress_interval must be positive".into(),
        ));
    }
    Ok(())
}

fn make_plan(
    f: Functional,
    n: usize,
    target_is_zero: bool,
    opts: &SearchOptions,
    enumerate: bool,
) -> Plan {
    let sym = opts.symmetry_reduction;
    let rotate = sym && f.is_cyclic();
    // Reversal preserves the value for prod/sum/cycsum and negates it for
    // the difference-style tags, so reflection canonicalization is sound
    // for the former always, and for the latter only at target 0. During
    // enumeration only value-preserving reflections may be applied.
    let reflect_value_safe = !f.is_antisymmetric();
    let reflect = sym && (reflect_value_safe || (!enumerate && target_is_zero));
    Plan {
        n,
        cyclic: f.is_cyclic(),
        positive: !f.is_antisymmetric(),
        rotate,
        reflect,
        heuristic: opts.heuristic_ordering && !enumerate,
        first_only: opts.first_only && !enumerate,
        enumerate,
    }
}

/// Deterministic work partitioning on the first one or two chosen entries.
fn seed_prefixes(plan: &Plan, workers: usize) -> Vec<Vec<u32>> {
    let n = plan.n as u32;
    let firsts: Vec<u32> = if plan.rotate {
        vec![1]
    } else {
        (1..=n).collect()
    };
    if workers <= 1 {
        return firsts.into_iter().map(|f| vec![f]).collect();
    }
    let mut seeds = Vec::new();
    for f in firsts {
        for s in 1..=n {
            if s != f {
                seeds.push(vec![f, s]);
            }
        }
    }
    seeds
}

struct EngineOutcome<S> {
    best: Option<Vec<u32>>,
    values: HashSet<S>,
    exhausted: bool,
}

fn run_engine<S: Scaled>(
    plan: Plan,
    terms: &[S],
    target: &S,
    l: &BigInt,
    opts: &SearchOptions,
    shared: &Shared,
) -> EngineOutcome<S> {
    let seeds = seed_prefixes(&plan, opts.worker_count);
    let workers = opts.worker_count.min(seeds.len()).max(1);
    let assignments: Vec<Vec<Vec<u32>>> = (0..workers)
        .map(|w| {
            seeds
                .iter()
                .enumerate()
                .filter(|(i, _)| i % workers == w)
                .map(|(_, s)| s.clone())
                .collect()
        })
        .collect();

    let outputs: Vec<WorkerOutput<S>> = if workers == 1 {
        let mut worker = Worker::new(plan, terms, target, shared, l);
        worker.run(&assignments[0]);
        vec![worker.out]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = assignments
                .iter()
                .map(|batch| {
                    scope.spawn(move || {
                        let mut worker = Worker::new(plan, terms, target, shared, l);
                        worker.run(batch);
                        worker.out
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect()
        })
    };

    let mut best: Option<Vec<u32>> = None;
    let mut values = HashSet::new();
    let mut exhausted = true;
    for out in outputs {
        if let Some(b) = out.best {
            if best.as_ref().is_none_or(|held| b < *held) {
                best = Some(b);
            }
        }
        values.extend(out.values);
        exhausted &= out.exhausted;
    }
    EngineOutcome {
        best,
        values,
        exhausted,
    }
}

/// Scaled-representation setup shared by search and enumeration. Returns
/// the common denominator and, when the target's reduced denominator does
/// not divide it, reports that no value of the functional can equal it.
struct Setup {
    l: BigInt,
    /// Target as a multiple of `1/L`; `None` means provably unattainable.
    target_scaled: Option<BigInt>,
}

fn prepare(f: Functional, n: usize, target: &Rational) -> Setup {
    let l = common_denominator(f, n);
    let (quot, rem) = l.div_rem(target.denom());
    let target_scaled = if rem.is_zero() {
        Some(target.numer() * quot)
    } else {
        None
    };
    Setup { l, target_scaled }
}

/// True when every intermediate the engine will form fits comfortably in
/// `i128`: partial sums, `r`-scaled bounds, and the target itself.
fn fits_fast_engine(l: &BigInt, target_scaled: &BigInt, n: usize) -> bool {
    let margin = BigInt::from((n as i64 + 2) * 8);
    let limit = BigInt::from(i128::MAX);
    l * margin < limit && Signed::abs(target_scaled) * BigInt::from(8) < limit
}

/// Searches for a permutation of `{1..n}` on which `f` equals `target`.
///
/// A `Found` report carries a re-verified [`Witness`]. `ExhaustedNonexistent`
/// asserts, by complete traversal of the symmetry-reduced space, that no
/// witness exists; `BudgetExceeded` is the inconclusive outcome.
pub fn find_witness(
    f: Functional,
    n: usize,
    target: &Rational,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    validate(f, n, opts)?;
    let start = Instant::now();
    let setup = prepare(f, n, target);
    let shared = Shared::new(opts, start);
    let plan = make_plan(f, n, target.is_zero(), opts, false);

    let Some(target_scaled) = setup.target_scaled else {
        // The target's denominator divides no attainable value's.
        return Ok(SearchReport {
            outcome: SearchOutcome::ExhaustedNonexistent,
            nodes: 0,
            elapsed: start.elapsed(),
        });
    };

    let outcome = if fits_fast_engine(&setup.l, &target_scaled, n) {
        let target_small = target_scaled.to_i128().expect("checked to fit");
        let terms = term_table::<i128>(f, n, &setup.l, |t| {
            t.to_i128().expect("term fits if L fits")
        });
        let engine = run_engine(plan, &terms, &target_small, &setup.l, opts, &shared);
        (engine.best, engine.exhausted)
    } else {
        let terms = term_table::<BigInt>(f, n, &setup.l, Clone::clone);
        let engine = run_engine(plan, &terms, &target_scaled, &setup.l, opts, &shared);
        (engine.best, engine.exhausted)
    };

    let nodes = shared.nodes.load(Ordering::Relaxed);
    let elapsed = start.elapsed();
    let (best, exhausted) = outcome;
    let outcome = if let Some(seq) = best {
        let perm = Permutation::new(seq).expect("search produces bijections");
        let witness = Witness::new(perm, f).expect("length already validated");
        assert_eq!(
            witness.value(),
            target,
            "search accounting disagrees with the exact evaluator"
        );
        SearchOutcome::Found(witness)
    } else if exhausted && !shared.budget_hit.load(Ordering::Relaxed) {
        SearchOutcome::ExhaustedNonexistent
    } else {
        SearchOutcome::BudgetExceeded
    };
    Ok(SearchReport {
        outcome,
        nodes,
        elapsed,
    })
}

/// Enumerates the exact set of values `f` attains over all of `S_n`.
///
/// Hitting a budget yields [`SearchError::EnumerationBudget`] carrying the
/// partial set, never a silently truncated `Ok`.
pub fn enumerate_values(
    f: Functional,
    n: usize,
    opts: &SearchOptions,
) -> Result<ValueSet, SearchError> {
    validate(f, n, opts)?;
    let start = Instant::now();
    let setup = prepare(f, n, &Rational::zero());
    let shared = Shared::new(opts, start);
    let plan = make_plan(f, n, true, opts, true);

    let (raw_values, exhausted): (Vec<BigInt>, bool) =
        if fits_fast_engine(&setup.l, &BigInt::from(0), n) {
            let terms = term_table::<i128>(f, n, &setup.l, |t| {
                t.to_i128().expect("term fits if L fits")
            });
            let engine = run_engine(plan, &terms, &0i128, &setup.l, opts, &shared);
            (
                engine.values.iter().map(|v| BigInt::from(*v)).collect(),
                engine.exhausted,
            )
        } else {
            let terms = term_table::<BigInt>(f, n, &setup.l, Clone::clone);
            let engine = run_engine(plan, &terms, &BigInt::from(0), &setup.l, opts, &shared);
            (engine.values.into_iter().collect(), engine.exhausted)
        };

    let mut values: Vec<Rational> = raw_values
        .into_iter()
        .map(|v| Rational::from_ratio(v, setup.l.clone()))
        .collect();
    values.sort();
    let set = ValueSet {
        n,
        functional: f,
        values,
    };

    if !exhausted || shared.budget_hit.load(Ordering::Relaxed) {
        return Err(SearchError::EnumerationBudget {
            partial: set,
            nodes: shared.nodes.load(Ordering::Relaxed),
        });
    }
    if f.is_antisymmetric() {
        assert!(
            set.is_negation_closed(),
            "value set of {} over S_{} must be closed under negation",
            f,
            n
        );
    }
    Ok(set)
}

/// Integer values of `dif` over `S_n`, ascending, both signs.
///
/// Exhaustive enumeration up to [`INTEGER_VALUES_EXHAUSTIVE_MAX`];
/// constructive (and re-verified) beyond. `bound` keeps only `|m| ≤ bound`.
pub fn integer_values(n: usize, bound: Option<i64>) -> Result<Vec<i64>, SearchError> {
    let values = if n <= INTEGER_VALUES_EXHAUSTIVE_MAX {
        integer_values_exhaustive(n)?
    } else {
        integer_values_constructive(n)?
    };
    Ok(match bound {
        Some(b) => values.into_iter().filter(|m| m.abs() <= b).collect(),
        None => values,
    })
}

/// The integer members of a full enumeration of `dif` over `S_n`.
pub fn integer_values_exhaustive(n: usize) -> Result<Vec<i64>, SearchError> {
    let set = enumerate_values(Functional::Dif, n, &SearchOptions::default())?;
    Ok(set.values().iter().filter_map(|v| v.to_i64()).collect())
}

/// Integer values via [`construct::integer_witness`] over every admissible
/// target, each witness re-verified through the exact evaluator.
pub fn integer_values_constructive(n: usize) -> Result<Vec<i64>, SearchError> {
    if n < 2 {
        return Err(SearchError::InvalidLength {
            functional: Functional::Dif,
            n,
            min: 2,
        });
    }
    let mut values = Vec::new();
    for m in construct::admissible_integers(n) {
        let witness = construct::integer_witness(n, m)?;
        let value = evaluate(Functional::Dif, &witness).expect("n >= 2");
        assert_eq!(
            value,
            Rational::from_integer(m),
            "constructive witness failed re-verification"
        );
        values.push(m);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unbounded() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn finds_sum_one_at_seven() {
        let report = find_witness(Functional::Sum, 7, &Rational::one(), &unbounded()).unwrap();
        let w = report.witness().expect("witness exists at n = 7");
        assert_eq!(w.value(), &Rational::one());
        assert_eq!(w.perm().len(), 7);
    }

    #[test]
    fn sum_one_nonexistent_at_six() {
        let report = find_witness(Functional::Sum, 6, &Rational::one(), &unbounded()).unwrap();
        assert!(report.is_exhausted(), "outcome: {:?}", report.outcome);
    }

    #[test]
    fn dif_zero_nonexistent_at_five() {
        let report = find_witness(Functional::Dif, 5, &Rational::zero(), &unbounded()).unwrap();
        assert!(report.is_exhausted());
    }

    #[test]
    fn dif_two_nonexistent_at_four() {
        let report =
            find_witness(Functional::Dif, 4, &Rational::from_integer(2), &unbounded()).unwrap();
        assert!(report.is_exhausted());
    }

    #[test]
    fn unattainable_denominator_is_definitive() {
        // Denominators over S_4 under dif divide lcm(1..3) = 6; 1/5 is
        // structurally impossible.
        let report =
            find_witness(Functional::Dif, 4, &"1/5".parse().unwrap(), &unbounded()).unwrap();
        assert!(report.is_exhausted());
        assert_eq!(report.nodes, 0);
    }

    #[test]
    fn node_budget_reports_inconclusive() {
        let opts = SearchOptions {
            node_budget: Some(50),
            ..SearchOptions::default()
        };
        let report = find_witness(Functional::CycSqDif, 10, &Rational::zero(), &opts).unwrap();
        assert!(matches!(report.outcome, SearchOutcome::BudgetExceeded));
    }

    #[test]
    fn enumerate_dif_two_and_three() {
        let v2 = enumerate_values(Functional::Dif, 2, &unbounded()).unwrap();
        let expected2: Vec<Rational> = vec![Rational::from_integer(-1), Rational::from_integer(1)];
        assert_eq!(v2.values(), &expected2[..]);

        let v3 = enumerate_values(Functional::Dif, 3, &unbounded()).unwrap();
        let expected3: Vec<Rational> = ["-2", "-1/2", "1/2", "2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(v3.values(), &expected3[..]);
    }

    #[test]
    fn enumeration_budget_is_loud() {
        let opts = SearchOptions {
            node_budget: Some(10),
            ..SearchOptions::default()
        };
        match enumerate_values(Functional::Dif, 7, &opts) {
            Err(SearchError::EnumerationBudget { nodes, .. }) => assert!(nodes >= 10),
            other => panic!("expected EnumerationBudget, got {other:?}"),
        }
    }

    #[test]
    fn integer_values_examples() {
        assert_eq!(integer_values(3, None).unwrap(), vec![-2, 2]);
        assert_eq!(integer_values(5, None).unwrap(), vec![-4, -2, -1, 1, 2, 4]);
        assert_eq!(
            integer_values(7, None).unwrap(),
            vec![-6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 6]
        );
        assert_eq!(integer_values(5, Some(2)).unwrap(), vec![-2, -1, 1, 2]);
    }

    #[test]
    fn exhaustive_and_constructive_agree() {
        for n in 6..=8 {
            assert_eq!(
                integer_values_exhaustive(n).unwrap(),
                integer_values_constructive(n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn worker_counts_agree() {
        // Exhaustive lex-min witness is identical however many workers ran.
        // (1,3,6,5,2,4) is the lexicographically first zero of dif over S_6,
        // frozen from an independent brute-force enumeration.
        for workers in [1, 3] {
            let opts = SearchOptions {
                worker_count: workers,
                first_only: false,
                ..SearchOptions::default()
            };
            let report = find_witness(Functional::Dif, 6, &Rational::zero(), &opts).unwrap();
            let w = report.witness().expect("zero attainable at 6");
            assert_eq!(w.perm().to_string(), "1,3,6,5,2,4");
        }
    }

    #[test]
    fn single_worker_first_only_is_reproducible() {
        let opts = SearchOptions::default();
        let first = find_witness(Functional::Sum, 8, &Rational::one(), &opts).unwrap();
        let second = find_witness(Functional::Sum, 8, &Rational::one(), &opts).unwrap();
        assert_eq!(
            first.witness().unwrap().perm(),
            second.witness().unwrap().perm()
        );
        assert_eq!(first.nodes, second.nodes);
    }

    #[test]
    fn bad_options_rejected() {
        let mut opts = SearchOptions {
            worker_count: 0,
            ..SearchOptions::default()
        };
        assert!(matches!(
            find_witness(Functional::Dif, 4, &Rational::zero(), &opts),
            Err(SearchError::BadOptions(_))
        ));
        opts.worker_count = 1;
        opts.node_budget = Some(0);
        assert!(matches!(
            find_witness(Functional::Dif, 4, &Rational::zero(), &opts),
            Err(SearchError::BadOptions(_))
        ));
        assert!(matches!(
            find_witness(Functional::CycDif, 2, &Rational::zero(), &unbounded()),
            Err(SearchError::InvalidLength { .. })
        ));
    }

    #[test]
    fn big_engine_finds_exact_targets() {
        // At n = 64 the sum functional's common denominator overflows the
        // i128 engine, so this runs on the BigInt engine end to end. The
        // identity's value is the lexicographically first leaf, so the
        // search must hit it immediately and re-verify it exactly.
        let identity = Permutation::identity(64);
        let target = evaluate(Functional::Sum, &identity).unwrap();
        let report = find_witness(Functional::Sum, 64, &target, &unbounded()).unwrap();
        let w = report.witness().expect("identity attains its own value");
        assert_eq!(w.perm(), &identity);
        assert!(report.nodes < 1024, "first leaf should be the witness");
    }

    #[test]
    fn big_engine_certifies_nonexistence() {
        // Positive terms can never sum to zero; the root bound settles it
        // on the BigInt engine without walking the space.
        let report = find_witness(Functional::Sum, 64, &Rational::zero(), &unbounded()).unwrap();
        assert!(report.is_exhausted());
        assert!(report.nodes < 1024);
    }

    #[test]
    fn length_limits_enforced() {
        assert!(matches!(
            find_witness(Functional::Dif, 65, &Rational::zero(), &unbounded()),
            Err(SearchError::LengthTooLarge { .. })
        ));
        // Minimum lengths are searchable.
        let report = find_witness(
            Functional::Dif,
            2,
            &Rational::from_integer(-1),
            &unbounded(),
        )
        .unwrap();
        assert_eq!(report.witness().unwrap().perm().to_string(), "2,1");
        let report = find_witness(
            Functional::CycSum,
            3,
            &"47/60".parse().unwrap(),
            &unbounded(),
        )
        .unwrap();
        assert!(report.witness().is_some());
    }

    #[test]
    fn progress_hook_fires() {
        let count = Arc::new(AtomicU64::new(0));
        let seen = count.clone();
        let opts = SearchOptions {
            first_only: false,
            progress: Some(Arc::new(move |p: &Progress| {
                seen.fetch_add(1, Ordering::Relaxed);
                assert!(p.nodes > 0);
            })),
            progress_interval: 1 << 10,
            ..SearchOptions::default()
        };
        let _ = find_witness(Functional::Dif, 7, &Rational::zero(), &opts).unwrap();
        assert!(count.load(Ordering::Relaxed) > 0);
    }
}
