//! End-to-end deciders: route a control instance through the reduction
//! pipeline appropriate for its rule and action, or answer it by exhaustive
//! search when it is small enough for the oracle.
//!
//! Three backends share one verdict type. The oracle enumerates voter
//! subsets outright and is the ground truth everything else is tested
//! against; it refuses instances above its caps rather than grind through
//! them. The deterministic pipeline covers the 2-approval questions that
//! collapse into plain b-matching optimization. The randomized pipeline
//! covers the first-last questions and exact 2-approval replacement, whose
//! matching forms need an exact red-edge count; its yes-answers are certain
//! and its no-answers carry a one-sided error bound.

use crate::election::{apply_control, score, winners, ControlAction, ControlInstance, ScoringRule};
use crate::graph::{ColoredMultigraph, CycleSumInstance, MatchingCertificate};
use crate::matching::{
    decide_exact_perfect_b_matching, max_cardinality_b_matching, max_weight_b_matching,
    ExactAnswer, MatchingError, RandomizedConfig,
};
use crate::reductions::{
    ccav_to_ccav_exact_sweep, ccrv_to_ccrv_exact_sweep, ecs_to_edge_disjoint,
    edge_disjoint_ecs_to_fl_ccav_exact, fl_ccav_exact_to_epbbm,
    fl_ccrv_exact_to_red_blue_bipartite, twoapp_ccav_exact_to_maxcard_b_matching,
    twoapp_ccrv_exact_to_red_blue_b_matching, twoapp_ccrv_to_maxweight_b_matching, Decision,
    ReductionError, ReductionOutcome,
};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Size limits for the exhaustive backends. Enumeration cost grows
/// combinatorially in the budget and exponentially in the cycle vertex
/// count, so anything above these caps is refused, not attempted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_candidates: usize,
    /// Cap on registered plus unregistered voters together.
    pub max_voters: usize,
    /// Cap on digraph vertices for the cycle-family search.
    pub max_cycle_vertices: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { max_candidates: 8, max_voters: 10, max_cycle_vertices: 12 }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("{what} count {size} is above the oracle cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("the {backend:?} backend cannot decide {problem}")]
    UnsupportedBackend { backend: Backend, problem: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Exhaustive enumeration, capped by [`OracleCaps`].
    Oracle,
    /// Deterministic matching optimization; 2-approval addition and
    /// budgeted replacement only.
    Poly,
    /// Randomized exact-matching decider behind the reduction pipeline.
    Randomized,
}

/// Proof attached to a yes verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Registered indices to remove and unregistered indices to add;
    /// replayable with [`apply_control`].
    Control { removed: Vec<usize>, added: Vec<usize> },
    /// Accepted edge set, for matching-level questions.
    Matching(MatchingCertificate),
}

/// The coin flips behind a randomized verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomnessReport {
    pub trials: u32,
    pub seed: u64,
    pub prime: u64,
    /// How many decider invocations fed this verdict (budget forms sweep
    /// one per exact count).
    pub decider_calls: u32,
    /// Upper bound on the probability that a `ProbablyNo` here is wrong.
    /// Yes-answers are never wrong.
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub answer: ExactAnswer,
    pub certificate: Option<Certificate>,
    pub backend: Backend,
    pub elapsed: Duration,
    /// Present iff the randomized decider actually ran.
    pub randomness: Option<RandomnessReport>,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        self.answer.is_yes()
    }
}

/// Tunables shared by all backends of one solve call.
#[derive(Debug, Clone, Default)]
pub struct SolveConfig {
    pub randomized: RandomizedConfig,
    pub oracle_caps: OracleCaps,
}

// ---------------------------------------------------------------------
// Exhaustive oracle
// ---------------------------------------------------------------------

/// Advance `idx` to the next size-`k` subset of `0..n` in lexicographic
/// order; false when `idx` was the last one.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Run `f` over every size-`k` subset of `0..n` until it returns `Some`.
fn for_each_combination<T>(
    n: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(t) = f(&idx) {
            return Some(t);
        }
        if !next_combination(&mut idx, n) {
            return None;
        }
    }
}

/// Does this (removals, additions) choice make the preferred candidate win?
fn choice_wins(src: &ControlInstance, removed: &[usize], added: &[usize]) -> bool {
    let Ok(after) = apply_control(src, removed, added) else {
        return false;
    };
    let scores = score(&after.candidates, &after.registered, src.rule)
        .expect("apply_control keeps the election well-formed");
    winners(&scores).contains(&src.preferred)
}

/// Exhaustively search for a winning voter choice, smallest change count
/// first, lexicographic within a count. `None` means the instance is a no.
pub fn oracle_control_witness(
    src: &ControlInstance,
    caps: &OracleCaps,
) -> Result<Option<(Vec<usize>, Vec<usize>)>, SolveError> {
    src.validate().map_err(|e| SolveError::Invalid(e.to_string()))?;
    let cands = src.election.candidates.len();
    if cands > caps.max_candidates {
        return Err(SolveError::CapExceeded {
            what: "candidate",
            size: cands,
            cap: caps.max_candidates,
        });
    }
    let reg = src.election.registered.len();
    let pool = src.election.unregistered.len();
    if reg + pool > caps.max_voters {
        return Err(SolveError::CapExceeded {
            what: "voter",
            size: reg + pool,
            cap: caps.max_voters,
        });
    }
    let counts: Vec<usize> =
        if src.exact { vec![src.budget] } else { (0..=src.budget).collect() };
    for z in counts {
        let removals = match src.action {
            ControlAction::AddVoters => 0,
            ControlAction::ReplaceVoters => z,
        };
        if z > pool || removals > reg {
            continue;
        }
        let hit = for_each_combination(reg, removals, |outs| {
            for_each_combination(pool, z, |ins| {
                choice_wins(src, outs, ins).then(|| (outs.to_vec(), ins.to_vec()))
            })
        });
        if let Some(w) = hit {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// [`oracle_control_witness`] reduced to a yes/no answer.
pub fn oracle_control_with(
    src: &ControlInstance,
    caps: &OracleCaps,
) -> Result<bool, SolveError> {
    Ok(oracle_control_witness(src, caps)?.is_some())
}

/// [`oracle_control_with`] under the default caps.
pub fn oracle_control(src: &ControlInstance) -> Result<bool, SolveError> {
    oracle_control_with(src, &OracleCaps::default())
}

/// Vertex sets of all simple directed cycles, as bitmasks. A simple cycle
/// uses as many arcs as vertices, so the mask alone carries its length.
fn simple_cycle_masks(g: &ColoredMultigraph) -> BTreeSet<u64> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &g.edges {
        adj[e.u].push(e.v);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    // Each cycle is found once, rooted at its smallest vertex.
    fn dfs(v: usize, root: usize, mask: u64, adj: &[Vec<usize>], out: &mut BTreeSet<u64>) {
        for &w in &adj[v] {
            if w == root {
                out.insert(mask);
            } else if w > root && mask & (1 << w) == 0 {
                dfs(w, root, mask | (1 << w), adj, out);
            }
        }
    }

    let mut out = BTreeSet::new();
    for root in 0..n {
        dfs(root, root, 1 << root, &adj, &mut out);
    }
    out
}

/// Decide by exhaustion whether some family of vertex-disjoint directed
/// cycles has total length exactly `target_sum`.
pub fn oracle_exact_cycle_sum_with(
    src: &CycleSumInstance,
    caps: &OracleCaps,
) -> Result<bool, SolveError> {
    if !src.digraph.directed {
        return Err(SolveError::Invalid("cycle sums live in directed graphs".into()));
    }
    src.digraph.validate().map_err(|e| SolveError::Invalid(e.to_string()))?;
    let n = src.digraph.vertex_count();
    let cap = caps.max_cycle_vertices.min(63);
    if n > cap {
        return Err(SolveError::CapExceeded { what: "cycle vertex", size: n, cap });
    }
    // Disjoint unions of cycle masks, built one cycle at a time. Total
    // length of a family is the popcount of its union.
    let mut reachable: BTreeSet<u64> = BTreeSet::new();
    reachable.insert(0);
    for &c in &simple_cycle_masks(&src.digraph) {
        let grown: Vec<u64> =
            reachable.iter().filter(|&&r| r & c == 0).map(|&r| r | c).collect();
        reachable.extend(grown);
    }
    Ok(reachable.iter().any(|r| r.count_ones() as usize == src.target_sum))
}

/// [`oracle_exact_cycle_sum_with`] under the default caps.
pub fn oracle_exact_cycle_sum(src: &CycleSumInstance) -> Result<bool, SolveError> {
    oracle_exact_cycle_sum_with(src, &OracleCaps::default())
}

// ---------------------------------------------------------------------
// Backend routing
// ---------------------------------------------------------------------

fn problem_name(src: &ControlInstance) -> String {
    format!(
        "{:?} {:?} in the {} form",
        src.rule,
        src.action,
        if src.exact { "exact" } else { "budget" }
    )
}

/// Turn an early reduction decision into an answer, lifting its witness.
fn decision_answer(d: &Decision) -> (ExactAnswer, Option<Certificate>) {
    if d.yes {
        let (removed, added) =
            d.witness.clone().expect("constructive yes decisions carry a witness");
        (ExactAnswer::Yes, Some(Certificate::Control { removed, added }))
    } else {
        (ExactAnswer::No, None)
    }
}

/// Counts behind one randomized verdict, for the error-bound report.
#[derive(Default)]
struct RandTally {
    calls: u32,
    /// Largest matrix dimension any decider call could have seen: the
    /// capacity expansion has one vertex per edge endpoint, so 2·edges.
    max_dim: usize,
}

impl RandTally {
    fn record(&mut self, edges: usize) {
        self.calls += 1;
        self.max_dim = self.max_dim.max(2 * edges.max(1));
    }

    fn report(&self, cfg: &RandomizedConfig) -> Option<RandomnessReport> {
        if self.calls == 0 {
            return None;
        }
        // Schwartz–Zippel per evaluation: a nonzero polynomial of total
        // degree ≤ dim vanishes at a random point with probability
        // ≤ dim / prime; one trial interpolates over ≤ dim² evaluations.
        let dim = self.max_dim as f64;
        let per_trial = (dim.powi(3) / cfg.prime as f64).min(1.0);
        // Clamped away from zero: an underflowed product would claim
        // certainty the decider does not have.
        let bound =
            (self.calls as f64 * per_trial.powi(cfg.trials as i32)).clamp(f64::MIN_POSITIVE, 1.0);
        Some(RandomnessReport {
            trials: cfg.trials,
            seed: cfg.seed,
            prime: cfg.prime,
            decider_calls: self.calls,
            error_bound: bound,
        })
    }
}

type Answer = (ExactAnswer, Option<Certificate>);

fn replays(src: &ControlInstance, cert: &Option<Certificate>) -> bool {
    match cert {
        Some(Certificate::Control { removed, added }) => choice_wins(src, removed, added),
        _ => true,
    }
}

/// 2-approval exact addition via maximum-cardinality b-matching.
fn poly_add_exact(src: &ControlInstance) -> Result<Answer, SolveError> {
    let answer = match twoapp_ccav_exact_to_maxcard_b_matching(src)? {
        ReductionOutcome::Decided(d) => decision_answer(&d),
        ReductionOutcome::Reduced(red) => {
            let cert = max_cardinality_b_matching(&red.instance)?;
            match red.witness_voters(&cert) {
                Some(added) => {
                    (ExactAnswer::Yes, Some(Certificate::Control { removed: Vec::new(), added }))
                }
                None => (ExactAnswer::No, None),
            }
        }
    };
    debug_assert!(answer.0 != ExactAnswer::Yes || replays(src, &answer.1));
    Ok(answer)
}

/// 2-approval budgeted replacement via maximum-weight b-matching.
fn poly_replace_budget(src: &ControlInstance) -> Result<Answer, SolveError> {
    let answer = match twoapp_ccrv_to_maxweight_b_matching(src)? {
        ReductionOutcome::Decided(d) => decision_answer(&d),
        ReductionOutcome::Reduced(red) => {
            let cert = max_weight_b_matching(&red.instance)?;
            match red.witness_replacement(&cert) {
                Some((removed, added)) => {
                    (ExactAnswer::Yes, Some(Certificate::Control { removed, added }))
                }
                None => (ExactAnswer::No, None),
            }
        }
    };
    debug_assert!(answer.0 != ExactAnswer::Yes || replays(src, &answer.1));
    Ok(answer)
}

fn solve_poly(src: &ControlInstance) -> Result<Answer, SolveError> {
    let supported = src.rule == ScoringRule::TwoApproval
        && !(src.action == ControlAction::ReplaceVoters && src.exact);
    if !supported {
        return Err(SolveError::UnsupportedBackend {
            backend: Backend::Poly,
            problem: problem_name(src),
        });
    }
    match (src.action, src.exact) {
        (ControlAction::AddVoters, true) => poly_add_exact(src),
        (ControlAction::AddVoters, false) => {
            for inst in ccav_to_ccav_exact_sweep(src)? {
                let answer = poly_add_exact(&inst)?;
                if answer.0.is_yes() {
                    return Ok(answer);
                }
            }
            Ok((ExactAnswer::No, None))
        }
        (ControlAction::ReplaceVoters, false) => poly_replace_budget(src),
        (ControlAction::ReplaceVoters, true) => unreachable!("rejected above"),
    }
}

/// Feed one exact-matching instance to the randomized decider.
fn rand_decide(
    instance: &crate::graph::BMatchingInstance,
    cfg: &SolveConfig,
    tally: &mut RandTally,
) -> Result<ExactAnswer, SolveError> {
    tally.record(instance.graph.edge_count());
    Ok(decide_exact_perfect_b_matching(instance, &cfg.randomized)?)
}

/// One exact-form control question through the randomized pipeline.
fn rand_exact(
    src: &ControlInstance,
    cfg: &SolveConfig,
    tally: &mut RandTally,
) -> Result<Answer, SolveError> {
    match (src.rule, src.action) {
        (ScoringRule::FirstLast, ControlAction::AddVoters) => {
            match fl_ccav_exact_to_epbbm(src)? {
                ReductionOutcome::Decided(d) => Ok(decision_answer(&d)),
                ReductionOutcome::Reduced(red) => {
                    Ok((rand_decide(&red.instance, cfg, tally)?, None))
                }
            }
        }
        (ScoringRule::FirstLast, ControlAction::ReplaceVoters) => {
            match fl_ccrv_exact_to_red_blue_bipartite(src)? {
                ReductionOutcome::Decided(d) => Ok(decision_answer(&d)),
                ReductionOutcome::Reduced(red) => {
                    Ok((rand_decide(&red.instance, cfg, tally)?, None))
                }
            }
        }
        (ScoringRule::TwoApproval, ControlAction::ReplaceVoters) => {
            match twoapp_ccrv_exact_to_red_blue_b_matching(src)? {
                ReductionOutcome::Decided(d) => Ok(decision_answer(&d)),
                ReductionOutcome::Reduced(red) => {
                    Ok((rand_decide(&red.instance, cfg, tally)?, None))
                }
            }
        }
        (ScoringRule::TwoApproval, ControlAction::AddVoters) => {
            unreachable!("rejected before dispatch")
        }
    }
}

fn solve_randomized(
    src: &ControlInstance,
    cfg: &SolveConfig,
    tally: &mut RandTally,
) -> Result<Answer, SolveError> {
    if src.rule == ScoringRule::TwoApproval && src.action == ControlAction::AddVoters {
        return Err(SolveError::UnsupportedBackend {
            backend: Backend::Randomized,
            problem: problem_name(src),
        });
    }
    if src.exact {
        return rand_exact(src, cfg, tally);
    }
    let sweep = match src.action {
        ControlAction::AddVoters => ccav_to_ccav_exact_sweep(src)?,
        ControlAction::ReplaceVoters => ccrv_to_ccrv_exact_sweep(src)?,
    };
    let mut all_hard_no = true;
    for inst in sweep {
        let (answer, cert) = rand_exact(&inst, cfg, tally)?;
        match answer {
            ExactAnswer::Yes => return Ok((ExactAnswer::Yes, cert)),
            ExactAnswer::ProbablyNo => all_hard_no = false,
            ExactAnswer::No => {}
        }
    }
    Ok((if all_hard_no { ExactAnswer::No } else { ExactAnswer::ProbablyNo }, None))
}

/// Decide a control question with the chosen backend and configuration.
pub fn solve_control_with(
    src: &ControlInstance,
    backend: Backend,
    cfg: &SolveConfig,
) -> Result<Verdict, SolveError> {
    let start = Instant::now();
    src.validate().map_err(|e| SolveError::Invalid(e.to_string()))?;
    match backend {
        Backend::Oracle => {
            let witness = oracle_control_witness(src, &cfg.oracle_caps)?;
            let answer = if witness.is_some() { ExactAnswer::Yes } else { ExactAnswer::No };
            Ok(Verdict {
                answer,
                certificate: witness
                    .map(|(removed, added)| Certificate::Control { removed, added }),
                backend,
                elapsed: start.elapsed(),
                randomness: None,
            })
        }
        Backend::Poly => {
            let (answer, certificate) = solve_poly(src)?;
            Ok(Verdict { answer, certificate, backend, elapsed: start.elapsed(), randomness: None })
        }
        Backend::Randomized => {
            let mut tally = RandTally::default();
            let (answer, certificate) = solve_randomized(src, cfg, &mut tally)?;
            Ok(Verdict {
                answer,
                certificate,
                backend,
                elapsed: start.elapsed(),
                randomness: tally.report(&cfg.randomized),
            })
        }
    }
}

/// [`solve_control_with`] under the default configuration.
pub fn solve_control(src: &ControlInstance, backend: Backend) -> Result<Verdict, SolveError> {
    solve_control_with(src, backend, &SolveConfig::default())
}

/// Decide an exact cycle-sum question: exhaustively, or through the
/// arc-splitting and exact-addition pipeline.
pub fn solve_exact_cycle_sum_with(
    src: &CycleSumInstance,
    backend: Backend,
    cfg: &SolveConfig,
) -> Result<Verdict, SolveError> {
    let start = Instant::now();
    match backend {
        Backend::Oracle => {
            let yes = oracle_exact_cycle_sum_with(src, &cfg.oracle_caps)?;
            Ok(Verdict {
                answer: if yes { ExactAnswer::Yes } else { ExactAnswer::No },
                certificate: None,
                backend,
                elapsed: start.elapsed(),
                randomness: None,
            })
        }
        Backend::Poly => Err(SolveError::UnsupportedBackend {
            backend,
            problem: "exact cycle sums".into(),
        }),
        Backend::Randomized => {
            let disjoint = ecs_to_edge_disjoint(src);
            let control = edge_disjoint_ecs_to_fl_ccav_exact(&disjoint);
            let mut tally = RandTally::default();
            // The certificate, if any, names voters of the intermediate
            // election, not cycles; drop it.
            let (answer, _) = rand_exact(&control, cfg, &mut tally)?;
            Ok(Verdict {
                answer,
                certificate: None,
                backend,
                elapsed: start.elapsed(),
                randomness: tally.report(&cfg.randomized),
            })
        }
    }
}

/// [`solve_exact_cycle_sum_with`] under the default configuration.
pub fn solve_exact_cycle_sum(
    src: &CycleSumInstance,
    backend: Backend,
) -> Result<Verdict, SolveError> {
    solve_exact_cycle_sum_with(src, backend, &SolveConfig::default())
}
