//! First-last control and its matching forms.
//!
//! One accounting fact drives this file: under first-last scoring an added
//! vote moves only its first candidate (+1) and its last (−1). Votes that
//! rank the preferred candidate first or last therefore change *p*'s own
//! score, and a swap argument shows an optimal addition set always uses as
//! many p-first votes as possible and as few p-last votes as possible.
//! That pins down every vote touching p (commit or discard), so
//! normalization either decides the instance outright or leaves a pool in
//! which every remaining vote scores p zero.
//!
//! On a normalized instance, making p win is pure bookkeeping on rival
//! firsts and lasts, which a perfect b-matching with a prescribed red-edge
//! count expresses exactly: rival `a` appears twice, as `a` (absorbing the
//! lasts that pull `a` down) and as `a'` (absorbing the firsts that push
//! `a` up), an overflow vertex `x` soaks up the slack, and each addable
//! vote becomes a red edge from its last's plain vertex to its first's
//! primed vertex.

use crate::election::{
    score, winners, extremes_vote, ControlAction, ControlInstance, Election, ScoringRule, Vote,
};
use crate::graph::{
    BMatchingInstance, Bipartition, ColoredMultigraph, EdgeColor, MatchingCertificate,
};
use crate::reductions::{
    fresh_name, require_shape, PreprocessOutcome, ReductionError, ReductionOutcome,
};
use std::collections::{BTreeMap, BTreeSet};

/// An exact-addition instance whose surviving unregistered votes all score
/// the preferred candidate zero, plus the bookkeeping to translate answers
/// back to the original instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedAdd {
    /// The normalized instance: same candidates, committed votes merged
    /// into the registered set, p-last votes discarded, adjusted budget.
    pub instance: ControlInstance,
    /// Original unregistered indices that any solution must add.
    pub committed: Vec<usize>,
    /// For each unregistered vote of `instance`, its original index.
    pub kept: Vec<usize>,
    pub trace: Vec<String>,
}

impl NormalizedAdd {
    /// Map a winning addition set of the normalized instance (indices into
    /// its unregistered list) back to original unregistered indices.
    pub fn witness_voters(&self, chosen: &[usize]) -> Vec<usize> {
        let mut out = self.committed.clone();
        out.extend(chosen.iter().map(|&i| self.kept[i]));
        out.sort_unstable();
        out
    }
}

/// Normalize an exact addition question under first-last scoring.
///
/// Case analysis on the exact budget `k` and the pool:
///
/// * more p-first votes than `k`: only p-first additions matter, and the
///   question reduces to covering each rival's deficit with votes ranking
///   that rival last — decided greedily;
/// * otherwise all p-first votes are committed; if the rest of the budget
///   fits inside the p-neutral votes, the p-last votes are discarded and a
///   normalized instance comes back;
/// * if even that is impossible, the shortfall must be filled with p-last
///   votes, each costing p a point and pushing one rival up — again a
///   greedy check against per-rival caps.
pub fn fl_ccav_exact_preprocess(src: &ControlInstance) -> Result<PreprocessOutcome, ReductionError> {
    require_shape(src, ScoringRule::FirstLast, ControlAction::AddVoters, true)?;
    let p = src.preferred.clone();
    let k = src.budget;
    let pool = &src.election.unregistered;
    let cands = &src.election.candidates;
    let mut trace = Vec::new();

    if k > pool.len() {
        return Ok(ReductionOutcome::decided_no(format!(
            "exactly {} additions demanded but only {} votes are available",
            k,
            pool.len()
        )));
    }

    let base = src.election.registered_scores(ScoringRule::FirstLast);
    let mut p_first = Vec::new();
    let mut neutral = Vec::new();
    let mut p_last = Vec::new();
    for (i, v) in pool.iter().enumerate() {
        if *v.first() == p {
            p_first.push(i);
        } else if *v.last() == p {
            p_last.push(i);
        } else {
            neutral.push(i);
        }
    }

    if p_first.len() >= k {
        // A swap argument makes every addition p-first: swapping any other
        // vote for an unused p-first one raises p at least as much as any
        // rival. p ends at base + k; each rival needs its deficit covered
        // by votes ranking it last, and one vote covers one rival.
        let p_final = base.get(&p) + k as i64;
        let mut last_votes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for &i in &p_first {
            last_votes.entry(pool[i].last().as_str()).or_default().push(i);
        }
        let mut total_deficit = 0i64;
        let mut chosen = Vec::new();
        for a in cands.iter().filter(|c| **c != p) {
            let deficit = (base.get(a) - p_final).max(0);
            let bucket = last_votes.get(a.as_str()).map(Vec::as_slice).unwrap_or(&[]);
            if deficit > bucket.len() as i64 {
                return Ok(ReductionOutcome::decided_no(format!(
                    "rival {a:?} needs {deficit} more votes ranking it last than exist"
                )));
            }
            chosen.extend_from_slice(&bucket[..deficit as usize]);
            total_deficit += deficit;
        }
        if total_deficit > k as i64 {
            return Ok(ReductionOutcome::decided_no(format!(
                "rival deficits total {total_deficit}, above the budget {k}"
            )));
        }
        // Top the deficit covers up to exactly k with unused p-first votes;
        // an extra p-first vote only lowers one rival further.
        let in_use: BTreeSet<usize> = chosen.iter().copied().collect();
        let fill = k - chosen.len();
        chosen.extend(p_first.iter().copied().filter(|i| !in_use.contains(i)).take(fill));
        chosen.sort_unstable();
        return Ok(ReductionOutcome::decided_yes_witnessed(
            format!("{k} additions ranking the preferred candidate first cover all deficits"),
            Vec::new(),
            chosen,
        ));
    }

    // Too few p-first votes: all of them go in.
    trace.push(format!(
        "committed all {} votes ranking the preferred candidate first",
        p_first.len()
    ));
    let committed_votes: Vec<Vote> = p_first.iter().map(|&i| pool[i].clone()).collect();
    let after_first = base.add(&score(cands, &committed_votes, ScoringRule::FirstLast).unwrap());
    let rest = k - p_first.len();

    if neutral.len() >= rest {
        trace.push(format!(
            "discarded {} votes ranking the preferred candidate last; residual budget {rest}",
            p_last.len()
        ));
        let mut registered = src.election.registered.clone();
        registered.extend(committed_votes);
        let kept_votes: Vec<Vote> = neutral.iter().map(|&i| pool[i].clone()).collect();
        let instance = ControlInstance {
            election: Election::new(cands.clone(), registered, kept_votes)
                .expect("normalization only moves votes between the two lists"),
            rule: src.rule,
            preferred: src.preferred.clone(),
            budget: rest,
            action: src.action,
            exact: true,
        };
        return Ok(ReductionOutcome::Reduced(NormalizedAdd {
            instance,
            committed: p_first,
            kept: neutral,
            trace,
        }));
    }

    // Even all p-neutral votes cannot fill the budget: the shortfall comes
    // from p-last votes, each dropping p by one and raising one rival.
    let neutral_votes: Vec<Vote> = neutral.iter().map(|&i| pool[i].clone()).collect();
    let after_neutral =
        after_first.add(&score(cands, &neutral_votes, ScoringRule::FirstLast).unwrap());
    let shortfall = rest - neutral.len();
    trace.push(format!(
        "committed all {} p-neutral votes; {shortfall} additions must rank the preferred candidate last",
        neutral.len()
    ));
    if shortfall > p_last.len() {
        return Ok(ReductionOutcome::decided_no(format!(
            "{shortfall} p-last additions needed but only {} exist",
            p_last.len()
        )));
    }
    let p_final = after_neutral.get(&p) - shortfall as i64;
    let mut first_votes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for &i in &p_last {
        first_votes.entry(pool[i].first().as_str()).or_default().push(i);
    }
    let mut room = 0i64;
    let mut extras = Vec::new();
    for a in cands.iter().filter(|c| **c != p) {
        let cap = p_final - after_neutral.get(a);
        if cap < 0 {
            return Ok(ReductionOutcome::decided_no(format!(
                "rival {a:?} ends above the preferred candidate no matter which p-last votes go in"
            )));
        }
        let bucket = first_votes.get(a.as_str()).map(Vec::as_slice).unwrap_or(&[]);
        let take = bucket.len().min(usize::try_from(cap).unwrap_or(usize::MAX));
        room += take as i64;
        extras.extend_from_slice(&bucket[..take]);
    }
    Ok(if room >= shortfall as i64 {
        // Taking any `shortfall`-subset of the capped picks still respects
        // every rival's cap.
        extras.truncate(shortfall);
        let mut chosen: Vec<usize> =
            p_first.iter().chain(neutral.iter()).chain(extras.iter()).copied().collect();
        chosen.sort_unstable();
        ReductionOutcome::decided_yes_witnessed(
            format!("{shortfall} p-last additions fit under every rival's cap"),
            Vec::new(),
            chosen,
        )
    } else {
        ReductionOutcome::decided_no(format!(
            "only {room} p-last additions fit under the rival caps, {shortfall} are needed"
        ))
    })
}

/// An exact perfect b-matching instance equivalent to an exact-addition
/// question, with the vote behind every red edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddMatching {
    /// Bipartite instance: a red-count-`red_target` perfect b-matching
    /// exists iff the addition question is a yes.
    pub instance: BMatchingInstance,
    /// Original unregistered indices committed during normalization.
    pub committed: Vec<usize>,
    /// Red edge id → original unregistered index.
    pub edge_voters: BTreeMap<usize, usize>,
    pub trace: Vec<String>,
}

impl AddMatching {
    /// Translate an accepted matching certificate into the original
    /// unregistered indices to add.
    pub fn witness_voters(&self, cert: &MatchingCertificate) -> Vec<usize> {
        let mut out = self.committed.clone();
        for &id in &cert.edge_ids {
            if self.instance.graph.edges[id].color == EdgeColor::Red {
                out.push(self.edge_voters[&id]);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Lay out the doubled-rival vertex set shared by the addition and
/// replacement constructions and return (graph skeleton pieces).
struct RivalLayout {
    names: Vec<String>,
    taken: BTreeSet<String>,
    /// rival position → plain vertex index (also the position itself).
    overflow: usize,
}

impl RivalLayout {
    fn new(rivals: &[&String], all_candidates: &[String]) -> Self {
        let mut taken: BTreeSet<String> = all_candidates.iter().cloned().collect();
        let mut names: Vec<String> = rivals.iter().map(|a| (*a).clone()).collect();
        let overflow = names.len();
        names.push(fresh_name(&mut taken, "x"));
        RivalLayout { names, taken, overflow }
    }
}

/// Rewrite a first-last exact-addition question as an exact perfect
/// bipartite b-matching question.
///
/// After normalization every addable vote touches two rivals: its first
/// gains a point, its last loses one. Each rival `a` becomes two vertices:
/// plain `a` with capacity `big + s_a − s_p` (how far `a` can be pulled
/// down, offset so capacities stay nonnegative) and primed `a'` with
/// capacity `big`; a vote `b > … > a` becomes a red edge `(a, b')`.
/// Uncolored supply edges `(a, a')` and overflow edges `(x, a')` let any
/// feasible addition pattern complete to a perfect b-matching, and the
/// red target pins the addition count to the exact budget.
pub fn fl_ccav_exact_to_epbbm(
    src: &ControlInstance,
) -> Result<ReductionOutcome<AddMatching>, ReductionError> {
    let norm = match fl_ccav_exact_preprocess(src)? {
        ReductionOutcome::Decided(d) => return Ok(ReductionOutcome::Decided(d)),
        ReductionOutcome::Reduced(n) => n,
    };
    let inst = &norm.instance;
    let cands = &inst.election.candidates;
    let p = &inst.preferred;
    let rivals: Vec<&String> = cands.iter().filter(|c| *c != p).collect();
    let m = rivals.len();
    let s = inst.election.registered_scores(ScoringRule::FirstLast);
    let sp = s.get(p);
    let k = inst.budget;
    let mut trace = norm.trace.clone();

    // Full first-last votes sum to zero, so a negative p-score cannot be
    // fixed by votes that give p nothing: someone always ends above zero.
    let overflow_cap: i64 = rivals.iter().map(|a| sp - s.get(a)).sum();
    if overflow_cap < 0 {
        return Ok(ReductionOutcome::decided_no(format!(
            "preferred candidate sits at {sp} after normalization and additions cannot raise it"
        )));
    }

    let gap = rivals.iter().map(|a| sp - s.get(a)).max().expect("at least one rival");
    let big = k as i64 + gap.max(0);

    let mut layout = RivalLayout::new(&rivals, cands);
    let prime_names: Vec<String> = rivals
        .iter()
        .map(|a| fresh_name(&mut layout.taken, &format!("{a}'")))
        .collect();
    layout.names.extend(prime_names);
    let prime = |i: usize| m + 1 + i;
    let rival_index: BTreeMap<&str, usize> =
        rivals.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();

    let mut graph = ColoredMultigraph::undirected(layout.names);
    let mut edge_voters = BTreeMap::new();
    for (pos, v) in inst.election.unregistered.iter().enumerate() {
        let down = rival_index[v.last().as_str()];
        let up = rival_index[v.first().as_str()];
        let id = graph.add_colored(down, prime(up), EdgeColor::Red);
        edge_voters.insert(id, norm.kept[pos]);
    }
    let rival_caps: Vec<i64> = rivals.iter().map(|a| big + s.get(a) - sp).collect();
    for (i, &cap) in rival_caps.iter().enumerate() {
        for _ in 0..cap.min(big) {
            graph.add_colored(i, prime(i), EdgeColor::Uncolored);
        }
    }
    for i in 0..m {
        for _ in 0..overflow_cap.min(big) {
            graph.add_colored(layout.overflow, prime(i), EdgeColor::Uncolored);
        }
    }
    graph.bipartition = Some(Bipartition {
        left: (0..=m).collect(),
        right: (m + 1..m + 1 + m).collect(),
    });

    let mut capacities: Vec<usize> =
        rival_caps.iter().map(|&c| usize::try_from(c).expect("big keeps caps nonnegative")).collect();
    capacities.push(usize::try_from(overflow_cap).expect("checked nonnegative"));
    capacities.extend(std::iter::repeat(big as usize).take(m));

    let instance = BMatchingInstance {
        graph,
        capacities,
        red_target: k,
        blue_target: None,
    };
    debug_assert_eq!(instance.violations(), Vec::<String>::new());
    trace.push(format!(
        "doubled {m} rivals with per-prime capacity {big}, overflow capacity {overflow_cap}, red target {k}"
    ));
    Ok(ReductionOutcome::Reduced(AddMatching {
        instance,
        committed: norm.committed,
        edge_voters,
        trace,
    }))
}

/// A replacement-control instance equivalent to an exact-addition one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplaceControl {
    pub instance: ControlInstance,
    /// Original unregistered indices committed during normalization.
    pub committed: Vec<usize>,
    /// Unregistered index of `instance` → original unregistered index.
    pub kept: Vec<usize>,
    /// How many filler voters guard each filler pair.
    pub group_size: usize,
    pub trace: Vec<String>,
}

impl ReplaceControl {
    /// Map the added-voter half of a replacement witness back to original
    /// unregistered indices for the addition question.
    pub fn witness_voters(&self, chosen_in: &[usize]) -> Vec<usize> {
        let mut out = self.committed.clone();
        out.extend(chosen_in.iter().map(|&i| self.kept[i]));
        out.sort_unstable();
        out
    }
}

/// Rewrite a first-last exact-addition question as replacement control
/// (budget or exact form, chosen by `exact`).
///
/// For each of the `k` additions the instance gains a filler pair `a_i`,
/// `b_i` and `s_p + 1` registered voters ranking `a_i` first and `b_i`
/// last, so each `a_i` sits exactly one point above the preferred
/// candidate and no original vote touches the pair. To win, one `a_i`
/// voter must fall per pair — that consumes the whole replacement budget,
/// and the votes brought in are exactly an addition set for the source.
///
/// The original registered list is replaced by a score-equivalent one in
/// which no vote ranks the preferred candidate last. This matters: under
/// replacement, removing a vote that ranks the preferred candidate last
/// would raise it above the filler bar without touching any pair,
/// breaking the one-removal-per-pair accounting. With the re-encoding the
/// preferred candidate's score can only drop when registered votes leave,
/// so every filler pair really does demand its own removal.
pub fn fl_ccav_exact_to_fl_ccrv(
    src: &ControlInstance,
    exact: bool,
) -> Result<ReductionOutcome<ReplaceControl>, ReductionError> {
    let norm = match fl_ccav_exact_preprocess(src)? {
        ReductionOutcome::Decided(d) => return Ok(ReductionOutcome::Decided(d)),
        ReductionOutcome::Reduced(n) => n,
    };
    let inst = &norm.instance;
    let s = inst.election.registered_scores(ScoringRule::FirstLast);
    let sp = s.get(&inst.preferred);
    if sp < 0 {
        return Ok(ReductionOutcome::decided_no(format!(
            "preferred candidate sits at {sp} after normalization and additions cannot raise it"
        )));
    }
    let k = inst.budget;
    let group_size = usize::try_from(sp + 1).expect("sp checked nonnegative");
    let mut trace = norm.trace.clone();
    trace.push(format!(
        "added {k} filler pairs guarded by {group_size} voters each; replacement budget {k}"
    ));

    let mut taken: BTreeSet<String> = inst.election.candidates.iter().cloned().collect();
    let uppers: Vec<String> =
        (1..=k).map(|i| fresh_name(&mut taken, &format!("a{i}"))).collect();
    let downers: Vec<String> =
        (1..=k).map(|i| fresh_name(&mut taken, &format!("b{i}"))).collect();
    let mut candidates = inst.election.candidates.clone();
    candidates.extend(uppers.iter().cloned());
    candidates.extend(downers.iter().cloned());

    // Re-encode the registered scores with a two-pointer pairing of
    // positive against negative candidates. The preferred candidate only
    // ever appears first (its score is nonnegative), so no registered vote
    // ranks it last.
    let mut positives: Vec<(String, i64)> = Vec::new();
    let mut negatives: Vec<(String, i64)> = Vec::new();
    for c in &inst.election.candidates {
        let v = s.get(c);
        if v > 0 {
            positives.push((c.clone(), v));
        }
        if v < 0 {
            negatives.push((c.clone(), -v));
        }
    }
    let mut registered: Vec<Vote> = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < positives.len() && j < negatives.len() {
        let t = positives[i].1.min(negatives[j].1);
        for _ in 0..t {
            registered.push(extremes_vote(&candidates, &positives[i].0, &negatives[j].0));
        }
        positives[i].1 -= t;
        negatives[j].1 -= t;
        if positives[i].1 == 0 {
            i += 1;
        }
        if negatives[j].1 == 0 {
            j += 1;
        }
    }
    trace.push(format!(
        "re-encoded the registered block as {} extreme votes with the preferred candidate never last",
        registered.len()
    ));
    for (a, b) in uppers.iter().zip(&downers) {
        for _ in 0..group_size {
            registered.push(extremes_vote(&candidates, a, b));
        }
    }
    let widen = |v: &Vote| extremes_vote(&candidates, v.first(), v.last());
    let unregistered: Vec<Vote> = inst.election.unregistered.iter().map(widen).collect();

    let instance = ControlInstance {
        election: Election::new(candidates, registered, unregistered)
            .expect("widened votes are permutations of the widened candidate set"),
        rule: ScoringRule::FirstLast,
        preferred: inst.preferred.clone(),
        budget: k,
        action: ControlAction::ReplaceVoters,
        exact,
    };
    Ok(ReductionOutcome::Reduced(ReplaceControl {
        instance,
        committed: norm.committed,
        kept: norm.kept,
        group_size,
        trace,
    }))
}

/// Which votes a pool's surviving choice ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PoolShape {
    /// Survivors score the preferred candidate zero.
    Neutral,
    /// Survivors rank the preferred candidate first.
    PFirst,
    /// Survivors rank the preferred candidate last.
    PLast,
}

/// One side of a replacement question after its p-touching votes have
/// been committed or discarded: `budget` votes must still be chosen from
/// `survivors`, which share a single shape.
#[derive(Debug)]
struct Pool {
    committed: Vec<usize>,
    survivors: Vec<usize>,
    budget: usize,
    shape: PoolShape,
}

/// Run the p-first / p-last commitment within one pool of votes.
///
/// The swap arguments behind exact addition hold pool-locally (swapping
/// inside one pool never touches the other pool's contribution), so each
/// pool independently maximizes p-first usage and minimizes p-last usage.
/// What the pool cannot settle locally is *which* votes of the extreme
/// shape go in; that choice stays open as `survivors`.
fn commit_pool(
    votes: &[Vote],
    budget: usize,
    p: &str,
    label: &str,
    trace: &mut Vec<String>,
) -> Result<Pool, String> {
    if budget > votes.len() {
        return Err(format!("{label}: {budget} votes demanded of {}", votes.len()));
    }
    let mut p_first = Vec::new();
    let mut neutral = Vec::new();
    let mut p_last = Vec::new();
    for (i, v) in votes.iter().enumerate() {
        if v.first().as_str() == p {
            p_first.push(i);
        } else if v.last().as_str() == p {
            p_last.push(i);
        } else {
            neutral.push(i);
        }
    }
    if budget == 0 {
        return Ok(Pool { committed: Vec::new(), survivors: Vec::new(), budget: 0, shape: PoolShape::Neutral });
    }
    if p_first.len() >= budget {
        trace.push(format!("{label}: all {budget} choices rank the preferred candidate first"));
        return Ok(Pool { committed: Vec::new(), survivors: p_first, budget, shape: PoolShape::PFirst });
    }
    let mut committed = p_first;
    let rest = budget - committed.len();
    if neutral.len() >= rest {
        trace.push(format!(
            "{label}: committed {} p-first votes, {rest} p-neutral choices remain",
            committed.len()
        ));
        return Ok(Pool { committed, survivors: neutral, budget: rest, shape: PoolShape::Neutral });
    }
    let shortfall = rest - neutral.len();
    if shortfall > p_last.len() {
        return Err(format!(
            "{label}: {shortfall} p-last votes needed beyond the {} available",
            p_last.len()
        ));
    }
    trace.push(format!(
        "{label}: committed {} p-first and {} p-neutral votes, {shortfall} p-last choices remain",
        committed.len(),
        neutral.len()
    ));
    committed.extend(neutral);
    Ok(Pool { committed, survivors: p_last, budget: shortfall, shape: PoolShape::PLast })
}

/// A two-colored exact perfect b-matching instance equivalent to an exact
/// replacement question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplaceMatching {
    /// Bipartite instance; yes iff a perfect b-matching with exactly
    /// `red_target` red and `blue_target` blue edges exists.
    pub instance: BMatchingInstance,
    /// Registered indices every solution keeps.
    pub keep_committed: Vec<usize>,
    /// Unregistered indices every solution adds.
    pub add_committed: Vec<usize>,
    /// Red edge id → registered index kept when the edge is chosen.
    pub keep_edges: BTreeMap<usize, usize>,
    /// Blue edge id → unregistered index added when the edge is chosen.
    pub add_edges: BTreeMap<usize, usize>,
    /// Size of the original registered list.
    pub registered_count: usize,
    pub trace: Vec<String>,
}

impl ReplaceMatching {
    /// Translate an accepted certificate into `(removed registered,
    /// added unregistered)` index sets for the source instance.
    pub fn witness_replacement(&self, cert: &MatchingCertificate) -> (Vec<usize>, Vec<usize>) {
        let mut kept: BTreeSet<usize> = self.keep_committed.iter().copied().collect();
        let mut added: BTreeSet<usize> = self.add_committed.iter().copied().collect();
        for &id in &cert.edge_ids {
            match self.instance.graph.edges[id].color {
                EdgeColor::Red => {
                    kept.insert(self.keep_edges[&id]);
                }
                EdgeColor::Blue => {
                    added.insert(self.add_edges[&id]);
                }
                EdgeColor::Uncolored => {}
            }
        }
        let out: Vec<usize> =
            (0..self.registered_count).filter(|i| !kept.contains(i)).collect();
        (out, added.into_iter().collect())
    }
}

/// Rewrite a first-last exact replacement question as a two-colored exact
/// perfect bipartite b-matching question.
///
/// Replacing exactly `z` voters means keeping `‖X‖ − z` registered votes
/// (red choices) and adding `z` unregistered ones (blue choices) into an
/// otherwise empty election. Each side runs the pool commitment above; the
/// committed votes fold into base scores, and the doubled-rival graph of
/// [`fl_ccav_exact_to_epbbm`] extends to the surviving shapes:
///
/// * p-neutral survivors keep the `(last, first')` edge form;
/// * p-first survivors lower one rival each, so their edges run from the
///   rival's plain vertex into a fresh sink whose capacity forces exactly
///   that pool's budget of them;
/// * p-last survivors raise one rival each, so their edges run from a
///   fresh source into the rival's primed vertex.
///
/// p's final score is fixed either way (commitments plus one point per
/// p-first choice minus one per p-last choice), which keeps the rival
/// capacities well defined.
pub fn fl_ccrv_exact_to_red_blue_bipartite(
    src: &ControlInstance,
) -> Result<ReductionOutcome<ReplaceMatching>, ReductionError> {
    require_shape(src, ScoringRule::FirstLast, ControlAction::ReplaceVoters, true)?;
    let p = src.preferred.clone();
    let cands = &src.election.candidates;
    let x_votes = &src.election.registered;
    let y_votes = &src.election.unregistered;
    let z = src.budget;
    let mut trace = Vec::new();

    if z > x_votes.len() || z > y_votes.len() {
        return Ok(ReductionOutcome::decided_no(format!(
            "cannot replace exactly {z} of {} registered voters with {} unregistered ones",
            x_votes.len(),
            y_votes.len()
        )));
    }
    if z == 0 {
        let w = winners(&src.election.registered_scores(ScoringRule::FirstLast));
        return Ok(if w.contains(&p) {
            ReductionOutcome::decided_yes_witnessed(
                "no replacements allowed and the preferred candidate already wins",
                Vec::new(),
                Vec::new(),
            )
        } else {
            ReductionOutcome::decided_no("no replacements allowed and the preferred candidate loses as is")
        });
    }

    let keep = match commit_pool(x_votes, x_votes.len() - z, &p, "kept registered votes", &mut trace) {
        Ok(pool) => pool,
        Err(reason) => return Ok(ReductionOutcome::decided_no(reason)),
    };
    let add = match commit_pool(y_votes, z, &p, "added votes", &mut trace) {
        Ok(pool) => pool,
        Err(reason) => return Ok(ReductionOutcome::decided_no(reason)),
    };

    let mut committed_votes: Vec<Vote> =
        keep.committed.iter().map(|&i| x_votes[i].clone()).collect();
    committed_votes.extend(add.committed.iter().map(|&i| y_votes[i].clone()));
    let base = score(cands, &committed_votes, ScoringRule::FirstLast)
        .expect("committed votes come from a validated instance");
    let pools = [(&keep, EdgeColor::Red, "keep"), (&add, EdgeColor::Blue, "add")];
    let shift: i64 = pools
        .iter()
        .map(|(pool, _, _)| match pool.shape {
            PoolShape::PFirst => pool.budget as i64,
            PoolShape::PLast => -(pool.budget as i64),
            PoolShape::Neutral => 0,
        })
        .sum();
    let sp = base.get(&p) + shift;

    let rivals: Vec<&String> = cands.iter().filter(|c| **c != p).collect();
    let m = rivals.len();
    let overflow_cap: i64 = rivals.iter().map(|a| sp - base.get(a)).sum::<i64>() + shift;
    if overflow_cap < 0 {
        return Ok(ReductionOutcome::decided_no(format!(
            "forced commitments leave the preferred candidate at {sp}, too far behind the field"
        )));
    }
    let total_budget = keep.budget + add.budget;
    let gap = rivals.iter().map(|a| sp - base.get(a)).max().expect("at least one rival");
    let big = total_budget as i64 + gap.max(0);

    // Vertex layout: rivals, overflow, p-last sources, primed rivals,
    // p-first sinks. Capacities are built alongside.
    let mut layout = RivalLayout::new(&rivals, cands);
    let rival_caps: Vec<i64> = rivals.iter().map(|a| big + base.get(a) - sp).collect();
    let mut capacities: Vec<usize> = rival_caps
        .iter()
        .map(|&c| usize::try_from(c).expect("big keeps caps nonnegative"))
        .collect();
    capacities.push(usize::try_from(overflow_cap).expect("checked nonnegative"));
    let mut source_of = [None, None];
    for (pos, (pool, _, name)) in pools.iter().enumerate() {
        if pool.shape == PoolShape::PLast {
            source_of[pos] = Some(layout.names.len());
            layout.names.push(fresh_name(&mut layout.taken, name));
            capacities.push(pool.budget);
        }
    }
    let left_end = layout.names.len();
    let prime_base = left_end;
    for a in &rivals {
        layout.names.push(fresh_name(&mut layout.taken, &format!("{a}'")));
        capacities.push(big as usize);
    }
    let mut sink_of = [None, None];
    for (pos, (pool, _, name)) in pools.iter().enumerate() {
        if pool.shape == PoolShape::PFirst {
            sink_of[pos] = Some(layout.names.len());
            layout.names.push(fresh_name(&mut layout.taken, &format!("{name}'")));
            capacities.push(pool.budget);
        }
    }
    let vertex_total = layout.names.len();
    let prime = |i: usize| prime_base + i;
    let rival_index: BTreeMap<&str, usize> =
        rivals.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();

    let mut graph = ColoredMultigraph::undirected(layout.names);
    let mut keep_edges = BTreeMap::new();
    let mut add_edges = BTreeMap::new();
    for (pos, (pool, color, _)) in pools.iter().enumerate() {
        let votes = if pos == 0 { x_votes } else { y_votes };
        for &vi in &pool.survivors {
            let v = &votes[vi];
            let (u, w) = match pool.shape {
                PoolShape::Neutral => {
                    (rival_index[v.last().as_str()], prime(rival_index[v.first().as_str()]))
                }
                PoolShape::PFirst => {
                    (rival_index[v.last().as_str()], sink_of[pos].expect("sink allocated"))
                }
                PoolShape::PLast => {
                    (source_of[pos].expect("source allocated"), prime(rival_index[v.first().as_str()]))
                }
            };
            let id = graph.add_colored(u, w, *color);
            if pos == 0 {
                keep_edges.insert(id, vi);
            } else {
                add_edges.insert(id, vi);
            }
        }
    }
    for (i, &cap) in rival_caps.iter().enumerate() {
        for _ in 0..cap.min(big) {
            graph.add_colored(i, prime(i), EdgeColor::Uncolored);
        }
    }
    for i in 0..m {
        for _ in 0..overflow_cap.min(big) {
            graph.add_colored(layout.overflow, prime(i), EdgeColor::Uncolored);
        }
    }
    graph.bipartition = Some(Bipartition {
        left: (0..left_end).collect(),
        right: (left_end..vertex_total).collect(),
    });

    let instance = BMatchingInstance {
        graph,
        capacities,
        red_target: keep.budget,
        blue_target: Some(add.budget),
    };
    debug_assert_eq!(instance.violations(), Vec::<String>::new());
    trace.push(format!(
        "doubled {m} rivals; red target {} over {} kept-vote edges, blue target {} over {} added-vote edges",
        keep.budget,
        keep_edges.len(),
        add.budget,
        add_edges.len()
    ));
    Ok(ReductionOutcome::Reduced(ReplaceMatching {
        instance,
        keep_committed: keep.committed,
        add_committed: add.committed,
        keep_edges,
        add_edges,
        registered_count: x_votes.len(),
        trace,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::apply_control;
    use crate::matching::brute::search_exact_perfect_b_matching;
    use crate::matching::{decide_exact_perfect_b_matching, RandomizedConfig};
    use crate::solve::{oracle_control, oracle_control_with, oracle_control_witness, OracleCaps};
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn ids(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    /// Registered profile scoring a:3, b:−2, c:−2, p:1; five addable votes,
    /// two of which must go in.
    fn running_example() -> ControlInstance {
        let cands = ids(&["a", "b", "c", "p"]);
        let registered = vec![
            extremes_vote(&cands, "a", "b"),
            extremes_vote(&cands, "a", "b"),
            extremes_vote(&cands, "a", "c"),
            extremes_vote(&cands, "a", "c"),
            extremes_vote(&cands, "p", "a"),
        ];
        let unregistered = vec![
            extremes_vote(&cands, "b", "a"),
            extremes_vote(&cands, "c", "a"),
            extremes_vote(&cands, "c", "a"),
            extremes_vote(&cands, "b", "c"),
            extremes_vote(&cands, "a", "b"),
        ];
        ControlInstance {
            election: Election::new(cands, registered, unregistered).unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 2,
            action: ControlAction::AddVoters,
            exact: true,
        }
    }

    fn random_fl_instance(
        rng: &mut StdRng,
        action: ControlAction,
        exact: bool,
    ) -> ControlInstance {
        let n_cands = rng.random_range(3..=4usize);
        let all = ["a", "b", "c", "d"];
        let cands = ids(&all[..n_cands]);
        let vote = |rng: &mut StdRng| {
            let mut r = cands.clone();
            r.shuffle(rng);
            Vote::new(r)
        };
        let registered: Vec<Vote> =
            (0..rng.random_range(0..=4usize)).map(|_| vote(rng)).collect();
        let unregistered: Vec<Vote> =
            (0..rng.random_range(0..=5usize)).map(|_| vote(rng)).collect();
        let budget = rng.random_range(0..=4usize);
        let preferred = cands[rng.random_range(0..cands.len())].clone();
        ControlInstance {
            election: Election::new(cands, registered, unregistered).unwrap(),
            rule: ScoringRule::FirstLast,
            preferred,
            budget,
            action,
            exact,
        }
    }

    #[test]
    fn zero_budget_decides_on_the_registered_winners() {
        let mut src = running_example();
        src.budget = 0;
        let out = fl_ccav_exact_preprocess(&src).unwrap();
        let d = out.decision().expect("zero budget always decides");
        assert!(!d.yes, "a leads p by 2 with no additions allowed");

        // Tie p with a and zero additions become a yes.
        let cands = ids(&["a", "b", "c", "p"]);
        let tied = ControlInstance {
            election: Election::new(
                cands.clone(),
                vec![extremes_vote(&cands, "a", "b"), extremes_vote(&cands, "p", "b")],
                vec![extremes_vote(&cands, "c", "a")],
            )
            .unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 0,
            action: ControlAction::AddVoters,
            exact: true,
        };
        let out = fl_ccav_exact_preprocess(&tied).unwrap();
        assert!(out.decision().unwrap().yes);
    }

    #[test]
    fn plentiful_p_first_votes_decide_greedily() {
        let cands = ids(&["a", "b", "p"]);
        // a leads p by 3; three of the p-first votes rank a last.
        let registered = vec![
            extremes_vote(&cands, "a", "b"),
            extremes_vote(&cands, "a", "b"),
            extremes_vote(&cands, "a", "b"),
        ];
        let unregistered = vec![
            extremes_vote(&cands, "p", "a"),
            extremes_vote(&cands, "p", "a"),
            extremes_vote(&cands, "p", "b"),
        ];
        let mut src = ControlInstance {
            election: Election::new(cands, registered, unregistered).unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 2,
            action: ControlAction::AddVoters,
            exact: true,
        };
        // k=2: p reaches 2, a needs one a-last vote; available. Yes.
        let out = fl_ccav_exact_preprocess(&src).unwrap();
        assert!(out.decision().unwrap().yes);
        assert!(oracle_control(&src).unwrap());

        // k=1: p reaches 1, a's deficit is 2 but only 1 vote fits. No.
        src.budget = 1;
        let out = fl_ccav_exact_preprocess(&src).unwrap();
        assert!(!out.decision().unwrap().yes);
        assert!(!oracle_control(&src).unwrap());
    }

    #[test]
    fn oversized_budget_is_infeasible() {
        let mut src = running_example();
        src.budget = 6;
        let out = fl_ccav_exact_preprocess(&src).unwrap();
        assert!(!out.decision().unwrap().yes);
    }

    #[test]
    fn running_example_is_already_normalized() {
        let src = running_example();
        let norm = fl_ccav_exact_preprocess(&src).unwrap().expect_reduced("normalized");
        assert_eq!(norm.instance, src);
        assert!(norm.committed.is_empty());
        assert_eq!(norm.kept, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn p_last_shortfall_is_decided_against_rival_caps() {
        let cands = ids(&["a", "b", "p"]);
        // p leads comfortably; adding exactly 2 votes from a pool of two
        // p-last votes costs p two points and feeds the rivals.
        let registered = vec![
            extremes_vote(&cands, "p", "a"),
            extremes_vote(&cands, "p", "a"),
            extremes_vote(&cands, "p", "b"),
        ];
        let unregistered = vec![extremes_vote(&cands, "a", "p"), extremes_vote(&cands, "b", "p")];
        let src = ControlInstance {
            election: Election::new(cands, registered, unregistered).unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 2,
            action: ControlAction::AddVoters,
            exact: true,
        };
        // p: 3 → 1 after two forced p-last additions; a: −2+1, b: −1+1 stay under.
        let out = fl_ccav_exact_preprocess(&src).unwrap();
        assert!(out.decision().unwrap().yes);
        assert!(oracle_control(&src).unwrap());
    }

    #[test]
    fn preprocess_decision_matches_the_oracle_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        let mut decided = 0;
        for _ in 0..300 {
            let src = random_fl_instance(&mut rng, ControlAction::AddVoters, true);
            let want = oracle_control(&src).unwrap();
            match fl_ccav_exact_preprocess(&src).unwrap() {
                ReductionOutcome::Decided(d) => {
                    decided += 1;
                    assert_eq!(d.yes, want, "decided wrong on {src:?}");
                }
                ReductionOutcome::Reduced(norm) => {
                    assert_eq!(oracle_control(&norm.instance).unwrap(), want, "{src:?}");
                    for v in &norm.instance.election.unregistered {
                        assert_ne!(v.first(), &src.preferred);
                        assert_ne!(v.last(), &src.preferred);
                    }
                    // Replay: oracle witness on the normalized instance maps
                    // back to a winning addition set of the source.
                    if want {
                        let (_, inn) = oracle_control_witness(&norm.instance, &OracleCaps::default())
                            .unwrap()
                            .expect("yes instance has a witness");
                        let mapped = norm.witness_voters(&inn);
                        let after = apply_control(&src, &[], &mapped).unwrap();
                        let scores = crate::election::score(
                            &after.candidates,
                            &after.registered,
                            ScoringRule::FirstLast,
                        )
                        .unwrap();
                        assert!(winners(&scores).contains(&src.preferred));
                    }
                }
            }
        }
        assert!(decided > 30, "case split never exercised the greedy paths");
    }

    #[test]
    fn running_example_builds_the_doubled_rival_graph() {
        let out = fl_ccav_exact_to_epbbm(&running_example()).unwrap();
        let red = out.reduced().expect("reduces to a matching instance");
        let inst = &red.instance;
        assert_eq!(
            inst.graph.vertices,
            ids(&["a", "b", "c", "x", "a'", "b'", "c'"])
        );
        assert_eq!(inst.capacities, vec![7, 2, 2, 4, 5, 5, 5]);
        assert_eq!(inst.red_target, 2);
        assert_eq!(inst.blue_target, None);
        let red_edges: Vec<(usize, usize)> = inst
            .graph
            .edges
            .iter()
            .filter(|e| e.color == EdgeColor::Red)
            .map(|e| (e.u, e.v))
            .collect();
        assert_eq!(red_edges, vec![(0, 5), (0, 6), (0, 6), (2, 5), (1, 4)]);
        let mut supply: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in inst.graph.edges.iter().filter(|e| e.color == EdgeColor::Uncolored) {
            *supply.entry((e.u, e.v)).or_insert(0) += 1;
        }
        assert_eq!(
            supply,
            BTreeMap::from([
                ((0, 4), 5),
                ((1, 5), 2),
                ((2, 6), 2),
                ((3, 4), 4),
                ((3, 5), 4),
                ((3, 6), 4),
            ])
        );

        // The instance answers yes at the exact budget, and a certificate
        // maps back to a winning pair of additions.
        let cert = search_exact_perfect_b_matching(inst, 30)
            .unwrap()
            .expect("a two-red perfect b-matching exists");
        let chosen = red.witness_voters(&cert);
        assert_eq!(chosen.len(), 2);
        let src = running_example();
        let after = apply_control(&src, &[], &chosen).unwrap();
        let scores =
            score(&after.candidates, &after.registered, ScoringRule::FirstLast).unwrap();
        assert!(winners(&scores).contains(&src.preferred));
    }

    #[test]
    fn negative_p_score_short_circuits_the_graph_build() {
        let cands = ids(&["a", "b", "p"]);
        let registered = vec![extremes_vote(&cands, "a", "p")];
        let unregistered = vec![extremes_vote(&cands, "a", "b"), extremes_vote(&cands, "b", "a")];
        let src = ControlInstance {
            election: Election::new(cands, registered, unregistered).unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 1,
            action: ControlAction::AddVoters,
            exact: true,
        };
        let out = fl_ccav_exact_to_epbbm(&src).unwrap();
        let d = out.decision().expect("negative p-score decides");
        assert!(!d.yes);
        assert!(!oracle_control(&src).unwrap());
    }

    #[test]
    fn matching_pipeline_agrees_with_the_oracle_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0002);
        // Yes answers from the decider are certain; extra trials only
        // shrink the already-negligible false-no odds, so two suffice here.
        let cfg = RandomizedConfig { trials: 2, ..RandomizedConfig::with_seed(11) };
        for round in 0..150 {
            let src = random_fl_instance(&mut rng, ControlAction::AddVoters, true);
            let want = oracle_control(&src).unwrap();
            let got = match fl_ccav_exact_to_epbbm(&src).unwrap() {
                ReductionOutcome::Decided(d) => d.yes,
                ReductionOutcome::Reduced(red) => {
                    decide_exact_perfect_b_matching(&red.instance, &cfg).unwrap().is_yes()
                }
            };
            assert_eq!(got, want, "round {round}: {src:?}");
        }
    }

    #[test]
    fn replacement_form_guards_each_filler_pair() {
        let src = running_example();
        for exact in [false, true] {
            let out = fl_ccav_exact_to_fl_ccrv(&src, exact).unwrap();
            let red = out.reduced().expect("running example reduces");
            let inst = &red.instance;
            assert_eq!(
                inst.election.candidates,
                ids(&["a", "b", "c", "p", "a1", "a2", "b1", "b2"])
            );
            assert_eq!(red.group_size, 2);
            // Re-encoded block: one vote per positive score point (a: 3,
            // p: 1), plus two guards for each of the two filler pairs.
            assert_eq!(inst.election.registered.len(), 4 + 2 * 2);
            assert!(inst.election.registered.iter().all(|v| v.last() != "p"));
            assert_eq!(inst.budget, 2);
            assert_eq!(inst.exact, exact);
            let s = inst.election.registered_scores(ScoringRule::FirstLast);
            assert_eq!(s.get("a"), 3);
            assert_eq!(s.get("b"), -2);
            assert_eq!(s.get("c"), -2);
            assert_eq!(s.get("a1"), 2);
            assert_eq!(s.get("a2"), 2);
            assert_eq!(s.get("b1"), -2);
            assert_eq!(s.get("b2"), -2);
            assert_eq!(s.get("p"), 1);
            let caps = OracleCaps { max_candidates: 8, max_voters: 16, ..OracleCaps::default() };
            assert!(oracle_control_with(inst, &caps).unwrap());

            // A replacement witness swaps in an addition set for the source.
            let (_, inn) = oracle_control_witness(inst, &caps).unwrap().expect("yes");
            let mapped = red.witness_voters(&inn);
            assert_eq!(mapped.len(), 2);
            let after = apply_control(&src, &[], &mapped).unwrap();
            let scores =
                score(&after.candidates, &after.registered, ScoringRule::FirstLast).unwrap();
            assert!(winners(&scores).contains(&src.preferred));
        }
    }

    #[test]
    fn replacement_form_agrees_with_the_oracle_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        // Keep sources small: each addition budgeted spawns a guarded
        // filler pair, so voter counts grow by (s_p + 1) per budget unit.
        let caps = OracleCaps { max_candidates: 10, max_voters: 24, ..OracleCaps::default() };
        for round in 0..60 {
            let cands = ids(&["a", "b", "p"]);
            let vote = |rng: &mut StdRng| {
                let mut r = cands.clone();
                r.shuffle(rng);
                Vote::new(r)
            };
            let registered: Vec<Vote> =
                (0..rng.random_range(0..=3usize)).map(|_| vote(&mut rng)).collect();
            let unregistered: Vec<Vote> =
                (0..rng.random_range(0..=4usize)).map(|_| vote(&mut rng)).collect();
            let budget = rng.random_range(0..=2usize);
            let src = ControlInstance {
                election: Election::new(cands, registered, unregistered).unwrap(),
                rule: ScoringRule::FirstLast,
                preferred: "p".into(),
                budget,
                action: ControlAction::AddVoters,
                exact: true,
            };
            let want = oracle_control(&src).unwrap();
            for exact in [false, true] {
                let got = match fl_ccav_exact_to_fl_ccrv(&src, exact).unwrap() {
                    ReductionOutcome::Decided(d) => d.yes,
                    ReductionOutcome::Reduced(red) => oracle_control_with(&red.instance, &caps).unwrap(),
                };
                assert_eq!(got, want, "round {round} exact {exact}: {src:?}");
            }
        }
    }

    #[test]
    fn zero_replacements_decide_on_the_spot() {
        let cands = ids(&["a", "p"]);
        let make = |first: &str| ControlInstance {
            election: Election::new(
                cands.clone(),
                vec![extremes_vote(&cands, first, if first == "p" { "a" } else { "p" })],
                vec![extremes_vote(&cands, "p", "a")],
            )
            .unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 0,
            action: ControlAction::ReplaceVoters,
            exact: true,
        };
        let winning = fl_ccrv_exact_to_red_blue_bipartite(&make("p")).unwrap();
        assert!(winning.decision().unwrap().yes);
        let losing = fl_ccrv_exact_to_red_blue_bipartite(&make("a")).unwrap();
        assert!(!losing.decision().unwrap().yes);
    }

    #[test]
    fn pure_p_first_pools_grow_a_sink() {
        let cands = ids(&["a", "b", "p"]);
        // All registered votes rank p first; keeping 2 of 3 is a p-first
        // pool, so the graph needs the keep-side sink.
        let registered = vec![
            extremes_vote(&cands, "p", "a"),
            extremes_vote(&cands, "p", "a"),
            extremes_vote(&cands, "p", "b"),
        ];
        let unregistered = vec![extremes_vote(&cands, "a", "b"), extremes_vote(&cands, "b", "a")];
        let src = ControlInstance {
            election: Election::new(cands, registered, unregistered).unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 1,
            action: ControlAction::ReplaceVoters,
            exact: true,
        };
        let out = fl_ccrv_exact_to_red_blue_bipartite(&src).unwrap();
        let red = out.reduced().expect("builds a graph");
        let keep_sink = red.instance.graph.vertex_index("keep'").expect("sink exists");
        assert_eq!(red.instance.capacities[keep_sink], 2);
        let sink_degree = red
            .instance
            .graph
            .edges
            .iter()
            .filter(|e| e.u == keep_sink || e.v == keep_sink)
            .count();
        assert_eq!(sink_degree, 3, "each kept-vote choice feeds the sink");
        assert_eq!(red.instance.red_target, 2);
        assert_eq!(red.instance.blue_target, Some(1));

        let want = oracle_control(&src).unwrap();
        let cfg = RandomizedConfig::with_seed(23);
        let got = decide_exact_perfect_b_matching(&red.instance, &cfg).unwrap().is_yes();
        assert_eq!(got, want);
    }

    #[test]
    fn replacing_everything_matches_the_pure_addition_question() {
        let cands = ids(&["a", "b", "p"]);
        let registered = vec![extremes_vote(&cands, "a", "p"), extremes_vote(&cands, "b", "p")];
        let unregistered = vec![
            extremes_vote(&cands, "p", "a"),
            extremes_vote(&cands, "b", "a"),
            extremes_vote(&cands, "a", "b"),
        ];
        let replace_all = ControlInstance {
            election: Election::new(cands.clone(), registered, unregistered.clone()).unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 2,
            action: ControlAction::ReplaceVoters,
            exact: true,
        };
        let pure_add = ControlInstance {
            election: Election::new(cands, Vec::new(), unregistered).unwrap(),
            rule: ScoringRule::FirstLast,
            preferred: "p".into(),
            budget: 2,
            action: ControlAction::AddVoters,
            exact: true,
        };
        assert_eq!(oracle_control(&replace_all).unwrap(), oracle_control(&pure_add).unwrap());
        let cfg = RandomizedConfig::with_seed(5);
        let via_replace = match fl_ccrv_exact_to_red_blue_bipartite(&replace_all).unwrap() {
            ReductionOutcome::Decided(d) => d.yes,
            ReductionOutcome::Reduced(r) => {
                decide_exact_perfect_b_matching(&r.instance, &cfg).unwrap().is_yes()
            }
        };
        assert_eq!(via_replace, oracle_control(&replace_all).unwrap());
    }

    #[test]
    fn replacement_matching_agrees_with_the_oracle_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0004);
        let cfg = RandomizedConfig { trials: 2, ..RandomizedConfig::with_seed(31) };
        for round in 0..150 {
            let src = random_fl_instance(&mut rng, ControlAction::ReplaceVoters, true);
            let want = oracle_control(&src).unwrap();
            let outcome = fl_ccrv_exact_to_red_blue_bipartite(&src).unwrap();
            let got = match &outcome {
                ReductionOutcome::Decided(d) => d.yes,
                ReductionOutcome::Reduced(red) => {
                    decide_exact_perfect_b_matching(&red.instance, &cfg).unwrap().is_yes()
                }
            };
            assert_eq!(got, want, "round {round}: {src:?}");

            // Witness replay on reduced yes-instances.
            if want {
                if let ReductionOutcome::Reduced(red) = &outcome {
                    if red.instance.graph.edge_count() <= 26 {
                        let cert = search_exact_perfect_b_matching(&red.instance, 26)
                            .unwrap()
                            .expect("decider said yes");
                        let (out, inn) = red.witness_replacement(&cert);
                        assert_eq!(out.len(), src.budget);
                        assert_eq!(inn.len(), src.budget);
                        let after = apply_control(&src, &out, &inn).unwrap();
                        let scores = score(
                            &after.candidates,
                            &after.registered,
                            ScoringRule::FirstLast,
                        )
                        .unwrap();
                        assert!(winners(&scores).contains(&src.preferred), "round {round}");
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let mut src = running_example();
        src.exact = false;
        assert!(matches!(
            fl_ccav_exact_preprocess(&src),
            Err(ReductionError::WrongShape(_))
        ));
        let mut src = running_example();
        src.rule = ScoringRule::TwoApproval;
        assert!(matches!(fl_ccav_exact_to_epbbm(&src), Err(ReductionError::WrongShape(_))));
        let mut src = running_example();
        src.action = ControlAction::ReplaceVoters;
        assert!(matches!(
            fl_ccav_exact_to_fl_ccrv(&src, true),
            Err(ReductionError::WrongShape(_))
        ));
        assert!(matches!(
            fl_ccrv_exact_to_red_blue_bipartite(&running_example()),
            Err(ReductionError::WrongShape(_))
        ));
    }
}
