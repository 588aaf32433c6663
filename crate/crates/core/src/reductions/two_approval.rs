//! 2-approval control as matching problems.
//!
//! Under 2-approval every vote pushes up exactly the two candidates it
//! approves, so an election is an undirected multigraph on the candidates
//! with one edge per vote, and a candidate's score is its degree under the
//! chosen votes. Control questions become degree bookkeeping. A swap
//! argument pins the preferred candidate's final score: exchanging any
//! chosen vote for an unused one that approves p raises p by one while
//! raising no rival past it, so there is always an optimal solution in
//! which p scores the best value `s_p` the budget allows. The reductions
//! below bake that in: each candidate vertex gets capacity `s_p`, p's
//! capacity must be filled by vote edges alone, and rivals may dump their
//! slack into an overflow vertex whose capacity absorbs exactly the gap
//! between the full field and the votes actually cast.

use crate::election::{score, ControlAction, ControlInstance, ScoringRule, Vote};
use crate::graph::{BMatchingInstance, ColoredMultigraph, EdgeColor, MatchingCertificate};
use crate::reductions::{fresh_name, require_shape, ReductionError, ReductionOutcome};
use std::collections::{BTreeMap, BTreeSet};

fn approves(v: &Vote, c: &str) -> bool {
    let (a, b) = v.top_two();
    a.as_str() == c || b.as_str() == c
}

/// Decode a certificate whose red edges mark kept registered votes and
/// whose blue edges mark added unregistered ones.
fn replacement_from_cert(
    graph: &ColoredMultigraph,
    keep_edges: &BTreeMap<usize, usize>,
    add_edges: &BTreeMap<usize, usize>,
    registered_count: usize,
    cert: &MatchingCertificate,
) -> (Vec<usize>, Vec<usize>) {
    let mut kept: BTreeSet<usize> = BTreeSet::new();
    let mut added: BTreeSet<usize> = BTreeSet::new();
    for &id in &cert.edge_ids {
        match graph.edges[id].color {
            EdgeColor::Red => {
                kept.insert(keep_edges[&id]);
            }
            EdgeColor::Blue => {
                added.insert(add_edges[&id]);
            }
            EdgeColor::Uncolored => {}
        }
    }
    let out: Vec<usize> = (0..registered_count).filter(|i| !kept.contains(i)).collect();
    (out, added.into_iter().collect())
}

/// Bookkeeping from an exact 2-approval replacement question to its
/// two-colored exact perfect b-matching form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApprovalReplaceMatching {
    pub instance: BMatchingInstance,
    /// Red edge id → registered index kept when the edge is chosen.
    pub keep_edges: BTreeMap<usize, usize>,
    /// Blue edge id → unregistered index added when the edge is chosen.
    pub add_edges: BTreeMap<usize, usize>,
    /// Size of the original registered list.
    pub registered_count: usize,
    pub trace: Vec<String>,
}

impl ApprovalReplaceMatching {
    /// Translate an accepted certificate into `(removed registered,
    /// added unregistered)` index sets for the source instance.
    pub fn witness_replacement(&self, cert: &MatchingCertificate) -> (Vec<usize>, Vec<usize>) {
        replacement_from_cert(
            &self.instance.graph,
            &self.keep_edges,
            &self.add_edges,
            self.registered_count,
            cert,
        )
    }
}

/// Rewrite a 2-approval exact replacement question as an exact perfect
/// b-matching question with both color counts prescribed.
///
/// Replacing exactly `ℓ` of the `‖X‖` registered votes keeps `k = ‖X‖ − ℓ`
/// of them, and the final election always casts `‖X‖` votes. The best
/// score the preferred candidate can reach is
/// `s_p = min(k, ‖X_p‖) + min(ℓ, ‖Y_p‖)`, counting its approvals among
/// kept and added votes, and the swap argument makes aiming for `s_p`
/// lossless. The graph has one vertex per candidate plus an overflow
/// vertex `x`; every registered vote is a red edge between its two
/// approved candidates, every unregistered vote a blue edge. Each
/// candidate's capacity is `s_p`. Rivals get `s_p` spare `(c, x)` edges to
/// soak up slack; p gets none, so a perfect b-matching forces p's chosen
/// approvals to hit `s_p` exactly while rivals stay at or below it. The
/// overflow capacity `‖C‖·s_p − 2‖X‖` is precisely the total rival slack,
/// and a negative value means no vote set can fit under the ceiling at
/// all.
pub fn twoapp_ccrv_exact_to_red_blue_b_matching(
    src: &ControlInstance,
) -> Result<ReductionOutcome<ApprovalReplaceMatching>, ReductionError> {
    require_shape(src, ScoringRule::TwoApproval, ControlAction::ReplaceVoters, true)?;
    let p = src.preferred.as_str();
    let x_votes = &src.election.registered;
    let y_votes = &src.election.unregistered;
    let l = src.budget;
    if l > x_votes.len() || l > y_votes.len() {
        return Ok(ReductionOutcome::decided_no(format!(
            "cannot replace exactly {l} of {} registered voters with {} unregistered ones",
            x_votes.len(),
            y_votes.len()
        )));
    }
    let keep = x_votes.len() - l;
    let xp = x_votes.iter().filter(|v| approves(v, p)).count();
    let yp = y_votes.iter().filter(|v| approves(v, p)).count();
    let sp = keep.min(xp) + l.min(yp);
    let cands = &src.election.candidates;
    let m = cands.len();
    let slack = (m * sp) as i64 - 2 * x_votes.len() as i64;
    if slack < 0 {
        return Ok(ReductionOutcome::decided_no(format!(
            "{} votes overfill a field of {m} candidates capped at {sp} points each",
            x_votes.len()
        )));
    }

    let mut taken: BTreeSet<String> = cands.iter().cloned().collect();
    let mut names = cands.clone();
    names.push(fresh_name(&mut taken, "x"));
    let overflow = m;
    let mut graph = ColoredMultigraph::undirected(names);
    let pos: BTreeMap<&str, usize> =
        cands.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();

    let mut keep_edges = BTreeMap::new();
    for (i, v) in x_votes.iter().enumerate() {
        let (a, b) = v.top_two();
        let id = graph.add_colored(pos[a.as_str()], pos[b.as_str()], EdgeColor::Red);
        keep_edges.insert(id, i);
    }
    let mut add_edges = BTreeMap::new();
    for (j, v) in y_votes.iter().enumerate() {
        let (a, b) = v.top_two();
        let id = graph.add_colored(pos[a.as_str()], pos[b.as_str()], EdgeColor::Blue);
        add_edges.insert(id, j);
    }
    for c in cands.iter().filter(|c| c.as_str() != p) {
        for _ in 0..sp {
            graph.add_colored(pos[c.as_str()], overflow, EdgeColor::Uncolored);
        }
    }

    let mut capacities = vec![sp; m];
    capacities.push(usize::try_from(slack).expect("slack checked nonnegative"));
    let instance = BMatchingInstance {
        graph,
        capacities,
        red_target: keep,
        blue_target: Some(l),
    };
    debug_assert!(
        instance.violations().is_empty(),
        "construction broke an invariant: {:?}",
        instance.violations()
    );
    let trace = vec![format!(
        "keep {keep} of {} registered votes and add {l}; preferred score pinned at {sp}, \
         overflow capacity {slack}",
        x_votes.len()
    )];
    Ok(ReductionOutcome::Reduced(ApprovalReplaceMatching {
        instance,
        keep_edges,
        add_edges,
        registered_count: x_votes.len(),
        trace,
    }))
}

/// Bookkeeping from an exact 2-approval addition question to a
/// maximum-cardinality b-matching question on the rivals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApprovalAddMatching {
    /// Capacitated rival graph; each edge is one addable vote that does
    /// not approve the preferred candidate. Color targets are unused.
    pub instance: BMatchingInstance,
    /// How many edges a b-matching must reach for a yes answer.
    pub needed: usize,
    /// Unregistered indices every solution adds (the p-approving votes).
    pub committed: Vec<usize>,
    /// Edge id → unregistered index.
    pub edge_voters: BTreeMap<usize, usize>,
    pub trace: Vec<String>,
}

impl ApprovalAddMatching {
    /// Translate a maximum-cardinality certificate into an addition set,
    /// or `None` if it falls short of the required count. Any sub-multiset
    /// of a b-matching is one too, so the first `needed` edges suffice.
    pub fn witness_voters(&self, cert: &MatchingCertificate) -> Option<Vec<usize>> {
        if cert.edge_ids.len() < self.needed {
            return None;
        }
        let mut out = self.committed.clone();
        out.extend(cert.edge_ids.iter().take(self.needed).map(|id| self.edge_voters[id]));
        out.sort_unstable();
        Some(out)
    }
}

/// Rewrite a 2-approval exact addition question as a maximum-cardinality
/// b-matching question.
///
/// Swapping any chosen vote for an unused p-approving one never breaks a
/// win, so additions prefer p-approving votes. When the pool holds at
/// least `k` of them the whole question is decided greedily: p lands at
/// `s_p + k`, each addition bumps exactly one rival, and the additions fit
/// iff no rival already sits above p's ceiling and the per-rival supplies
/// of bumping votes cover `k` within the rivals' remaining headroom.
/// Otherwise every p-approving vote is committed and the remaining
/// `k − t` additions come from votes between rivals: each such vote is an
/// edge between its two approved candidates, a rival's capacity is its
/// headroom under p's now-fixed final score, and the additions exist iff
/// some b-matching has `k − t` edges — which holds iff a maximum one does.
pub fn twoapp_ccav_exact_to_maxcard_b_matching(
    src: &ControlInstance,
) -> Result<ReductionOutcome<ApprovalAddMatching>, ReductionError> {
    require_shape(src, ScoringRule::TwoApproval, ControlAction::AddVoters, true)?;
    let p = src.preferred.as_str();
    let pool = &src.election.unregistered;
    let k = src.budget;
    if k > pool.len() {
        return Ok(ReductionOutcome::decided_no(format!(
            "exactly {k} additions demanded but only {} votes are available",
            pool.len()
        )));
    }
    let cands = &src.election.candidates;
    let base = src.election.registered_scores(ScoringRule::TwoApproval);
    let approvers: Vec<usize> =
        pool.iter().enumerate().filter(|(_, v)| approves(v, p)).map(|(i, _)| i).collect();

    if approvers.len() >= k {
        // Enough p-approving votes to fill the whole budget with them.
        let p_final = base.get(p) + k as i64;
        let mut avail: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for &i in &approvers {
            let (a, b) = pool[i].top_two();
            let other = if a.as_str() == p { b } else { a };
            avail.entry(other.as_str()).or_default().push(i);
        }
        let mut room: i64 = 0;
        let mut picks = Vec::new();
        for c in cands.iter().filter(|c| c.as_str() != p) {
            let cap = p_final - base.get(c);
            if cap < 0 {
                return Ok(ReductionOutcome::decided_no(format!(
                    "{c} scores {} and even {k} p-approving additions leave p at {p_final}",
                    base.get(c)
                )));
            }
            let bucket = avail.get(c.as_str()).map(Vec::as_slice).unwrap_or(&[]);
            let take = bucket.len().min(usize::try_from(cap).unwrap_or(usize::MAX));
            room += take as i64;
            picks.extend_from_slice(&bucket[..take]);
        }
        return Ok(if room >= k as i64 {
            // Any k-subset of the capped picks still respects the headroom.
            picks.truncate(k);
            picks.sort_unstable();
            ReductionOutcome::decided_yes_witnessed(
                format!("{k} p-approving additions fit under the rivals' headroom of {room}"),
                Vec::new(),
                picks,
            )
        } else {
            ReductionOutcome::decided_no(format!(
                "only {room} p-approving additions fit under the rivals' headroom, {k} are needed"
            ))
        });
    }

    // Too few p-approving votes: all of them go in, the rest of the budget
    // must come from votes between rivals.
    let committed = approvers;
    let needed = k - committed.len();
    let mut votes = src.election.registered.clone();
    votes.extend(committed.iter().map(|&i| pool[i].clone()));
    let after = score(cands, &votes, ScoringRule::TwoApproval)
        .expect("committed votes come from a validated instance");
    let p_final = after.get(p);

    let rivals: Vec<&String> = cands.iter().filter(|c| c.as_str() != p).collect();
    let mut capacities = Vec::with_capacity(rivals.len());
    for a in &rivals {
        let cap = p_final - after.get(a);
        if cap < 0 {
            return Ok(ReductionOutcome::decided_no(format!(
                "{a} scores {} once the {} p-approving votes are in, above p's {p_final}",
                after.get(a),
                committed.len()
            )));
        }
        capacities.push(usize::try_from(cap).expect("cap checked nonnegative"));
    }

    let mut graph =
        ColoredMultigraph::undirected(rivals.iter().map(|c| (*c).clone()).collect());
    let pos: BTreeMap<&str, usize> =
        rivals.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut edge_voters = BTreeMap::new();
    for (i, v) in pool.iter().enumerate() {
        if approves(v, p) {
            continue;
        }
        let (a, b) = v.top_two();
        let id = graph.add_colored(pos[a.as_str()], pos[b.as_str()], EdgeColor::Uncolored);
        edge_voters.insert(id, i);
    }
    let trace = vec![format!(
        "committed {} p-approving votes; {needed} more must fit rival headroom {capacities:?}",
        committed.len()
    )];
    let instance = BMatchingInstance { graph, capacities, red_target: 0, blue_target: None };
    Ok(ReductionOutcome::Reduced(ApprovalAddMatching {
        instance,
        needed,
        committed,
        edge_voters,
        trace,
    }))
}

/// Bookkeeping from a budgeted 2-approval replacement question to a
/// maximum-weight b-matching question with an acceptance threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApprovalReplaceWeighted {
    pub instance: BMatchingInstance,
    /// A maximum-weight b-matching reaches this weight exactly when the
    /// control question is a yes.
    pub threshold: i64,
    /// Red edge id → registered index kept when the edge is chosen.
    pub keep_edges: BTreeMap<usize, usize>,
    /// Blue edge id → unregistered index added when the edge is chosen.
    pub add_edges: BTreeMap<usize, usize>,
    /// Size of the original registered list.
    pub registered_count: usize,
    pub trace: Vec<String>,
}

impl ApprovalReplaceWeighted {
    /// Translate a certificate into `(removed registered, added
    /// unregistered)` index sets, or `None` if its weight misses the
    /// threshold (in which case the instance is a no).
    pub fn witness_replacement(
        &self,
        cert: &MatchingCertificate,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        if cert.total_weight(&self.instance.graph) < self.threshold {
            return None;
        }
        Some(replacement_from_cert(
            &self.instance.graph,
            &self.keep_edges,
            &self.add_edges,
            self.registered_count,
            cert,
        ))
    }
}

/// Rewrite a budgeted 2-approval replacement question (replace at most
/// `ℓ`) as a single maximum-weight b-matching question.
///
/// The graph is the same candidate-plus-overflow picture as the exact
/// variant, but weights replace the color targets. Every rival gets `s_p`
/// heavy overflow edges whose weight exceeds the combined weight of all
/// vote edges, so a maximum matching always packs the overflow vertex
/// full; kept votes weigh `‖X‖ + 1` and added votes `‖X‖`, so among
/// full-overflow matchings the optimum keeps as many registered votes as
/// possible and trades one keep for one add only when forced. Crossing
/// the threshold `b(x)·H + ‖X‖² + ‖X‖ − ℓ` then requires the vote edges
/// to saturate every candidate's remaining capacity exactly — pinning p
/// at `s_p`, matching kept and added counts into a genuine replacement,
/// and bounding the replacement count by `ℓ`. Budgets beyond `‖X‖` clamp
/// to `‖X‖`, which replacement semantics make lossless.
pub fn twoapp_ccrv_to_maxweight_b_matching(
    src: &ControlInstance,
) -> Result<ReductionOutcome<ApprovalReplaceWeighted>, ReductionError> {
    require_shape(src, ScoringRule::TwoApproval, ControlAction::ReplaceVoters, false)?;
    let p = src.preferred.as_str();
    let x_votes = &src.election.registered;
    let y_votes = &src.election.unregistered;
    let mut trace = Vec::new();
    let l = src.budget.min(x_votes.len());
    if l < src.budget {
        trace.push(format!(
            "budget {} clamped to the {}-vote registered list",
            src.budget,
            x_votes.len()
        ));
    }
    let xp = x_votes.iter().filter(|v| approves(v, p)).count();
    let yp = y_votes.iter().filter(|v| approves(v, p)).count();
    let sp = xp + l.min(x_votes.len() - xp).min(yp);
    let cands = &src.election.candidates;
    let m = cands.len();
    let slack = (m * sp) as i64 - 2 * x_votes.len() as i64;
    if slack < 0 {
        return Ok(ReductionOutcome::decided_no(format!(
            "{} votes overfill a field of {m} candidates capped at {sp} points each",
            x_votes.len()
        )));
    }

    let xl = x_votes.len() as i64;
    let keep_weight = xl + 1;
    let add_weight = xl;
    let light_total = xl * keep_weight + y_votes.len() as i64 * add_weight;
    let heavy = light_total + 1;

    let mut taken: BTreeSet<String> = cands.iter().cloned().collect();
    let mut names = cands.clone();
    names.push(fresh_name(&mut taken, "x"));
    let overflow = m;
    let mut graph = ColoredMultigraph::undirected(names);
    let pos: BTreeMap<&str, usize> =
        cands.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();

    let mut keep_edges = BTreeMap::new();
    for (i, v) in x_votes.iter().enumerate() {
        let (a, b) = v.top_two();
        let id = graph.add_edge(pos[a.as_str()], pos[b.as_str()], EdgeColor::Red, keep_weight);
        keep_edges.insert(id, i);
    }
    let mut add_edges = BTreeMap::new();
    for (j, v) in y_votes.iter().enumerate() {
        let (a, b) = v.top_two();
        let id = graph.add_edge(pos[a.as_str()], pos[b.as_str()], EdgeColor::Blue, add_weight);
        add_edges.insert(id, j);
    }
    for c in cands.iter().filter(|c| c.as_str() != p) {
        for _ in 0..sp {
            graph.add_edge(pos[c.as_str()], overflow, EdgeColor::Uncolored, heavy);
        }
    }

    let mut capacities = vec![sp; m];
    capacities.push(usize::try_from(slack).expect("slack checked nonnegative"));
    let threshold = slack * heavy + xl * xl + xl - l as i64;
    trace.push(format!(
        "preferred score pinned at {sp}; heavy weight {heavy}, threshold {threshold}"
    ));
    let instance =
        BMatchingInstance { graph, capacities, red_target: 0, blue_target: None };
    debug_assert!(
        instance.violations().is_empty(),
        "construction broke an invariant: {:?}",
        instance.violations()
    );
    Ok(ReductionOutcome::Reduced(ApprovalReplaceWeighted {
        instance,
        threshold,
        keep_edges,
        add_edges,
        registered_count: x_votes.len(),
        trace,
    }))
}
