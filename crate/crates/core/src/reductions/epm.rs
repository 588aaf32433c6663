//! Exact matchings with a prescribed red count, normalized and rewritten
//! as voter control.
//!
//! The question "does a perfect matching with exactly `ℓ` red edges
//! exist?" normalizes to the special case where the red edges number
//! exactly half the vertices: padding components that are forced into
//! every perfect matching adjust either side of the balance without
//! touching the answer. Once balanced, the question *is* a 2-approval
//! replacement question — each edge becomes a voter approving its two
//! endpoints, red edges start registered, the rest wait in the pool, and
//! a guarded pair of fresh candidates pins the winning score at one,
//! which is exactly the "every vertex matched at most once" constraint.

use crate::election::{approval_vote, ControlAction, ControlInstance, Election, ScoringRule};
use crate::graph::{ColoredMultigraph, EdgeColor, MatchingCertificate};
use crate::reductions::{fresh_name, ReductionError, ReductionOutcome};
use std::collections::{BTreeMap, BTreeSet};

/// Shared entry checks: these operations speak undirected red/uncolored
/// multigraphs. Self-loops are already impossible — the graph layer
/// rejects them in undirected graphs outright.
fn require_red_graph(graph: &ColoredMultigraph) -> Result<(), ReductionError> {
    graph.validate().map_err(|e| ReductionError::InvalidInstance(e.to_string()))?;
    if graph.directed {
        return Err(ReductionError::WrongShape(
            "matchings live in undirected graphs".to_string(),
        ));
    }
    for (id, e) in graph.edges.iter().enumerate() {
        if e.color == EdgeColor::Blue {
            return Err(ReductionError::WrongShape(format!(
                "edge {id} is blue; only red and uncolored edges are supported here"
            )));
        }
    }
    Ok(())
}

/// A red-count matching question whose red edges number exactly half the
/// vertices, plus the mapping back to the unbalanced original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedRedMatching {
    pub graph: ColoredMultigraph,
    /// The red count a perfect matching must hit.
    pub red_target: usize,
    /// How far the target moved: the original question asked for
    /// `red_target − red_shift` red edges.
    pub red_shift: usize,
    /// Edges below this id are the original graph's edges, in order.
    pub source_edges: usize,
    pub trace: Vec<String>,
}

impl BalancedRedMatching {
    /// Strip padding edges from a certificate, leaving a perfect matching
    /// of the original graph.
    pub fn witness(&self, cert: &MatchingCertificate) -> MatchingCertificate {
        MatchingCertificate::new(
            cert.edge_ids.iter().copied().filter(|&id| id < self.source_edges).collect(),
        )
    }
}

/// Balance a red-count matching question so that its red edges number
/// exactly half its vertices.
///
/// Padding never changes the answer because every added component is
/// forced into every perfect matching as a block:
///
/// * too many red edges: isolated uncolored pairs raise the vertex count,
///   one pair per surplus edge, and contribute nothing red;
/// * too few red edges: a fresh all-red component (a seeded perfect
///   matching plus filler edges, all on new vertices) raises both counts;
///   any perfect matching must match the new vertices among themselves,
///   adding exactly half-the-new-vertices red edges, so the target shifts
///   by that much. The component size is the smallest even `n̂` whose
///   `n̂(n̂−1)/2` possible edges can hold the red deficit.
pub fn epm_to_restricted_epm(
    graph: &ColoredMultigraph,
    red_target: usize,
) -> Result<ReductionOutcome<BalancedRedMatching>, ReductionError> {
    require_red_graph(graph)?;
    let n = graph.vertex_count();
    if n % 2 == 1 {
        return Ok(ReductionOutcome::decided_no(format!(
            "{n} vertices admit no perfect matching at any red count"
        )));
    }
    let half = n / 2;
    let r = graph.edges.iter().filter(|e| e.color == EdgeColor::Red).count();
    let source_edges = graph.edge_count();
    let mut g = graph.clone();
    let mut taken: BTreeSet<String> = g.vertices.iter().cloned().collect();

    if r == half {
        return Ok(ReductionOutcome::Reduced(BalancedRedMatching {
            graph: g,
            red_target,
            red_shift: 0,
            source_edges,
            trace: vec![format!("{r} red edges already balance {n} vertices")],
        }));
    }

    if r > half {
        for i in 0..(r - half) {
            let a = g.add_vertex(fresh_name(&mut taken, &format!("pad{i}a")));
            let b = g.add_vertex(fresh_name(&mut taken, &format!("pad{i}b")));
            g.add_colored(a, b, EdgeColor::Uncolored);
        }
        let trace = vec![format!(
            "{} forced neutral pairs absorb the red surplus of {}",
            r - half,
            r - half
        )];
        return Ok(ReductionOutcome::Reduced(BalancedRedMatching {
            graph: g,
            red_target,
            red_shift: 0,
            source_edges,
            trace,
        }));
    }

    // Red deficit: grow an all-red component on fresh vertices. Each new
    // vertex adds half a unit to the requirement and each new edge one to
    // the supply, so the component must pack (n + n̂)/2 − r edges.
    let mut nhat = 4usize;
    while nhat * (nhat - 1) / 2 < (n + nhat) / 2 - r {
        nhat += 2;
    }
    let needed = (n + nhat) / 2 - r;
    let newv: Vec<usize> = (0..nhat)
        .map(|i| g.add_vertex(fresh_name(&mut taken, &format!("q{i}"))))
        .collect();
    for i in (0..nhat).step_by(2) {
        g.add_colored(newv[i], newv[i + 1], EdgeColor::Red);
    }
    let mut extra = needed - nhat / 2;
    'fill: for i in 0..nhat {
        for j in (i + 1)..nhat {
            if extra == 0 {
                break 'fill;
            }
            if i % 2 == 0 && j == i + 1 {
                continue; // the seeded matching already has this pair
            }
            g.add_colored(newv[i], newv[j], EdgeColor::Red);
            extra -= 1;
        }
    }
    debug_assert_eq!(extra, 0, "component size chosen too small");
    let trace = vec![format!(
        "an all-red component on {nhat} fresh vertices lifts the count by {needed}; \
         targets shift by {}",
        nhat / 2
    )];
    Ok(ReductionOutcome::Reduced(BalancedRedMatching {
        graph: g,
        red_target: red_target + nhat / 2,
        red_shift: nhat / 2,
        source_edges,
        trace,
    }))
}

/// Bookkeeping from a balanced red-count matching question to an exact
/// 2-approval replacement question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedMatchingControl {
    pub instance: ControlInstance,
    /// Registered index → source edge id. The guard vote is absent.
    pub edge_for_registered: BTreeMap<usize, usize>,
    /// Unregistered index → source edge id.
    pub edge_for_unregistered: BTreeMap<usize, usize>,
    pub trace: Vec<String>,
}

impl RedMatchingControl {
    /// Translate a winning replacement `(removed registered, added
    /// unregistered)` into the perfect matching it encodes.
    pub fn witness_matching(&self, removed: &[usize], added: &[usize]) -> MatchingCertificate {
        let out: BTreeSet<usize> = removed.iter().copied().collect();
        let mut ids: Vec<usize> = self
            .edge_for_registered
            .iter()
            .filter(|(i, _)| !out.contains(i))
            .map(|(_, &e)| e)
            .collect();
        ids.extend(added.iter().map(|j| self.edge_for_unregistered[j]));
        MatchingCertificate::new(ids)
    }
}

/// Rewrite a balanced red-count matching question (red edges = half the
/// vertices) as an exact 2-approval replacement question.
///
/// Every edge becomes a voter approving its two endpoint candidates. The
/// red voters start registered together with one guard voter approving
/// two fresh candidates; the uncolored voters wait unregistered. With the
/// guard kept, the preferred candidate's score is pinned at one, so a
/// replacement of exactly `n/2 − ℓ` voters wins iff the kept `ℓ` red and
/// added `n/2 − ℓ` uncolored votes touch every vertex at most once —
/// `n/2` edges with maximum degree one on `n` vertices, a perfect
/// matching with exactly `ℓ` red edges. Dropping the guard instead caps
/// p at zero against a field that cannot be silenced, so no winning
/// replacement does it.
pub fn restricted_epm_to_twoapp_ccrv_exact(
    graph: &ColoredMultigraph,
    red_target: usize,
) -> Result<ReductionOutcome<RedMatchingControl>, ReductionError> {
    require_red_graph(graph)?;
    let n = graph.vertex_count();
    let red = graph.edges.iter().filter(|e| e.color == EdgeColor::Red).count();
    if 2 * red != n {
        return Err(ReductionError::UnbalancedRed { red, vertices: n });
    }
    let half = n / 2;
    if red_target > half {
        return Ok(ReductionOutcome::decided_no(format!(
            "a perfect matching has {half} edges, never {red_target} red ones"
        )));
    }

    let mut taken: BTreeSet<String> = graph.vertices.iter().cloned().collect();
    let p = fresh_name(&mut taken, "p");
    let guard = fresh_name(&mut taken, "p'");
    let mut candidates = graph.vertices.clone();
    candidates.push(p.clone());
    candidates.push(guard.clone());

    let mut registered = Vec::with_capacity(red + 1);
    let mut unregistered = Vec::new();
    let mut edge_for_registered = BTreeMap::new();
    let mut edge_for_unregistered = BTreeMap::new();
    for (id, e) in graph.edges.iter().enumerate() {
        let vote = approval_vote(&candidates, &graph.vertices[e.u], &graph.vertices[e.v]);
        if e.color == EdgeColor::Red {
            edge_for_registered.insert(registered.len(), id);
            registered.push(vote);
        } else {
            edge_for_unregistered.insert(unregistered.len(), id);
            unregistered.push(vote);
        }
    }
    registered.push(approval_vote(&candidates, &p, &guard));

    let budget = half - red_target;
    let trace = vec![format!(
        "{red} red voters plus a guard face {} waiting voters; replace exactly {budget}",
        unregistered.len()
    )];
    let instance = ControlInstance {
        election: Election::new(candidates, registered, unregistered)
            .expect("edge endpoints are distinct validated vertices"),
        rule: ScoringRule::TwoApproval,
        preferred: p,
        budget,
        action: ControlAction::ReplaceVoters,
        exact: true,
    };
    Ok(ReductionOutcome::Reduced(RedMatchingControl {
        instance,
        edge_for_registered,
        edge_for_unregistered,
        trace,
    }))
}
