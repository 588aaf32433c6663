//! From cycle sums to exact voter addition.
//!
//! The pivot fact: in a first-last election whose voters each come from an
//! arc (a, b) — voting b > … > a — every candidate's score is its in-degree
//! minus its out-degree within the chosen arc set. All scores stay at or
//! below zero (where the otherwise-untouched preferred candidate sits)
//! exactly when the chosen arcs decompose into edge-disjoint cycles. That
//! makes exact addition decide *edge*-disjoint cycle sums, so the
//! vertex-disjoint problem is first split so that cycles through a vertex
//! are forced through a private arc.

use crate::election::{extremes_vote, ControlAction, ControlInstance, Election, ScoringRule, Vote};
use crate::graph::{ColoredMultigraph, CycleSumInstance, EdgeColor};
use crate::reductions::fresh_name;
use std::collections::BTreeSet;

/// Split every vertex `v` into `v` and `v'` joined by a private arc, and
/// re-route each original arc `(u, w)` as `(u', w)`.
///
/// Any two cycles sharing a vertex in the source share the private arc of
/// that vertex here, so vertex-disjoint cycle families of total length `k`
/// in the source correspond to edge-disjoint families of total length `2k`
/// in the output, and the target sum doubles.
pub fn ecs_to_edge_disjoint(src: &CycleSumInstance) -> CycleSumInstance {
    let n = src.digraph.vertex_count();
    let mut taken: BTreeSet<String> = src.digraph.vertices.iter().cloned().collect();
    let primes: Vec<String> = src
        .digraph
        .vertices
        .iter()
        .map(|name| fresh_name(&mut taken, &format!("{name}'")))
        .collect();

    let mut names = Vec::with_capacity(2 * n);
    names.extend(src.digraph.vertices.iter().cloned());
    names.extend(primes);
    let mut split = ColoredMultigraph::directed(names);
    for v in 0..n {
        split.add_colored(v, n + v, EdgeColor::Uncolored);
    }
    for e in &src.digraph.edges {
        split.add_edge(n + e.u, e.v, e.color, e.weight);
    }
    CycleSumInstance::new(split, 2 * src.target_sum)
        .expect("the split of a valid digraph is a valid digraph")
}

/// Turn an edge-disjoint cycle-sum question into exact voter addition.
///
/// Candidates are the digraph's vertices plus a fresh preferred candidate;
/// each arc `(a, b)` becomes an unregistered voter ranking `b` first and
/// `a` last; there are no registered voters and exactly `target_sum`
/// voters must be added.
///
/// Applied to a raw (unsplit) instance this decides the *edge*-disjoint
/// relaxation, which differs from the vertex-disjoint answer — see the
/// shared-vertex regression test below. Self-loops cannot be expressed as
/// votes and are rejected.
pub fn edge_disjoint_ecs_to_fl_ccav_exact(src: &CycleSumInstance) -> ControlInstance {
    let mut taken: BTreeSet<String> = src.digraph.vertices.iter().cloned().collect();
    let preferred = fresh_name(&mut taken, "p");
    let mut candidates: Vec<String> = src.digraph.vertices.clone();
    candidates.push(preferred.clone());
    if candidates.len() < 2 {
        // An arcless question still needs a well-formed election; a second
        // candidate that no vote can touch keeps every answer intact.
        candidates.push(fresh_name(&mut taken, "q"));
    }

    let unregistered: Vec<Vote> = src
        .digraph
        .edges
        .iter()
        .map(|e| {
            assert!(e.u != e.v, "self-loop arcs have no vote encoding");
            extremes_vote(&candidates, &src.digraph.vertices[e.v], &src.digraph.vertices[e.u])
        })
        .collect();

    ControlInstance {
        election: Election::new(candidates, Vec::new(), unregistered)
            .expect("arc votes are permutations by construction"),
        rule: ScoringRule::FirstLast,
        preferred,
        budget: src.target_sum,
        action: ControlAction::AddVoters,
        exact: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::winners;
    use crate::solve::{oracle_control, oracle_control_with, oracle_exact_cycle_sum, OracleCaps};

    fn digraph(names: &[&str], arcs: &[(usize, usize)]) -> ColoredMultigraph {
        let mut g = ColoredMultigraph::directed(names.iter().map(|s| s.to_string()).collect());
        for &(u, v) in arcs {
            g.add_colored(u, v, EdgeColor::Uncolored);
        }
        g
    }

    /// Two triangles meeting in a single shared vertex `a`.
    fn shared_vertex_triangles() -> ColoredMultigraph {
        digraph(
            &["a", "b", "c", "d", "e"],
            &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)],
        )
    }

    #[test]
    fn empty_digraph_splits_to_empty() {
        let src = CycleSumInstance::new(digraph(&[], &[]), 0).unwrap();
        let out = ecs_to_edge_disjoint(&src);
        assert_eq!(out.digraph.vertex_count(), 0);
        assert_eq!(out.digraph.edge_count(), 0);
        assert_eq!(out.target_sum, 0);
    }

    #[test]
    fn split_adds_a_private_arc_per_vertex_and_reroutes_the_rest() {
        let src = CycleSumInstance::new(shared_vertex_triangles(), 6).unwrap();
        let out = ecs_to_edge_disjoint(&src);
        assert_eq!(out.digraph.vertex_count(), 10);
        assert_eq!(out.digraph.edge_count(), 11);
        assert_eq!(out.target_sum, 12);
        // First five arcs are the private (v, v') arcs.
        for v in 0..5 {
            let e = out.digraph.edges[v];
            assert_eq!((e.u, e.v), (v, 5 + v));
        }
        // The rerouted arcs leave from the primed copy of their old tail.
        let rerouted: Vec<(usize, usize)> =
            out.digraph.edges[5..].iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(rerouted, vec![(5, 1), (6, 2), (7, 0), (5, 3), (8, 4), (9, 0)]);
        assert_eq!(out.digraph.vertices[5], "a'");
    }

    #[test]
    fn two_cycle_answers_survive_the_split() {
        let raw = CycleSumInstance::new(digraph(&["a", "b"], &[(0, 1), (1, 0)]), 2).unwrap();
        assert!(oracle_exact_cycle_sum(&raw).unwrap());
        let split = ecs_to_edge_disjoint(&raw);
        assert!(oracle_exact_cycle_sum(&split).unwrap());
        let control = edge_disjoint_ecs_to_fl_ccav_exact(&split);
        assert!(oracle_control(&control).unwrap());

        let raw_short = CycleSumInstance::new(digraph(&["a", "b"], &[(0, 1), (1, 0)]), 1).unwrap();
        assert!(!oracle_exact_cycle_sum(&raw_short).unwrap());
        let split_short = ecs_to_edge_disjoint(&raw_short);
        assert!(!oracle_exact_cycle_sum(&split_short).unwrap());
        assert!(!oracle_control(&edge_disjoint_ecs_to_fl_ccav_exact(&split_short)).unwrap());
    }

    #[test]
    fn shared_vertex_counterexample_separates_raw_from_split() {
        // Vertex-disjoint cycles in the two-triangle graph total 0 or 3,
        // never 6: the triangles collide in the shared vertex.
        let raw = CycleSumInstance::new(shared_vertex_triangles(), 6).unwrap();
        assert!(!oracle_exact_cycle_sum(&raw).unwrap());

        // Feeding the unsplit graph straight into voter addition asks the
        // edge-disjoint question instead, and the triangles are
        // edge-disjoint: adding all six voters ties everyone at zero.
        let naive = edge_disjoint_ecs_to_fl_ccav_exact(&raw);
        assert!(oracle_control(&naive).unwrap());

        // The split restores the vertex-disjoint answer.
        let split = ecs_to_edge_disjoint(&raw);
        assert!(!oracle_exact_cycle_sum(&split).unwrap());
        let control = edge_disjoint_ecs_to_fl_ccav_exact(&split);
        let caps = OracleCaps { max_candidates: 12, max_voters: 12, ..OracleCaps::default() };
        assert!(!oracle_control_with(&control, &caps).unwrap());
    }

    #[test]
    fn arcless_instance_becomes_a_trivial_yes_election() {
        let src = CycleSumInstance::new(digraph(&[], &[]), 0).unwrap();
        let control = edge_disjoint_ecs_to_fl_ccav_exact(&src);
        assert_eq!(control.election.candidates.len(), 2);
        assert!(control.election.unregistered.is_empty());
        assert_eq!(control.budget, 0);
        let scores = control.election.registered_scores(control.rule);
        assert!(winners(&scores).contains(&control.preferred));
        assert!(oracle_control(&control).unwrap());
    }

    #[test]
    fn vote_direction_rewards_the_arc_head() {
        let src = CycleSumInstance::new(digraph(&["t", "h"], &[(0, 1)]), 1).unwrap();
        let control = edge_disjoint_ecs_to_fl_ccav_exact(&src);
        let vote = &control.election.unregistered[0];
        assert_eq!(vote.first(), "h");
        assert_eq!(vote.last(), "t");
    }
}
