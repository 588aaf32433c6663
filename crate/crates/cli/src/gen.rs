//! Seeded random instance builders. Votes are drawn uniformly over
//! permutations and numeric parameters uniformly over their stated ranges,
//! so a campaign is reproducible from its single seed.

use ctrlmatch_core::election::{ControlAction, ControlInstance, Election, ScoringRule, Vote};
use ctrlmatch_core::graph::{BMatchingInstance, ColoredMultigraph, CycleSumInstance, EdgeColor};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Upper limits for a random control instance; every draw is uniform
/// between the implicit minimum and the cap.
#[derive(Debug, Clone, Copy)]
pub struct ElectionDims {
    /// At least 2 candidates are always drawn.
    pub max_candidates: usize,
    pub max_registered: usize,
    pub max_unregistered: usize,
    pub max_budget: usize,
}

pub fn candidate_names(n: usize) -> Vec<String> {
    let mut out: Vec<String> = (1..n).map(|i| format!("c{i}")).collect();
    out.push("p".into());
    out
}

pub fn vertex_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn random_vote(rng: &mut StdRng, candidates: &[String]) -> Vote {
    let mut ranking = candidates.to_vec();
    ranking.shuffle(rng);
    Vote::new(ranking)
}

/// A control instance with exactly the given shape; the preferred
/// candidate is always named `p`.
pub fn random_control_sized(
    rng: &mut StdRng,
    rule: ScoringRule,
    action: ControlAction,
    exact: bool,
    candidates: usize,
    registered: usize,
    unregistered: usize,
    budget: usize,
) -> ControlInstance {
    let cands = candidate_names(candidates.max(2));
    let registered: Vec<Vote> = (0..registered).map(|_| random_vote(rng, &cands)).collect();
    let unregistered: Vec<Vote> = (0..unregistered).map(|_| random_vote(rng, &cands)).collect();
    ControlInstance {
        election: Election::new(cands, registered, unregistered)
            .expect("shuffled votes are permutations"),
        rule,
        preferred: "p".into(),
        budget,
        action,
        exact,
    }
}

pub fn random_control(
    rng: &mut StdRng,
    rule: ScoringRule,
    action: ControlAction,
    exact: bool,
    dims: ElectionDims,
) -> ControlInstance {
    let candidates = rng.random_range(2..=dims.max_candidates.max(2));
    let registered = rng.random_range(0..=dims.max_registered);
    let unregistered = rng.random_range(0..=dims.max_unregistered);
    let budget = rng.random_range(0..=dims.max_budget);
    random_control_sized(rng, rule, action, exact, candidates, registered, unregistered, budget)
}

/// A directed multigraph of uncolored arcs; self-loops and parallel arcs
/// are allowed when requested.
pub fn random_digraph(
    rng: &mut StdRng,
    max_vertices: usize,
    max_arcs: usize,
    self_loops: bool,
) -> ColoredMultigraph {
    let n = rng.random_range(0..=max_vertices);
    let mut g = ColoredMultigraph::directed(vertex_names(n));
    if n == 0 || (n == 1 && !self_loops) {
        return g;
    }
    for _ in 0..rng.random_range(0..=max_arcs) {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v && !self_loops {
            continue;
        }
        g.add_colored(u, v, EdgeColor::Uncolored);
    }
    g
}

pub fn random_cycle_sum(
    rng: &mut StdRng,
    max_vertices: usize,
    max_arcs: usize,
    max_target: usize,
) -> CycleSumInstance {
    let digraph = random_digraph(rng, max_vertices, max_arcs, true);
    let target = rng.random_range(0..=max_target);
    CycleSumInstance::new(digraph, target).expect("generated digraphs are valid")
}

/// An undirected red/uncolored multigraph without self-loops.
pub fn random_red_graph(
    rng: &mut StdRng,
    max_vertices: usize,
    max_edges: usize,
) -> ColoredMultigraph {
    let n = rng.random_range(0..=max_vertices);
    let mut g = ColoredMultigraph::undirected(vertex_names(n));
    if n < 2 {
        return g;
    }
    for _ in 0..rng.random_range(0..=max_edges) {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let color = if rng.random_range(0..2) == 0 { EdgeColor::Red } else { EdgeColor::Uncolored };
        g.add_colored(u, v, color);
    }
    g
}

/// An even-order graph holding exactly half as many red edges as vertices,
/// plus a sprinkling of uncolored edges.
pub fn random_balanced_red_graph(
    rng: &mut StdRng,
    max_vertices: usize,
    max_uncolored: usize,
) -> ColoredMultigraph {
    let half = rng.random_range(1..=(max_vertices / 2).max(1));
    let n = 2 * half;
    let mut g = ColoredMultigraph::undirected(vertex_names(n));
    let mut edge = |rng: &mut StdRng, g: &mut ColoredMultigraph, color| loop {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            g.add_colored(u, v, color);
            return;
        }
    };
    for _ in 0..half {
        edge(rng, &mut g, EdgeColor::Red);
    }
    for _ in 0..rng.random_range(0..=max_uncolored) {
        edge(rng, &mut g, EdgeColor::Uncolored);
    }
    g
}

/// A b-matching question: random capacities in `0..=2` and exact color
/// targets, blue edges and targets only when asked for.
pub fn random_b_matching(
    rng: &mut StdRng,
    max_vertices: usize,
    max_edges: usize,
    with_blue: bool,
) -> BMatchingInstance {
    let n = rng.random_range(2..=max_vertices.max(2));
    let mut graph = ColoredMultigraph::undirected(vertex_names(n));
    for _ in 0..rng.random_range(0..=max_edges) {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let color = match rng.random_range(0..3) {
            0 => EdgeColor::Red,
            1 if with_blue => EdgeColor::Blue,
            _ => EdgeColor::Uncolored,
        };
        graph.add_colored(u, v, color);
    }
    let capacities = (0..n).map(|_| rng.random_range(0..=2)).collect();
    let red_target = rng.random_range(0..=3);
    let blue_target =
        if with_blue && rng.random_range(0..2) == 0 { Some(rng.random_range(0..=2)) } else { None };
    BMatchingInstance { graph, capacities, red_target, blue_target }
}

/// A unit-capacity two-color exact matching question (both targets set).
pub fn random_unit_two_color(
    rng: &mut StdRng,
    max_vertices: usize,
    max_edges: usize,
) -> BMatchingInstance {
    let mut inst = random_b_matching(rng, max_vertices, max_edges, true);
    inst.capacities = vec![1; inst.graph.vertex_count()];
    inst.red_target = rng.random_range(0..=2);
    inst.blue_target = Some(rng.random_range(0..=2));
    inst
}
