//! Matching solvers: exhaustive oracles, deterministic optimizers, and the
//! randomized algebraic decider for exact (two-color) perfect matching.
//!
//! The exact problems ("is there a perfect matching with exactly k red
//! edges?") get a one-sided-error randomized decider; the optimization
//! problems (max-weight matching, max-cardinality/max-weight b-matching)
//! get exact deterministic algorithms. Small instances can always be
//! cross-checked against the brute-force oracles in [`brute`].

pub mod blossom;
pub mod brute;
pub(crate) mod gadget;
pub mod modp;
pub mod randomized;

pub use randomized::{decide_exact_pm_randomized, decide_exact_pm_two_colors};

use crate::graph::{
    BMatchingInstance, ColoredMultigraph, EdgeColor, GraphError, MatchingCertificate,
};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Settings for the randomized decider: a prime modulus, a trial count,
/// and the seed all per-trial randomness derives from.
///
/// Each trial fails (misses an existing matching) with probability at most
/// n/prime, so `trials` independent trials push the false-negative chance
/// below (n/prime)^trials; yes-answers are always correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomizedConfig {
    pub prime: u64,
    pub trials: u32,
    pub seed: u64,
}

impl Default for RandomizedConfig {
    fn default() -> Self {
        RandomizedConfig { prime: modp::MERSENNE61, trials: 20, seed: 0 }
    }
}

impl RandomizedConfig {
    pub fn with_seed(seed: u64) -> Self {
        RandomizedConfig { seed, ..Self::default() }
    }
}

/// Answer of an exact-matching decider. `No` is deterministic (a structural
/// impossibility was found); `ProbablyNo` carries the one-sided error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactAnswer {
    Yes,
    No,
    ProbablyNo,
}

impl ExactAnswer {
    pub fn is_yes(self) -> bool {
        self == ExactAnswer::Yes
    }
}

/// How many perfect matchings exist per red-edge count.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RedProfile(pub BTreeMap<usize, u64>);

impl RedProfile {
    pub fn count(&self, red: usize) -> u64 {
        self.0.get(&red).copied().unwrap_or(0)
    }

    pub fn supports(&self, red: usize) -> bool {
        self.count(red) > 0
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.0.iter().filter(|(_, &c)| c > 0).map(|(&r, _)| r).collect()
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }
}

/// How many perfect (b-)matchings exist per (red, blue) count pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColorProfile(pub BTreeMap<(usize, usize), u64>);

impl ColorProfile {
    pub fn count(&self, red: usize, blue: usize) -> u64 {
        self.0.get(&(red, blue)).copied().unwrap_or(0)
    }

    pub fn red_marginal(&self) -> RedProfile {
        let mut out = BTreeMap::new();
        for (&(r, _), &c) in &self.0 {
            *out.entry(r).or_insert(0) += c;
        }
        RedProfile(out)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance size {size} exceeds the oracle cap {cap} for {what}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("this oracle needs a declared bipartition")]
    NotBipartite,
    #[error("this oracle works on undirected graphs only")]
    Directed,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {edge} has negative weight {weight}, unsupported here")]
    NegativeWeight { edge: usize, weight: i64 },
    #[error("prime modulus rejected: {0}")]
    BadPrime(String),
}

fn require_undirected(graph: &ColoredMultigraph) -> Result<(), MatchingError> {
    graph.validate()?;
    if graph.directed {
        return Err(GraphError::ExpectedUndirected.into());
    }
    Ok(())
}

fn require_instance(instance: &BMatchingInstance) -> Result<(), MatchingError> {
    require_undirected(&instance.graph)?;
    if instance.capacities.len() != instance.graph.vertex_count() {
        return Err(GraphError::CapacityLengthMismatch {
            got: instance.capacities.len(),
            want: instance.graph.vertex_count(),
        }
        .into());
    }
    Ok(())
}

/// Maximum-weight matching (not necessarily perfect). Edges of nonpositive
/// weight never improve a matching and are never selected; among parallel
/// copies only the heaviest (lowest id on ties) can ever be chosen.
pub fn max_weight_matching(
    graph: &ColoredMultigraph,
) -> Result<MatchingCertificate, MatchingError> {
    require_undirected(graph)?;
    let mut best: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (id, e) in graph.edges.iter().enumerate() {
        if e.weight <= 0 || e.u == e.v {
            continue;
        }
        let key = (e.u.min(e.v), e.u.max(e.v));
        let slot = best.entry(key).or_insert(id);
        if graph.edges[*slot].weight < e.weight {
            *slot = id;
        }
    }
    let mut kept: Vec<usize> = best.into_values().collect();
    kept.sort_unstable();
    let edges: Vec<(usize, usize, i64)> = kept
        .iter()
        .map(|&id| {
            let e = graph.edges[id];
            (e.u, e.v, e.weight)
        })
        .collect();
    let mut solver = blossom::Solver::new(graph.vertex_count(), &edges);
    solver.solve();
    debug_assert_eq!(solver.verify(), Ok(()));
    let ids = solver.matched_edges().into_iter().map(|i| kept[i]).collect();
    Ok(MatchingCertificate::new(ids))
}

/// Keep, per unordered vertex pair, the `min(b(u), b(v))` most preferred
/// parallel copies — no b-matching can ever use more of that pair.
fn keep_per_pair(
    instance: &BMatchingInstance,
    prefer: impl Fn(usize, usize) -> std::cmp::Ordering,
) -> Vec<usize> {
    let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (id, e) in instance.graph.edges.iter().enumerate() {
        if e.u == e.v {
            continue;
        }
        by_pair.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(id);
    }
    let mut kept = Vec::new();
    for ((u, v), mut ids) in by_pair {
        ids.sort_by(|&x, &y| prefer(x, y));
        ids.truncate(instance.capacities[u].min(instance.capacities[v]));
        kept.extend(ids);
    }
    kept.sort_unstable();
    kept
}

/// Restrict an instance to the kept edges (optionally forcing unit weights)
/// and clamp capacities to the surviving degrees, which the ≤-capacity
/// optimizers are free to do.
fn sub_instance(
    instance: &BMatchingInstance,
    kept: &[usize],
    unit_weights: bool,
) -> BMatchingInstance {
    let mut g = ColoredMultigraph::undirected(instance.graph.vertices.clone());
    g.bipartition = instance.graph.bipartition.clone();
    for &id in kept {
        let e = instance.graph.edges[id];
        g.add_edge(e.u, e.v, e.color, if unit_weights { 1 } else { e.weight });
    }
    let degrees = g.degrees();
    let capacities =
        instance.capacities.iter().zip(&degrees).map(|(&b, &d)| b.min(d)).collect();
    BMatchingInstance { graph: g, capacities, red_target: 0, blue_target: None }
}

/// Pad the instance so capacities become exact, solve the resulting plain
/// weighted matching, and read the chosen source edges back off. The pad
/// weight exceeds the total real weight, so every optimum saturates all
/// pads; what remains is an optimal ≤-capacity b-matching.
fn solve_saturating(inst: &BMatchingInstance, kept: &[usize]) -> MatchingCertificate {
    let total: i64 = inst.graph.edges.iter().map(|e| e.weight).sum();
    let exp = gadget::expand_saturating(inst, total + 1);
    let edges: Vec<(usize, usize, i64)> =
        exp.graph.edges.iter().map(|e| (e.u, e.v, e.weight)).collect();
    let mut solver = blossom::Solver::new(exp.graph.vertex_count(), &edges);
    solver.solve();
    debug_assert_eq!(solver.verify(), Ok(()));
    let ids = solver
        .matched_edges()
        .into_iter()
        .filter(|&eid| eid < exp.cross_edges)
        .map(|eid| kept[eid])
        .collect();
    MatchingCertificate::new(ids)
}

/// Maximum-cardinality b-matching: the largest edge multiset using every
/// vertex `v` at most `capacities[v]` times. Colors and weights are ignored.
pub fn max_cardinality_b_matching(
    instance: &BMatchingInstance,
) -> Result<MatchingCertificate, MatchingError> {
    require_instance(instance)?;
    let kept = keep_per_pair(instance, |x, y| x.cmp(&y));
    let inst = sub_instance(instance, &kept, true);
    Ok(solve_saturating(&inst, &kept))
}

/// Maximum-weight b-matching over nonnegative weights: the heaviest edge
/// multiset using every vertex `v` at most `capacities[v]` times.
pub fn max_weight_b_matching(
    instance: &BMatchingInstance,
) -> Result<MatchingCertificate, MatchingError> {
    require_instance(instance)?;
    for (id, e) in instance.graph.edges.iter().enumerate() {
        if e.weight < 0 {
            return Err(MatchingError::NegativeWeight { edge: id, weight: e.weight });
        }
    }
    let weights: Vec<i64> = instance.graph.edges.iter().map(|e| e.weight).collect();
    let kept =
        keep_per_pair(instance, |x, y| weights[y].cmp(&weights[x]).then(x.cmp(&y)));
    let inst = sub_instance(instance, &kept, false);
    Ok(solve_saturating(&inst, &kept))
}

/// Decide whether a perfect b-matching with exactly `red_target` red edges
/// (and, when set, exactly `blue_target` blue edges) exists.
///
/// Structural impossibilities — odd capacity sum, unbalanced bipartition
/// sides, targets above the available color counts, a vertex that cannot
/// reach its capacity — come back as a hard [`ExactAnswer::No`]. What the
/// normalization below cannot settle goes through the capacity expansion to
/// the randomized decider, whose refusals are [`ExactAnswer::ProbablyNo`]
/// with one-sided error: yes-answers are always correct.
pub fn decide_exact_perfect_b_matching(
    instance: &BMatchingInstance,
    cfg: &RandomizedConfig,
) -> Result<ExactAnswer, MatchingError> {
    require_instance(instance)?;
    let n = instance.graph.vertex_count();
    let mut b = instance.capacities.clone();
    let red_target = instance.red_target;
    let blue_target = instance.blue_target;

    // Parity and side balance are invariant under the normalization below
    // (commits remove one incidence from each side of an edge), so checking
    // them once up front suffices.
    if b.iter().map(|&x| x as u64).sum::<u64>() % 2 == 1 {
        return Ok(ExactAnswer::No);
    }
    if let Some(bp) = &instance.graph.bipartition {
        let side = |s: &BTreeSet<usize>| s.iter().map(|&v| b[v] as u64).sum::<u64>();
        if side(&bp.left) != side(&bp.right) {
            return Ok(ExactAnswer::No);
        }
    }

    // Multiplicity per (low, high, color) class; self-loops can never sit in
    // a matching, so they are dropped here.
    let mut mult: BTreeMap<(usize, usize, EdgeColor), usize> = BTreeMap::new();
    for e in &instance.graph.edges {
        if e.u != e.v {
            *mult.entry((e.u.min(e.v), e.u.max(e.v), e.color)).or_insert(0) += 1;
        }
    }

    // Shrink to a fixpoint. Each round trims multiplicities no solution can
    // use, then looks for a vertex whose capacity cannot be met without
    // committing some specific uncolored pair. Committed copies are removed
    // from the instance together with the incidences they consume; colored
    // edges are never committed, so the color targets stay meaningful.
    loop {
        let mut changed = false;
        mult.retain(|&(u, v, _), m| {
            let cap = b[u].min(b[v]);
            if *m > cap {
                *m = cap;
                changed = true;
            }
            *m > 0
        });

        let mut red_at = vec![0usize; n];
        let mut blue_at = vec![0usize; n];
        let mut unc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (&(u, v, color), &m) in &mult {
            match color {
                EdgeColor::Red => {
                    red_at[u] += m;
                    red_at[v] += m;
                }
                EdgeColor::Blue => {
                    blue_at[u] += m;
                    blue_at[v] += m;
                }
                EdgeColor::Uncolored => {
                    unc[u].push((v, m));
                    unc[v].push((u, m));
                }
            }
        }

        let mut commit = None;
        'hunt: for u in 0..n {
            if b[u] == 0 {
                continue;
            }
            // Upper bounds on how many incidences each edge class can
            // contribute at u in any solution.
            let red_room = red_at[u].min(red_target);
            let blue_room = blue_at[u].min(blue_target.unwrap_or(usize::MAX));
            let unc_room: usize = unc[u].iter().map(|&(w, m)| m.min(b[w])).sum();
            let room = red_room + blue_room + unc_room;
            if room < b[u] {
                return Ok(ExactAnswer::No);
            }
            for &(w, m) in &unc[u] {
                let supply = m.min(b[w]);
                if room - supply < b[u] {
                    commit = Some((u, w, b[u] - (room - supply)));
                    break 'hunt;
                }
            }
        }
        if let Some((u, w, forced)) = commit {
            let key = (u.min(w), u.max(w), EdgeColor::Uncolored);
            let m = mult.get_mut(&key).expect("committed pair present");
            *m -= forced;
            if *m == 0 {
                mult.remove(&key);
            }
            b[u] -= forced;
            b[w] -= forced;
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let class_count = |want: EdgeColor| -> usize {
        mult.iter().filter(|(&(_, _, c), _)| c == want).map(|(_, &m)| m).sum()
    };
    if red_target > class_count(EdgeColor::Red) {
        return Ok(ExactAnswer::No);
    }
    if let Some(bt) = blue_target {
        if bt > class_count(EdgeColor::Blue) {
            return Ok(ExactAnswer::No);
        }
    }
    let mut degree = vec![0usize; n];
    for (&(u, v, _), &m) in &mult {
        degree[u] += m;
        degree[v] += m;
    }
    if (0..n).any(|v| degree[v] < b[v]) {
        return Ok(ExactAnswer::No);
    }
    if b.iter().all(|&x| x == 0) {
        // Nothing left to match; the target checks above already did the
        // deciding (zero capacities force zero remaining edges).
        return Ok(ExactAnswer::Yes);
    }

    let mut g = ColoredMultigraph::undirected(instance.graph.vertices.clone());
    g.bipartition = instance.graph.bipartition.clone();
    for (&(u, v, color), &m) in &mult {
        for _ in 0..m {
            g.add_colored(u, v, color);
        }
    }
    let reduced = BMatchingInstance { graph: g, capacities: b, red_target, blue_target };
    let exp = gadget::expand_exact(&reduced);
    match blue_target {
        None => decide_exact_pm_randomized(&exp.graph, red_target, cfg),
        Some(bt) => decide_exact_pm_two_colors(&exp.graph, red_target, bt, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Bipartition, CertOutcome, VerifyMode, verify_certificate};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    fn uncolored(n: usize, edges: &[(usize, usize, i64)]) -> ColoredMultigraph {
        let mut g = ColoredMultigraph::undirected(names(n));
        for &(u, v, w) in edges {
            g.add_edge(u, v, EdgeColor::Uncolored, w);
        }
        g
    }

    #[test]
    fn triangle_takes_its_heaviest_single_edge() {
        let g = uncolored(3, &[(0, 1, 3), (1, 2, 3), (0, 2, 5)]);
        let cert = max_weight_matching(&g).unwrap();
        assert_eq!(cert.edge_ids, vec![2]);
        assert_eq!(cert.total_weight(&g), 5);
    }

    #[test]
    fn equal_weight_path_takes_either_edge() {
        let g = uncolored(3, &[(0, 1, 2), (1, 2, 2)]);
        let cert = max_weight_matching(&g).unwrap();
        assert_eq!(cert.len(), 1);
        assert_eq!(cert.total_weight(&g), 2);
    }

    #[test]
    fn parallel_copies_collapse_to_the_heaviest() {
        let g = uncolored(2, &[(0, 1, 3), (0, 1, 4)]);
        let cert = max_weight_matching(&g).unwrap();
        assert_eq!(cert.edge_ids, vec![1]);
    }

    #[test]
    fn nonpositive_edges_are_never_selected() {
        let g = uncolored(4, &[(0, 1, -5), (2, 3, 0)]);
        assert!(max_weight_matching(&g).unwrap().is_empty());
    }

    #[test]
    fn weight_matching_agrees_with_enumeration_on_messy_multigraphs() {
        let mut rng = StdRng::seed_from_u64(23);
        for case in 0..200 {
            let n = rng.random_range(2..=8usize);
            let m = rng.random_range(0..=12usize);
            let mut g = ColoredMultigraph::undirected(names(n));
            for _ in 0..m {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u == v {
                    continue;
                }
                g.add_edge(u, v, EdgeColor::Uncolored, rng.random_range(-5..=9));
            }
            let cert = max_weight_matching(&g).unwrap();
            let want = brute::best_weight_matching(&g, 8).unwrap();
            assert_eq!(cert.total_weight(&g), want, "case {case}");
            let inst = BMatchingInstance::from_exact_pm(g, 0);
            let outcome = verify_certificate(&inst, &cert, VerifyMode::MaxWeight).unwrap();
            assert_eq!(outcome, CertOutcome::Accept, "case {case}");
        }
    }

    #[test]
    fn doubled_pair_with_capacity_two_uses_both_copies() {
        let g = uncolored(2, &[(0, 1, 1), (0, 1, 1)]);
        let inst = BMatchingInstance {
            graph: g,
            capacities: vec![2, 2],
            red_target: 0,
            blue_target: None,
        };
        assert_eq!(max_cardinality_b_matching(&inst).unwrap().len(), 2);
    }

    #[test]
    fn star_center_capacity_binds_the_leaves() {
        let g = uncolored(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
        let inst = BMatchingInstance {
            graph: g,
            capacities: vec![2, 1, 1, 1],
            red_target: 0,
            blue_target: None,
        };
        assert_eq!(max_cardinality_b_matching(&inst).unwrap().len(), 2);
    }

    fn random_instance(
        rng: &mut StdRng,
        max_n: usize,
        max_m: usize,
        max_b: usize,
        weight_range: std::ops::RangeInclusive<i64>,
    ) -> BMatchingInstance {
        let n = rng.random_range(1..=max_n);
        let m = rng.random_range(0..=max_m);
        let mut g = ColoredMultigraph::undirected(names(n));
        for _ in 0..m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v {
                continue;
            }
            g.add_edge(u, v, EdgeColor::Uncolored, rng.random_range(weight_range.clone()));
        }
        let capacities = (0..n).map(|_| rng.random_range(0..=max_b)).collect();
        BMatchingInstance { graph: g, capacities, red_target: 0, blue_target: None }
    }

    #[test]
    fn cardinality_b_matching_agrees_with_enumeration() {
        let mut rng = StdRng::seed_from_u64(31);
        for case in 0..200 {
            let inst = random_instance(&mut rng, 6, 10, 3, 1..=1);
            let cert = max_cardinality_b_matching(&inst).unwrap();
            let want = brute::best_card_b_matching(&inst, 10).unwrap();
            assert_eq!(cert.len(), want, "case {case}");
            let outcome =
                verify_certificate(&inst, &cert, VerifyMode::MaxCardinality).unwrap();
            assert_eq!(outcome, CertOutcome::Accept, "case {case}");
        }
    }

    #[test]
    fn negative_weights_are_rejected_with_the_offending_edge() {
        let g = uncolored(2, &[(0, 1, 3), (0, 1, -2)]);
        let inst = BMatchingInstance {
            graph: g,
            capacities: vec![1, 1],
            red_target: 0,
            blue_target: None,
        };
        assert_eq!(
            max_weight_b_matching(&inst),
            Err(MatchingError::NegativeWeight { edge: 1, weight: -2 })
        );
    }

    #[test]
    fn weight_b_matching_agrees_with_enumeration() {
        let mut rng = StdRng::seed_from_u64(41);
        for case in 0..200 {
            let inst = random_instance(&mut rng, 6, 10, 3, 0..=9);
            let cert = max_weight_b_matching(&inst).unwrap();
            let want = brute::best_weight_b_matching(&inst, 10).unwrap();
            assert_eq!(cert.total_weight(&inst.graph), want, "case {case}");
            let outcome = verify_certificate(&inst, &cert, VerifyMode::MaxWeight).unwrap();
            assert_eq!(outcome, CertOutcome::Accept, "case {case}");
        }
    }

    /// A bipartite supply instance used across the decider tests: three
    /// "account" pairs (v, v′) plus an overflow vertex, with five red edges
    /// and bulk uncolored supply. The red counts achievable by perfect
    /// b-matchings are exactly {2, 3, 4, 5}.
    fn supply_instance(red_target: usize) -> BMatchingInstance {
        let mut g = ColoredMultigraph::undirected(
            ["a", "b", "c", "x", "a'", "b'", "c'"].map(String::from).to_vec(),
        );
        let (a, b, c, x, ap, bp, cp) = (0, 1, 2, 3, 4, 5, 6);
        g.add_colored(a, bp, EdgeColor::Red);
        g.add_colored(a, cp, EdgeColor::Red);
        g.add_colored(a, cp, EdgeColor::Red);
        g.add_colored(c, bp, EdgeColor::Red);
        g.add_colored(b, ap, EdgeColor::Red);
        for _ in 0..5 {
            g.add_colored(a, ap, EdgeColor::Uncolored);
        }
        for _ in 0..2 {
            g.add_colored(b, bp, EdgeColor::Uncolored);
            g.add_colored(c, cp, EdgeColor::Uncolored);
        }
        for _ in 0..4 {
            g.add_colored(x, ap, EdgeColor::Uncolored);
            g.add_colored(x, bp, EdgeColor::Uncolored);
            g.add_colored(x, cp, EdgeColor::Uncolored);
        }
        g.bipartition = Some(Bipartition {
            left: [a, b, c, x].into_iter().collect(),
            right: [ap, bp, cp].into_iter().collect(),
        });
        BMatchingInstance {
            graph: g,
            capacities: vec![7, 2, 2, 4, 5, 5, 5],
            red_target,
            blue_target: None,
        }
    }

    #[test]
    fn supply_instance_red_support_is_two_to_five() {
        let cfg = RandomizedConfig::with_seed(7);
        let profile = brute::perfect_b_profile(&supply_instance(0), 30).unwrap();
        let support: Vec<usize> = profile.red_marginal().support().into_iter().collect();
        assert_eq!(support, vec![2, 3, 4, 5]);
        for red in 0..=6usize {
            let got = decide_exact_perfect_b_matching(&supply_instance(red), &cfg).unwrap();
            if (2..=5).contains(&red) {
                assert_eq!(got, ExactAnswer::Yes, "red {red}");
            } else {
                // These are impossibilities the normalization can prove.
                assert_eq!(got, ExactAnswer::No, "red {red}");
            }
        }
    }

    #[test]
    fn odd_capacity_sum_is_a_hard_no() {
        let g = uncolored(2, &[(0, 1, 0)]);
        let inst = BMatchingInstance {
            graph: g,
            capacities: vec![1, 2],
            red_target: 0,
            blue_target: None,
        };
        let cfg = RandomizedConfig::with_seed(1);
        assert_eq!(decide_exact_perfect_b_matching(&inst, &cfg).unwrap(), ExactAnswer::No);
    }

    #[test]
    fn unbalanced_bipartition_is_a_hard_no() {
        let mut g = uncolored(2, &[(0, 1, 0), (0, 1, 0)]);
        g.bipartition = Some(Bipartition {
            left: [0].into_iter().collect(),
            right: [1].into_iter().collect(),
        });
        let inst = BMatchingInstance {
            graph: g,
            capacities: vec![2, 0],
            red_target: 0,
            blue_target: None,
        };
        let cfg = RandomizedConfig::with_seed(1);
        assert_eq!(decide_exact_perfect_b_matching(&inst, &cfg).unwrap(), ExactAnswer::No);
    }

    #[test]
    fn starved_vertex_is_a_hard_no() {
        // The center needs two incidences but its only usable class is a
        // single red edge capped by the zero red target.
        let mut g = ColoredMultigraph::undirected(names(3));
        g.add_colored(0, 1, EdgeColor::Red);
        g.add_colored(0, 2, EdgeColor::Red);
        let inst = BMatchingInstance {
            graph: g,
            capacities: vec![2, 1, 1],
            red_target: 1,
            blue_target: None,
        };
        let cfg = RandomizedConfig::with_seed(1);
        assert_eq!(decide_exact_perfect_b_matching(&inst, &cfg).unwrap(), ExactAnswer::No);
    }

    #[test]
    fn forcing_chain_resolves_without_randomness() {
        // Path with capacities 1-2-1: both edges are forced, leaving the
        // all-zero instance, which is a yes at red target 0.
        let g = uncolored(3, &[(0, 1, 0), (1, 2, 0)]);
        let inst = BMatchingInstance {
            graph: g,
            capacities: vec![1, 2, 1],
            red_target: 0,
            blue_target: None,
        };
        let cfg = RandomizedConfig::with_seed(1);
        assert_eq!(decide_exact_perfect_b_matching(&inst, &cfg).unwrap(), ExactAnswer::Yes);
    }

    #[test]
    fn two_color_targets_single_out_the_alternating_square() {
        let mut g = ColoredMultigraph::undirected(names(4));
        g.add_colored(0, 1, EdgeColor::Red);
        g.add_colored(1, 2, EdgeColor::Blue);
        g.add_colored(2, 3, EdgeColor::Red);
        g.add_colored(3, 0, EdgeColor::Blue);
        let cfg = RandomizedConfig::with_seed(3);
        let query = |red, blue| {
            let inst = BMatchingInstance {
                graph: g.clone(),
                capacities: vec![1; 4],
                red_target: red,
                blue_target: Some(blue),
            };
            decide_exact_perfect_b_matching(&inst, &cfg).unwrap()
        };
        assert_eq!(query(2, 0), ExactAnswer::Yes);
        assert_eq!(query(0, 2), ExactAnswer::Yes);
        assert_eq!(query(1, 1), ExactAnswer::ProbablyNo);
    }

    #[test]
    fn decider_matches_enumeration_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(53);
        let cfg = RandomizedConfig::with_seed(97);
        for case in 0..150 {
            let n = rng.random_range(1..=4usize);
            let m = rng.random_range(0..=8usize);
            let mut g = ColoredMultigraph::undirected(names(n));
            for _ in 0..m {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u == v {
                    continue;
                }
                let color = match rng.random_range(0..3) {
                    0 => EdgeColor::Red,
                    1 => EdgeColor::Blue,
                    _ => EdgeColor::Uncolored,
                };
                g.add_colored(u, v, color);
            }
            let capacities = (0..n).map(|_| rng.random_range(0..=2usize)).collect();
            let with_blue = rng.random_range(0..2) == 0;
            let inst = BMatchingInstance {
                graph: g,
                capacities,
                red_target: rng.random_range(0..=3),
                blue_target: if with_blue { Some(rng.random_range(0..=2)) } else { None },
            };
            let profile = brute::perfect_b_profile(&inst, 8).unwrap();
            let truth = match inst.blue_target {
                None => profile.red_marginal().supports(inst.red_target),
                Some(bt) => profile.count(inst.red_target, bt) > 0,
            };
            let got = decide_exact_perfect_b_matching(&inst, &cfg).unwrap();
            assert_eq!(got.is_yes(), truth, "case {case}: {inst:?}");
        }
    }
}
