//! Graph-side eliminators: compile away vertex capacities, then the blue
//! color, so a two-colored exact perfect b-matching question becomes an
//! exact-red perfect matching question on a plain graph.
//!
//! Capacities go first: every vertex becomes one slot per incident edge
//! plus a pad block soaking up the slots a perfect b-matching leaves
//! unused. Blue goes second: each blue edge becomes an odd path whose two
//! perfect matchings are "selected" (both endpoints absorbed, `n` red path
//! edges) and "skipped" (endpoints free, no red), so blue counts reappear
//! as multiples of `n` in the red count. Since a perfect matching can pick
//! fewer than `n` non-path red edges, the combined red count `ℓ·n + k`
//! decomposes uniquely — provided both targets are below `n`, which
//! isolated padding edges enforce.

use crate::graph::{
    BMatchingInstance, Bipartition, ColoredMultigraph, EdgeColor, MatchingCertificate,
};
use crate::matching::gadget;
use crate::reductions::{fresh_name, ReductionError, ReductionOutcome};
use std::collections::{BTreeMap, BTreeSet};

/// A plain-matching instance equivalent to a b-matching one; capacities
/// have been compiled into slot copies and pad blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedMatching {
    /// Simple graph; every vertex has implicit capacity 1.
    pub graph: ColoredMultigraph,
    pub red_target: usize,
    pub blue_target: Option<usize>,
    /// Edge ids below this bound are images of source edges, in source
    /// id order; everything after is padding.
    pub cross_edges: usize,
    pub trace: Vec<String>,
}

impl ExpandedMatching {
    /// Repackage as a unit-capacity instance, for further reductions or
    /// the exact deciders.
    pub fn instance(&self) -> BMatchingInstance {
        BMatchingInstance {
            capacities: vec![1; self.graph.vertex_count()],
            graph: self.graph.clone(),
            red_target: self.red_target,
            blue_target: self.blue_target,
        }
    }

    /// Map a perfect-matching certificate back to source edge ids.
    pub fn witness(&self, cert: &MatchingCertificate) -> MatchingCertificate {
        MatchingCertificate::new(
            cert.edge_ids.iter().copied().filter(|&id| id < self.cross_edges).collect(),
        )
    }
}

/// Compile vertex capacities into a plain matching instance.
///
/// A vertex whose degree is below its capacity can never be saturated, so
/// those instances are decided immediately; otherwise perfect matchings of
/// the expansion correspond to perfect b-matchings of the source with the
/// same red and blue counts, and targets pass through unchanged.
pub fn b_matching_to_matching(src: &BMatchingInstance) -> ReductionOutcome<ExpandedMatching> {
    assert_eq!(
        src.capacities.len(),
        src.graph.vertex_count(),
        "capacities must cover every vertex"
    );
    debug_assert!(!src.graph.directed, "matchings live on undirected graphs");
    let degrees = src.graph.degrees();
    for (v, (&d, &b)) in degrees.iter().zip(&src.capacities).enumerate() {
        if d < b {
            return ReductionOutcome::decided_no(format!(
                "vertex {:?} has degree {d}, below its capacity {b}",
                src.graph.vertices[v]
            ));
        }
    }
    let exp = gadget::expand_exact(src);
    let trace = vec![format!(
        "{} vertices became {} slots plus {} pads; {} edges carried over",
        src.graph.vertex_count(),
        degrees.iter().sum::<usize>(),
        exp.graph.vertex_count() - degrees.iter().sum::<usize>(),
        exp.cross_edges
    )];
    ReductionOutcome::Reduced(ExpandedMatching {
        graph: exp.graph,
        red_target: src.red_target,
        blue_target: src.blue_target,
        cross_edges: exp.cross_edges,
        trace,
    })
}

/// A red-only exact matching instance equivalent to a red-and-blue one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathExpanded {
    pub graph: ColoredMultigraph,
    pub red_target: usize,
    /// Output edge id → source edge id, for edges copied through unchanged.
    pub copied: BTreeMap<usize, usize>,
    /// Source blue edge id → output id of its path's first edge; the blue
    /// edge is selected exactly when that first path edge is matched.
    pub path_heads: BTreeMap<usize, usize>,
    pub trace: Vec<String>,
}

impl PathExpanded {
    /// Map a perfect-matching certificate back to source edge ids.
    pub fn witness(&self, cert: &MatchingCertificate) -> MatchingCertificate {
        let chosen: BTreeSet<usize> = cert.edge_ids.iter().copied().collect();
        let mut out: Vec<usize> = self
            .copied
            .iter()
            .filter(|(o, _)| chosen.contains(o))
            .map(|(_, &src)| src)
            .collect();
        out.extend(
            self.path_heads.iter().filter(|(_, h)| chosen.contains(h)).map(|(&src, _)| src),
        );
        MatchingCertificate::new(out)
    }
}

/// Eliminate the blue color from a unit-capacity exact matching instance.
///
/// Requires all capacities 1 (run [`b_matching_to_matching`] first). Both
/// targets are first brought below the vertex count `n` by appending
/// isolated uncolored edges, which sit in every perfect matching and
/// change nothing else. Each blue edge then becomes a path of `2n − 1`
/// edges colored red at every even position, and the red target becomes
/// `blue_target · n + red_target`.
pub fn red_blue_to_red(src: &BMatchingInstance) -> Result<PathExpanded, ReductionError> {
    if src.graph.directed {
        return Err(ReductionError::WrongShape("matchings live on undirected graphs".into()));
    }
    let Some(l) = src.blue_target else {
        return Err(ReductionError::WrongShape(
            "a blue target is required; without one there is nothing to eliminate".into(),
        ));
    };
    if src.capacities.len() != src.graph.vertex_count() {
        return Err(ReductionError::InvalidInstance("capacities must cover every vertex".into()));
    }
    if let Some(v) = src.capacities.iter().position(|&b| b != 1) {
        return Err(ReductionError::WrongShape(format!(
            "vertex {:?} has capacity {}; compile capacities down to 1 first",
            src.graph.vertices[v], src.capacities[v]
        )));
    }

    let k = src.red_target;
    let n0 = src.graph.vertex_count();
    let mut taken: BTreeSet<String> = src.graph.vertices.iter().cloned().collect();
    let mut vertices = src.graph.vertices.clone();
    let bp = src.graph.bipartition.clone();
    let mut sides: Vec<bool> = match &bp {
        Some(b) => (0..n0).map(|v| b.left.contains(&v)).collect(),
        None => vec![false; n0],
    };
    let mut pad_edges = Vec::new();
    while vertices.len() <= k.max(l) {
        let i = pad_edges.len();
        vertices.push(fresh_name(&mut taken, &format!("pad{i}a")));
        sides.push(true);
        vertices.push(fresh_name(&mut taken, &format!("pad{i}b")));
        sides.push(false);
        pad_edges.push((vertices.len() - 2, vertices.len() - 1));
    }
    let n = vertices.len();

    let mut graph = ColoredMultigraph::undirected(vertices);
    let mut copied = BTreeMap::new();
    let mut path_heads = BTreeMap::new();
    let mut interior = 0usize;
    for (id, e) in src.graph.edges.iter().enumerate() {
        if e.color != EdgeColor::Blue {
            let out = graph.add_edge(e.u, e.v, e.color, e.weight);
            copied.insert(out, id);
            continue;
        }
        let mut prev = e.u;
        let mut prev_side = sides[e.u];
        let mut head = None;
        for step in 0..2 * n - 2 {
            let w = graph.add_vertex(fresh_name(&mut taken, &format!("w{interior}")));
            interior += 1;
            sides.push(!prev_side);
            let color = if step % 2 == 0 { EdgeColor::Red } else { EdgeColor::Uncolored };
            let out = graph.add_colored(prev, w, color);
            head.get_or_insert(out);
            prev = w;
            prev_side = !prev_side;
        }
        let out = graph.add_colored(prev, e.v, EdgeColor::Red);
        path_heads.insert(id, *head.get_or_insert(out));
    }
    for &(a, b) in &pad_edges {
        graph.add_colored(a, b, EdgeColor::Uncolored);
    }
    if bp.is_some() {
        graph.bipartition = Some(Bipartition {
            left: sides.iter().enumerate().filter(|&(_, &s)| s).map(|(i, _)| i).collect(),
            right: sides.iter().enumerate().filter(|&(_, &s)| !s).map(|(i, _)| i).collect(),
        });
        debug_assert!(graph.validate().is_ok());
    }
    let trace = vec![format!(
        "{} padding edges lift the vertex count to {n}; each of {} blue edges became a {}-edge path with {n} red edges; red target {}",
        pad_edges.len(),
        path_heads.len(),
        2 * n - 1,
        l * n + k
    )];
    Ok(PathExpanded { graph, red_target: l * n + k, copied, path_heads, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::brute::{perfect_b_profile, red_profile, search_exact_perfect_b_matching};
    use crate::matching::{
        decide_exact_pm_randomized, decide_exact_pm_two_colors, RandomizedConfig,
    };
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn names(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn unit_capacities_with_unit_degrees_reproduce_the_graph() {
        let mut g = ColoredMultigraph::undirected(names(&["a", "b", "c", "d"]));
        g.add_colored(0, 1, EdgeColor::Red);
        g.add_colored(2, 3, EdgeColor::Uncolored);
        let src = BMatchingInstance {
            graph: g,
            capacities: vec![1; 4],
            red_target: 1,
            blue_target: None,
        };
        let exp = b_matching_to_matching(&src);
        let exp = exp.reduced().expect("degrees meet capacities");
        assert_eq!(exp.graph.vertices, names(&["a#0", "b#0", "c#0", "d#0"]));
        assert_eq!(exp.graph.edge_count(), 2);
        assert_eq!(exp.cross_edges, 2);
        let out: Vec<(usize, usize, EdgeColor)> =
            exp.graph.edges.iter().map(|e| (e.u, e.v, e.color)).collect();
        assert_eq!(out, vec![(0, 1, EdgeColor::Red), (2, 3, EdgeColor::Uncolored)]);
        assert_eq!(exp.red_target, 1);
    }

    #[test]
    fn parallel_red_pair_keeps_exactly_one_copy_matchable() {
        let mut g = ColoredMultigraph::undirected(names(&["u", "v"]));
        g.add_colored(0, 1, EdgeColor::Red);
        g.add_colored(0, 1, EdgeColor::Red);
        let src = BMatchingInstance {
            graph: g,
            capacities: vec![1, 1],
            red_target: 1,
            blue_target: None,
        };
        let exp = b_matching_to_matching(&src);
        let exp = exp.reduced().unwrap();
        // Two slots and one pad per endpoint.
        assert_eq!(exp.graph.vertex_count(), 6);
        let profile = red_profile(&exp.graph, 16).unwrap();
        assert_eq!(
            profile.support(),
            BTreeSet::from([1]),
            "every matching uses exactly one red copy"
        );

        // Witness: a certificate pulls back to one of the parallel edges.
        let cert = search_exact_perfect_b_matching(&exp.instance(), 16).unwrap().unwrap();
        let back = exp.witness(&cert);
        assert_eq!(back.edge_ids.len(), 1);
        assert!(back.edge_ids[0] < 2);
    }

    #[test]
    fn unsaturatable_vertices_are_decided_immediately() {
        let mut g = ColoredMultigraph::undirected(names(&["u", "v"]));
        g.add_colored(0, 1, EdgeColor::Red);
        let src = BMatchingInstance {
            graph: g,
            capacities: vec![2, 1],
            red_target: 1,
            blue_target: None,
        };
        let out = b_matching_to_matching(&src);
        let d = out.decision().expect("capacity 2 exceeds degree 1");
        assert!(!d.yes);
        assert!(perfect_b_profile(&src, 16).unwrap().0.is_empty());
    }

    #[test]
    fn expansion_answers_match_the_b_matching_profile() {
        let mut rng = StdRng::seed_from_u64(0x9add_0001);
        let cfg = RandomizedConfig { trials: 2, ..RandomizedConfig::with_seed(7) };
        for case in 0..120 {
            let n = rng.random_range(2..=5usize);
            let m = rng.random_range(1..=6usize);
            let mut g = ColoredMultigraph::undirected(
                (0..n).map(|i| format!("v{i}")).collect(),
            );
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
            let degrees = g.degrees();
            let capacities: Vec<usize> =
                (0..n).map(|v| rng.random_range(0..=degrees[v] + 1)).collect();
            let red_target = rng.random_range(0..=2usize);
            let blue_target =
                if rng.random_range(0..2) == 0 { None } else { Some(rng.random_range(0..=2usize)) };
            let src = BMatchingInstance { graph: g, capacities, red_target, blue_target };
            let profile = perfect_b_profile(&src, 24).unwrap();
            let want = profile.0.iter().any(|(&(r, b), &c)| {
                c > 0 && r == red_target && blue_target.map_or(true, |bt| b == bt)
            });
            let got = match b_matching_to_matching(&src) {
                ReductionOutcome::Decided(d) => d.yes,
                ReductionOutcome::Reduced(exp) => match exp.blue_target {
                    None => decide_exact_pm_randomized(&exp.graph, exp.red_target, &cfg)
                        .unwrap()
                        .is_yes(),
                    Some(bt) => {
                        decide_exact_pm_two_colors(&exp.graph, exp.red_target, bt, &cfg)
                            .unwrap()
                            .is_yes()
                    }
                },
            };
            assert_eq!(got, want, "case {case}: {src:?}");
        }
    }

    fn unit_instance(
        g: ColoredMultigraph,
        red_target: usize,
        blue_target: usize,
    ) -> BMatchingInstance {
        BMatchingInstance {
            capacities: vec![1; g.vertex_count()],
            graph: g,
            red_target,
            blue_target: Some(blue_target),
        }
    }

    #[test]
    fn without_blue_targets_the_graph_passes_through() {
        let mut g = ColoredMultigraph::undirected(names(&["a", "b", "c", "d"]));
        g.add_colored(0, 1, EdgeColor::Red);
        g.add_colored(2, 3, EdgeColor::Uncolored);
        let src = unit_instance(g, 1, 0);
        let out = red_blue_to_red(&src).unwrap();
        assert_eq!(out.graph.vertices, src.graph.vertices);
        assert_eq!(out.graph.edges, src.graph.edges);
        assert_eq!(out.red_target, 1);
        assert!(out.path_heads.is_empty());
    }

    #[test]
    fn a_lone_blue_edge_becomes_a_three_edge_path() {
        let mut g = ColoredMultigraph::undirected(names(&["u", "v"]));
        g.add_colored(0, 1, EdgeColor::Blue);
        let src = unit_instance(g, 0, 1);
        let out = red_blue_to_red(&src).unwrap();
        assert_eq!(out.graph.vertex_count(), 4);
        assert_eq!(out.graph.edge_count(), 3);
        let colors: Vec<EdgeColor> = out.graph.edges.iter().map(|e| e.color).collect();
        assert_eq!(colors, vec![EdgeColor::Red, EdgeColor::Uncolored, EdgeColor::Red]);
        assert_eq!(out.red_target, 2);
        let profile = red_profile(&out.graph, 16).unwrap();
        assert_eq!(profile.0, [(2, 1)].into_iter().collect());

        // The only matching selects the path, which pulls back to the blue edge.
        let cert = search_exact_perfect_b_matching(
            &BMatchingInstance {
                capacities: vec![1; 4],
                graph: out.graph.clone(),
                red_target: 2,
                blue_target: None,
            },
            16,
        )
        .unwrap()
        .unwrap();
        assert_eq!(out.witness(&cert).edge_ids, vec![0]);
    }

    #[test]
    fn disjoint_red_and_blue_edges_agree_at_the_shifted_target() {
        let mut g = ColoredMultigraph::undirected(names(&["a", "b", "c", "d"]));
        g.add_colored(0, 1, EdgeColor::Red);
        g.add_colored(2, 3, EdgeColor::Blue);
        let src = unit_instance(g, 1, 1);
        let out = red_blue_to_red(&src).unwrap();
        assert_eq!(out.red_target, 4 + 1, "n stays 4, so the target is n + k");
        let profile = red_profile(&out.graph, 16).unwrap();
        assert_eq!(profile.support(), BTreeSet::from([5]));
        let src_profile = perfect_b_profile(&src, 16).unwrap();
        assert_eq!(
            src_profile.0.get(&(1, 1)).copied().unwrap_or(0) > 0,
            profile.count(5) > 0
        );
    }

    #[test]
    fn oversized_targets_pad_the_vertex_count_first() {
        let mut g = ColoredMultigraph::undirected(names(&["u", "v"]));
        g.add_colored(0, 1, EdgeColor::Red);
        // k = 3 is not below n = 2; one isolated pad lifts n to 4.
        let src = BMatchingInstance {
            capacities: vec![1, 1],
            graph: g,
            red_target: 3,
            blue_target: Some(0),
        };
        let out = red_blue_to_red(&src).unwrap();
        assert_eq!(out.graph.vertex_count(), 4);
        assert_eq!(out.red_target, 3);
        // Unreachable target: the only matchings have 1 red edge.
        let profile = red_profile(&out.graph, 16).unwrap();
        assert_eq!(profile.support(), BTreeSet::from([1]));
    }

    #[test]
    fn capacities_above_one_are_rejected() {
        let mut g = ColoredMultigraph::undirected(names(&["u", "v"]));
        g.add_colored(0, 1, EdgeColor::Blue);
        let src = BMatchingInstance {
            capacities: vec![2, 2],
            graph: g,
            red_target: 0,
            blue_target: Some(1),
        };
        assert!(matches!(red_blue_to_red(&src), Err(ReductionError::WrongShape(_))));

        let mut g = ColoredMultigraph::undirected(names(&["u", "v"]));
        g.add_colored(0, 1, EdgeColor::Red);
        let no_blue = BMatchingInstance {
            capacities: vec![1, 1],
            graph: g,
            red_target: 1,
            blue_target: None,
        };
        assert!(matches!(red_blue_to_red(&no_blue), Err(ReductionError::WrongShape(_))));
    }

    #[test]
    fn random_two_color_instances_survive_the_full_pipeline() {
        let mut rng = StdRng::seed_from_u64(0x9add_0002);
        let cfg = RandomizedConfig { trials: 2, ..RandomizedConfig::with_seed(13) };
        for case in 0..100 {
            let n = 2 * rng.random_range(1..=2usize);
            let mut g = ColoredMultigraph::undirected(
                (0..n).map(|i| format!("v{i}")).collect(),
            );
            for _ in 0..rng.random_range(1..=4usize) {
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
            let red_target = rng.random_range(0..=2usize);
            let blue_target = rng.random_range(0..=2usize);
            let src = unit_instance(g, red_target, blue_target);
            let want = perfect_b_profile(&src, 24)
                .unwrap()
                .0
                .get(&(red_target, blue_target))
                .copied()
                .unwrap_or(0)
                > 0;
            let out = red_blue_to_red(&src).unwrap();
            let got =
                decide_exact_pm_randomized(&out.graph, out.red_target, &cfg).unwrap().is_yes();
            assert_eq!(got, want, "case {case}: {src:?}");

            // Pull a certificate back through the path gadget when the
            // output is small enough to search exhaustively.
            if want && out.graph.edge_count() <= 24 {
                let cert = search_exact_perfect_b_matching(
                    &BMatchingInstance {
                        capacities: vec![1; out.graph.vertex_count()],
                        graph: out.graph.clone(),
                        red_target: out.red_target,
                        blue_target: None,
                    },
                    24,
                )
                .unwrap()
                .expect("profile says a matching exists");
                let back = out.witness(&cert);
                let mut used = vec![0usize; src.graph.vertex_count()];
                let (mut red, mut blue) = (0, 0);
                for &id in &back.edge_ids {
                    let e = src.graph.edges[id];
                    used[e.u] += 1;
                    used[e.v] += 1;
                    match e.color {
                        EdgeColor::Red => red += 1,
                        EdgeColor::Blue => blue += 1,
                        EdgeColor::Uncolored => {}
                    }
                }
                assert_eq!(used, src.capacities, "case {case}");
                assert_eq!((red, blue), (red_target, blue_target), "case {case}");
            }
        }
    }
}
