//! Capacity expansion: turn a b-matching instance into a plain matching
//! instance on a simple graph.
//!
//! Every vertex `v` of degree δ(v) (counting parallel copies) becomes δ(v)
//! "slot" copies, one per incident edge, plus a block of interchangeable pad
//! vertices joined to every copy. Each source edge becomes a single "cross"
//! edge between the two slots it owns, keeping its color and weight.
//!
//! With δ(v) − b(v) pads per vertex, perfect matchings of the expansion are
//! exactly the perfect b-matchings of the source (pads soak up the slots that
//! stay unused, forcing exactly b(v) cross edges at v), and the number of
//! chosen red/blue cross edges is preserved. With pads carrying a weight
//! larger than the total real weight, maximum-weight matchings of the
//! expansion saturate every pad and the cross edges they select form a
//! maximum-weight b-matching with degrees **at most** b(v); that variant
//! requires b(v) ≤ δ(v), which callers arrange by clamping.
//!
//! The expansion is bipartiteness-preserving: copies stay on their vertex's
//! side and pads go to the opposite side.

use crate::graph::{BMatchingInstance, Bipartition, ColoredMultigraph, Edge, EdgeColor};
use std::collections::BTreeSet;

pub(crate) struct Expansion {
    /// Simple expanded graph. Edge ids below `cross_edges` are the images of
    /// the source edges, in source id order; everything after is padding.
    pub graph: ColoredMultigraph,
    pub cross_edges: usize,
}

/// Shared builder; `pad_weight` of `None` means the perfect-matching variant
/// (pads weightless), `Some(w)` the saturating variant.
fn expand(instance: &BMatchingInstance, pad_weight: Option<i64>) -> Expansion {
    let g = &instance.graph;
    let n = g.vertex_count();
    let degrees = g.degrees();
    let pads: Vec<usize> = (0..n)
        .map(|v| {
            debug_assert!(
                degrees[v] >= instance.capacities[v],
                "expansion requires capacity at most degree"
            );
            degrees[v] - instance.capacities[v]
        })
        .collect();

    let mut copy_offset = vec![0usize; n];
    let mut acc = 0;
    for v in 0..n {
        copy_offset[v] = acc;
        acc += degrees[v];
    }
    let mut pad_offset = vec![0usize; n];
    for v in 0..n {
        pad_offset[v] = acc;
        acc += pads[v];
    }

    let mut vertices = vec![String::new(); acc];
    for v in 0..n {
        for i in 0..degrees[v] {
            vertices[copy_offset[v] + i] = format!("{}#{}", g.vertices[v], i);
        }
        for i in 0..pads[v] {
            vertices[pad_offset[v] + i] = format!("{}~{}", g.vertices[v], i);
        }
    }

    let mut edges = Vec::new();
    let mut next_slot = vec![0usize; n];
    for e in &g.edges {
        let su = copy_offset[e.u] + next_slot[e.u];
        next_slot[e.u] += 1;
        let sv = copy_offset[e.v] + next_slot[e.v];
        next_slot[e.v] += 1;
        edges.push(Edge { u: su, v: sv, color: e.color, weight: e.weight });
    }
    let cross_edges = edges.len();
    for v in 0..n {
        for p in 0..pads[v] {
            for c in 0..degrees[v] {
                edges.push(Edge {
                    u: pad_offset[v] + p,
                    v: copy_offset[v] + c,
                    color: EdgeColor::Uncolored,
                    weight: pad_weight.unwrap_or(0),
                });
            }
        }
    }

    let bipartition = g.bipartition.as_ref().map(|bp| {
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for v in 0..n {
            let (own, other) = if bp.left.contains(&v) {
                (&mut left, &mut right)
            } else {
                (&mut right, &mut left)
            };
            own.extend((0..degrees[v]).map(|i| copy_offset[v] + i));
            other.extend((0..pads[v]).map(|i| pad_offset[v] + i));
        }
        Bipartition { left, right }
    });

    let graph = ColoredMultigraph { vertices, edges, bipartition, directed: false };
    debug_assert!(graph.validate().is_ok());
    Expansion { graph, cross_edges }
}

/// Perfect-matching expansion; requires b(v) ≤ δ(v) for every vertex.
pub(crate) fn expand_exact(instance: &BMatchingInstance) -> Expansion {
    expand(instance, None)
}

/// Saturating expansion for ≤-capacity optimization; `pad_weight` must
/// exceed the total weight of all real edges.
pub(crate) fn expand_saturating(instance: &BMatchingInstance, pad_weight: i64) -> Expansion {
    expand(instance, Some(pad_weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::brute;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn star_instance() -> BMatchingInstance {
        let mut g = ColoredMultigraph::undirected(
            ["hub", "a", "b", "c"].map(String::from).to_vec(),
        );
        for leaf in 1..=3 {
            g.add_colored(0, leaf, EdgeColor::Uncolored);
        }
        BMatchingInstance { graph: g, capacities: vec![2, 1, 1, 1], red_target: 0, blue_target: None }
    }

    #[test]
    fn expansion_shape_counts_slots_and_pads() {
        let exp = expand_exact(&star_instance());
        // Hub: 3 slots + 1 pad; each leaf: 1 slot + 0 pads.
        assert_eq!(exp.graph.vertex_count(), 3 + 1 + 3);
        assert_eq!(exp.cross_edges, 3);
        // Pad block is complete bipartite 1x3.
        assert_eq!(exp.graph.edge_count(), 3 + 3);
        assert!(exp.graph.validate().is_ok());
    }

    #[test]
    fn saturating_pads_carry_the_weight() {
        let exp = expand_saturating(&star_instance(), 99);
        assert!(exp.graph.edges[..exp.cross_edges].iter().all(|e| e.weight == 0));
        assert!(exp.graph.edges[exp.cross_edges..].iter().all(|e| e.weight == 99));
    }

    #[test]
    fn bipartition_carries_over_with_pads_flipped() {
        let mut g = ColoredMultigraph::undirected(["l", "r"].map(String::from).to_vec());
        g.add_colored(0, 1, EdgeColor::Red);
        g.add_colored(0, 1, EdgeColor::Uncolored);
        g.bipartition = Some(Bipartition {
            left: [0].into_iter().collect(),
            right: [1].into_iter().collect(),
        });
        let inst = BMatchingInstance { graph: g, capacities: vec![1, 1], red_target: 1, blue_target: None };
        let exp = expand_exact(&inst);
        assert!(exp.graph.validate().is_ok());
        let bp = exp.graph.bipartition.as_ref().unwrap();
        assert_eq!(bp.left.len() + bp.right.len(), exp.graph.vertex_count());
        // l has 2 slots (left) and 1 pad (right); r symmetric.
        assert_eq!(bp.left.len(), 3);
    }

    #[test]
    fn exact_expansion_preserves_color_support() {
        // The pads multiply matching counts (any pad permutation works) but
        // must never create or destroy a reachable (red, blue) combination.
        let mut rng = StdRng::seed_from_u64(5);
        for case in 0..150 {
            let n = rng.random_range(2..=5usize);
            let m = rng.random_range(0..=6usize);
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
                (0..n).map(|v| rng.random_range(0..=degrees[v])).collect();
            let inst = BMatchingInstance {
                graph: g,
                capacities,
                red_target: 0,
                blue_target: None,
            };
            let want = brute::perfect_b_profile(&inst, 16).unwrap();
            let exp = expand_exact(&inst);
            if exp.graph.vertex_count() > 16 {
                continue;
            }
            let got = brute::color_profile(&exp.graph, 16).unwrap();
            let want_support: Vec<_> = want.0.keys().copied().collect();
            let got_support: Vec<_> =
                got.0.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect();
            assert_eq!(want_support, got_support, "case {case}");
        }
    }

    #[test]
    fn saturating_expansion_realizes_best_b_matchings() {
        // Maximum-weight matchings of the padded expansion saturate all pads
        // and their cross edges form a maximum-weight ≤-capacity b-matching.
        let mut rng = StdRng::seed_from_u64(17);
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
                g.add_edge(u, v, EdgeColor::Uncolored, rng.random_range(0..=9));
            }
            let degrees = g.degrees();
            let capacities: Vec<usize> =
                (0..n).map(|v| rng.random_range(0..=degrees[v])).collect();
            let total: i64 = g.edges.iter().map(|e| e.weight).sum();
            let inst = BMatchingInstance {
                graph: g,
                capacities: capacities.clone(),
                red_target: 0,
                blue_target: None,
            };
            let exp = expand_saturating(&inst, total + 1);
            if exp.graph.vertex_count() > 18 {
                continue;
            }
            let pad_count = exp.graph.edge_count() - exp.cross_edges;
            let pad_vertices: usize = (0..inst.graph.vertex_count())
                .map(|v| degrees[v] - capacities[v])
                .sum();
            let best_total = brute::best_weight_matching(&exp.graph, 18).unwrap();
            let best_b = brute::best_weight_b_matching(&inst, 16).unwrap();
            assert_eq!(
                best_total,
                pad_vertices as i64 * (total + 1) + best_b,
                "case {case}: pads {pad_count}"
            );
        }
    }
}
