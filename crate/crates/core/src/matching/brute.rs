//! Exhaustive matching oracles.
//!
//! Everything here enumerates, with memoization or pruning but no cleverness
//! beyond that — these functions define ground truth for the fast solvers,
//! so they are written for obvious correctness and guarded by size caps.

use super::{ColorProfile, OracleError, RedProfile};
use crate::graph::{BMatchingInstance, ColoredMultigraph, EdgeColor, MatchingCertificate};
use std::collections::{BTreeMap, HashMap};

/// Default vertex cap for perfect-matching profiles. Callers may raise it;
/// the mask-based memo handles larger graphs when they are sparse.
pub const DEFAULT_PROFILE_CAP: usize = 16;

fn check_undirected(graph: &ColoredMultigraph) -> Result<(), OracleError> {
    if graph.directed {
        return Err(OracleError::Directed);
    }
    Ok(())
}

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<(), OracleError> {
    if size > cap.min(60) {
        return Err(OracleError::CapExceeded { what, size, cap: cap.min(60) });
    }
    Ok(())
}

/// Count perfect matchings grouped by (red, blue) edge counts.
pub fn color_profile(
    graph: &ColoredMultigraph,
    cap: usize,
) -> Result<ColorProfile, OracleError> {
    check_undirected(graph)?;
    let n = graph.vertex_count();
    check_cap("perfect-matching profile", n, cap)?;
    if n % 2 == 1 {
        return Ok(ColorProfile::default());
    }
    let mut adjacency: Vec<Vec<(usize, EdgeColor)>> = vec![Vec::new(); n];
    for e in &graph.edges {
        if e.u == e.v {
            continue;
        }
        adjacency[e.u].push((e.v, e.color));
        adjacency[e.v].push((e.u, e.color));
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo: HashMap<u64, BTreeMap<(usize, usize), u64>> = HashMap::new();

    fn rec(
        mask: u64,
        full: u64,
        adjacency: &[Vec<(usize, EdgeColor)>],
        memo: &mut HashMap<u64, BTreeMap<(usize, usize), u64>>,
    ) -> BTreeMap<(usize, usize), u64> {
        if mask == full {
            return [((0, 0), 1u64)].into_iter().collect();
        }
        if let Some(hit) = memo.get(&mask) {
            return hit.clone();
        }
        let v = (!mask).trailing_zeros() as usize;
        let mut out: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for &(w, color) in &adjacency[v] {
            if mask & (1 << w) != 0 {
                continue;
            }
            let sub = rec(mask | (1 << v) | (1 << w), full, adjacency, memo);
            let (dr, db) = match color {
                EdgeColor::Red => (1, 0),
                EdgeColor::Blue => (0, 1),
                EdgeColor::Uncolored => (0, 0),
            };
            for ((r, b), c) in sub {
                *out.entry((r + dr, b + db)).or_insert(0) += c;
            }
        }
        memo.insert(mask, out.clone());
        out
    }

    let counts = rec(0, full, &adjacency, &mut memo);
    Ok(ColorProfile(counts.into_iter().filter(|(_, c)| *c > 0).collect()))
}

/// Count perfect matchings grouped by red-edge count.
pub fn red_profile(graph: &ColoredMultigraph, cap: usize) -> Result<RedProfile, OracleError> {
    Ok(color_profile(graph, cap)?.red_marginal())
}

/// Count perfect matchings of a declared-bipartite graph directly, as the
/// permanent of the left-by-right multiplicity matrix. Cross-checks the
/// profile totals through entirely different bookkeeping.
pub fn bipartite_matching_count(
    graph: &ColoredMultigraph,
    cap: usize,
) -> Result<u64, OracleError> {
    check_undirected(graph)?;
    let bp = graph.bipartition.as_ref().ok_or(OracleError::NotBipartite)?;
    let left: Vec<usize> = bp.left.iter().copied().collect();
    let right: Vec<usize> = bp.right.iter().copied().collect();
    if left.len() != right.len() {
        return Ok(0);
    }
    let n = left.len();
    check_cap("bipartite matching count", n, cap)?;
    let right_pos: BTreeMap<usize, usize> =
        right.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let left_pos: BTreeMap<usize, usize> =
        left.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut mult = vec![vec![0u64; n]; n];
    for e in &graph.edges {
        let (i, j) = if let (Some(&i), Some(&j)) = (left_pos.get(&e.u), right_pos.get(&e.v)) {
            (i, j)
        } else if let (Some(&i), Some(&j)) = (left_pos.get(&e.v), right_pos.get(&e.u)) {
            (i, j)
        } else {
            continue;
        };
        mult[i][j] += 1;
    }
    let mut dp = vec![0u64; 1 << n];
    dp[0] = 1;
    for mask in 0..(1u64 << n) as usize {
        if dp[mask] == 0 {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for (j, row) in mult[i].iter().enumerate() {
            if mask & (1 << j) == 0 && *row > 0 {
                dp[mask | (1 << j)] += dp[mask] * row;
            }
        }
    }
    Ok(dp[(1usize << n) - 1])
}

/// Maximum total weight over all matchings (not necessarily perfect).
/// The empty matching is allowed, so the result is never negative.
pub fn best_weight_matching(
    graph: &ColoredMultigraph,
    cap: usize,
) -> Result<i64, OracleError> {
    check_undirected(graph)?;
    let n = graph.vertex_count();
    check_cap("matching weight enumeration", n, cap)?;
    let mut adjacency: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for e in &graph.edges {
        if e.u == e.v {
            continue;
        }
        adjacency[e.u].push((e.v, e.weight));
        adjacency[e.v].push((e.u, e.weight));
    }
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let mut memo: HashMap<u64, i64> = HashMap::new();

    fn rec(
        mask: u64,
        full: u64,
        adjacency: &[Vec<(usize, i64)>],
        memo: &mut HashMap<u64, i64>,
    ) -> i64 {
        if mask == full {
            return 0;
        }
        if let Some(&hit) = memo.get(&mask) {
            return hit;
        }
        let v = (!mask).trailing_zeros() as usize;
        // Either v stays unmatched, or it takes one of its edges.
        let mut best = rec(mask | (1 << v), full, adjacency, memo);
        for &(w, weight) in &adjacency[v] {
            if mask & (1 << w) == 0 {
                best = best.max(weight + rec(mask | (1 << v) | (1 << w), full, adjacency, memo));
            }
        }
        memo.insert(mask, best);
        best
    }

    Ok(rec(0, full, &adjacency, &mut memo))
}

/// Per-vertex incidence counts contributed by `edges[i..]`.
fn suffix_incidence(graph: &ColoredMultigraph) -> Vec<Vec<usize>> {
    let m = graph.edge_count();
    let n = graph.vertex_count();
    let mut suffix = vec![vec![0usize; n]; m + 1];
    for i in (0..m).rev() {
        suffix[i] = suffix[i + 1].clone();
        suffix[i][graph.edges[i].u] += 1;
        suffix[i][graph.edges[i].v] += 1;
    }
    suffix
}

/// Count perfect b-matchings (edge subsets meeting every vertex exactly
/// b(v) times) grouped by (red, blue) counts.
pub fn perfect_b_profile(
    instance: &BMatchingInstance,
    edge_cap: usize,
) -> Result<ColorProfile, OracleError> {
    check_undirected(&instance.graph)?;
    let m = instance.graph.edge_count();
    if m > edge_cap {
        return Err(OracleError::CapExceeded { what: "b-matching enumeration", size: m, cap: edge_cap });
    }
    let suffix = suffix_incidence(&instance.graph);
    let mut rem = instance.capacities.clone();
    let mut out: BTreeMap<(usize, usize), u64> = BTreeMap::new();

    fn rec(
        i: usize,
        graph: &ColoredMultigraph,
        rem: &mut Vec<usize>,
        suffix: &[Vec<usize>],
        red: usize,
        blue: usize,
        out: &mut BTreeMap<(usize, usize), u64>,
    ) {
        if rem.iter().zip(&suffix[i]).any(|(&need, &avail)| need > avail) {
            return;
        }
        if i == graph.edge_count() {
            if rem.iter().all(|&r| r == 0) {
                *out.entry((red, blue)).or_insert(0) += 1;
            }
            return;
        }
        let e = graph.edges[i];
        // Exclude edge i.
        rec(i + 1, graph, rem, suffix, red, blue, out);
        // Include edge i if both endpoints still have capacity.
        if rem[e.u] > 0 && rem[e.v] > 0 && e.u != e.v {
            rem[e.u] -= 1;
            rem[e.v] -= 1;
            let (dr, db) = match e.color {
                EdgeColor::Red => (1, 0),
                EdgeColor::Blue => (0, 1),
                EdgeColor::Uncolored => (0, 0),
            };
            rec(i + 1, graph, rem, suffix, red + dr, blue + db, out);
            rem[e.u] += 1;
            rem[e.v] += 1;
        }
    }

    if rem.len() != instance.graph.vertex_count() {
        // Malformed instances have no matchings at all.
        return Ok(ColorProfile::default());
    }
    rec(0, &instance.graph, &mut rem, &suffix, 0, 0, &mut out);
    Ok(ColorProfile(out))
}

/// Find one perfect b-matching meeting the instance's red target (and blue
/// target, when set), returned as edge ids. `None` means no such matching
/// exists; this is the certificate-producing twin of [`perfect_b_profile`].
pub fn search_exact_perfect_b_matching(
    instance: &BMatchingInstance,
    edge_cap: usize,
) -> Result<Option<MatchingCertificate>, OracleError> {
    check_undirected(&instance.graph)?;
    let m = instance.graph.edge_count();
    if m > edge_cap {
        return Err(OracleError::CapExceeded { what: "b-matching search", size: m, cap: edge_cap });
    }
    if instance.capacities.len() != instance.graph.vertex_count() {
        return Ok(None);
    }
    let suffix = suffix_incidence(&instance.graph);
    let mut suffix_red = vec![0usize; m + 1];
    let mut suffix_blue = vec![0usize; m + 1];
    // Interchangeable parallel copies are taken as group prefixes: skipping
    // one copy skips the rest of its run, cutting symmetric branches.
    let mut group_end = vec![m; m];
    for i in (0..m).rev() {
        let e = instance.graph.edges[i];
        suffix_red[i] = suffix_red[i + 1] + usize::from(e.color == EdgeColor::Red);
        suffix_blue[i] = suffix_blue[i + 1] + usize::from(e.color == EdgeColor::Blue);
        if i + 1 < m {
            let f = instance.graph.edges[i + 1];
            group_end[i] = if (f.u, f.v, f.color, f.weight) == (e.u, e.v, e.color, e.weight) {
                group_end[i + 1]
            } else {
                i + 1
            };
        }
    }

    struct Search<'a> {
        instance: &'a BMatchingInstance,
        suffix: Vec<Vec<usize>>,
        suffix_red: Vec<usize>,
        suffix_blue: Vec<usize>,
        group_end: Vec<usize>,
    }

    fn rec(
        s: &Search,
        i: usize,
        rem: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        red: usize,
        blue: usize,
    ) -> bool {
        if rem.iter().zip(&s.suffix[i]).any(|(&need, &avail)| need > avail) {
            return false;
        }
        let rt = s.instance.red_target;
        if red > rt || red + s.suffix_red[i] < rt {
            return false;
        }
        if let Some(bt) = s.instance.blue_target {
            if blue > bt || blue + s.suffix_blue[i] < bt {
                return false;
            }
        }
        if i == s.instance.graph.edge_count() {
            return rem.iter().all(|&r| r == 0);
        }
        let e = s.instance.graph.edges[i];
        if rem[e.u] > 0 && rem[e.v] > 0 && e.u != e.v {
            rem[e.u] -= 1;
            rem[e.v] -= 1;
            let (dr, db) = match e.color {
                EdgeColor::Red => (1, 0),
                EdgeColor::Blue => (0, 1),
                EdgeColor::Uncolored => (0, 0),
            };
            chosen.push(i);
            if rec(s, i + 1, rem, chosen, red + dr, blue + db) {
                return true;
            }
            chosen.pop();
            rem[e.u] += 1;
            rem[e.v] += 1;
        }
        rec(s, s.group_end[i], rem, chosen, red, blue)
    }

    let search = Search { instance, suffix, suffix_red, suffix_blue, group_end };
    let mut rem = instance.capacities.clone();
    let mut chosen = Vec::new();
    Ok(if rec(&search, 0, &mut rem, &mut chosen, 0, 0) {
        Some(MatchingCertificate::new(chosen))
    } else {
        None
    })
}

fn best_b_matching_by(
    instance: &BMatchingInstance,
    edge_cap: usize,
    value: impl Fn(usize) -> i64 + Copy,
) -> Result<i64, OracleError> {
    check_undirected(&instance.graph)?;
    let m = instance.graph.edge_count();
    if m > edge_cap {
        return Err(OracleError::CapExceeded { what: "b-matching enumeration", size: m, cap: edge_cap });
    }
    if instance.capacities.len() != instance.graph.vertex_count() {
        return Ok(0);
    }
    let mut rem = instance.capacities.clone();

    fn rec(
        i: usize,
        graph: &ColoredMultigraph,
        rem: &mut Vec<usize>,
        value: &impl Fn(usize) -> i64,
    ) -> i64 {
        if i == graph.edge_count() {
            return 0;
        }
        let e = graph.edges[i];
        let mut best = rec(i + 1, graph, rem, value);
        if rem[e.u] > 0 && rem[e.v] > 0 && e.u != e.v {
            rem[e.u] -= 1;
            rem[e.v] -= 1;
            best = best.max(value(i) + rec(i + 1, graph, rem, value));
            rem[e.u] += 1;
            rem[e.v] += 1;
        }
        best
    }

    Ok(rec(0, &instance.graph, &mut rem, &value))
}

/// Size of a maximum b-matching (each vertex v used at most b(v) times).
pub fn best_card_b_matching(
    instance: &BMatchingInstance,
    edge_cap: usize,
) -> Result<usize, OracleError> {
    Ok(best_b_matching_by(instance, edge_cap, |_| 1)? as usize)
}

/// Maximum total weight of a b-matching. Negative-weight edges are legal
/// here; they simply never help.
pub fn best_weight_b_matching(
    instance: &BMatchingInstance,
    edge_cap: usize,
) -> Result<i64, OracleError> {
    let weights: Vec<i64> = instance.graph.edges.iter().map(|e| e.weight).collect();
    best_b_matching_by(instance, edge_cap, |i| weights[i])
}
