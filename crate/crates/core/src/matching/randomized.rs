//! One-sided-error randomized decider for exact perfect matching.
//!
//! The matching-generating polynomial of a graph — Pfaffian of the Tutte
//! matrix, or determinant of the Edmonds matrix when a bipartition is
//! declared — is evaluated with a fresh random field element per edge, with
//! every red edge carrying an extra indeterminate y (and blue edges z in
//! the two-color variant). Interpolating over enough evaluation points
//! recovers the exact coefficient vector of the evaluated polynomial, so:
//!
//! * if no matching with the queried color counts exists, the coefficient
//!   is identically zero and the answer is never yes (no false positives);
//! * if one exists, the coefficient is a nonzero polynomial in the edge
//!   randomness of degree ≤ n/2, which vanishes with probability ≤ n/(2q)
//!   per trial (Schwartz–Zippel), driven down exponentially by trials.

use super::modp::{det_mod, interpolate, pfaffian_mod, PrimeField};
use super::{ExactAnswer, MatchingError, RandomizedConfig};
use crate::graph::{ColoredMultigraph, EdgeColor, GraphError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

/// Is there a perfect matching with exactly `red_target` red edges?
pub fn decide_exact_pm_randomized(
    graph: &ColoredMultigraph,
    red_target: usize,
    cfg: &RandomizedConfig,
) -> Result<ExactAnswer, MatchingError> {
    decide(graph, red_target, None, cfg)
}

/// Is there a perfect matching with exactly `red_target` red and
/// `blue_target` blue edges?
pub fn decide_exact_pm_two_colors(
    graph: &ColoredMultigraph,
    red_target: usize,
    blue_target: usize,
    cfg: &RandomizedConfig,
) -> Result<ExactAnswer, MatchingError> {
    decide(graph, red_target, Some(blue_target), cfg)
}

fn decide(
    graph: &ColoredMultigraph,
    red_target: usize,
    blue_target: Option<usize>,
    cfg: &RandomizedConfig,
) -> Result<ExactAnswer, MatchingError> {
    if graph.directed {
        return Err(GraphError::ExpectedUndirected.into());
    }
    let n = graph.vertex_count();
    if n == 0 {
        // The empty matching is the unique perfect matching.
        return Ok(if red_target == 0 && blue_target.unwrap_or(0) == 0 {
            ExactAnswer::Yes
        } else {
            ExactAnswer::ProbablyNo
        });
    }
    if n % 2 == 1 {
        return Ok(ExactAnswer::ProbablyNo);
    }
    let field = PrimeField::new(cfg.prime).map_err(MatchingError::BadPrime)?;
    if cfg.prime <= n as u64 {
        return Err(MatchingError::BadPrime(format!(
            "prime {} is too small for {n}-vertex interpolation",
            cfg.prime
        )));
    }

    // Degree bounds for the color indeterminates; targets above them are
    // impossible outright.
    let red_degree = graph.color_count(EdgeColor::Red).min(n / 2);
    let blue_degree = graph.color_count(EdgeColor::Blue).min(n / 2);
    if red_target > red_degree || blue_target.unwrap_or(0) > blue_degree {
        return Ok(ExactAnswer::ProbablyNo);
    }

    // With a declared bipartition, the Edmonds matrix (left × right) is
    // half the size and its determinant needs no sign care.
    let sides = match &graph.bipartition {
        Some(bp) => {
            if bp.left.len() != bp.right.len() {
                return Ok(ExactAnswer::ProbablyNo);
            }
            let left: BTreeMap<usize, usize> =
                bp.left.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let right: BTreeMap<usize, usize> =
                bp.right.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            Some((left, right))
        }
        None => None,
    };

    let red_points: Vec<u64> = (0..=red_degree as u64).collect();
    let blue_points: Vec<u64> = match blue_target {
        Some(_) => (0..=blue_degree as u64).collect(),
        None => vec![1],
    };

    // Each trial draws its edge randomness from its own deterministic
    // stream, so trials are independent of each other and of scheduling:
    // the overall answer depends only on (seed, trials, prime).
    let run_trial = |trial: u32| -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial as u64);
        let randomness: Vec<u64> =
            graph.edges.iter().map(|_| field.sample(&mut rng)).collect();

        // Evaluate the polynomial over the (y, z) grid. Fixing the edge
        // randomness across the grid is what makes interpolation valid.
        let mut grid = vec![vec![0u64; blue_points.len()]; red_points.len()];
        let mut any_nonzero = false;
        for (yi, &y) in red_points.iter().enumerate() {
            for (zi, &z) in blue_points.iter().enumerate() {
                let value = evaluate(graph, &randomness, y, z, field, &sides);
                grid[yi][zi] = value;
                any_nonzero |= value != 0;
            }
        }
        if !any_nonzero {
            return false;
        }

        match blue_target {
            None => {
                let values: Vec<u64> = grid.iter().map(|row| row[0]).collect();
                interpolate(&red_points, &values, field)[red_target] != 0
            }
            Some(bt) => {
                // Interpolate along z for each fixed y, then along y for
                // the z-coefficient we care about.
                let per_y: Vec<u64> = grid
                    .iter()
                    .map(|row| interpolate(&blue_points, row, field)[bt])
                    .collect();
                interpolate(&red_points, &per_y, field)[red_target] != 0
            }
        }
    };

    let trials = cfg.trials.max(1);
    // Trials are embarrassingly parallel; spreading them over threads only
    // pays off once the per-trial determinant work dominates.
    let workers = if n >= 32 && trials >= 2 {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
            .min(trials as usize)
    } else {
        1
    };
    let hit = if workers <= 1 {
        (0..trials).any(|t| run_trial(t))
    } else {
        let found = AtomicBool::new(false);
        std::thread::scope(|scope| {
            for w in 0..workers as u32 {
                let found = &found;
                let run_trial = &run_trial;
                scope.spawn(move || {
                    let mut t = w;
                    while t < trials && !found.load(Ordering::Relaxed) {
                        if run_trial(t) {
                            found.store(true, Ordering::Relaxed);
                            break;
                        }
                        t += workers as u32;
                    }
                });
            }
        });
        found.into_inner()
    };
    Ok(if hit { ExactAnswer::Yes } else { ExactAnswer::ProbablyNo })
}

/// One evaluation of the matching polynomial with red edges scaled by `y`
/// and blue edges by `z`.
fn evaluate(
    graph: &ColoredMultigraph,
    randomness: &[u64],
    y: u64,
    z: u64,
    field: PrimeField,
    sides: &Option<(BTreeMap<usize, usize>, BTreeMap<usize, usize>)>,
) -> u64 {
    let term = |edge_id: usize| -> u64 {
        let factor = match graph.edges[edge_id].color {
            EdgeColor::Red => y,
            EdgeColor::Blue => z,
            EdgeColor::Uncolored => 1,
        };
        field.mul(randomness[edge_id], factor)
    };
    match sides {
        Some((left, right)) => {
            let half = left.len();
            let mut m = vec![vec![0u64; half]; half];
            for (id, e) in graph.edges.iter().enumerate() {
                let (i, j) = match (left.get(&e.u), right.get(&e.v)) {
                    (Some(&i), Some(&j)) => (i, j),
                    _ => match (left.get(&e.v), right.get(&e.u)) {
                        (Some(&i), Some(&j)) => (i, j),
                        _ => continue,
                    },
                };
                m[i][j] = field.add(m[i][j], term(id));
            }
            det_mod(m, field)
        }
        None => {
            let n = graph.vertex_count();
            let mut a = vec![vec![0u64; n]; n];
            for (id, e) in graph.edges.iter().enumerate() {
                if e.u == e.v {
                    continue;
                }
                let (i, j) = (e.u.min(e.v), e.u.max(e.v));
                let t = term(id);
                a[i][j] = field.add(a[i][j], t);
                a[j][i] = field.neg(a[i][j]);
            }
            pfaffian_mod(a, field)
        }
    }
}
