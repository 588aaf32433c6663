//! Colored multigraphs, b-matching instances, and certificates.
//!
//! Graphs here are deliberately plain: a vertex-name table, an edge list
//! (parallel edges allowed, each edge identified by its dense index), an
//! optional bipartition, and a directed flag used only by the cycle-sum
//! problem. Everything downstream — the matching engine and the instance
//! transformers — works over these types and nothing fancier.

mod text;

pub use text::{
    parse_graph_file, render_b_matching, render_cycle_sum, render_exact_pm,
    render_graph_file, GraphFile, GraphParseError,
};

use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeColor {
    Red,
    Blue,
    Uncolored,
}

impl EdgeColor {
    pub fn token(self) -> &'static str {
        match self {
            EdgeColor::Red => "red",
            EdgeColor::Blue => "blue",
            EdgeColor::Uncolored => "uncolored",
        }
    }
}

/// An edge (or arc, in directed mode) between vertex indices `u` and `v`.
///
/// The edge's id is its index in [`ColoredMultigraph::edges`]; ids are dense
/// and assigned in insertion order so that identical construction runs
/// produce identical ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub color: EdgeColor,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredMultigraph {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub bipartition: Option<Bipartition>,
    pub directed: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {edge} endpoint {endpoint} is out of range")]
    EndpointOutOfRange { edge: usize, endpoint: usize },
    #[error("edge {0} is a self-loop, forbidden in undirected graphs")]
    UndirectedSelfLoop(usize),
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertexName(String),
    #[error("bipartition problem: {0}")]
    BadBipartition(String),
    #[error("edge {0} does not cross the bipartition")]
    EdgeInsideSide(usize),
    #[error("capacity vector has {got} entries for {want} vertices")]
    CapacityLengthMismatch { got: usize, want: usize },
    #[error("certificate references unknown edge id {0}")]
    UnknownEdgeId(usize),
    #[error("expected a directed graph")]
    ExpectedDirected,
    #[error("expected an undirected graph")]
    ExpectedUndirected,
    #[error("graph file is missing the {0:?} field for this problem")]
    MissingField(&'static str),
}

impl ColoredMultigraph {
    pub fn undirected(vertices: Vec<String>) -> Self {
        ColoredMultigraph { vertices, edges: Vec::new(), bipartition: None, directed: false }
    }

    pub fn directed(vertices: Vec<String>) -> Self {
        ColoredMultigraph { vertices, edges: Vec::new(), bipartition: None, directed: true }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Linear-scan lookup; construction code should keep its own indices.
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> usize {
        self.vertices.push(name.into());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, color: EdgeColor, weight: i64) -> usize {
        self.edges.push(Edge { u, v, color, weight });
        self.edges.len() - 1
    }

    pub fn add_colored(&mut self, u: usize, v: usize, color: EdgeColor) -> usize {
        self.add_edge(u, v, color, 0)
    }

    pub fn color_count(&self, color: EdgeColor) -> usize {
        self.edges.iter().filter(|e| e.color == color).count()
    }

    /// Number of edge endpoints at `v` (undirected degree; for digraphs,
    /// in-degree plus out-degree).
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.vertices.len()];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertices.len();
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v) {
                return Err(GraphError::DuplicateVertexName(v.clone()));
            }
        }
        for (id, e) in self.edges.iter().enumerate() {
            for endpoint in [e.u, e.v] {
                if endpoint >= n {
                    return Err(GraphError::EndpointOutOfRange { edge: id, endpoint });
                }
            }
            if !self.directed && e.u == e.v {
                return Err(GraphError::UndirectedSelfLoop(id));
            }
        }
        if let Some(bp) = &self.bipartition {
            if let Some(&v) = bp.left.intersection(&bp.right).next() {
                return Err(GraphError::BadBipartition(format!(
                    "vertex {} on both sides",
                    self.vertices.get(v).map(String::as_str).unwrap_or("?")
                )));
            }
            if bp.left.len() + bp.right.len() != n
                || bp.left.union(&bp.right).any(|&v| v >= n)
            {
                return Err(GraphError::BadBipartition(
                    "sides must partition the vertex set".to_string(),
                ));
            }
            for (id, e) in self.edges.iter().enumerate() {
                let crosses = (bp.left.contains(&e.u) && bp.right.contains(&e.v))
                    || (bp.left.contains(&e.v) && bp.right.contains(&e.u));
                if !crosses {
                    return Err(GraphError::EdgeInsideSide(id));
                }
            }
        }
        Ok(())
    }
}

/// A perfect/max b-matching question: pick an edge multiset meeting each
/// vertex `v` exactly (or at most) `capacities[v]` times, with `red_target`
/// red edges and, when set, `blue_target` blue edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMatchingInstance {
    pub graph: ColoredMultigraph,
    pub capacities: Vec<usize>,
    pub red_target: usize,
    pub blue_target: Option<usize>,
}

impl BMatchingInstance {
    /// Check every structural invariant and report all violations found.
    /// An empty list means the instance is well-formed (it may still be a
    /// "no" instance, of course).
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.graph.validate() {
            out.push(e.to_string());
        }
        if self.graph.directed {
            out.push("b-matching requires an undirected graph".to_string());
        }
        if self.capacities.len() != self.graph.vertex_count() {
            out.push(
                GraphError::CapacityLengthMismatch {
                    got: self.capacities.len(),
                    want: self.graph.vertex_count(),
                }
                .to_string(),
            );
            return out;
        }
        if let Some(bp) = &self.graph.bipartition {
            let sum = |side: &BTreeSet<usize>| -> u64 {
                side.iter().filter(|&&v| v < self.capacities.len()).map(|&v| self.capacities[v] as u64).sum()
            };
            let (l, r) = (sum(&bp.left), sum(&bp.right));
            if l != r {
                out.push(format!("capacity imbalance: left side sums to {l}, right to {r}"));
            }
        }
        if self.red_target > self.graph.color_count(EdgeColor::Red) {
            out.push(format!(
                "red target {} exceeds the {} red edges present",
                self.red_target,
                self.graph.color_count(EdgeColor::Red)
            ));
        }
        if let Some(bt) = self.blue_target {
            if bt > self.graph.color_count(EdgeColor::Blue) {
                out.push(format!(
                    "blue target {} exceeds the {} blue edges present",
                    bt,
                    self.graph.color_count(EdgeColor::Blue)
                ));
            }
        }
        out
    }

    /// Plain exact-perfect-matching instances are b-matching with b ≡ 1.
    pub fn from_exact_pm(graph: ColoredMultigraph, red_target: usize) -> Self {
        let n = graph.vertex_count();
        BMatchingInstance { graph, capacities: vec![1; n], red_target, blue_target: None }
    }
}

/// A chosen edge multiset, by edge id. Parallel edges have distinct ids, so
/// multiplicity is expressed by listing several parallel ids; a single id
/// may appear only once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchingCertificate {
    pub edge_ids: Vec<usize>,
}

impl MatchingCertificate {
    pub fn new(mut edge_ids: Vec<usize>) -> Self {
        edge_ids.sort_unstable();
        MatchingCertificate { edge_ids }
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub fn total_weight(&self, graph: &ColoredMultigraph) -> i64 {
        self.edge_ids.iter().map(|&id| graph.edges[id].weight).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Exactly b(v) incidences everywhere and color counts equal to targets.
    PerfectExact,
    /// At most b(v) incidences; colors unconstrained.
    MaxCardinality,
    /// At most b(v) incidences; colors unconstrained; weights are the
    /// caller's business (the verifier only checks feasibility).
    MaxWeight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertOutcome {
    Accept,
    Reject(String),
}

impl CertOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, CertOutcome::Accept)
    }
}

/// Replay a certificate against an instance.
///
/// Structural problems (unknown ids) are errors; constraint failures are
/// `Reject` with a reason.
pub fn verify_certificate(
    instance: &BMatchingInstance,
    cert: &MatchingCertificate,
    mode: VerifyMode,
) -> Result<CertOutcome, GraphError> {
    let graph = &instance.graph;
    let mut used = BTreeSet::new();
    for &id in &cert.edge_ids {
        if id >= graph.edge_count() {
            return Err(GraphError::UnknownEdgeId(id));
        }
        if !used.insert(id) {
            return Ok(CertOutcome::Reject(format!("edge id {id} chosen twice")));
        }
    }
    if instance.capacities.len() != graph.vertex_count() {
        return Err(GraphError::CapacityLengthMismatch {
            got: instance.capacities.len(),
            want: graph.vertex_count(),
        });
    }
    let mut incidence = vec![0usize; graph.vertex_count()];
    let mut red = 0usize;
    let mut blue = 0usize;
    for &id in &cert.edge_ids {
        let e = &graph.edges[id];
        incidence[e.u] += 1;
        incidence[e.v] += 1;
        match e.color {
            EdgeColor::Red => red += 1,
            EdgeColor::Blue => blue += 1,
            EdgeColor::Uncolored => {}
        }
    }
    for (v, &count) in incidence.iter().enumerate() {
        let b = instance.capacities[v];
        let bad = match mode {
            VerifyMode::PerfectExact => count != b,
            VerifyMode::MaxCardinality | VerifyMode::MaxWeight => count > b,
        };
        if bad {
            return Ok(CertOutcome::Reject(format!(
                "vertex {} has {count} incidences against capacity {b}",
                graph.vertices[v]
            )));
        }
    }
    if mode == VerifyMode::PerfectExact {
        if red != instance.red_target {
            return Ok(CertOutcome::Reject(format!(
                "red count {red} does not meet target {}",
                instance.red_target
            )));
        }
        if let Some(bt) = instance.blue_target {
            if blue != bt {
                return Ok(CertOutcome::Reject(format!(
                    "blue count {blue} does not meet target {bt}"
                )));
            }
        }
    }
    Ok(CertOutcome::Accept)
}

/// Vertex-disjoint-cycles question on a digraph: is there a set of disjoint
/// cycles whose lengths sum to exactly `target_sum`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSumInstance {
    pub digraph: ColoredMultigraph,
    pub target_sum: usize,
}

impl CycleSumInstance {
    pub fn new(digraph: ColoredMultigraph, target_sum: usize) -> Result<Self, GraphError> {
        if !digraph.directed {
            return Err(GraphError::ExpectedDirected);
        }
        digraph.validate()?;
        Ok(CycleSumInstance { digraph, target_sum })
    }
}
