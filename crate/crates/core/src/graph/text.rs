//! Line-oriented text format for graphs and matching/cycle instances.
//!
//! ```text
//! # comment lines start with '#'
//! vertices: a,a',b,b',x
//! left: a,b
//! right: a',b',x
//! b: a=5,a'=3,x=4
//! k: 2
//! l: 1
//! a b' red
//! a a' uncolored 3
//! ```
//!
//! After `vertices:`, the optional header lines appear in the order
//! `left:`, `right:`, `directed`, `b:`, `k:`, `l:`; then one edge per line
//! as `u v color [weight]`. Vertices missing from `b:` get capacity 0.

use super::{
    BMatchingInstance, Bipartition, ColoredMultigraph, CycleSumInstance, EdgeColor, GraphError,
};
use std::collections::BTreeMap;
use std::iter::Peekable;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct GraphParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, GraphParseError> {
    Err(GraphParseError { line, msg: msg.into() })
}

/// Everything a graph file can carry; the problem-specific views below pick
/// out what they need and complain about what's missing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: ColoredMultigraph,
    pub capacities: Option<Vec<usize>>,
    pub red_target: Option<usize>,
    pub blue_target: Option<usize>,
}

impl GraphFile {
    pub fn to_b_matching(&self) -> Result<BMatchingInstance, GraphError> {
        if self.graph.directed {
            return Err(GraphError::ExpectedUndirected);
        }
        let capacities = self.capacities.clone().ok_or(GraphError::MissingField("b"))?;
        let red_target = self.red_target.ok_or(GraphError::MissingField("k"))?;
        Ok(BMatchingInstance {
            graph: self.graph.clone(),
            capacities,
            red_target,
            blue_target: self.blue_target,
        })
    }

    pub fn to_cycle_sum(&self) -> Result<CycleSumInstance, GraphError> {
        let target_sum = self.red_target.ok_or(GraphError::MissingField("k"))?;
        CycleSumInstance::new(self.graph.clone(), target_sum)
    }

    pub fn to_exact_pm(&self) -> Result<(ColoredMultigraph, usize), GraphError> {
        if self.graph.directed {
            return Err(GraphError::ExpectedUndirected);
        }
        let k = self.red_target.ok_or(GraphError::MissingField("k"))?;
        Ok((self.graph.clone(), k))
    }
}

fn check_name(name: &str, line: usize) -> Result<(), GraphParseError> {
    if name.is_empty() {
        return err(line, "empty vertex name");
    }
    if name.chars().any(|c| c.is_whitespace() || matches!(c, ',' | ':' | '#' | '=')) {
        return err(line, format!("vertex name {name:?} contains a delimiter character"));
    }
    Ok(())
}

fn name_list(
    value: &str,
    line: usize,
    index: &BTreeMap<String, usize>,
) -> Result<Vec<usize>, GraphParseError> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|raw| {
            let name = raw.trim();
            index
                .get(name)
                .copied()
                .ok_or_else(|| GraphParseError { line, msg: format!("unknown vertex {name:?}") })
        })
        .collect()
}

/// Take the next meaningful line if it starts with `key:`, returning the
/// trimmed value.
fn take_field<'a, I: Iterator<Item = (usize, &'a str)>>(
    lines: &mut Peekable<I>,
    key: &str,
) -> Option<(usize, &'a str)> {
    let (_, text) = lines.peek()?;
    let value = text.strip_prefix(key)?.strip_prefix(':')?;
    let (line, _) = lines.next().unwrap();
    Some((line, value.trim()))
}

fn parse_count(value: &str, line: usize, what: &str) -> Result<usize, GraphParseError> {
    value
        .parse()
        .map_err(|_| GraphParseError { line, msg: format!("{what} must be a nonnegative integer, found {value:?}") })
}

pub fn parse_graph_file(input: &str) -> Result<GraphFile, GraphParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let last = input.lines().count();

    let (vline, vertices_raw) = match take_field(&mut lines, "vertices") {
        Some(x) => x,
        None => return err(lines.peek().map_or(last, |&(l, _)| l), "expected vertices: line first"),
    };
    let vertices: Vec<String> = if vertices_raw.is_empty() {
        Vec::new()
    } else {
        vertices_raw.split(',').map(|v| v.trim().to_string()).collect()
    };
    let mut index = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        check_name(v, vline)?;
        if index.insert(v.clone(), i).is_some() {
            return err(vline, format!("duplicate vertex {v:?}"));
        }
    }

    let left = take_field(&mut lines, "left");
    let right = take_field(&mut lines, "right");
    let bipartition = match (left, right) {
        (Some((lline, lval)), Some((rline, rval))) => Some(Bipartition {
            left: name_list(lval, lline, &index)?.into_iter().collect(),
            right: name_list(rval, rline, &index)?.into_iter().collect(),
        }),
        (None, None) => None,
        (Some((line, _)), None) => return err(line, "left: given without right:"),
        (None, Some((line, _))) => return err(line, "right: given without left:"),
    };

    let directed = match lines.peek() {
        Some(&(_, "directed")) => {
            lines.next();
            true
        }
        _ => false,
    };

    let capacities = match take_field(&mut lines, "b") {
        None => None,
        Some((bline, value)) => {
            let mut caps = vec![0usize; vertices.len()];
            if !value.is_empty() {
                for entry in value.split(',') {
                    let (name, amount) = entry
                        .split_once('=')
                        .ok_or_else(|| GraphParseError {
                            line: bline,
                            msg: format!("capacity entry {entry:?} is not name=value"),
                        })?;
                    let v = *index.get(name.trim()).ok_or_else(|| GraphParseError {
                        line: bline,
                        msg: format!("unknown vertex {:?} in b:", name.trim()),
                    })?;
                    caps[v] = parse_count(amount.trim(), bline, "capacity")?;
                }
            }
            Some(caps)
        }
    };

    let red_target = match take_field(&mut lines, "k") {
        None => None,
        Some((kline, value)) => Some(parse_count(value, kline, "k")?),
    };
    let blue_target = match take_field(&mut lines, "l") {
        None => None,
        Some((lline, value)) => Some(parse_count(value, lline, "l")?),
    };

    let mut graph = ColoredMultigraph { vertices, edges: Vec::new(), bipartition, directed };
    for (line, text) in lines {
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 3 && parts.len() != 4 {
            return err(line, format!("expected `u v color [weight]`, found {text:?}"));
        }
        let u = *index
            .get(parts[0])
            .ok_or_else(|| GraphParseError { line, msg: format!("unknown vertex {:?}", parts[0]) })?;
        let v = *index
            .get(parts[1])
            .ok_or_else(|| GraphParseError { line, msg: format!("unknown vertex {:?}", parts[1]) })?;
        let color = match parts[2] {
            "red" => EdgeColor::Red,
            "blue" => EdgeColor::Blue,
            "uncolored" => EdgeColor::Uncolored,
            other => return err(line, format!("unknown color {other:?}")),
        };
        let weight: i64 = match parts.get(3) {
            None => 0,
            Some(w) => w
                .parse()
                .map_err(|_| GraphParseError { line, msg: format!("weight {w:?} is not an integer") })?,
        };
        graph.add_edge(u, v, color, weight);
    }

    if let Err(e) = graph.validate() {
        return err(0, e.to_string());
    }
    Ok(GraphFile { graph, capacities, red_target, blue_target })
}

pub fn render_graph_file(file: &GraphFile) -> String {
    let g = &file.graph;
    let mut out = String::new();
    out.push_str("vertices: ");
    out.push_str(&g.vertices.join(","));
    out.push('\n');
    if let Some(bp) = &g.bipartition {
        let side = |s: &std::collections::BTreeSet<usize>| {
            s.iter().map(|&v| g.vertices[v].as_str()).collect::<Vec<_>>().join(",")
        };
        out.push_str(&format!("left: {}\n", side(&bp.left)));
        out.push_str(&format!("right: {}\n", side(&bp.right)));
    }
    if g.directed {
        out.push_str("directed\n");
    }
    if let Some(caps) = &file.capacities {
        let entries: Vec<String> = g
            .vertices
            .iter()
            .zip(caps)
            .map(|(v, b)| format!("{v}={b}"))
            .collect();
        out.push_str(&format!("b: {}\n", entries.join(",")));
    }
    if let Some(k) = file.red_target {
        out.push_str(&format!("k: {k}\n"));
    }
    if let Some(l) = file.blue_target {
        out.push_str(&format!("l: {l}\n"));
    }
    for e in &g.edges {
        out.push_str(&g.vertices[e.u]);
        out.push(' ');
        out.push_str(&g.vertices[e.v]);
        out.push(' ');
        out.push_str(e.color.token());
        if e.weight != 0 {
            out.push_str(&format!(" {}", e.weight));
        }
        out.push('\n');
    }
    out
}

pub fn render_b_matching(instance: &BMatchingInstance) -> String {
    render_graph_file(&GraphFile {
        graph: instance.graph.clone(),
        capacities: Some(instance.capacities.clone()),
        red_target: Some(instance.red_target),
        blue_target: instance.blue_target,
    })
}

pub fn render_cycle_sum(instance: &CycleSumInstance) -> String {
    render_graph_file(&GraphFile {
        graph: instance.digraph.clone(),
        capacities: None,
        red_target: Some(instance.target_sum),
        blue_target: None,
    })
}

pub fn render_exact_pm(graph: &ColoredMultigraph, red_target: usize) -> String {
    render_graph_file(&GraphFile {
        graph: graph.clone(),
        capacities: None,
        red_target: Some(red_target),
        blue_target: None,
    })
}
