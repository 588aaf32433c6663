//! Line-oriented text format for control instances.
//!
//! ```text
//! # comment lines start with '#'
//! candidates: a,b,c,p
//! rule: firstlast
//! preferred: p
//! budget: 2
//! action: add
//! exact: true
//! R: a>p>c>b
//! U: b>c>p>a
//! ```
//!
//! Header lines appear in that order; `R:`/`U:` vote lines follow in any
//! interleaving. Candidate ids are free-form UTF-8 except for whitespace
//! and the delimiter characters `,`, `>`, `:`, `#`.

use super::{
    ControlAction, ControlInstance, Election, ScoringRule, Vote,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

fn check_id(id: &str, line: usize) -> Result<(), ParseError> {
    if id.is_empty() {
        return err(line, "empty candidate id");
    }
    if id.chars().any(|c| c.is_whitespace() || matches!(c, ',' | '>' | ':' | '#')) {
        return err(line, format!("candidate id {id:?} contains a delimiter character"));
    }
    Ok(())
}

/// Meaningful lines with their 1-based line numbers.
fn meaningful(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn expect_field<'a>(
    item: Option<(usize, &'a str)>,
    key: &str,
    last_line: usize,
) -> Result<(usize, &'a str), ParseError> {
    let (line, text) = match item {
        Some(x) => x,
        None => return err(last_line, format!("missing {key}: line")),
    };
    match text.strip_prefix(key).and_then(|rest| rest.strip_prefix(':')) {
        Some(value) => Ok((line, value.trim())),
        None => err(line, format!("expected {key}: line, found {text:?}")),
    }
}

pub fn parse_control_instance(input: &str) -> Result<ControlInstance, ParseError> {
    let mut lines = meaningful(input);
    let last = input.lines().count();

    let (line, value) = expect_field(lines.next(), "candidates", last)?;
    let candidates: Vec<String> = value
        .split(',')
        .map(|c| c.trim().to_string())
        .collect();
    for c in &candidates {
        check_id(c, line)?;
    }

    let (line, value) = expect_field(lines.next(), "rule", last)?;
    let rule = match value {
        "firstlast" => ScoringRule::FirstLast,
        "2approval" => ScoringRule::TwoApproval,
        other => return err(line, format!("unknown rule {other:?}")),
    };

    let (_, preferred) = expect_field(lines.next(), "preferred", last)?;
    let preferred = preferred.to_string();

    let (line, value) = expect_field(lines.next(), "budget", last)?;
    let budget: usize = match value.parse() {
        Ok(b) => b,
        Err(_) => return err(line, format!("budget must be a nonnegative integer, found {value:?}")),
    };

    let (line, value) = expect_field(lines.next(), "action", last)?;
    let action = match value {
        "add" => ControlAction::AddVoters,
        "replace" => ControlAction::ReplaceVoters,
        other => return err(line, format!("unknown action {other:?}")),
    };

    let (line, value) = expect_field(lines.next(), "exact", last)?;
    let exact = match value {
        "true" => true,
        "false" => false,
        other => return err(line, format!("exact must be true or false, found {other:?}")),
    };

    let mut registered = Vec::new();
    let mut unregistered = Vec::new();
    for (line, text) in lines {
        let (side, rest) = if let Some(rest) = text.strip_prefix("R:") {
            (&mut registered, rest)
        } else if let Some(rest) = text.strip_prefix("U:") {
            (&mut unregistered, rest)
        } else {
            return err(line, format!("expected R: or U: vote line, found {text:?}"));
        };
        let ranking: Vec<String> = rest
            .trim()
            .split('>')
            .map(|c| c.trim().to_string())
            .collect();
        for c in &ranking {
            check_id(c, line)?;
        }
        if ranking.len() != candidates.len() {
            return err(
                line,
                format!(
                    "vote ranks {} candidates, expected {}",
                    ranking.len(),
                    candidates.len()
                ),
            );
        }
        side.push(Vote::new(ranking));
    }

    let instance = ControlInstance {
        election: Election { candidates, registered, unregistered },
        rule,
        preferred,
        budget,
        action,
        exact,
    };
    if let Err(e) = instance.validate() {
        return err(0, e.to_string());
    }
    Ok(instance)
}

pub fn render_control_instance(instance: &ControlInstance) -> String {
    let mut out = String::new();
    out.push_str("candidates: ");
    out.push_str(&instance.election.candidates.join(","));
    out.push('\n');
    out.push_str("rule: ");
    out.push_str(instance.rule.token());
    out.push('\n');
    out.push_str("preferred: ");
    out.push_str(&instance.preferred);
    out.push('\n');
    out.push_str(&format!("budget: {}\n", instance.budget));
    out.push_str(match instance.action {
        ControlAction::AddVoters => "action: add\n",
        ControlAction::ReplaceVoters => "action: replace\n",
    });
    out.push_str(if instance.exact { "exact: true\n" } else { "exact: false\n" });
    for v in &instance.election.registered {
        out.push_str("R: ");
        out.push_str(&v.ranking.join(">"));
        out.push('\n');
    }
    for v in &instance.election.unregistered {
        out.push_str("U: ");
        out.push_str(&v.ranking.join(">"));
        out.push('\n');
    }
    out
}
