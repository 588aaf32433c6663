//! Elections, scoring, and voter-control instances.
//!
//! Votes are strict rankings over a fixed candidate set. Only the two
//! scoring rules used by the solvers are modeled:
//!
//! * [`ScoringRule::FirstLast`]: +1 for a first place, −1 for a last place
//!   (so every vote contributes 0 in total);
//! * [`ScoringRule::TwoApproval`]: +1 for each of the two top places.
//!
//! The winner model is nonunique: the preferred candidate wins exactly when
//! it is in the argmax set.

mod text;

pub use text::{parse_control_instance, render_control_instance, ParseError};

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type CandidateId = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoringRule {
    FirstLast,
    TwoApproval,
}

impl ScoringRule {
    pub fn token(self) -> &'static str {
        match self {
            ScoringRule::FirstLast => "firstlast",
            ScoringRule::TwoApproval => "2approval",
        }
    }
}

/// A strict ranking of the full candidate set, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vote {
    pub ranking: Vec<CandidateId>,
}

impl Vote {
    pub fn new(ranking: Vec<CandidateId>) -> Self {
        Vote { ranking }
    }

    pub fn first(&self) -> &CandidateId {
        &self.ranking[0]
    }

    pub fn last(&self) -> &CandidateId {
        &self.ranking[self.ranking.len() - 1]
    }

    /// The two top-ranked candidates (2-approval's approved set).
    pub fn top_two(&self) -> (&CandidateId, &CandidateId) {
        (&self.ranking[0], &self.ranking[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    pub candidates: Vec<CandidateId>,
    pub registered: Vec<Vote>,
    pub unregistered: Vec<Vote>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlAction {
    AddVoters,
    ReplaceVoters,
}

/// One voter-control question: can `preferred` be made a winner under
/// `rule` by applying `action` within `budget` (exactly `budget` when
/// `exact` is set)?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlInstance {
    pub election: Election,
    pub rule: ScoringRule,
    pub preferred: CandidateId,
    pub budget: usize,
    pub action: ControlAction,
    pub exact: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElectionError {
    #[error("candidate set must have at least 2 distinct candidates")]
    TooFewCandidates,
    #[error("duplicate candidate id {0:?}")]
    DuplicateCandidate(CandidateId),
    #[error("vote {index} is not a permutation of the candidate set")]
    MalformedVote { index: usize },
    #[error("preferred candidate {0:?} is not in the candidate set")]
    UnknownPreferred(CandidateId),
    #[error("voter index {index} out of range for {side}")]
    VoterIndexOutOfRange { side: &'static str, index: usize },
    #[error("duplicate voter index {0} in selection")]
    DuplicateVoterIndex(usize),
    #[error("selection sizes violate the {0} budget")]
    BudgetViolation(&'static str),
    #[error("add-voters control cannot remove registered voters")]
    RemovalUnderAdd,
}

/// Integer scores per candidate, ordered by candidate id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScoreVector(pub BTreeMap<CandidateId, i64>);

impl ScoreVector {
    pub fn get(&self, c: &str) -> i64 {
        self.0.get(c).copied().unwrap_or(0)
    }

    /// Pointwise sum; the result ranges over the union of candidate sets.
    pub fn add(&self, other: &ScoreVector) -> ScoreVector {
        let mut out = self.0.clone();
        for (c, s) in &other.0 {
            *out.entry(c.clone()).or_insert(0) += s;
        }
        ScoreVector(out)
    }

    pub fn total(&self) -> i64 {
        self.0.values().sum()
    }
}

impl Election {
    pub fn new(
        candidates: Vec<CandidateId>,
        registered: Vec<Vote>,
        unregistered: Vec<Vote>,
    ) -> Result<Self, ElectionError> {
        let e = Election { candidates, registered, unregistered };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<(), ElectionError> {
        if self.candidates.len() < 2 {
            return Err(ElectionError::TooFewCandidates);
        }
        let mut seen = BTreeSet::new();
        for c in &self.candidates {
            if !seen.insert(c) {
                return Err(ElectionError::DuplicateCandidate(c.clone()));
            }
        }
        for (index, vote) in self.registered.iter().chain(&self.unregistered).enumerate() {
            if vote.ranking.len() != self.candidates.len()
                || vote.ranking.iter().collect::<BTreeSet<_>>() != seen
            {
                return Err(ElectionError::MalformedVote { index });
            }
        }
        Ok(())
    }

    pub fn registered_scores(&self, rule: ScoringRule) -> ScoreVector {
        score(&self.candidates, &self.registered, rule)
            .expect("registered votes validated against the candidate set")
    }
}

impl ControlInstance {
    pub fn validate(&self) -> Result<(), ElectionError> {
        self.election.validate()?;
        if !self.election.candidates.contains(&self.preferred) {
            return Err(ElectionError::UnknownPreferred(self.preferred.clone()));
        }
        Ok(())
    }
}

/// Score a list of votes over `candidates`.
///
/// Every candidate appears in the result, scored 0 when no vote touches it.
pub fn score(
    candidates: &[CandidateId],
    votes: &[Vote],
    rule: ScoringRule,
) -> Result<ScoreVector, ElectionError> {
    if candidates.len() < 2 {
        return Err(ElectionError::TooFewCandidates);
    }
    let set: BTreeSet<&CandidateId> = candidates.iter().collect();
    if set.len() != candidates.len() {
        let dup = candidates
            .iter()
            .find(|c| candidates.iter().filter(|d| d == c).count() > 1)
            .unwrap();
        return Err(ElectionError::DuplicateCandidate(dup.clone()));
    }
    let mut scores: BTreeMap<CandidateId, i64> =
        candidates.iter().map(|c| (c.clone(), 0)).collect();
    for (index, vote) in votes.iter().enumerate() {
        if vote.ranking.len() != candidates.len()
            || vote.ranking.iter().collect::<BTreeSet<_>>() != set
        {
            return Err(ElectionError::MalformedVote { index });
        }
        match rule {
            ScoringRule::FirstLast => {
                *scores.get_mut(vote.first()).unwrap() += 1;
                *scores.get_mut(vote.last()).unwrap() -= 1;
            }
            ScoringRule::TwoApproval => {
                let (a, b) = vote.top_two();
                *scores.get_mut(a).unwrap() += 1;
                *scores.get_mut(b).unwrap() += 1;
            }
        }
    }
    Ok(ScoreVector(scores))
}

/// The argmax set of a score vector.
pub fn winners(scores: &ScoreVector) -> BTreeSet<CandidateId> {
    let max = scores.0.values().max().copied();
    match max {
        None => BTreeSet::new(),
        Some(m) => scores
            .0
            .iter()
            .filter(|(_, s)| **s == m)
            .map(|(c, _)| c.clone())
            .collect(),
    }
}

/// Apply a control action: remove `chosen_out` (registered indices) and add
/// `chosen_in` (unregistered indices). Checks the instance's budget and
/// action constraints, then returns the modified election.
pub fn apply_control(
    instance: &ControlInstance,
    chosen_out: &[usize],
    chosen_in: &[usize],
) -> Result<Election, ElectionError> {
    let out: BTreeSet<usize> = chosen_out.iter().copied().collect();
    let inn: BTreeSet<usize> = chosen_in.iter().copied().collect();
    if out.len() != chosen_out.len() {
        return Err(ElectionError::DuplicateVoterIndex(
            first_duplicate(chosen_out).unwrap(),
        ));
    }
    if inn.len() != chosen_in.len() {
        return Err(ElectionError::DuplicateVoterIndex(
            first_duplicate(chosen_in).unwrap(),
        ));
    }
    for &i in &out {
        if i >= instance.election.registered.len() {
            return Err(ElectionError::VoterIndexOutOfRange { side: "registered", index: i });
        }
    }
    for &i in &inn {
        if i >= instance.election.unregistered.len() {
            return Err(ElectionError::VoterIndexOutOfRange { side: "unregistered", index: i });
        }
    }
    match instance.action {
        ControlAction::AddVoters => {
            if !out.is_empty() {
                return Err(ElectionError::RemovalUnderAdd);
            }
            let ok = if instance.exact {
                inn.len() == instance.budget
            } else {
                inn.len() <= instance.budget
            };
            if !ok {
                return Err(ElectionError::BudgetViolation("add"));
            }
        }
        ControlAction::ReplaceVoters => {
            let ok = out.len() == inn.len()
                && if instance.exact {
                    inn.len() == instance.budget
                } else {
                    inn.len() <= instance.budget
                };
            if !ok {
                return Err(ElectionError::BudgetViolation("replace"));
            }
        }
    }
    let registered: Vec<Vote> = instance
        .election
        .registered
        .iter()
        .enumerate()
        .filter(|(i, _)| !out.contains(i))
        .map(|(_, v)| v.clone())
        .chain(inn.iter().map(|&i| instance.election.unregistered[i].clone()))
        .collect();
    let unregistered: Vec<Vote> = instance
        .election
        .unregistered
        .iter()
        .enumerate()
        .filter(|(i, _)| !inn.contains(i))
        .map(|(_, v)| v.clone())
        .collect();
    Ok(Election {
        candidates: instance.election.candidates.clone(),
        registered,
        unregistered,
    })
}

fn first_duplicate(xs: &[usize]) -> Option<usize> {
    let mut seen = BTreeSet::new();
    xs.iter().copied().find(|x| !seen.insert(*x))
}

/// Build a vote `first > (middle, sorted) > last` over `candidates`.
///
/// Used by reductions that only care about the extremes of a first-last
/// vote; the middle is sorted for determinism.
pub fn extremes_vote(
    candidates: &[CandidateId],
    first: &str,
    last: &str,
) -> Vote {
    assert_ne!(first, last, "a vote needs distinct first and last");
    let mut middle: Vec<CandidateId> = candidates
        .iter()
        .filter(|c| c.as_str() != first && c.as_str() != last)
        .cloned()
        .collect();
    middle.sort();
    let mut ranking = Vec::with_capacity(candidates.len());
    ranking.push(first.to_string());
    ranking.extend(middle);
    ranking.push(last.to_string());
    Vote { ranking }
}

/// Build a vote approving `{a, b}` (top two) over `candidates`, the rest
/// sorted below.
pub fn approval_vote(candidates: &[CandidateId], a: &str, b: &str) -> Vote {
    assert_ne!(a, b, "a 2-approval vote approves two distinct candidates");
    let mut rest: Vec<CandidateId> = candidates
        .iter()
        .filter(|c| c.as_str() != a && c.as_str() != b)
        .cloned()
        .collect();
    rest.sort();
    let mut ranking = vec![a.to_string(), b.to_string()];
    ranking.extend(rest);
    Vote { ranking }
}
