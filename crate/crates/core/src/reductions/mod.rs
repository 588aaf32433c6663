//! Instance transformers between voter control, cycle sums, and matchings.
//!
//! Each operation rewrites one problem into another while preserving the
//! yes/no answer, and where the construction admits it, a witness mapper
//! that translates a certificate of the target instance back into one for
//! the source. Several transformers can already settle the answer while
//! normalizing (for example when an exact budget exceeds the voter pool);
//! those return [`ReductionOutcome::Decided`] instead of a target.
//!
//! The operations fall into four groups:
//!
//! * cycle sums: vertex-disjoint to edge-disjoint splitting, and from
//!   edge-disjoint cycle sums into exact voter addition (`cycles`);
//! * first-last control: normalization of exact addition, addition into
//!   exact perfect b-matching, addition into replacement, and exact
//!   replacement into two-colored b-matching (`first_last`);
//! * 2-approval control: exact replacement into red-blue b-matching,
//!   exact addition into capacitated matching, and budgeted replacement
//!   into weighted b-matching (`two_approval`, `epm`);
//! * matching gadgets and budget sweeps (`gadgets`, `sweeps`).

mod cycles;
mod epm;
mod first_last;
mod gadgets;
mod sweeps;
mod two_approval;

pub use cycles::{ecs_to_edge_disjoint, edge_disjoint_ecs_to_fl_ccav_exact};
pub use epm::{
    epm_to_restricted_epm, restricted_epm_to_twoapp_ccrv_exact, BalancedRedMatching,
    RedMatchingControl,
};
pub use first_last::{
    fl_ccav_exact_preprocess, fl_ccav_exact_to_epbbm, fl_ccav_exact_to_fl_ccrv,
    fl_ccrv_exact_to_red_blue_bipartite, AddMatching, NormalizedAdd, ReplaceControl,
    ReplaceMatching,
};
pub use gadgets::{b_matching_to_matching, red_blue_to_red, ExpandedMatching, PathExpanded};
pub use sweeps::{ccav_to_ccav_exact_sweep, ccrv_to_ccrv_exact_sweep};
pub use two_approval::{
    twoapp_ccav_exact_to_maxcard_b_matching, twoapp_ccrv_exact_to_red_blue_b_matching,
    twoapp_ccrv_to_maxweight_b_matching, ApprovalAddMatching, ApprovalReplaceMatching,
    ApprovalReplaceWeighted,
};

use crate::election::{ControlAction, ControlInstance, ScoringRule};
use std::collections::BTreeSet;
use thiserror::Error;

/// An answer discovered while constructing a reduction, short-circuiting
/// the target instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub yes: bool,
    pub reason: String,
    /// For yes decisions reached constructively: the voter indices
    /// (removed registered, added unregistered) realizing the win in the
    /// source instance.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// Result of a reduction: either the answer fell out during construction,
/// or a target instance (with witness plumbing) was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionOutcome<T> {
    Decided(Decision),
    Reduced(T),
}

/// Outcome of normalizing an exact-addition question; the reduced form
/// carries an instance whose remaining unregistered voters all score the
/// preferred candidate zero.
pub type PreprocessOutcome = ReductionOutcome<NormalizedAdd>;

impl<T> ReductionOutcome<T> {
    pub fn decided_yes(reason: impl Into<String>) -> Self {
        ReductionOutcome::Decided(Decision { yes: true, reason: reason.into(), witness: None })
    }

    /// A yes decision together with the (removed, added) voter choice that
    /// proves it.
    pub fn decided_yes_witnessed(
        reason: impl Into<String>,
        removed: Vec<usize>,
        added: Vec<usize>,
    ) -> Self {
        ReductionOutcome::Decided(Decision {
            yes: true,
            reason: reason.into(),
            witness: Some((removed, added)),
        })
    }

    pub fn decided_no(reason: impl Into<String>) -> Self {
        ReductionOutcome::Decided(Decision { yes: false, reason: reason.into(), witness: None })
    }

    pub fn decision(&self) -> Option<&Decision> {
        match self {
            ReductionOutcome::Decided(d) => Some(d),
            ReductionOutcome::Reduced(_) => None,
        }
    }

    pub fn reduced(&self) -> Option<&T> {
        match self {
            ReductionOutcome::Decided(_) => None,
            ReductionOutcome::Reduced(t) => Some(t),
        }
    }

    /// Unwrap the reduced form; panics on a decided outcome. Test helper.
    pub fn expect_reduced(self, context: &str) -> T {
        match self {
            ReductionOutcome::Reduced(t) => t,
            ReductionOutcome::Decided(d) => {
                panic!("{context}: expected a target instance, got decision {d:?}")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("instance has the wrong shape for this reduction: {0}")]
    WrongShape(String),
    #[error("invalid input instance: {0}")]
    InvalidInstance(String),
    #[error("red edge count {red} is not half the vertex count {vertices}")]
    UnbalancedRed { red: usize, vertices: usize },
}

/// Reject instances a reduction was not built for: invalid elections are
/// reported as such, and a rule/action/exactness mismatch as a wrong shape.
pub(crate) fn require_shape(
    src: &ControlInstance,
    rule: ScoringRule,
    action: ControlAction,
    exact: bool,
) -> Result<(), ReductionError> {
    src.validate().map_err(|e| ReductionError::InvalidInstance(e.to_string()))?;
    if src.rule != rule || src.action != action || src.exact != exact {
        return Err(ReductionError::WrongShape(format!(
            "expected rule {:?} action {:?} exact {}, got rule {:?} action {:?} exact {}",
            rule, action, exact, src.rule, src.action, src.exact
        )));
    }
    Ok(())
}

/// Pick a name not present in `taken`, starting from `base` and appending
/// primes until fresh. The chosen name is inserted into `taken`.
pub(crate) fn fresh_name(taken: &mut BTreeSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_names_dodge_collisions() {
        let mut taken: BTreeSet<String> =
            ["x", "x'"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_name(&mut taken, "y"), "y");
        assert_eq!(fresh_name(&mut taken, "x"), "x''");
        assert_eq!(fresh_name(&mut taken, "x"), "x'''");
    }

    #[test]
    fn outcome_accessors_distinguish_decided_from_reduced() {
        let d: ReductionOutcome<()> = ReductionOutcome::decided_no("pool too small");
        assert!(d.decision().is_some());
        assert!(!d.decision().unwrap().yes);
        assert!(d.reduced().is_none());
        let r: ReductionOutcome<u32> = ReductionOutcome::Reduced(7);
        assert_eq!(r.reduced(), Some(&7));
        assert_eq!(r.expect_reduced("test"), 7);
    }
}
