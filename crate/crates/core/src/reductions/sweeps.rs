//! Budget-to-exact sweeps.
//!
//! A budget question ("change at most k voters") is the disjunction of the
//! exact questions for every count up to k, so each sweep emits k + 1
//! exact instances that differ only in the demanded count. The sweeps are
//! rule-agnostic: nothing about the disjunction depends on how votes are
//! scored.

use crate::election::{ControlAction, ControlInstance};
use crate::reductions::ReductionError;

fn sweep(src: &ControlInstance, action: ControlAction) -> Result<Vec<ControlInstance>, ReductionError> {
    src.validate().map_err(|e| ReductionError::InvalidInstance(e.to_string()))?;
    if src.action != action {
        return Err(ReductionError::WrongShape(format!(
            "expected action {:?}, got {:?}",
            action, src.action
        )));
    }
    if src.exact {
        return Err(ReductionError::WrongShape(
            "the instance already demands an exact count; sweeping it would change its meaning"
                .into(),
        ));
    }
    Ok((0..=src.budget)
        .map(|count| ControlInstance { budget: count, exact: true, ..src.clone() })
        .collect())
}

/// Split a replace-at-most-k question into k + 1 replace-exactly questions;
/// the source is a yes iff at least one output is.
pub fn ccrv_to_ccrv_exact_sweep(
    src: &ControlInstance,
) -> Result<Vec<ControlInstance>, ReductionError> {
    sweep(src, ControlAction::ReplaceVoters)
}

/// Split an add-at-most-k question into k + 1 add-exactly questions; the
/// source is a yes iff at least one output is.
pub fn ccav_to_ccav_exact_sweep(
    src: &ControlInstance,
) -> Result<Vec<ControlInstance>, ReductionError> {
    sweep(src, ControlAction::AddVoters)
}
