//! Model-enumeration route: the possibility distribution of K_d, the goal
//! satisfaction profile of G, and the pessimistic/optimistic utilities
//! computed directly over all interpretations.

use crate::bases::{Decision, GoalBase, Instance, KnowledgeBase, WeightedFormula};
use crate::error::{Error, Result};
use crate::exec;
use crate::logic::{evaluate, Interpretation};
use crate::sat::DEFAULT_ENUM_BOUND;
use crate::scale::{order_reverse, ScaleValue};

/// min over weighted entries of max(v_omega(phi), n(weight)); 1 when empty.
fn weighted_min(omega: &Interpretation, entries: &[WeightedFormula]) -> ScaleValue {
    entries
        .iter()
        .map(|e| {
            if evaluate(omega, &e.formula) {
                ScaleValue::one()
            } else {
                order_reverse(e.weight)
            }
        })
        .min()
        .unwrap_or_else(ScaleValue::one)
}

/// The possibility degree pi_{K_d}(omega) of a world under the augmented
/// knowledge base.
pub fn possibility(omega: &Interpretation, kb_d: &KnowledgeBase) -> ScaleValue {
    weighted_min(omega, kb_d.entries())
}

/// The qualitative utility mu_G(omega) of a world under the prioritized goals.
pub fn utility(omega: &Interpretation, goals: &GoalBase) -> ScaleValue {
    weighted_min(omega, goals.entries())
}

/// A tabulated distribution over the instance vocabulary, in canonical
/// interpretation order.
#[derive(Clone, PartialEq, Debug)]
pub struct DistributionTable {
    entries: Vec<(Interpretation, ScaleValue)>,
}

impl DistributionTable {
    /// Tabulates pi_{K_d} for a decision.
    pub fn possibility_table(inst: &Instance, d: &Decision) -> Result<Self> {
        let kb_d = inst.kb.with_decision(d);
        Self::tabulate(inst, move |omega| possibility(omega, &kb_d))
    }

    /// Tabulates mu_G.
    pub fn utility_table(inst: &Instance) -> Result<Self> {
        Self::tabulate(inst, |omega| utility(omega, &inst.goals))
    }

    fn tabulate(inst: &Instance, f: impl Fn(&Interpretation) -> ScaleValue + Sync) -> Result<Self> {
        let n = check_enum_bound(inst)?;
        let entries = exec::map_collect(1u64 << n, |idx| {
            let omega = Interpretation::from_index(&inst.vocab, idx);
            let v = f(&omega);
            (omega, v)
        });
        Ok(DistributionTable { entries })
    }

    pub fn get(&self, omega: &Interpretation) -> Option<ScaleValue> {
        self.entries.iter().find(|(o, _)| o == omega).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Interpretation, ScaleValue)> {
        self.entries.iter().map(|(o, v)| (o, *v))
    }

    /// Some world reaches degree 1.
    pub fn is_normalized(&self) -> bool {
        self.entries.iter().any(|(_, v)| v.is_one())
    }
}

fn check_enum_bound(inst: &Instance) -> Result<usize> {
    let n = inst.vocab.len();
    if n > DEFAULT_ENUM_BOUND {
        return Err(Error::BackendLimit(format!(
            "{n} vocabulary atoms exceed the enumeration bound of {DEFAULT_ENUM_BOUND}"
        )));
    }
    Ok(n)
}

fn check_preconditions(inst: &Instance, d: &Decision) -> Result<usize> {
    if !inst.kb_consistent {
        return Err(Error::NotNormalized("K* is inconsistent".to_string()));
    }
    if !inst.goals_consistent {
        return Err(Error::NotNormalized("G* is inconsistent".to_string()));
    }
    if !inst.feasible(d)? {
        return Err(Error::InfeasibleDecision(d.to_string()));
    }
    check_enum_bound(inst)
}

/// Pessimistic utility: min over all worlds of max(mu_G, n(pi_{K_d})).
pub fn pessimistic_semantic(inst: &Instance, d: &Decision) -> Result<ScaleValue> {
    let n = check_preconditions(inst, d)?;
    let kb_d = inst.kb.with_decision(d);
    let value = exec::map_reduce(
        1u64 << n,
        |idx| {
            let omega = Interpretation::from_index(&inst.vocab, idx);
            let mu = utility(&omega, &inst.goals);
            let pi = possibility(&omega, &kb_d);
            mu.max(order_reverse(pi))
        },
        ScaleValue::min,
    );
    Ok(value.unwrap_or_else(ScaleValue::one))
}

/// Optimistic utility: max over all worlds of min(mu_G, pi_{K_d}).
pub fn optimistic_semantic(inst: &Instance, d: &Decision) -> Result<ScaleValue> {
    let n = check_preconditions(inst, d)?;
    let kb_d = inst.kb.with_decision(d);
    let value = exec::map_reduce(
        1u64 << n,
        |idx| {
            let omega = Interpretation::from_index(&inst.vocab, idx);
            let mu = utility(&omega, &inst.goals);
            let pi = possibility(&omega, &kb_d);
            mu.min(pi)
        },
        ScaleValue::max,
    );
    Ok(value.unwrap_or_else(ScaleValue::zero))
}
