//! Syntactic route: utilities via level cuts and classical entailment,
//! with no model enumeration. The candidate cut levels form a finite grid;
//! both predicates are constant between adjacent grid points, so searching
//! the grid is exact.

use crate::bases::{Decision, Instance};
use crate::error::{Error, Result};
use crate::sat::Solver;
use crate::scale::{order_reverse, ScaleValue};

/// Sorted candidate levels: {0, 1} together with every base weight and its
/// order-reversal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutGrid {
    values: Vec<ScaleValue>,
}

impl CutGrid {
    pub fn for_instance(inst: &Instance) -> Self {
        let mut values = vec![ScaleValue::zero(), ScaleValue::one()];
        for e in inst.kb.entries().iter().chain(inst.goals.entries()) {
            values.push(e.weight);
            values.push(order_reverse(e.weight));
        }
        values.sort();
        values.dedup();
        CutGrid { values }
    }

    pub fn values(&self) -> &[ScaleValue] {
        &self.values
    }

    /// The grid refined with the midpoint of every adjacent pair. Searching
    /// this grid must return the same utilities; tests rely on that.
    pub fn with_midpoints(&self) -> CutGrid {
        let mut values = self.values.clone();
        for w in self.values.windows(2) {
            values.push(ScaleValue::midpoint(w[0], w[1]));
        }
        values.sort();
        values.dedup();
        CutGrid { values }
    }
}

fn require_feasible(inst: &Instance, d: &Decision) -> Result<()> {
    if inst.feasible(d)? {
        Ok(())
    } else {
        Err(Error::InfeasibleDecision(d.to_string()))
    }
}

/// Maximal alpha such that the non-strict alpha-cut of K_d entails every
/// goal with priority strictly above n(alpha); 0 if none.
pub fn pessimistic_cuts(inst: &Instance, d: &Decision) -> Result<ScaleValue> {
    pessimistic_cuts_on_grid(inst, d, &CutGrid::for_instance(inst))
}

pub fn pessimistic_cuts_on_grid(
    inst: &Instance,
    d: &Decision,
    grid: &CutGrid,
) -> Result<ScaleValue> {
    require_feasible(inst, d)?;
    let solver = Solver::default();
    let kb_d = inst.kb.with_decision(d);
    for &alpha in grid.values().iter().rev() {
        let knowledge = kb_d.cut(alpha, false);
        let goals = inst.goals.cut(order_reverse(alpha), true);
        let mut all = true;
        for g in &goals {
            if !solver.entails(&knowledge, g)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(alpha);
        }
    }
    Ok(ScaleValue::zero())
}

/// Greatest alpha such that the strict n(alpha)-cuts of K_d and G are
/// jointly consistent; 0 if none.
pub fn optimistic_cuts(inst: &Instance, d: &Decision) -> Result<ScaleValue> {
    optimistic_cuts_on_grid(inst, d, &CutGrid::for_instance(inst))
}

pub fn optimistic_cuts_on_grid(
    inst: &Instance,
    d: &Decision,
    grid: &CutGrid,
) -> Result<ScaleValue> {
    require_feasible(inst, d)?;
    let solver = Solver::default();
    let kb_d = inst.kb.with_decision(d);
    for &alpha in grid.values().iter().rev() {
        let level = order_reverse(alpha);
        let mut phis = kb_d.cut(level, true);
        phis.extend(inst.goals.cut(level, true));
        if solver.is_consistent(&phis)? {
            return Ok(alpha);
        }
    }
    Ok(ScaleValue::zero())
}
