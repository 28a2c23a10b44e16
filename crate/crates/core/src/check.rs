//! Differential harness: evaluates every decision through all three routes
//! (semantic, level cuts, arguments) and checks the expected identities.
//! The pessimistic values must agree exactly; the optimistic argumentative
//! value must dominate the cut value, with equality unless the bases hide a
//! conflict that needs several goals at once.

use std::fmt;

use crate::args::{optimistic_args, pessimistic_args};
use crate::bases::{Decision, Instance};
use crate::cuts::{optimistic_cuts, pessimistic_cuts};
use crate::error::Result;
use crate::sat::ModelSet;
use crate::semantic::{optimistic_semantic, pessimistic_semantic};

/// A route identity that failed on a concrete decision.
#[derive(Clone, Debug)]
pub struct Violation {
    pub decision: Decision,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.decision, self.message)
    }
}

/// Outcome of checking one instance.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub decisions_checked: usize,
    pub violations: Vec<Violation>,
    /// Benign deviations: the argumentative optimistic value is only an
    /// upper bound because a multi-goal minimal conflict exists.
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.decisions_checked += other.decisions_checked;
        self.violations.extend(other.violations);
        self.flags.extend(other.flags);
        self.notes.extend(other.notes);
    }
}

/// A minimal inconsistent subset of K_d* ∪ G*, reported as (kb-side
/// formulas, goal formulas). Minimality is intrinsic to the subset, so the
/// enumeration over the classical bases covers every cut level.
#[derive(Clone, Debug)]
pub struct MinimalConflict {
    pub kb_part: Vec<String>,
    pub goal_part: Vec<String>,
}

/// Brute-force enumeration of the minimal inconsistent subsets of
/// K* ∪ {d's literals} ∪ G*.
pub fn minimal_conflicts(inst: &Instance, d: &Decision) -> Result<Vec<MinimalConflict>> {
    let mut elems: Vec<(String, ModelSet, bool)> = Vec::new();
    for e in inst.kb.entries() {
        elems.push((
            e.formula.to_string(),
            ModelSet::of_formula(&e.formula, &inst.vocab)?,
            false,
        ));
    }
    for f in d.literal_formulas() {
        elems.push((f.to_string(), ModelSet::of_formula(&f, &inst.vocab)?, false));
    }
    for e in inst.goals.entries() {
        elems.push((
            e.formula.to_string(),
            ModelSet::of_formula(&e.formula, &inst.vocab)?,
            true,
        ));
    }
    let n = elems.len();
    assert!(n <= 24, "minimal-conflict enumeration is a small-instance probe");
    let full = ModelSet::full(1 << inst.vocab.len());

    let mut masks: Vec<u64> = (1..(1u64 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut kept: Vec<u64> = Vec::new();
    for mask in masks {
        if kept.iter().any(|&m| m & mask == m) {
            continue;
        }
        let mut models = full.clone();
        for (i, (_, set, _)) in elems.iter().enumerate() {
            if mask >> i & 1 == 1 {
                models.intersect_with(set);
            }
        }
        if models.is_empty() {
            kept.push(mask);
        }
    }

    Ok(kept
        .into_iter()
        .map(|mask| {
            let mut kb_part = Vec::new();
            let mut goal_part = Vec::new();
            for (i, (name, _, is_goal)) in elems.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if *is_goal {
                        goal_part.push(name.clone());
                    } else {
                        kb_part.push(name.clone());
                    }
                }
            }
            MinimalConflict { kb_part, goal_part }
        })
        .collect())
}

/// True iff some minimal inconsistent subset involves two or more goals.
pub fn has_multi_goal_conflict(inst: &Instance, d: &Decision) -> Result<bool> {
    Ok(minimal_conflicts(inst, d)?
        .iter()
        .any(|c| c.goal_part.len() >= 2))
}

/// Runs the full cross-route check on one instance.
pub fn check_instance(inst: &Instance) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    if !inst.kb_consistent || !inst.goals_consistent {
        report
            .notes
            .push("bases not normalized; semantic routes skipped".into());
        return Ok(report);
    }
    for d in &inst.decisions {
        if !inst.feasible(d)? {
            report.notes.push(format!("{d}: infeasible, skipped"));
            continue;
        }
        report.decisions_checked += 1;

        let p_sem = pessimistic_semantic(inst, d)?;
        let p_cut = pessimistic_cuts(inst, d)?;
        let p_arg = pessimistic_args(inst, d)?;
        if p_sem != p_cut {
            report.violations.push(Violation {
                decision: d.clone(),
                message: format!("pessimistic semantic {p_sem} != cuts {p_cut}"),
            });
        }
        if p_arg != p_cut {
            report.violations.push(Violation {
                decision: d.clone(),
                message: format!("pessimistic args {p_arg} != cuts {p_cut}"),
            });
        }

        let o_sem = optimistic_semantic(inst, d)?;
        let o_cut = optimistic_cuts(inst, d)?;
        let o_arg = optimistic_args(inst, d)?;
        if o_sem != o_cut {
            report.violations.push(Violation {
                decision: d.clone(),
                message: format!("optimistic semantic {o_sem} != cuts {o_cut}"),
            });
        }
        if o_arg < o_cut {
            report.violations.push(Violation {
                decision: d.clone(),
                message: format!("optimistic args {o_arg} below cuts {o_cut}"),
            });
        } else if o_arg > o_cut {
            // only legitimate when a conflict needs several goals jointly
            if has_multi_goal_conflict(inst, d)? {
                report.flags.push(format!(
                    "{d}: argumentative optimistic value {o_arg} is an upper bound \
                     (cuts {o_cut}); multi-goal minimal conflict present"
                ));
            } else {
                report.violations.push(Violation {
                    decision: d.clone(),
                    message: format!(
                        "optimistic args {o_arg} != cuts {o_cut} without a multi-goal conflict"
                    ),
                });
            }
        }
    }
    Ok(report)
}
