//! Report assembly: evaluates an instance through the requested routes and
//! packages utilities, arguments, ranking and notes for display or JSON.
//! JSON output is stable: keys sorted, rationals as exact strings.

use std::fmt;

use serde_json::{json, Value};

use crate::accept::{acceptable_fixpoint, build_graph, rank_candidates, AcceptabilityResult, Node};
use crate::args::{
    enumerate_con, enumerate_pro, optimistic_args, pessimistic_args, rank_optimistic,
    rank_pessimistic, strength_pro, weakness_con, ArgumentCon, ArgumentPro, StrengthPro,
    WeaknessCon,
};
use crate::bases::{Decision, Instance};
use crate::check::has_multi_goal_conflict;
use crate::cuts::{optimistic_cuts, pessimistic_cuts};
use crate::error::Result;
use crate::semantic::{optimistic_semantic, pessimistic_semantic};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Pessimistic,
    Optimistic,
    Both,
}

impl Mode {
    pub fn pessimistic(self) -> bool {
        matches!(self, Mode::Pessimistic | Mode::Both)
    }
    pub fn optimistic(self) -> bool {
        matches!(self, Mode::Optimistic | Mode::Both)
    }
}

/// The three routes to one utility.
#[derive(Clone, Copy, Debug)]
pub struct RouteValues {
    pub semantic: crate::scale::ScaleValue,
    pub cuts: crate::scale::ScaleValue,
    pub args: crate::scale::ScaleValue,
}

#[derive(Clone, Debug)]
pub struct DecisionEntry {
    pub decision: Decision,
    pub feasible: bool,
    pub pessimistic: Option<RouteValues>,
    pub optimistic: Option<RouteValues>,
    pub pro: Vec<(ArgumentPro, StrengthPro)>,
    pub con: Vec<(ArgumentCon, WeaknessCon)>,
    pub status: Option<String>,
}

#[derive(Clone, Debug)]
pub struct DecisionReport {
    /// "consistent" (plain §3-style evaluation) or "acceptability".
    pub pipeline: String,
    pub decisions: Vec<DecisionEntry>,
    pub ranking: Vec<Vec<Decision>>,
    pub notes: Vec<String>,
}

/// Evaluates every decision through the requested routes and builds the
/// report, including per-decision arguments and any discrepancy notes.
pub fn evaluate_instance(inst: &Instance, mode: Mode) -> Result<DecisionReport> {
    let mut notes: Vec<String> = inst.warnings.clone();
    let normalized = inst.kb_consistent && inst.goals_consistent;
    if !normalized {
        notes.push(
            "bases are not normalized (inconsistent classical projection); \
             utility routes omitted"
                .into(),
        );
    }

    let mut decisions = Vec::new();
    for d in &inst.decisions {
        let feasible = inst.feasible(d)?;
        let mut entry = DecisionEntry {
            decision: d.clone(),
            feasible,
            pessimistic: None,
            optimistic: None,
            pro: Vec::new(),
            con: Vec::new(),
            status: None,
        };
        if normalized && feasible {
            for a in enumerate_pro(inst, d)? {
                let s = strength_pro(&a, inst);
                entry.pro.push((a, s));
            }
            for a in enumerate_con(inst, d)? {
                let w = weakness_con(&a, inst);
                entry.con.push((a, w));
            }
            if mode.pessimistic() {
                let v = RouteValues {
                    semantic: pessimistic_semantic(inst, d)?,
                    cuts: pessimistic_cuts(inst, d)?,
                    args: pessimistic_args(inst, d)?,
                };
                if v.semantic != v.cuts || v.args != v.cuts {
                    notes.push(format!(
                        "{d}: pessimistic routes disagree (semantic {}, cuts {}, args {})",
                        v.semantic, v.cuts, v.args
                    ));
                }
                entry.pessimistic = Some(v);
            }
            if mode.optimistic() {
                let v = RouteValues {
                    semantic: optimistic_semantic(inst, d)?,
                    cuts: optimistic_cuts(inst, d)?,
                    args: optimistic_args(inst, d)?,
                };
                if v.semantic != v.cuts {
                    notes.push(format!(
                        "{d}: optimistic semantic {} disagrees with cuts {}",
                        v.semantic, v.cuts
                    ));
                }
                if v.args > v.cuts {
                    if has_multi_goal_conflict(inst, d)? {
                        notes.push(format!(
                            "{d}: argumentative optimistic value is an upper bound \
                             ({} vs cuts {}; multi-goal minimal conflict)",
                            v.args, v.cuts
                        ));
                    } else {
                        notes.push(format!(
                            "{d}: optimistic args {} exceed cuts {} with no multi-goal \
                             conflict — unexpected",
                            v.args, v.cuts
                        ));
                    }
                } else if v.args < v.cuts {
                    notes.push(format!(
                        "{d}: optimistic args {} below cuts {} — unexpected",
                        v.args, v.cuts
                    ));
                }
                entry.optimistic = Some(v);
            }
        } else if !feasible {
            notes.push(format!("{d}: infeasible"));
        }
        decisions.push(entry);
    }

    let ranking = if normalized {
        if mode.pessimistic() {
            rank_pessimistic(inst)?
        } else {
            rank_optimistic(inst)?
        }
    } else {
        Vec::new()
    };

    Ok(DecisionReport { pipeline: "consistent".into(), decisions, ranking, notes })
}

/// Runs the acceptability pipeline and renders it as a report. On
/// consistent knowledge the ranking provably matches the plain pessimistic
/// ranking and the report says so.
pub fn accept_report(inst: &Instance) -> Result<(DecisionReport, AcceptabilityResult, Vec<String>)> {
    let graph = build_graph(inst)?;
    let result = acceptable_fixpoint(&graph, inst);
    let (groups, excluded) = rank_candidates(&result);

    let mut notes = Vec::new();
    if inst.kb_consistent {
        notes.push("knowledge is consistent: reduces to the plain pessimistic ranking".into());
    }
    for d in &graph.skipped_decisions {
        notes.push(format!("{d}: infeasible, no arguments built"));
    }
    if !excluded.is_empty() {
        let names: Vec<String> = excluded.iter().map(|d| d.to_string()).collect();
        notes.push(format!("not candidates: {}", names.join(", ")));
    }

    let mut decisions = Vec::new();
    for (d, status, _, _) in &result.decisions {
        let mut entry = DecisionEntry {
            decision: d.clone(),
            feasible: !graph.skipped_decisions.contains(d),
            pessimistic: None,
            optimistic: None,
            pro: Vec::new(),
            con: Vec::new(),
            status: Some(status.to_string()),
        };
        let di = inst.decisions.iter().position(|x| x == d).unwrap();
        for (a, s, owner) in &graph.pros {
            if *owner == di {
                entry.pro.push((a.clone(), *s));
            }
        }
        decisions.push(entry);
    }

    let class_lines = describe_classes(&graph, &result);
    let report =
        DecisionReport { pipeline: "acceptability".into(), decisions, ranking: groups, notes };
    Ok((report, result, class_lines))
}

fn describe_classes(
    graph: &crate::accept::ArgGraph,
    result: &AcceptabilityResult,
) -> Vec<String> {
    let name = |n: &Node| match n {
        Node::Belief(i) => graph.beliefs[*i].to_string(),
        Node::Pro(i) => graph.pros[*i].0.to_string(),
    };
    let mut lines = Vec::new();
    for (label, set) in [
        ("acceptable", &result.acceptable),
        ("rejected", &result.rejected),
        ("abeyance", &result.abeyance),
    ] {
        for n in set {
            lines.push(format!("{label}: {}", name(n)));
        }
    }
    lines
}

fn routes_json(v: &RouteValues) -> Value {
    json!({
        "semantic": v.semantic.to_string(),
        "cuts": v.cuts.to_string(),
        "args": v.args.to_string(),
    })
}

pub fn to_json(report: &DecisionReport) -> Value {
    let decisions: Vec<Value> = report
        .decisions
        .iter()
        .map(|e| {
            let pro: Vec<Value> = e
                .pro
                .iter()
                .map(|(a, s)| {
                    json!({
                        "support": a.support.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        "consequences":
                            a.consequences.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        "level": s.level.to_string(),
                        "weight": s.weight.to_string(),
                    })
                })
                .collect();
            let con: Vec<Value> = e
                .con
                .iter()
                .map(|(a, w)| {
                    json!({
                        "support": a.support.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        "consequences":
                            a.consequences.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        "level": w.level.to_string(),
                        "weight": w.weight.to_string(),
                    })
                })
                .collect();
            let mut obj = json!({
                "decision": e.decision.to_string(),
                "feasible": e.feasible,
                "pro": pro,
                "con": con,
            });
            let map = obj.as_object_mut().unwrap();
            if let Some(v) = &e.pessimistic {
                map.insert("pessimistic".into(), routes_json(v));
            }
            if let Some(v) = &e.optimistic {
                map.insert("optimistic".into(), routes_json(v));
            }
            if let Some(s) = &e.status {
                map.insert("status".into(), json!(s));
            }
            obj
        })
        .collect();
    let ranking: Vec<Vec<String>> = report
        .ranking
        .iter()
        .map(|g| g.iter().map(|d| d.to_string()).collect())
        .collect();
    json!({
        "pipeline": report.pipeline,
        "decisions": decisions,
        "ranking": ranking,
        "notes": report.notes,
    })
}

impl fmt::Display for DecisionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pipeline: {}", self.pipeline)?;
        for e in &self.decisions {
            writeln!(f, "decision {}{}", e.decision, if e.feasible { "" } else { " (infeasible)" })?;
            if let Some(v) = &e.pessimistic {
                writeln!(
                    f,
                    "  pessimistic: semantic={} cuts={} args={}",
                    v.semantic, v.cuts, v.args
                )?;
            }
            if let Some(v) = &e.optimistic {
                writeln!(
                    f,
                    "  optimistic:  semantic={} cuts={} args={}",
                    v.semantic, v.cuts, v.args
                )?;
            }
            if let Some(s) = &e.status {
                writeln!(f, "  status: {s}")?;
            }
        }
        if !self.ranking.is_empty() {
            let groups: Vec<String> = self
                .ranking
                .iter()
                .map(|g| {
                    let names: Vec<String> = g.iter().map(|d| d.to_string()).collect();
                    format!("[{}]", names.join(", "))
                })
                .collect();
            writeln!(f, "ranking: {}", groups.join(" > "))?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn umbrella_report_values() {
        let inst = fixtures::umbrella();
        let report = evaluate_instance(&inst, Mode::Both).unwrap();
        assert_eq!(report.pipeline, "consistent");
        let u = &report.decisions[0];
        assert_eq!(u.decision.to_string(), "u");
        let p = u.pessimistic.unwrap();
        assert_eq!(p.semantic.to_string(), "3/5");
        assert_eq!(p.cuts.to_string(), "3/5");
        assert_eq!(p.args.to_string(), "3/5");
        let o = u.optimistic.unwrap();
        assert_eq!(o.semantic.to_string(), "3/5");
        let nu = &report.decisions[1];
        assert_eq!(nu.pessimistic.unwrap().semantic.to_string(), "0");
        assert_eq!(nu.optimistic.unwrap().cuts.to_string(), "2/5");
        assert_eq!(report.ranking.len(), 2);
        assert_eq!(report.ranking[0][0].to_string(), "u");
    }

    #[test]
    fn json_is_byte_stable() {
        let inst = fixtures::umbrella();
        let report = evaluate_instance(&inst, Mode::Both).unwrap();
        let a = serde_json::to_string_pretty(&to_json(&report)).unwrap();
        let report2 = evaluate_instance(&inst, Mode::Both).unwrap();
        let b = serde_json::to_string_pretty(&to_json(&report2)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"3/5\""));
        assert!(!a.contains("0.6"));
    }

    #[test]
    fn accept_report_on_conflict_fixture() {
        let inst = fixtures::conflict();
        let (report, result, lines) = accept_report(&inst).unwrap();
        assert_eq!(report.pipeline, "acceptability");
        assert_eq!(report.ranking.len(), 2);
        assert_eq!(report.ranking[0][0].to_string(), "d");
        assert!(!result.rejected.is_empty());
        assert!(lines.iter().any(|l| l.starts_with("rejected: <{~a}, ~a>")));
    }

    #[test]
    fn accept_report_notes_consistent_reduction() {
        let inst = fixtures::umbrella();
        let (report, _, _) = accept_report(&inst).unwrap();
        assert!(report.notes.iter().any(|n| n.contains("reduces")));
        assert_eq!(report.ranking, rank_pessimistic(&inst).unwrap());
    }
}
