//! Argument-based route: arguments in favor of and against decisions, their
//! strengths and weaknesses, argument-level preference, and the utilities
//! they induce. For consistent bases these agree with the semantic and
//! level-cut routes (exactly for the pessimistic criterion; the optimistic
//! argument value is an upper bound that is tight unless a conflict needs
//! several goals jointly).

use std::fmt;

use crate::bases::{Decision, Instance};
use crate::error::{Error, Result};
use crate::exec;
use crate::logic::Formula;
use crate::sat::ModelSet;
use crate::scale::{order_reverse, ScaleValue};

/// Default bound on the number of knowledge-base entries for subset
/// enumeration.
pub const DEFAULT_SUPPORT_BOUND: usize = 16;

/// An argument in favor of a decision: a minimal knowledge subset that,
/// together with the decision, reaches a set of goals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ArgumentPro {
    /// Support S, drawn from K*, in base order.
    pub support: Vec<Formula>,
    /// Consequences C: exactly the goals entailed by S together with d.
    pub consequences: Vec<Formula>,
    /// The decision the argument pleads for.
    pub decision: Decision,
}

/// Strength of a PRO argument: certainty of its support and coverage of the
/// goal base.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StrengthPro {
    pub level: ScaleValue,
    pub weight: ScaleValue,
}

impl StrengthPro {
    pub fn rank(self) -> ScaleValue {
        self.level.min(self.weight)
    }
}

/// An argument against a decision: a minimal knowledge subset that, with the
/// decision, derives the negation of each goal in `consequences`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ArgumentCon {
    pub support: Vec<Formula>,
    /// The goals whose negation the support derives; never empty.
    pub consequences: Vec<Formula>,
    pub decision: Decision,
}

/// Weakness of a CON argument: high values mean the argument is easy to
/// discount (uncertain support, or only low-priority goals attacked).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WeaknessCon {
    pub level: ScaleValue,
    pub weight: ScaleValue,
}

impl WeaknessCon {
    pub fn rank(self) -> ScaleValue {
        self.level.max(self.weight)
    }
}

impl fmt::Display for ArgumentPro {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{{")?;
        for (i, s) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}, {{")?;
        for (i, c) in self.consequences.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}, {}>", self.decision)
    }
}

impl fmt::Display for ArgumentCon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{{")?;
        for (i, s) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}, {{")?;
        for (i, c) in self.consequences.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "~({c})")?;
        }
        write!(f, "}}, {}>", self.decision)
    }
}

/// Shared scaffolding for subset scans over K*: per-entry and per-goal model
/// sets over the instance vocabulary.
pub(crate) struct SubsetScan {
    pub kb_sets: Vec<ModelSet>,
    pub goal_sets: Vec<ModelSet>,
    pub decision_set: ModelSet,
}

impl SubsetScan {
    pub(crate) fn new(inst: &Instance, d: &Decision) -> Result<Self> {
        let n_entries = inst.kb.entries().len();
        if n_entries > DEFAULT_SUPPORT_BOUND {
            return Err(Error::EnumerationLimit(format!(
                "{n_entries} knowledge entries exceed the subset-enumeration bound of \
                 {DEFAULT_SUPPORT_BOUND}"
            )));
        }
        let kb_sets = inst
            .kb
            .entries()
            .iter()
            .map(|e| ModelSet::of_formula(&e.formula, &inst.vocab))
            .collect::<Result<Vec<_>>>()?;
        let goal_sets = inst
            .goals
            .entries()
            .iter()
            .map(|e| ModelSet::of_formula(&e.formula, &inst.vocab))
            .collect::<Result<Vec<_>>>()?;
        let decision_set = ModelSet::of_formula(&d.to_formula(), &inst.vocab)?;
        Ok(SubsetScan { kb_sets, goal_sets, decision_set })
    }

    /// Model set of the selected knowledge entries together with the decision.
    pub(crate) fn subset_models(&self, mask: u64) -> ModelSet {
        let mut acc = self.decision_set.clone();
        for (i, set) in self.kb_sets.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc.intersect_with(set);
            }
        }
        acc
    }
}

/// Within each closure class, keep only inclusion-minimal supports.
fn minimal_masks(mut candidates: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
    candidates.sort_by_key(|&(mask, closure)| (closure, mask.count_ones(), mask));
    let mut kept: Vec<(u64, u64)> = Vec::new();
    for (mask, closure) in candidates {
        let dominated = kept
            .iter()
            .any(|&(m, c)| c == closure && m & mask == m && m != mask);
        if !dominated {
            kept.push((mask, closure));
        }
    }
    kept
}

fn mask_to_formulas(inst: &Instance, mask: u64) -> Vec<Formula> {
    inst.kb
        .entries()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e.formula.clone())
        .collect()
}

fn closure_to_goals(inst: &Instance, closure: u64) -> Vec<Formula> {
    inst.goals
        .entries()
        .iter()
        .enumerate()
        .filter(|(i, _)| closure >> i & 1 == 1)
        .map(|(_, e)| e.formula.clone())
        .collect()
}

/// All PRO arguments for `d`: one per achievable goal closure, with every
/// inclusion-minimal support for that closure. Always contains the
/// empty-support argument.
pub fn enumerate_pro(inst: &Instance, d: &Decision) -> Result<Vec<ArgumentPro>> {
    let scan = SubsetScan::new(inst, d)?;
    let n_entries = inst.kb.entries().len();
    let candidates: Vec<Option<(u64, u64)>> = exec::map_collect(1u64 << n_entries, |mask| {
        let models = scan.subset_models(mask);
        if models.is_empty() {
            return None; // S together with d is inconsistent
        }
        let mut closure = 0u64;
        for (g, gset) in scan.goal_sets.iter().enumerate() {
            if models.is_subset_of(gset) {
                closure |= 1 << g;
            }
        }
        Some((mask, closure))
    });
    let kept = minimal_masks(candidates.into_iter().flatten().collect());
    Ok(kept
        .into_iter()
        .map(|(mask, closure)| ArgumentPro {
            support: mask_to_formulas(inst, mask),
            consequences: closure_to_goals(inst, closure),
            decision: d.clone(),
        })
        .collect())
}

/// All CON arguments for `d`: minimal supports deriving the negation of a
/// nonempty set of goals. Empty when no goal's negation is derivable.
pub fn enumerate_con(inst: &Instance, d: &Decision) -> Result<Vec<ArgumentCon>> {
    let scan = SubsetScan::new(inst, d)?;
    let n_entries = inst.kb.entries().len();
    let candidates: Vec<Option<(u64, u64)>> = exec::map_collect(1u64 << n_entries, |mask| {
        let models = scan.subset_models(mask);
        if models.is_empty() {
            return None;
        }
        let mut closure = 0u64;
        for (g, gset) in scan.goal_sets.iter().enumerate() {
            if models.intersection(gset).is_empty() {
                closure |= 1 << g;
            }
        }
        if closure == 0 {
            return None;
        }
        Some((mask, closure))
    });
    let kept = minimal_masks(candidates.into_iter().flatten().collect());
    Ok(kept
        .into_iter()
        .map(|(mask, closure)| ArgumentCon {
            support: mask_to_formulas(inst, mask),
            consequences: closure_to_goals(inst, closure),
            decision: d.clone(),
        })
        .collect())
}

/// Strength of a PRO argument. Level: the certainty of its weakest support
/// entry (1 for the empty support). Weight: n of the highest priority among
/// goals it misses; 1 when it reaches every goal.
pub fn strength_pro(a: &ArgumentPro, inst: &Instance) -> StrengthPro {
    let level = a
        .support
        .iter()
        .filter_map(|f| inst.kb.weight_of(f))
        .min()
        .unwrap_or_else(ScaleValue::one);
    let missed = inst
        .goals
        .entries()
        .iter()
        .filter(|e| !a.consequences.contains(&e.formula))
        .map(|e| e.weight)
        .max();
    let weight = match missed {
        None => ScaleValue::one(),
        Some(beta) => order_reverse(beta),
    };
    StrengthPro { level, weight }
}

/// Weakness of a CON argument. Level: n of the weakest support certainty
/// (0 for the empty support). Weight: n of the highest priority it attacks.
pub fn weakness_con(a: &ArgumentCon, inst: &Instance) -> WeaknessCon {
    let level = match a.support.iter().filter_map(|f| inst.kb.weight_of(f)).min() {
        None => ScaleValue::zero(),
        Some(phi) => order_reverse(phi),
    };
    let beta = a
        .consequences
        .iter()
        .filter_map(|f| inst.goals.priority_of(f))
        .max()
        .unwrap_or_else(ScaleValue::zero);
    WeaknessCon { level, weight: order_reverse(beta) }
}

/// PRO preference: compare min(level, weight).
pub fn prefer_pro(a: &ArgumentPro, b: &ArgumentPro, inst: &Instance) -> bool {
    strength_pro(a, inst).rank() >= strength_pro(b, inst).rank()
}

/// CON preference: compare max(level, weight); higher is weaker, so the
/// preferred argument is the less damaging one.
pub fn prefer_con(a: &ArgumentCon, b: &ArgumentCon, inst: &Instance) -> bool {
    weakness_con(a, inst).rank() >= weakness_con(b, inst).rank()
}

fn check_consistent_bases(inst: &Instance) -> Result<()> {
    if !inst.kb_consistent {
        return Err(Error::NotNormalized("K* is inconsistent".to_string()));
    }
    if !inst.goals_consistent {
        return Err(Error::NotNormalized("G* is inconsistent".to_string()));
    }
    Ok(())
}

fn require_feasible(inst: &Instance, d: &Decision) -> Result<()> {
    if inst.feasible(d)? {
        Ok(())
    } else {
        Err(Error::InfeasibleDecision(d.to_string()))
    }
}

/// Pessimistic argument-based utility: the best min(level, weight) over the
/// PRO arguments for `d`.
pub fn pessimistic_args(inst: &Instance, d: &Decision) -> Result<ScaleValue> {
    check_consistent_bases(inst)?;
    require_feasible(inst, d)?;
    let args = enumerate_pro(inst, d)?;
    Ok(args
        .iter()
        .map(|a| strength_pro(a, inst).rank())
        .max()
        .unwrap_or_else(ScaleValue::zero))
}

/// Optimistic argument-based utility: the worst (minimum) max(level, weight)
/// over the CON arguments against `d`; 1 when no argument opposes it.
pub fn optimistic_args(inst: &Instance, d: &Decision) -> Result<ScaleValue> {
    check_consistent_bases(inst)?;
    require_feasible(inst, d)?;
    let args = enumerate_con(inst, d)?;
    Ok(args
        .iter()
        .map(|a| weakness_con(a, inst).rank())
        .min()
        .unwrap_or_else(ScaleValue::one))
}

/// Groups of decisions ordered by a utility, best first; ties share a group.
/// Infeasible decisions are omitted.
fn rank_by(
    inst: &Instance,
    score: impl Fn(&Instance, &Decision) -> Result<ScaleValue>,
) -> Result<Vec<Vec<Decision>>> {
    let mut scored: Vec<(ScaleValue, Decision)> = Vec::new();
    for d in &inst.decisions {
        match score(inst, d) {
            Ok(v) => scored.push((v, d.clone())),
            Err(Error::InfeasibleDecision(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    scored.sort_by(|a, b| b.0.cmp(&a.0));
    let mut groups: Vec<Vec<Decision>> = Vec::new();
    let mut last: Option<ScaleValue> = None;
    for (v, d) in scored {
        if last == Some(v) {
            groups.last_mut().unwrap().push(d);
        } else {
            groups.push(vec![d]);
            last = Some(v);
        }
    }
    Ok(groups)
}

/// Decisions ranked by pessimistic argument utility, descending.
pub fn rank_pessimistic(inst: &Instance) -> Result<Vec<Vec<Decision>>> {
    rank_by(inst, pessimistic_args)
}

/// Decisions ranked by optimistic argument utility, descending.
pub fn rank_optimistic(inst: &Instance) -> Result<Vec<Vec<Decision>>> {
    rank_by(inst, optimistic_args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::load_instance;
    use crate::fixtures;
    use crate::logic::parse_formula;

    fn sv(s: &str) -> ScaleValue {
        s.parse().unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn find_pro<'a>(args: &'a [ArgumentPro], support: &[&str]) -> Option<&'a ArgumentPro> {
        let mut target: Vec<Formula> = support.iter().map(|s| f(s)).collect();
        target.sort();
        args.iter().find(|a| {
            let mut got = a.support.clone();
            got.sort();
            got == target
        })
    }

    fn find_con<'a>(args: &'a [ArgumentCon], support: &[&str]) -> Option<&'a ArgumentCon> {
        let mut target: Vec<Formula> = support.iter().map(|s| f(s)).collect();
        target.sort();
        args.iter().find(|a| {
            let mut got = a.support.clone();
            got.sort();
            got == target
        })
    }

    #[test]
    fn umbrella_pro_arguments() {
        let inst = fixtures::umbrella();
        let u = Decision::parse("u").unwrap();
        let pro_u = enumerate_pro(&inst, &u).unwrap();
        let a = find_pro(&pro_u, &["u -> ~w"]).expect("argument for u missing");
        assert_eq!(a.consequences, vec![f("~w")]);

        let not_u = Decision::parse("~u").unwrap();
        let pro_not_u = enumerate_pro(&inst, &not_u).unwrap();
        let b = find_pro(&pro_not_u, &["~u -> ~l"]).expect("argument for ~u missing");
        assert_eq!(b.consequences, vec![f("~l")]);
    }

    #[test]
    fn empty_support_argument_always_present() {
        let text = "decision_atoms: d\nkb:\nx : 1\ngoals:\ng : 1\ndecisions:\nd\n";
        let inst = load_instance(text).unwrap();
        let d = Decision::parse("d").unwrap();
        let args = enumerate_pro(&inst, &d).unwrap();
        let empty = find_pro(&args, &[]).expect("empty-support argument missing");
        assert!(empty.consequences.is_empty());
    }

    #[test]
    fn umbrella_pro_strengths() {
        let inst = fixtures::umbrella();
        let u = Decision::parse("u").unwrap();
        let pro_u = enumerate_pro(&inst, &u).unwrap();
        let a = find_pro(&pro_u, &["u -> ~w"]).unwrap();
        let s = strength_pro(a, &inst);
        assert_eq!(s.level, ScaleValue::one());
        assert_eq!(s.weight, sv("3/5")); // n(sigma)

        let not_u = Decision::parse("~u").unwrap();
        let pro_not_u = enumerate_pro(&inst, &not_u).unwrap();
        let b = find_pro(&pro_not_u, &["~u -> ~l"]).unwrap();
        let sb = strength_pro(b, &inst);
        assert_eq!(sb.level, ScaleValue::one());
        assert_eq!(sb.weight, ScaleValue::zero()); // n(1): misses the top goal
    }

    #[test]
    fn full_coverage_gives_weight_one() {
        let text = "decision_atoms: d\nkb:\nd -> g : 1\ngoals:\ng : 1\ndecisions:\nd\n";
        let inst = load_instance(text).unwrap();
        let d = Decision::parse("d").unwrap();
        let args = enumerate_pro(&inst, &d).unwrap();
        let a = find_pro(&args, &["d -> g"]).unwrap();
        let s = strength_pro(a, &inst);
        assert_eq!(s.level, ScaleValue::one());
        assert_eq!(s.weight, ScaleValue::one());
    }

    #[test]
    fn umbrella_pro_preference() {
        let inst = fixtures::umbrella();
        let u = Decision::parse("u").unwrap();
        let not_u = Decision::parse("~u").unwrap();
        let a = enumerate_pro(&inst, &u).unwrap();
        let b = enumerate_pro(&inst, &not_u).unwrap();
        let arg_u = find_pro(&a, &["u -> ~w"]).unwrap();
        let arg_not_u = find_pro(&b, &["~u -> ~l"]).unwrap();
        assert!(prefer_pro(arg_u, arg_not_u, &inst));
        assert!(!prefer_pro(arg_not_u, arg_u, &inst));
        // reflexivity
        assert!(prefer_pro(arg_u, arg_u, &inst));
    }

    #[test]
    fn umbrella_con_arguments_and_weaknesses() {
        let inst = fixtures::umbrella();
        let u = Decision::parse("u").unwrap();
        let con_u = enumerate_con(&inst, &u).unwrap();
        assert_eq!(con_u.len(), 1);
        let a = find_con(&con_u, &["u -> l"]).expect("argument against u missing");
        assert_eq!(a.consequences, vec![f("~l")]);
        let wa = weakness_con(a, &inst);
        assert_eq!(wa.level, ScaleValue::zero());
        assert_eq!(wa.weight, sv("3/5")); // n(sigma)

        let not_u = Decision::parse("~u").unwrap();
        let con_not_u = enumerate_con(&inst, &not_u).unwrap();
        assert_eq!(con_not_u.len(), 1);
        let b = find_con(&con_not_u, &["c", "c -> r", "(r & ~u) -> w"])
            .expect("argument against ~u missing");
        assert_eq!(b.consequences, vec![f("~w")]);
        let wb = weakness_con(b, &inst);
        assert_eq!(wb.level, sv("2/5")); // n(lambda)
        assert_eq!(wb.weight, ScaleValue::zero());
    }

    #[test]
    fn no_con_arguments_when_goals_certain() {
        let text = "decision_atoms: d\nkb:\nd -> g : 1\ngoals:\ng : 1\ndecisions:\nd\n";
        let inst = load_instance(text).unwrap();
        let d = Decision::parse("d").unwrap();
        assert!(enumerate_con(&inst, &d).unwrap().is_empty());
        assert_eq!(optimistic_args(&inst, &d).unwrap(), ScaleValue::one());
    }

    #[test]
    fn umbrella_argument_utilities() {
        let inst = fixtures::umbrella();
        let u = Decision::parse("u").unwrap();
        let not_u = Decision::parse("~u").unwrap();
        assert_eq!(pessimistic_args(&inst, &u).unwrap(), sv("3/5"));
        assert_eq!(pessimistic_args(&inst, &not_u).unwrap(), ScaleValue::zero());
        assert_eq!(optimistic_args(&inst, &u).unwrap(), sv("3/5"));
        assert_eq!(optimistic_args(&inst, &not_u).unwrap(), sv("2/5"));
    }

    #[test]
    fn empty_goal_base_gives_one() {
        let text = "decision_atoms: d\nkb:\nx : 1\ngoals:\ng : 0\ndecisions:\nd\n";
        let inst = load_instance(text).unwrap();
        let d = Decision::parse("d").unwrap();
        assert_eq!(pessimistic_args(&inst, &d).unwrap(), ScaleValue::one());
    }

    #[test]
    fn umbrella_rankings() {
        let inst = fixtures::umbrella();
        let u = Decision::parse("u").unwrap();
        let not_u = Decision::parse("~u").unwrap();
        assert_eq!(
            rank_pessimistic(&inst).unwrap(),
            vec![vec![u.clone()], vec![not_u.clone()]]
        );
        // lambda = 3/5, sigma = 2/5: optimistic also prefers u (3/5 > 2/5)
        assert_eq!(rank_optimistic(&inst).unwrap(), vec![vec![u], vec![not_u]]);
    }

    #[test]
    fn optimistic_ranking_flips_with_the_weights() {
        let inst = fixtures::umbrella_with(sv("1/5"), sv("9/10"));
        let u = Decision::parse("u").unwrap();
        let not_u = Decision::parse("~u").unwrap();
        assert_eq!(optimistic_args(&inst, &u).unwrap(), sv("1/10"));
        assert_eq!(optimistic_args(&inst, &not_u).unwrap(), sv("4/5"));
        assert_eq!(rank_optimistic(&inst).unwrap(), vec![vec![not_u], vec![u]]);
    }

    #[test]
    fn identical_consequences_tie() {
        let text = "decision_atoms: d1 d2\nkb:\nd1 -> g : 1\nd2 -> g : 1\n\
                    goals:\ng : 1\ndecisions:\nd1\nd2\n";
        let inst = load_instance(text).unwrap();
        let groups = rank_pessimistic(&inst).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].len(), 2);
    }

    #[test]
    fn supports_are_minimal() {
        let inst = fixtures::umbrella();
        for d in &inst.decisions {
            let args = enumerate_pro(&inst, d).unwrap();
            for a in &args {
                // removing any support element must change the goal closure
                for i in 0..a.support.len() {
                    let mut reduced = a.support.clone();
                    reduced.remove(i);
                    let smaller = args
                        .iter()
                        .find(|b| b.support == reduced && b.consequences == a.consequences);
                    assert!(smaller.is_none(), "non-minimal support in {a}");
                }
            }
        }
    }

    #[test]
    fn strengths_stable_under_entry_permutation() {
        let inst = fixtures::umbrella();
        // reload with kb lines reversed
        let mut text = String::from("decision_atoms: u\nkb:\n");
        for e in inst.kb.entries().iter().rev() {
            text.push_str(&format!("{} : {}\n", e.formula, e.weight));
        }
        text.push_str("goals:\n~l : 2/5\n~w : 1\ndecisions:\nu\n~u\n");
        let permuted = load_instance(&text).unwrap();
        for d in &inst.decisions {
            let mut a: Vec<(Vec<Formula>, StrengthPro)> = enumerate_pro(&inst, d)
                .unwrap()
                .iter()
                .map(|x| {
                    let mut s = x.support.clone();
                    s.sort();
                    (s, strength_pro(x, &inst))
                })
                .collect();
            let mut b: Vec<(Vec<Formula>, StrengthPro)> = enumerate_pro(&permuted, d)
                .unwrap()
                .iter()
                .map(|x| {
                    let mut s = x.support.clone();
                    s.sort();
                    (s, strength_pro(x, &permuted))
                })
                .collect();
            a.sort_by(|x, y| x.0.cmp(&y.0));
            b.sort_by(|x, y| x.0.cmp(&y.0));
            assert_eq!(a, b);
        }
    }
}
