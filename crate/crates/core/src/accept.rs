//! Acceptability framework for inconsistent knowledge: belief arguments,
//! undercut and attack relations, a defense fixpoint classifying arguments
//! as acceptable, rejected or in abeyance, and the induced decision
//! categories and ranking. With consistent knowledge the whole machinery
//! collapses onto the plain pessimistic ranking.

use std::collections::BTreeSet;
use std::fmt;

use crate::args::{enumerate_pro, strength_pro, ArgumentPro, StrengthPro, DEFAULT_SUPPORT_BOUND};
use crate::bases::{Decision, Instance};
use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::sat::ModelSet;
use crate::scale::ScaleValue;

/// A minimal consistent proof of a belief from K*.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BeliefArgument {
    pub support: Vec<Formula>,
    pub conclusion: Formula,
}

impl fmt::Display for BeliefArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{{")?;
        for (i, s) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}, {}>", self.conclusion)
    }
}

/// Certainty level of a belief argument: its weakest support entry, 1 for
/// the empty support.
pub fn belief_level(b: &BeliefArgument, inst: &Instance) -> ScaleValue {
    b.support
        .iter()
        .filter_map(|f| inst.kb.weight_of(f))
        .min()
        .unwrap_or_else(ScaleValue::one)
}

/// All minimal-support belief arguments whose conclusion is one of
/// `conclusions`.
pub fn enumerate_belief_args(
    inst: &Instance,
    conclusions: &[Formula],
) -> Result<Vec<BeliefArgument>> {
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
    let full = ModelSet::full(1 << inst.vocab.len());

    let mut out = Vec::new();
    for h in conclusions {
        let h_set = ModelSet::of_formula(h, &inst.vocab)?;
        // subsets in cardinality order so kept supports are globally minimal
        let mut masks: Vec<u64> = (0..(1u64 << n_entries)).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let mut kept: Vec<u64> = Vec::new();
        for mask in masks {
            if kept.iter().any(|&m| m & mask == m) {
                continue;
            }
            let mut models = full.clone();
            for (i, set) in kb_sets.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    models.intersect_with(set);
                }
            }
            if models.is_empty() {
                continue; // inconsistent support
            }
            if models.is_subset_of(&h_set) {
                kept.push(mask);
            }
        }
        for mask in kept {
            out.push(BeliefArgument {
                support: inst
                    .kb
                    .entries()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, e)| e.formula.clone())
                    .collect(),
                conclusion: h.clone(),
            });
        }
    }
    Ok(out)
}

/// A node of the argumentation system: a belief argument or a PRO argument.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Node {
    Belief(usize),
    Pro(usize),
}

/// The argumentation system: belief and PRO arguments with the undercut and
/// attack relations. Only belief arguments are edge sources.
#[derive(Clone, Debug)]
pub struct ArgGraph {
    pub beliefs: Vec<BeliefArgument>,
    pub belief_levels: Vec<ScaleValue>,
    /// PRO arguments with their strengths and owning decision (index into
    /// the instance's decision list).
    pub pros: Vec<(ArgumentPro, StrengthPro, usize)>,
    /// Decisions whose PRO arguments were enumerated; infeasible decisions
    /// under consistent knowledge are left out and noted.
    pub skipped_decisions: Vec<Decision>,
    /// undercut[i] = belief indices undercut by belief i
    undercut: Vec<Vec<usize>>,
    /// attack[i] = pro indices attacked by belief i
    attack: Vec<Vec<usize>>,
}

impl ArgGraph {
    pub fn node_count(&self) -> usize {
        self.beliefs.len() + self.pros.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..self.beliefs.len())
            .map(Node::Belief)
            .chain((0..self.pros.len()).map(Node::Pro))
    }

    pub fn level(&self, node: Node) -> ScaleValue {
        match node {
            Node::Belief(i) => self.belief_levels[i],
            Node::Pro(i) => self.pros[i].1.level,
        }
    }

    /// Belief arguments undercutting/attacking the node.
    pub fn attackers(&self, node: Node) -> Vec<usize> {
        let edges = match node {
            Node::Belief(_) => &self.undercut,
            Node::Pro(_) => &self.attack,
        };
        let target = match node {
            Node::Belief(i) | Node::Pro(i) => i,
        };
        let mut out = Vec::new();
        for (b, targets) in edges.iter().enumerate() {
            if targets.contains(&target) {
                out.push(b);
            }
        }
        out
    }

    pub fn undercuts(&self, b1: usize, b2: usize) -> bool {
        self.undercut[b1].contains(&b2)
    }

    pub fn attacks(&self, b: usize, p: usize) -> bool {
        self.attack[b].contains(&p)
    }
}

/// Conclusion of `b` is logically equivalent to the negation of a support
/// element of `b2`.
pub fn undercuts(b1: &BeliefArgument, b2: &BeliefArgument, inst: &Instance) -> Result<bool> {
    let c = ModelSet::of_formula(&b1.conclusion, &inst.vocab)?;
    for h in &b2.support {
        if c.is_complement_of(&ModelSet::of_formula(h, &inst.vocab)?) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Conclusion of `b` negates a support element or a consequence of `p`.
pub fn attacks(b: &BeliefArgument, p: &ArgumentPro, inst: &Instance) -> Result<bool> {
    let c = ModelSet::of_formula(&b.conclusion, &inst.vocab)?;
    for h in p.support.iter().chain(p.consequences.iter()) {
        if c.is_complement_of(&ModelSet::of_formula(h, &inst.vocab)?) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// An attacked node holds its ground iff its level is at least the
/// attacker's.
pub fn defends_itself(target_level: ScaleValue, attacker_level: ScaleValue) -> bool {
    target_level >= attacker_level
}

/// Builds the argumentation system for an instance: PRO arguments for every
/// decision, belief arguments for every conclusion that can create an edge
/// (negations of support and consequence formulas, closed iteratively), and
/// the undercut/attack relations.
pub fn build_graph(inst: &Instance) -> Result<ArgGraph> {
    let mut pros: Vec<(ArgumentPro, StrengthPro, usize)> = Vec::new();
    let mut skipped = Vec::new();
    for (di, d) in inst.decisions.iter().enumerate() {
        // under consistent knowledge, infeasible decisions have no place in
        // the ranking; with inconsistent knowledge feasibility is vacuous
        if inst.kb_consistent && !inst.feasible(d)? {
            skipped.push(d.clone());
            continue;
        }
        for a in enumerate_pro(inst, d)? {
            let s = strength_pro(&a, inst);
            pros.push((a, s, di));
        }
    }

    // relevance closure: conclusions that can negate a knowledge entry or a
    // support/consequence formula, iterated over newly found belief supports
    let mut targets: BTreeSet<Formula> = BTreeSet::new();
    for e in inst.kb.entries() {
        targets.insert(e.formula.clone());
    }
    for (a, _, _) in &pros {
        for f in a.support.iter().chain(a.consequences.iter()) {
            targets.insert(f.clone());
        }
    }
    let mut beliefs: Vec<BeliefArgument> = Vec::new();
    let mut seen_conclusions: BTreeSet<Formula> = BTreeSet::new();
    loop {
        let pending: Vec<Formula> = targets
            .iter()
            .map(Formula::negated)
            .filter(|c| !seen_conclusions.contains(c))
            .collect();
        if pending.is_empty() {
            break;
        }
        seen_conclusions.extend(pending.iter().cloned());
        let new_args = enumerate_belief_args(inst, &pending)?;
        for b in new_args {
            for s in &b.support {
                targets.insert(s.clone());
            }
            if !beliefs.contains(&b) {
                beliefs.push(b);
            }
        }
    }

    let belief_levels: Vec<ScaleValue> =
        beliefs.iter().map(|b| belief_level(b, inst)).collect();

    let mut undercut = vec![Vec::new(); beliefs.len()];
    let mut attack = vec![Vec::new(); beliefs.len()];
    for (i, b) in beliefs.iter().enumerate() {
        for (j, b2) in beliefs.iter().enumerate() {
            if i != j && undercuts(b, b2, inst)? {
                undercut[i].push(j);
            }
        }
        for (j, (p, _, _)) in pros.iter().enumerate() {
            if attacks(b, p, inst)? {
                attack[i].push(j);
            }
        }
    }

    Ok(ArgGraph { beliefs, belief_levels, pros, skipped_decisions: skipped, undercut, attack })
}

/// Decision category induced by the argument classes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecisionStatus {
    /// Some acceptable PRO argument concludes it.
    Candidate,
    /// Every PRO argument for it is rejected.
    Rejected,
    /// Neither: all its surviving PRO arguments are in abeyance.
    Abeyance,
}

impl fmt::Display for DecisionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecisionStatus::Candidate => write!(f, "candidate"),
            DecisionStatus::Rejected => write!(f, "rejected"),
            DecisionStatus::Abeyance => write!(f, "abeyance"),
        }
    }
}

/// Output of the defense fixpoint: the three argument classes, the decision
/// categories, and per-decision scores for ranking.
#[derive(Clone, Debug)]
pub struct AcceptabilityResult {
    pub acceptable: BTreeSet<Node>,
    pub rejected: BTreeSet<Node>,
    pub abeyance: BTreeSet<Node>,
    /// Parallel to the instance decision list (minus skipped decisions):
    /// decision, status, best score over acceptable PRO arguments, best
    /// score over all PRO arguments.
    pub decisions: Vec<(Decision, DecisionStatus, Option<ScaleValue>, Option<ScaleValue>)>,
    /// Rounds taken by the fixpoint iteration.
    pub iterations: usize,
}

fn defended_by(graph: &ArgGraph, set: &BTreeSet<Node>, node: Node) -> bool {
    let level = graph.level(node);
    graph.attackers(node).iter().all(|&b| {
        if defends_itself(level, graph.belief_levels[b]) {
            return true;
        }
        // someone in the set must strongly undercut the attacker
        let attacker_level = graph.belief_levels[b];
        set.iter().any(|&v| match v {
            Node::Belief(i) => graph.undercuts(i, b) && graph.belief_levels[i] > attacker_level,
            Node::Pro(_) => false, // pro arguments are never edge sources
        })
    })
}

fn iterate_fixpoint(graph: &ArgGraph, seed: BTreeSet<Node>) -> (BTreeSet<Node>, usize) {
    let mut current = seed;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let next: BTreeSet<Node> = graph
            .nodes()
            .filter(|&n| defended_by(graph, &current, n))
            .collect();
        if next == current {
            return (current, iterations);
        }
        current = next;
    }
}

/// The least fixpoint of the defense operator, iterated from the empty set.
pub fn least_fixpoint_from_empty(graph: &ArgGraph) -> BTreeSet<Node> {
    iterate_fixpoint(graph, BTreeSet::new()).0
}

/// Computes the acceptable/rejected/abeyance classes and decision
/// categories for the instance's argumentation system.
pub fn acceptable_fixpoint(graph: &ArgGraph, inst: &Instance) -> AcceptabilityResult {
    // initial set: unattacked nodes and nodes defending themselves against
    // every attacker; this equals F(∅)
    let initial: BTreeSet<Node> = graph
        .nodes()
        .filter(|&n| {
            let level = graph.level(n);
            graph
                .attackers(n)
                .iter()
                .all(|&b| defends_itself(level, graph.belief_levels[b]))
        })
        .collect();
    let (acceptable, iterations) = iterate_fixpoint(graph, initial);

    let rejected: BTreeSet<Node> = graph
        .nodes()
        .filter(|&n| {
            !acceptable.contains(&n)
                && graph.attackers(n).iter().any(|&b| {
                    acceptable.contains(&Node::Belief(b))
                        && !defends_itself(graph.level(n), graph.belief_levels[b])
                })
        })
        .collect();
    let abeyance: BTreeSet<Node> = graph
        .nodes()
        .filter(|n| !acceptable.contains(n) && !rejected.contains(n))
        .collect();

    let mut decisions = Vec::new();
    for (di, d) in inst.decisions.iter().enumerate() {
        if graph.skipped_decisions.contains(d) {
            continue;
        }
        let mine: Vec<(usize, &StrengthPro)> = graph
            .pros
            .iter()
            .enumerate()
            .filter(|(_, (_, _, owner))| *owner == di)
            .map(|(i, (_, s, _))| (i, s))
            .collect();
        let acceptable_score = mine
            .iter()
            .filter(|(i, _)| acceptable.contains(&Node::Pro(*i)))
            .map(|(_, s)| s.rank())
            .max();
        let any_score = mine.iter().map(|(_, s)| s.rank()).max();
        let status = if acceptable_score.is_some() {
            DecisionStatus::Candidate
        } else if mine.iter().all(|(i, _)| rejected.contains(&Node::Pro(*i))) {
            DecisionStatus::Rejected
        } else {
            DecisionStatus::Abeyance
        };
        decisions.push((d.clone(), status, acceptable_score, any_score));
    }

    AcceptabilityResult { acceptable, rejected, abeyance, decisions, iterations }
}

/// Candidate decisions grouped by their best acceptable-argument score,
/// descending; non-candidates are listed separately, unranked.
pub fn rank_candidates(
    result: &AcceptabilityResult,
) -> (Vec<Vec<Decision>>, Vec<Decision>) {
    let mut scored: Vec<(ScaleValue, Decision)> = result
        .decisions
        .iter()
        .filter_map(|(d, status, score, _)| {
            (*status == DecisionStatus::Candidate).then(|| (score.unwrap(), d.clone()))
        })
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0));
    let mut groups: Vec<Vec<Decision>> = Vec::new();
    let mut last = None;
    for (v, d) in scored {
        if last == Some(v) {
            groups.last_mut().unwrap().push(d);
        } else {
            groups.push(vec![d]);
            last = Some(v);
        }
    }
    let excluded = result
        .decisions
        .iter()
        .filter(|(_, status, _, _)| *status != DecisionStatus::Candidate)
        .map(|(d, _, _, _)| d.clone())
        .collect();
    (groups, excluded)
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

    fn belief(graph: &ArgGraph, support: &[&str], conclusion: &str) -> Option<usize> {
        let sup: Vec<Formula> = support.iter().map(|s| f(s)).collect();
        let c = f(conclusion);
        graph
            .beliefs
            .iter()
            .position(|b| b.support == sup && b.conclusion == c)
    }

    #[test]
    fn conflict_belief_arguments() {
        let inst = fixtures::conflict();
        let args = enumerate_belief_args(&inst, &[f("~a")]).unwrap();
        assert_eq!(args.len(), 1);
        assert_eq!(args[0].support, vec![f("~a")]);
        let args_a = enumerate_belief_args(&inst, &[f("a")]).unwrap();
        assert_eq!(args_a.len(), 1);
        assert_eq!(args_a[0].support, vec![f("a")]);
    }

    #[test]
    fn tautology_has_empty_support_and_level_one() {
        let inst = fixtures::conflict();
        let taut = f("a | ~a");
        let args = enumerate_belief_args(&inst, &[taut.clone()]).unwrap();
        assert_eq!(args.len(), 1);
        assert!(args[0].support.is_empty());
        assert_eq!(belief_level(&args[0], &inst), ScaleValue::one());
    }

    #[test]
    fn direct_contradiction_undercuts_both_ways() {
        let inst = fixtures::conflict();
        let pos = BeliefArgument { support: vec![f("a")], conclusion: f("a") };
        let neg = BeliefArgument { support: vec![f("~a")], conclusion: f("~a") };
        assert!(undercuts(&pos, &neg, &inst).unwrap());
        assert!(undercuts(&neg, &pos, &inst).unwrap());
        let taut = BeliefArgument { support: vec![], conclusion: f("true") };
        assert!(!undercuts(&pos, &taut, &inst).unwrap());
    }

    #[test]
    fn belief_attacks_pro_via_support_and_consequence() {
        let inst = fixtures::conflict();
        let neg = BeliefArgument { support: vec![f("~a")], conclusion: f("~a") };
        let pro = ArgumentPro {
            support: vec![f("a"), f("(d & a) -> g")],
            consequences: vec![f("g")],
            decision: Decision::parse("d").unwrap(),
        };
        assert!(attacks(&neg, &pro, &inst).unwrap());
        let neg_goal = BeliefArgument { support: vec![f("~a")], conclusion: f("~g") };
        assert!(attacks(&neg_goal, &pro, &inst).unwrap());
        let empty_pro = ArgumentPro {
            support: vec![],
            consequences: vec![],
            decision: Decision::parse("~d").unwrap(),
        };
        assert!(!attacks(&neg, &empty_pro, &inst).unwrap());
    }

    #[test]
    fn self_defense_is_level_comparison() {
        assert!(defends_itself(sv("4/5"), sv("3/10")));
        assert!(!defends_itself(sv("3/10"), sv("4/5")));
        assert!(defends_itself(sv("1/2"), sv("1/2")));
    }

    #[test]
    fn conflict_fixture_classification() {
        let inst = fixtures::conflict();
        let graph = build_graph(&inst).unwrap();
        let result = acceptable_fixpoint(&graph, &inst);

        let pos = belief(&graph, &["a"], "a").expect("belief for a missing");
        let neg = belief(&graph, &["~a"], "~a").expect("belief for ~a missing");
        assert!(result.acceptable.contains(&Node::Belief(pos)));
        assert!(result.rejected.contains(&Node::Belief(neg)));

        let strong_pro = graph
            .pros
            .iter()
            .position(|(a, _, _)| a.support == vec![f("a"), f("(d & a) -> g")])
            .expect("pro argument via a missing");
        assert!(result.acceptable.contains(&Node::Pro(strong_pro)));

        let d = Decision::parse("d").unwrap();
        let not_d = Decision::parse("~d").unwrap();
        let status: Vec<_> = result
            .decisions
            .iter()
            .map(|(dd, s, acc, _)| (dd.clone(), *s, *acc))
            .collect();
        assert!(status.contains(&(d.clone(), DecisionStatus::Candidate, Some(sv("4/5")))));
        assert!(status.contains(&(not_d.clone(), DecisionStatus::Candidate, Some(ScaleValue::zero()))));

        let (groups, excluded) = rank_candidates(&result);
        assert_eq!(groups, vec![vec![d], vec![not_d]]);
        assert!(excluded.is_empty());
    }

    #[test]
    fn consistent_knowledge_accepts_everything() {
        let inst = fixtures::umbrella();
        let graph = build_graph(&inst).unwrap();
        let result = acceptable_fixpoint(&graph, &inst);
        assert!(result.rejected.is_empty());
        assert!(result.abeyance.is_empty());
        assert_eq!(result.acceptable.len(), graph.node_count());
        // ranking coincides with the plain pessimistic ranking
        let (groups, _) = rank_candidates(&result);
        assert_eq!(groups, crate::args::rank_pessimistic(&inst).unwrap());
    }

    #[test]
    fn equal_level_mutual_conflict_stays_acceptable() {
        let text = "decision_atoms: d\nkb:\na : 1/2\n~a : 1/2\ngoals:\ng : 1\ndecisions:\nd\n";
        let inst = load_instance(text).unwrap();
        let graph = build_graph(&inst).unwrap();
        let result = acceptable_fixpoint(&graph, &inst);
        let pos = belief(&graph, &["a"], "a").unwrap();
        let neg = belief(&graph, &["~a"], "~a").unwrap();
        assert!(result.acceptable.contains(&Node::Belief(pos)));
        assert!(result.acceptable.contains(&Node::Belief(neg)));
    }

    #[test]
    fn fixpoint_invariants_hold() {
        for inst in [fixtures::conflict(), fixtures::umbrella()] {
            let graph = build_graph(&inst).unwrap();
            let result = acceptable_fixpoint(&graph, &inst);
            // partition
            let mut all: BTreeSet<Node> = BTreeSet::new();
            all.extend(result.acceptable.iter());
            assert!(result.acceptable.is_disjoint(&result.rejected));
            all.extend(result.rejected.iter());
            all.extend(result.abeyance.iter());
            assert_eq!(all.len(), graph.node_count());
            // bounded iteration and agreement with the least fixpoint
            assert!(result.iterations <= graph.node_count().max(1) + 1);
            assert_eq!(result.acceptable, least_fixpoint_from_empty(&graph));
        }
    }

    #[test]
    fn zero_level_attacker_changes_nothing() {
        // `~a` at the bottom of the scale can never strongly undercut
        let base = "decision_atoms: d\nkb:\na : 4/5\n(d & a) -> g : 1\n\
                    goals:\ng : 1\ndecisions:\nd\n~d\n";
        let with_noise = "decision_atoms: d\nkb:\na : 4/5\n~a : 1/100\n(d & a) -> g : 1\n\
                          goals:\ng : 1\ndecisions:\nd\n~d\n";
        let inst1 = load_instance(base).unwrap();
        let inst2 = load_instance(with_noise).unwrap();
        let r1 = acceptable_fixpoint(&build_graph(&inst1).unwrap(), &inst1);
        let r2 = acceptable_fixpoint(&build_graph(&inst2).unwrap(), &inst2);
        let (g1, _) = rank_candidates(&r1);
        let (g2, _) = rank_candidates(&r2);
        assert_eq!(g1, g2);
    }
}
