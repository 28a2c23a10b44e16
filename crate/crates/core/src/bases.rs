//! Weighted knowledge and goal bases, decisions, level cuts, and the
//! line-oriented instance file format.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::{parse_formula, AtomKind, Formula, Vocabulary};
use crate::sat::Solver;
use crate::scale::ScaleValue;

/// A classical formula tagged with a scale value: a certainty level in the
/// knowledge base, a priority in the goal base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedFormula {
    pub formula: Formula,
    pub weight: ScaleValue,
}

/// Level cut shared by both bases: the classical formulas with weight >= alpha
/// (non-strict) or > alpha (strict).
fn cut_entries(entries: &[WeightedFormula], alpha: ScaleValue, strict: bool) -> Vec<Formula> {
    entries
        .iter()
        .filter(|e| if strict { e.weight > alpha } else { e.weight >= alpha })
        .map(|e| e.formula.clone())
        .collect()
}

/// Drops zero-weight entries and collapses duplicate formulas onto their
/// maximum weight, reporting each event as a warning line.
fn normalize_entries(
    raw: Vec<WeightedFormula>,
    what: &str,
    warnings: &mut Vec<String>,
) -> Vec<WeightedFormula> {
    let mut out: Vec<WeightedFormula> = Vec::new();
    for e in raw {
        if e.weight.is_zero() {
            warnings.push(format!("{what}: dropped zero-weight formula `{}`", e.formula));
            continue;
        }
        if let Some(prev) = out.iter_mut().find(|p| p.formula == e.formula) {
            warnings.push(format!(
                "{what}: duplicate formula `{}`, keeping the maximum weight",
                e.formula
            ));
            if e.weight > prev.weight {
                prev.weight = e.weight;
            }
            continue;
        }
        out.push(e);
    }
    out
}

/// The uncertain knowledge base K = {(k_j, rho_j)}.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct KnowledgeBase {
    entries: Vec<WeightedFormula>,
}

impl KnowledgeBase {
    pub fn new(raw: Vec<WeightedFormula>, warnings: &mut Vec<String>) -> Self {
        KnowledgeBase { entries: normalize_entries(raw, "kb", warnings) }
    }

    pub fn entries(&self) -> &[WeightedFormula] {
        &self.entries
    }

    /// The classical projection K*: formulas with weights erased.
    pub fn classical(&self) -> Vec<Formula> {
        self.entries.iter().map(|e| e.formula.clone()).collect()
    }

    pub fn cut(&self, alpha: ScaleValue, strict: bool) -> Vec<Formula> {
        cut_entries(&self.entries, alpha, strict)
    }

    /// K_d = K ∪ {(lit, 1) for each literal of d}. The do-nothing decision
    /// leaves the base unchanged.
    pub fn with_decision(&self, d: &Decision) -> KnowledgeBase {
        let mut entries = self.entries.clone();
        for lit in d.literal_formulas() {
            entries.push(WeightedFormula { formula: lit, weight: ScaleValue::one() });
        }
        KnowledgeBase { entries }
    }

    pub fn weight_of(&self, formula: &Formula) -> Option<ScaleValue> {
        self.entries.iter().find(|e| &e.formula == formula).map(|e| e.weight)
    }
}

/// The prioritized goal base G = {(g_i, lambda_i)}.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GoalBase {
    entries: Vec<WeightedFormula>,
}

impl GoalBase {
    pub fn new(raw: Vec<WeightedFormula>, warnings: &mut Vec<String>) -> Self {
        GoalBase { entries: normalize_entries(raw, "goals", warnings) }
    }

    pub fn entries(&self) -> &[WeightedFormula] {
        &self.entries
    }

    pub fn classical(&self) -> Vec<Formula> {
        self.entries.iter().map(|e| e.formula.clone()).collect()
    }

    pub fn cut(&self, alpha: ScaleValue, strict: bool) -> Vec<Formula> {
        cut_entries(&self.entries, alpha, strict)
    }

    pub fn priority_of(&self, formula: &Formula) -> Option<ScaleValue> {
        self.entries.iter().find(|e| &e.formula == formula).map(|e| e.weight)
    }
}

/// A conjunction of decision literals; the empty conjunction is the
/// do-nothing tautology.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Decision {
    literals: BTreeMap<String, bool>,
}

impl Decision {
    pub fn do_nothing() -> Self {
        Decision::default()
    }

    pub fn from_literals(lits: impl IntoIterator<Item = (String, bool)>) -> Result<Self> {
        let mut literals = BTreeMap::new();
        for (atom, sign) in lits {
            if let Some(&prev) = literals.get(&atom) {
                if prev != sign {
                    return Err(Error::Vocab(format!(
                        "decision contains both `{atom}` and `~{atom}`"
                    )));
                }
            }
            literals.insert(atom, sign);
        }
        Ok(Decision { literals })
    }

    /// Parses a `&`-separated conjunction of literals; `true` is do-nothing.
    pub fn parse(text: &str) -> Result<Self> {
        let f = parse_formula(text)?;
        let mut lits = Vec::new();
        flatten_literals(&f, &mut lits)?;
        Decision::from_literals(lits)
    }

    pub fn is_do_nothing(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn literals(&self) -> impl Iterator<Item = (&str, bool)> {
        self.literals.iter().map(|(a, s)| (a.as_str(), *s))
    }

    pub fn literal_formulas(&self) -> Vec<Formula> {
        self.literals
            .iter()
            .map(|(a, s)| {
                let atom = Formula::atom(a.clone());
                if *s {
                    atom
                } else {
                    Formula::not(atom)
                }
            })
            .collect()
    }

    /// The decision as a single formula (the constant `true` if do-nothing).
    pub fn to_formula(&self) -> Formula {
        let mut lits = self.literal_formulas().into_iter();
        match lits.next() {
            None => Formula::True,
            Some(first) => lits.fold(first, Formula::and),
        }
    }
}

fn flatten_literals(f: &Formula, out: &mut Vec<(String, bool)>) -> Result<()> {
    match f {
        Formula::True => Ok(()),
        Formula::Atom(a) => {
            out.push((a.clone(), true));
            Ok(())
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom(a) => {
                out.push((a.clone(), false));
                Ok(())
            }
            _ => Err(Error::Vocab(format!("`{f}` is not a conjunction of literals"))),
        },
        Formula::And(a, b) => {
            flatten_literals(a, out)?;
            flatten_literals(b, out)
        }
        _ => Err(Error::Vocab(format!("`{f}` is not a conjunction of literals"))),
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "true");
        }
        for (i, (atom, sign)) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            if !sign {
                write!(f, "~")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

/// A loaded problem instance: vocabulary, bases and candidate decisions,
/// plus the consistency status of the classical projections (which selects
/// the downstream pipeline).
#[derive(Clone, PartialEq, Debug)]
pub struct Instance {
    pub vocab: Arc<Vocabulary>,
    pub kb: KnowledgeBase,
    pub goals: GoalBase,
    pub decisions: Vec<Decision>,
    pub kb_consistent: bool,
    pub goals_consistent: bool,
    pub warnings: Vec<String>,
}

impl Instance {
    pub fn load(text: &str) -> Result<Instance> {
        load_instance(text)
    }

    /// Both classical projections consistent, i.e. pi and mu normalized.
    pub fn is_normalized(&self) -> bool {
        self.kb_consistent && self.goals_consistent
    }

    /// True iff K* together with the decision literals is consistent.
    pub fn feasible(&self, d: &Decision) -> Result<bool> {
        let mut phis = self.kb.classical();
        phis.extend(d.literal_formulas());
        Solver::default().is_consistent(&phis)
    }

    pub fn find_decision(&self, text: &str) -> Result<Decision> {
        let d = Decision::parse(text).map_err(|_| Error::UnknownDecision(text.to_string()))?;
        if self.decisions.contains(&d) {
            Ok(d)
        } else {
            Err(Error::UnknownDecision(text.to_string()))
        }
    }

    /// Serializes back to the instance file format. Loading the result
    /// reproduces this instance exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let decision_atoms: Vec<&str> = self.vocab.decision_atoms().collect();
        out.push_str("decision_atoms:");
        for a in &decision_atoms {
            out.push(' ');
            out.push_str(a);
        }
        out.push('\n');
        out.push_str("kb:\n");
        for e in self.kb.entries() {
            out.push_str(&format!("{} : {}\n", e.formula, e.weight));
        }
        out.push_str("goals:\n");
        for e in self.goals.entries() {
            out.push_str(&format!("{} : {}\n", e.formula, e.weight));
        }
        out.push_str("decisions:\n");
        for d in &self.decisions {
            out.push_str(&format!("{d}\n"));
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Kb,
    Goals,
    Decisions,
}

/// Parses the line-oriented instance format; `#` starts a comment.
pub fn load_instance(text: &str) -> Result<Instance> {
    let mut decision_atoms: Vec<String> = Vec::new();
    let mut kb_raw: Vec<(Formula, ScaleValue)> = Vec::new();
    let mut goal_raw: Vec<(Formula, ScaleValue)> = Vec::new();
    let mut decision_lines: Vec<Decision> = Vec::new();
    let mut section = Section::Preamble;

    let err_at = |line_no: usize, msg: String| Error::Parse { line: line_no, col: 1, msg };
    // formula parse errors get the file line number, keeping the column
    let relocate = |e: Error, line_no: usize| match e {
        Error::Parse { col, msg, .. } => Error::Parse { line: line_no, col, msg },
        other => other,
    };

    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "kb:" => {
                section = Section::Kb;
                continue;
            }
            "goals:" => {
                section = Section::Goals;
                continue;
            }
            "decisions:" => {
                section = Section::Decisions;
                continue;
            }
            _ => {}
        }
        if let Some(rest) = line.strip_prefix("decision_atoms:") {
            decision_atoms
                .extend(rest.split([' ', ',']).filter(|s| !s.is_empty()).map(String::from));
            continue;
        }
        match section {
            Section::Preamble => {
                return Err(err_at(line_no, format!("unexpected line before a section: `{line}`")));
            }
            Section::Kb | Section::Goals => {
                let (ftext, wtext) = line.rsplit_once(':').ok_or_else(|| {
                    err_at(line_no, "expected `formula : weight`".to_string())
                })?;
                let formula = parse_formula(ftext).map_err(|e| relocate(e, line_no))?;
                let weight: ScaleValue = wtext.parse()?;
                if section == Section::Kb {
                    kb_raw.push((formula, weight));
                } else {
                    goal_raw.push((formula, weight));
                }
            }
            Section::Decisions => {
                let d = Decision::parse(line).map_err(|e| relocate(e, line_no))?;
                decision_lines.push(d);
            }
        }
    }

    if decision_lines.is_empty() {
        return Err(Error::Vocab("instance declares no decisions".to_string()));
    }

    // vocabulary: declared decision atoms plus every atom that appears
    let mut seen = std::collections::BTreeSet::new();
    for (f, _) in kb_raw.iter().chain(goal_raw.iter()) {
        f.collect_atoms(&mut seen);
    }
    for d in &decision_lines {
        for (a, _) in d.literals() {
            seen.insert(a.to_string());
        }
    }
    let state: Vec<String> =
        seen.iter().filter(|a| !decision_atoms.contains(a)).cloned().collect();
    let vocab = Arc::new(Vocabulary::new(state, decision_atoms)?);

    // goals must stay within state atoms; decisions within decision atoms
    for (f, _) in &goal_raw {
        for a in f.atoms() {
            if vocab.kind(&a) == Some(AtomKind::Decision) {
                return Err(Error::Vocab(format!(
                    "goal `{f}` mentions the decision atom `{a}`"
                )));
            }
        }
    }
    for d in &decision_lines {
        for (a, _) in d.literals() {
            if vocab.kind(a) != Some(AtomKind::Decision) {
                return Err(Error::Vocab(format!(
                    "decision `{d}` uses `{a}`, which is not a declared decision atom"
                )));
            }
        }
    }

    let mut warnings = Vec::new();
    let kb = KnowledgeBase::new(
        kb_raw.into_iter().map(|(formula, weight)| WeightedFormula { formula, weight }).collect(),
        &mut warnings,
    );
    let goals = GoalBase::new(
        goal_raw.into_iter().map(|(formula, weight)| WeightedFormula { formula, weight }).collect(),
        &mut warnings,
    );

    let mut decisions = Vec::new();
    for d in decision_lines {
        if !decisions.contains(&d) {
            decisions.push(d);
        }
    }

    let solver = Solver::default();
    let kb_consistent = solver.is_consistent(&kb.classical())?;
    let goals_consistent = solver.is_consistent(&goals.classical())?;

    Ok(Instance { vocab, kb, goals, decisions, kb_consistent, goals_consistent, warnings })
}
