//! Consistency and entailment backends: an exhaustive truth-table oracle and
//! a DPLL solver over a Tseitin encoding. Both must agree; the truth table is
//! the reference, DPLL the main engine.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::{evaluate, Formula, Interpretation, Vocabulary};

/// Default bound on the number of atoms for exhaustive enumeration.
pub const DEFAULT_ENUM_BOUND: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Backend {
    TruthTable,
    Dpll,
}

/// Entailment/consistency engine with a configurable backend.
#[derive(Clone, Debug)]
pub struct Solver {
    pub backend: Backend,
    /// Atom-count bound for the truth-table backend.
    pub table_bound: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { backend: Backend::Dpll, table_bound: DEFAULT_ENUM_BOUND }
    }
}

impl Solver {
    pub fn truth_table() -> Self {
        Solver { backend: Backend::TruthTable, table_bound: DEFAULT_ENUM_BOUND }
    }

    /// True iff some total interpretation satisfies every formula.
    pub fn is_consistent(&self, phis: &[Formula]) -> Result<bool> {
        match self.backend {
            Backend::Dpll => Ok(dpll_consistent(phis)),
            Backend::TruthTable => table_consistent(phis, self.table_bound),
        }
    }

    /// True iff `phis ∪ {¬goal}` is inconsistent.
    pub fn entails(&self, phis: &[Formula], goal: &Formula) -> Result<bool> {
        let mut with_neg: Vec<Formula> = phis.to_vec();
        with_neg.push(goal.negated());
        Ok(!self.is_consistent(&with_neg)?)
    }
}

fn free_atoms(phis: &[Formula]) -> Vec<String> {
    let mut set = BTreeSet::new();
    for f in phis {
        f.collect_atoms(&mut set);
    }
    set.into_iter().collect()
}

fn table_consistent(phis: &[Formula], bound: usize) -> Result<bool> {
    let atoms = free_atoms(phis);
    if atoms.len() > bound {
        return Err(Error::BackendLimit(format!(
            "{} atoms exceed the truth-table bound of {bound}",
            atoms.len()
        )));
    }
    let vocab = Arc::new(Vocabulary::new(atoms, vec![])?);
    let n = vocab.len();
    for idx in 0..(1u64 << n) {
        let omega = Interpretation::from_index(&vocab, idx);
        if phis.iter().all(|f| evaluate(&omega, f)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The satisfying total interpretations of `phis` over `vocab`, in canonical
/// (lexicographic, false < true) order.
pub fn models(
    phis: &[Formula],
    vocab: &Arc<Vocabulary>,
    bound: usize,
) -> Result<Vec<Interpretation>> {
    if vocab.len() > bound {
        return Err(Error::BackendLimit(format!(
            "{} atoms exceed the enumeration bound of {bound}",
            vocab.len()
        )));
    }
    for f in phis {
        for a in f.atoms() {
            if !vocab.contains(&a) {
                return Err(Error::UnknownAtom(a));
            }
        }
    }
    let n = vocab.len();
    let mut out = Vec::new();
    for idx in 0..(1u64 << n) {
        let omega = Interpretation::from_index(vocab, idx);
        if phis.iter().all(|f| evaluate(&omega, f)) {
            out.push(omega);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// DPLL backend
// ---------------------------------------------------------------------------

/// Constant-folds a formula; the result either contains no constants or is a
/// bare constant. Keeps the Tseitin encoding constant-free.
fn simplify(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(x) => match simplify(x) {
            True => False,
            False => True,
            s => Formula::not(s),
        },
        And(a, b) => match (simplify(a), simplify(b)) {
            (False, _) | (_, False) => False,
            (True, s) | (s, True) => s,
            (sa, sb) => Formula::and(sa, sb),
        },
        Or(a, b) => match (simplify(a), simplify(b)) {
            (True, _) | (_, True) => True,
            (False, s) | (s, False) => s,
            (sa, sb) => Formula::or(sa, sb),
        },
        Implies(a, b) => match (simplify(a), simplify(b)) {
            (False, _) | (_, True) => True,
            (True, s) => s,
            (sa, False) => Formula::not(sa),
            (sa, sb) => Formula::implies(sa, sb),
        },
        Iff(a, b) => match (simplify(a), simplify(b)) {
            (True, s) | (s, True) => s,
            (False, s) | (s, False) => match s {
                True => False,
                False => True,
                s => Formula::not(s),
            },
            (sa, sb) => Formula::iff(sa, sb),
        },
    }
}

/// Tseitin CNF builder. Variables are 1-based; auxiliary variables for inner
/// connectives never escape this module.
struct CnfBuilder {
    clauses: Vec<Vec<i32>>,
    next_var: i32,
    atom_vars: HashMap<String, i32>,
}

impl CnfBuilder {
    fn new() -> Self {
        CnfBuilder { clauses: Vec::new(), next_var: 1, atom_vars: HashMap::new() }
    }

    fn fresh(&mut self) -> i32 {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    fn atom_var(&mut self, name: &str) -> i32 {
        if let Some(&v) = self.atom_vars.get(name) {
            return v;
        }
        let v = self.fresh();
        self.atom_vars.insert(name.to_string(), v);
        v
    }

    /// Returns a literal equivalent to the (constant-free) formula.
    fn encode(&mut self, f: &Formula) -> i32 {
        use Formula::*;
        match f {
            True | False => unreachable!("constants are folded before encoding"),
            Atom(a) => self.atom_var(a),
            Not(x) => -self.encode(x),
            And(a, b) => {
                let (la, lb) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, la]);
                self.clauses.push(vec![-v, lb]);
                self.clauses.push(vec![v, -la, -lb]);
                v
            }
            Or(a, b) => {
                let (la, lb) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, la, lb]);
                self.clauses.push(vec![v, -la]);
                self.clauses.push(vec![v, -lb]);
                v
            }
            Implies(a, b) => {
                let (la, lb) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, -la, lb]);
                self.clauses.push(vec![v, la]);
                self.clauses.push(vec![v, -lb]);
                v
            }
            Iff(a, b) => {
                let (la, lb) = (self.encode(a), self.encode(b));
                let v = self.fresh();
                self.clauses.push(vec![-v, -la, lb]);
                self.clauses.push(vec![-v, la, -lb]);
                self.clauses.push(vec![v, la, lb]);
                self.clauses.push(vec![v, -la, -lb]);
                v
            }
        }
    }
}

fn dpll_consistent(phis: &[Formula]) -> bool {
    let mut builder = CnfBuilder::new();
    for f in phis {
        match simplify(f) {
            Formula::True => continue,
            Formula::False => return false,
            s => {
                let root = builder.encode(&s);
                builder.clauses.push(vec![root]);
            }
        }
    }
    let n_vars = (builder.next_var - 1) as usize;
    let mut assign = vec![None; n_vars + 1];
    dpll(&builder.clauses, &mut assign)
}

fn lit_value(assign: &[Option<bool>], lit: i32) -> Option<bool> {
    assign[lit.unsigned_abs() as usize].map(|v| if lit > 0 { v } else { !v })
}

/// Recursive DPLL with unit propagation.
fn dpll(clauses: &[Vec<i32>], assign: &mut Vec<Option<bool>>) -> bool {
    // unit propagation to fixpoint
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut unassigned: Option<i32> = None;
            let mut n_unassigned = 0;
            let mut satisfied = false;
            for &lit in clause {
                match lit_value(assign, lit) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        n_unassigned += 1;
                        unassigned = Some(lit);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match n_unassigned {
                0 => return false,
                1 => {
                    let lit = unassigned.unwrap();
                    assign[lit.unsigned_abs() as usize] = Some(lit > 0);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    // pick a branching variable from some unsatisfied clause
    let mut branch: Option<i32> = None;
    'outer: for clause in clauses {
        let mut satisfied = false;
        let mut first_unassigned = None;
        for &lit in clause {
            match lit_value(assign, lit) {
                Some(true) => {
                    satisfied = true;
                    break;
                }
                Some(false) => {}
                None => {
                    if first_unassigned.is_none() {
                        first_unassigned = Some(lit);
                    }
                }
            }
        }
        if !satisfied {
            if let Some(lit) = first_unassigned {
                branch = Some(lit);
                break 'outer;
            }
        }
    }
    let Some(lit) = branch else {
        return true; // every clause satisfied
    };
    let var = lit.unsigned_abs() as usize;
    for value in [lit > 0, lit <= 0] {
        let mut trial = assign.clone();
        trial[var] = Some(value);
        if dpll(clauses, &mut trial) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Model sets: bitsets over the 2^n interpretations of a vocabulary. These
// back the subset-enumeration machinery of the argumentation modules.
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct ModelSet {
    words: Vec<u64>,
    nbits: usize,
}

impl ModelSet {
    pub(crate) fn full(nbits: usize) -> Self {
        let n_words = nbits.div_ceil(64);
        let mut words = vec![u64::MAX; n_words];
        let tail = nbits % 64;
        if tail != 0 {
            *words.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        ModelSet { words, nbits }
    }

    pub(crate) fn of_formula(phi: &Formula, vocab: &Arc<Vocabulary>) -> Result<Self> {
        let n = vocab.len();
        if n > DEFAULT_ENUM_BOUND {
            return Err(Error::EnumerationLimit(format!(
                "{n} atoms exceed the model-set bound of {DEFAULT_ENUM_BOUND}"
            )));
        }
        let nbits = 1usize << n;
        let mut set = ModelSet { words: vec![0; nbits.div_ceil(64)], nbits };
        for idx in 0..nbits as u64 {
            let omega = Interpretation::from_index(vocab, idx);
            if evaluate(&omega, phi) {
                set.words[(idx / 64) as usize] |= 1 << (idx % 64);
            }
        }
        Ok(set)
    }

    pub(crate) fn intersect_with(&mut self, other: &ModelSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub(crate) fn intersection(&self, other: &ModelSet) -> ModelSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn is_subset_of(&self, other: &ModelSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).all(|(&w, &o)| w & !o == 0)
    }

    /// True iff `self` is exactly the complement of `other`, i.e. the two
    /// formulas are each other's negation up to logical equivalence.
    pub(crate) fn is_complement_of(&self, other: &ModelSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        let tail = self.nbits % 64;
        let last = self.words.len() - 1;
        self.words.iter().zip(&other.words).enumerate().all(|(i, (&w, &o))| {
            let mask = if i == last && tail != 0 { (1u64 << tail) - 1 } else { u64::MAX };
            (w ^ o) & mask == mask
        })
    }
}
