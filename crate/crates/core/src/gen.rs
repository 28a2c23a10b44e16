//! Seeded random instance generation for differential testing and scaling
//! runs. Deterministic per seed: the same config always yields the same
//! instance file, byte for byte.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::bases::{load_instance, Instance};
use crate::error::{Error, Result};
use crate::scale::ScaleValue;

const RETRY_BOUND: usize = 200;

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub state_atoms: usize,
    pub decision_atoms: usize,
    pub kb_entries: usize,
    pub goal_entries: usize,
    pub decisions: usize,
    pub clause_len_max: usize,
    pub level_pool: Vec<ScaleValue>,
    pub seed: u64,
    pub require_consistent_k: bool,
    pub require_consistent_g: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            state_atoms: 5,
            decision_atoms: 1,
            kb_entries: 7,
            goal_entries: 2,
            decisions: 2,
            clause_len_max: 3,
            level_pool: ["1/5", "2/5", "3/5", "4/5", "1"]
                .iter()
                .map(|s| s.parse().unwrap())
                .collect(),
            seed: 0,
            require_consistent_k: false,
            require_consistent_g: false,
        }
    }
}

impl GenConfig {
    fn validate(&self) -> Result<()> {
        let counts_ok = self.state_atoms > 0
            && self.decision_atoms > 0
            && self.kb_entries > 0
            && self.goal_entries > 0
            && self.decisions > 0
            && self.clause_len_max > 0;
        if !counts_ok {
            return Err(Error::Scale("generator counts must be positive".into()));
        }
        let one = ScaleValue::one();
        let zero = ScaleValue::zero();
        if !self.level_pool.contains(&one) || self.level_pool.contains(&zero) {
            return Err(Error::Scale(
                "level pool must lie in (0,1] and contain 1".into(),
            ));
        }
        Ok(())
    }
}

fn atom_names(prefix: char, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn literal(rng: &mut ChaCha8Rng, atoms: &[String]) -> String {
    let a = atoms.choose(rng).unwrap();
    if rng.gen_bool(0.5) {
        format!("~{a}")
    } else {
        a.clone()
    }
}

/// A rule `l1 & ... & lk -> l` or a plain clause, with antecedents biased
/// to include decision atoms so decisions interact with the knowledge.
fn kb_formula(rng: &mut ChaCha8Rng, cfg: &GenConfig, state: &[String], dec: &[String]) -> String {
    if rng.gen_bool(0.3) {
        // a weighted fact over the state
        return literal(rng, state);
    }
    let len = rng.gen_range(1..=cfg.clause_len_max);
    let mut ante: Vec<String> = Vec::new();
    if rng.gen_bool(0.6) {
        ante.push(literal(rng, dec));
    }
    while ante.len() < len {
        ante.push(literal(rng, state));
    }
    format!("{} -> {}", ante.join(" & "), literal(rng, state))
}

fn decision_conjunction(rng: &mut ChaCha8Rng, dec: &[String]) -> String {
    let k = rng.gen_range(1..=dec.len());
    let mut picked: Vec<&String> = dec.choose_multiple(rng, k).collect();
    picked.sort();
    picked
        .iter()
        .map(|a| {
            if rng.gen_bool(0.5) {
                format!("~{a}")
            } else {
                (*a).clone()
            }
        })
        .collect::<Vec<_>>()
        .join(" & ")
}

fn render(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> String {
    let state = atom_names('s', cfg.state_atoms);
    let dec = atom_names('d', cfg.decision_atoms);

    let mut out = String::new();
    out.push_str(&format!("decision_atoms: {}\n", dec.join(" ")));

    out.push_str("kb:\n");
    for _ in 0..cfg.kb_entries {
        let w = cfg.level_pool.choose(rng).unwrap();
        out.push_str(&format!("{} : {}\n", kb_formula(rng, cfg, &state, &dec), w));
    }

    out.push_str("goals:\n");
    let mut seen_goals = Vec::new();
    for _ in 0..cfg.goal_entries {
        let mut g = literal(rng, &state);
        // duplicate goal formulas would be collapsed on load; keep distinct
        let mut guard = 0;
        while seen_goals.contains(&g) && guard < 50 {
            g = literal(rng, &state);
            guard += 1;
        }
        seen_goals.push(g.clone());
        let w = cfg.level_pool.choose(rng).unwrap();
        out.push_str(&format!("{g} : {w}\n"));
    }

    out.push_str("decisions:\n");
    let mut seen = Vec::new();
    for _ in 0..cfg.decisions {
        let mut d = decision_conjunction(rng, &dec);
        let mut guard = 0;
        while seen.contains(&d) && guard < 50 {
            d = decision_conjunction(rng, &dec);
            guard += 1;
        }
        seen.push(d.clone());
        out.push_str(&format!("{d}\n"));
    }
    out
}

/// Generates a random instance. Rejection-samples until the requested
/// consistency requirements hold, up to a bounded retry count.
pub fn generate(cfg: &GenConfig) -> Result<Instance> {
    let text = generate_text(cfg)?;
    load_instance(&text)
}

/// Same as [`generate`] but returns the instance file text, which is the
/// canonical deterministic artifact for a config.
pub fn generate_text(cfg: &GenConfig) -> Result<String> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..RETRY_BOUND {
        let text = render(&mut rng, cfg);
        let inst = load_instance(&text)?;
        if cfg.require_consistent_k && !inst.kb_consistent {
            continue;
        }
        if cfg.require_consistent_g && !inst.goals_consistent {
            continue;
        }
        return Ok(text);
    }
    Err(Error::GenerationExhausted(RETRY_BOUND))
}
