use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use argdec_core::check::{check_instance, CheckReport};
use argdec_core::error::Error;
use argdec_core::gen::{generate_text, GenConfig};
use argdec_core::report::{accept_report, evaluate_instance, to_json, DecisionReport, Mode};
use argdec_core::{load_instance, Decision, Instance};

#[derive(Parser)]
#[command(name = "argdec", about = "Possibilistic decision analysis with arguments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Pessimistic,
    Optimistic,
    Both,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Pessimistic => Mode::Pessimistic,
            CliMode::Optimistic => Mode::Optimistic,
            CliMode::Both => Mode::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every decision through all three routes
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: CliMode,
        #[arg(long)]
        json: bool,
    },
    /// Rank decisions under one criterion
    Rank {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "pessimistic")]
        mode: CliMode,
        #[arg(long)]
        json: bool,
    },
    /// Show the undominated arguments for and against one decision
    Explain {
        file: PathBuf,
        #[arg(long)]
        decision: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the acceptability pipeline (inconsistent-knowledge semantics)
    Accept {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the three routes on a file or a generated corpus
    Check {
        file: Option<PathBuf>,
        /// Generator spec, e.g. "seed=1,trials=500,stateAtoms=6,kbEntries=8,
        /// goalEntries=3,decisions=3,consistentK,consistentG"
        #[arg(long)]
        gen: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Generate a random instance file
    Gen {
        /// Generator spec, same syntax as `check --gen`
        spec: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;
const EXIT_DIFFERENTIAL: u8 = 5;

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::UnknownAtom(_) | Error::Vocab(_) | Error::Scale(_) => {
            EXIT_PARSE
        }
        Error::InfeasibleDecision(_) => EXIT_INFEASIBLE,
        _ => EXIT_PRECONDITION,
    }
}

fn load(path: &PathBuf) -> Result<Instance, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    load_instance(&text).map_err(|e| {
        eprintln!("error: {e}");
        exit_for(&e)
    })
}

fn emit(report: &DecisionReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&to_json(report)).unwrap());
    } else {
        print!("{report}");
    }
}

/// Non-parse failures after a successful load: precondition (3) unless
/// every decision is infeasible (4).
fn report_exit(inst: &Instance, report: &DecisionReport) -> u8 {
    if !inst.kb_consistent || !inst.goals_consistent {
        return 0; // accept pipeline handles this; eval marks routes omitted
    }
    if report.decisions.iter().all(|e| !e.feasible) {
        eprintln!("error: every decision is infeasible");
        return EXIT_INFEASIBLE;
    }
    0
}

fn parse_gen_spec(spec: &str) -> Result<(GenConfig, usize), String> {
    let mut cfg = GenConfig::default();
    let mut trials = 1usize;
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((key, value)) = part.split_once('=') {
            let v: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("bad value in `{part}`"))?;
            match key.trim() {
                "seed" => cfg.seed = v as u64,
                "trials" => trials = v,
                "stateAtoms" => cfg.state_atoms = v,
                "decisionAtoms" => cfg.decision_atoms = v,
                "kbEntries" => cfg.kb_entries = v,
                "goalEntries" => cfg.goal_entries = v,
                "decisions" => cfg.decisions = v,
                "clauseLenMax" => cfg.clause_len_max = v,
                other => return Err(format!("unknown generator key `{other}`")),
            }
        } else {
            match part {
                "consistentK" => cfg.require_consistent_k = true,
                "consistentG" => cfg.require_consistent_g = true,
                other => return Err(format!("unknown generator flag `{other}`")),
            }
        }
    }
    Ok((cfg, trials))
}

fn run_eval(file: PathBuf, mode: CliMode, json: bool) -> u8 {
    let inst = match load(&file) {
        Ok(i) => i,
        Err(code) => return code,
    };
    for w in &inst.warnings {
        eprintln!("warning: {w}");
    }
    match evaluate_instance(&inst, mode.into()) {
        Ok(report) => {
            emit(&report, json);
            let code = report_exit(&inst, &report);
            if !inst.kb_consistent || !inst.goals_consistent {
                eprintln!("warning: bases not normalized; utility routes omitted");
                return EXIT_PRECONDITION;
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn run_explain(file: PathBuf, decision: String, json: bool) -> u8 {
    let inst = match load(&file) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let d: Decision = match inst.find_decision(&decision) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PRECONDITION;
        }
    };
    let report = match evaluate_instance(&inst, Mode::Both) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let Some(entry) = report.decisions.iter().find(|e| e.decision == d) else {
        eprintln!("error: unknown decision {decision}");
        return EXIT_PRECONDITION;
    };
    if json {
        let one = DecisionReport {
            pipeline: report.pipeline.clone(),
            decisions: vec![entry.clone()],
            ranking: Vec::new(),
            notes: report.notes.clone(),
        };
        emit(&one, true);
        return 0;
    }
    println!("decision {}", entry.decision);
    // undominated arguments only: skip any argument strictly below another
    let pro: Vec<_> = entry
        .pro
        .iter()
        .filter(|(a, s)| {
            !entry.pro.iter().any(|(a2, s2)| {
                let strictly_stronger = (s2.level >= s.level && s2.weight > s.weight)
                    || (s2.level > s.level && s2.weight >= s.weight);
                let equal_but_broader = s2.level == s.level
                    && s2.weight == s.weight
                    && a2.consequences.len() > a.consequences.len()
                    && a.consequences.iter().all(|c| a2.consequences.contains(c));
                strictly_stronger || equal_but_broader
            })
        })
        .collect();
    let con: Vec<_> = entry
        .con
        .iter()
        .filter(|(_, w)| {
            !entry.con.iter().any(|(_, w2)| {
                (w2.level <= w.level && w2.weight < w.weight)
                    || (w2.level < w.level && w2.weight <= w.weight)
            })
        })
        .collect();
    for (a, s) in pro {
        println!("  pro {a} (level {}, weight {})", s.level, s.weight);
    }
    for (a, w) in con {
        println!("  con {a} (level {}, weight {})", w.level, w.weight);
    }
    0
}

fn run_accept(file: PathBuf, json: bool) -> u8 {
    let inst = match load(&file) {
        Ok(i) => i,
        Err(code) => return code,
    };
    match accept_report(&inst) {
        Ok((report, result, class_lines)) => {
            if json {
                let mut value = to_json(&report);
                value.as_object_mut().unwrap().insert(
                    "classes".into(),
                    serde_json::json!(class_lines),
                );
                value
                    .as_object_mut()
                    .unwrap()
                    .insert("iterations".into(), serde_json::json!(result.iterations));
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                print!("{report}");
                for line in &class_lines {
                    println!("{line}");
                }
                println!("fixpoint iterations: {}", result.iterations);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn run_check(file: Option<PathBuf>, gen: Option<String>, trials: usize) -> u8 {
    let mut total = CheckReport::default();
    let mut instances_run = 0usize;
    let mut failing: Option<String> = None;

    let mut run_one = |inst: &Instance, label: &str| -> Result<(), u8> {
        match check_instance(inst) {
            Ok(report) => {
                instances_run += 1;
                if !report.ok() && failing.is_none() {
                    failing = Some(inst.to_text());
                    for v in &report.violations {
                        eprintln!("violation [{label}]: {v}");
                    }
                }
                total.merge(report);
                Ok(())
            }
            Err(e) => {
                eprintln!("error [{label}]: {e}");
                Err(exit_for(&e))
            }
        }
    };

    if let Some(path) = &file {
        let inst = match load(path) {
            Ok(i) => i,
            Err(code) => return code,
        };
        if let Err(code) = run_one(&inst, &path.display().to_string()) {
            return code;
        }
    }
    if let Some(spec) = &gen {
        let (base, spec_trials) = match parse_gen_spec(spec) {
            Ok(x) => x,
            Err(msg) => {
                eprintln!("error: {msg}");
                return EXIT_PARSE;
            }
        };
        let n = if spec.contains("trials=") { spec_trials } else { trials };
        for i in 0..n {
            let cfg = GenConfig {
                seed: base.seed.wrapping_add(i as u64),
                require_consistent_k: true,
                require_consistent_g: true,
                ..base.clone()
            };
            let text = match generate_text(&cfg) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PRECONDITION;
                }
            };
            let inst = load_instance(&text).expect("generated instance must load");
            if let Err(code) = run_one(&inst, &format!("seed {}", cfg.seed)) {
                return code;
            }
        }
    }
    if file.is_none() && gen.is_none() {
        eprintln!("error: check needs a file or --gen");
        return EXIT_PARSE;
    }

    println!(
        "checked {} instance(s), {} decision(s): {} violation(s), {} flagged",
        instances_run,
        total.decisions_checked,
        total.violations.len(),
        total.flags.len()
    );
    for flag in &total.flags {
        println!("flagged: {flag}");
    }
    if let Some(text) = failing {
        let path = "argdec-check-failure.pdl";
        if fs::write(path, &text).is_ok() {
            eprintln!("failing instance written to {path} for replay");
        }
        return EXIT_DIFFERENTIAL;
    }
    0
}

fn run_gen(spec: String, output: Option<PathBuf>) -> u8 {
    let (cfg, _) = match parse_gen_spec(&spec) {
        Ok(x) => x,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_PARSE;
        }
    };
    match generate_text(&cfg) {
        Ok(text) => {
            if let Some(path) = output {
                if let Err(e) = fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_PRECONDITION;
                }
            } else {
                print!("{text}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_PRECONDITION
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Eval { file, mode, json } => run_eval(file, mode, json),
        Command::Rank { file, mode, json } => run_eval(file, mode, json),
        Command::Explain { file, decision, json } => run_explain(file, decision, json),
        Command::Accept { file, json } => run_accept(file, json),
        Command::Check { file, gen, trials } => run_check(file, gen, trials),
        Command::Gen { spec, output } => run_gen(spec, output),
    };
    ExitCode::from(code)
}
