use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use popctl::automata::{eval_distance, limitedness, witness_search, Limitedness};
use popctl::control::{decide_control, Budgets, Method};
use popctl::corpus::{run_corpus, write_corpus, CorpusConfig};
use popctl::flow::{reach_bfs, Configuration};
use popctl::gadgets::{gen_example, gen_gadget_k, gen_nfa_reduction, random_mdp};
use popctl::io::{
    read_json, to_json, AutomatonFile, MdpFile, NfaFile, SfpFile, VerdictFile,
};
use popctl::sfp::{decide_ideal_inclusion, decide_simple_sfp};
use popctl::wqo::DownSet;
use popctl::Error;

const EXIT_DISAGREEMENT: u8 = 1;
const EXIT_RESOURCE: u8 = 2;

#[derive(Parser)]
#[command(name = "popctl", version, about = "Population control for MDPs: generators, deciders and oracles")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Decide whether every population at the source can be driven to the target.
    DecideControl {
        mdp: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Fixpoint)]
        method: MethodArg,
        /// Largest population tried by the sweep.
        #[arg(long, default_value_t = 6)]
        max_n: u64,
        #[arg(long)]
        vj_budget: Option<usize>,
        #[arg(long)]
        arena_budget: Option<usize>,
    },
    /// Decide whether the source ideal lies in the SFP set of an instance.
    DecideSfp { sfp: PathBuf },
    /// Brute-force oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Decide limitedness of a distance automaton.
    Limitedness {
        automaton: PathBuf,
        /// Also search for a word whose value reaches this bound.
        #[arg(long)]
        witness: Option<u64>,
        #[arg(long, default_value_t = 4096)]
        max_len: usize,
    },
    /// Run the cross-validation harness over a fixture directory.
    Corpus {
        dir: PathBuf,
        /// Populate the directory with the built-in fixtures first.
        #[arg(long)]
        generate: bool,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// One of the three reference MDPs.
    Example { which: u32 },
    /// The synchronization gadget with `k` levels.
    Gadget { k: usize },
    /// The SFP instance encoding intersection emptiness of NFA files.
    NfaReduction {
        #[arg(required = true)]
        nfas: Vec<PathBuf>,
    },
    /// A random MDP drawn from `--seed`.
    RandomMdp {
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        actions: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Breadth-first reachability at a fixed population.
    Reach {
        sfp: PathBuf,
        /// Population: ω entries of the source ideal become `n`.
        #[arg(long)]
        n: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fixpoint,
    Sweep,
    Both,
}

enum Failure {
    Error(Error),
    Disagreement(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Outcome = Result<Value, Failure>;

fn answer(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn config_map(c: &Configuration, states: &[String]) -> BTreeMap<String, u64> {
    c.0.iter()
        .zip(states)
        .filter(|(&v, _)| v > 0)
        .map(|(&v, s)| (s.clone(), v))
        .collect()
}

fn generate(cmd: &GenCommand, seed: u64) -> Outcome {
    let value = |v: serde_json::Result<Value>| v.expect("instance serializes");
    Ok(match cmd {
        GenCommand::Example { which } => value(serde_json::to_value(MdpFile::from(&gen_example(*which)?))),
        GenCommand::Gadget { k } => value(serde_json::to_value(SfpFile::from(&gen_gadget_k(*k)?))),
        GenCommand::NfaReduction { nfas } => {
            let nfas = nfas
                .iter()
                .map(|p| read_json::<NfaFile>(p)?.to_nfa())
                .collect::<popctl::Result<Vec<_>>>()?;
            value(serde_json::to_value(SfpFile::from(&gen_nfa_reduction(&nfas)?)))
        }
        GenCommand::RandomMdp { states, actions } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            value(serde_json::to_value(MdpFile::from(&random_mdp(&mut rng, *states, *actions)?)))
        }
    })
}

fn decide_sfp(path: &Path) -> Outcome {
    let inst = read_json::<SfpFile>(path)?.to_instance()?;
    let (method, yes) = match inst.simple_source() {
        Ok(_) => ("simple-sfp", decide_simple_sfp(&inst)?),
        Err(_) => (
            "ideal-inclusion",
            decide_ideal_inclusion(inst.source(), inst.capacities(), inst.target())?,
        ),
    };
    Ok(json!({ "answer": answer(yes), "method": method }))
}

fn oracle_reach(path: &Path, n: u64) -> Outcome {
    let inst = read_json::<SfpFile>(path)?.to_instance()?;
    let c0 = Configuration(inst.source().instantiate(n));
    let target = DownSet::ideal(inst.target().clone());
    let witness = reach_bfs(&c0, inst.capacities(), &target)?;
    Ok(match witness {
        None => json!({ "reached": false, "n": n }),
        Some(w) => json!({
            "reached": true,
            "n": n,
            "word": w.capacities.iter().map(|&i| &inst.capacity_names()[i]).collect::<Vec<_>>(),
            "configurations": w
                .configurations
                .iter()
                .map(|c| config_map(c, inst.states()))
                .collect::<Vec<_>>(),
        }),
    })
}

fn run_limitedness(path: &Path, target: Option<u64>, max_len: usize) -> Outcome {
    let a = read_json::<AutomatonFile>(path)?.to_automaton()?;
    let verdict = limitedness(&a)?;
    let mut out = json!({ "bounded": matches!(verdict, Limitedness::Bounded) });
    if let Limitedness::Unbounded { pattern, .. } = &verdict {
        out["pattern"] = json!(pattern.display_with(a.alphabet()));
    }
    if let Some(t) = target {
        if let Some(w) = witness_search(&a, t, max_len)? {
            out["witness"] = json!({
                "word": w.iter().map(|&l| &a.alphabet()[l]).collect::<Vec<_>>(),
                "value": eval_distance(&a, &w)?,
            });
        }
    }
    Ok(out)
}

fn run_corpus_command(dir: &Path, generate: bool, seed: u64) -> Outcome {
    if generate {
        write_corpus(dir, seed)?;
    }
    let cfg = CorpusConfig {
        seed,
        ..CorpusConfig::new(dir)
    };
    let report = run_corpus(&cfg)?;
    let value = serde_json::to_value(&report).expect("report serializes");
    if report.disagreements() > 0 {
        return Err(Failure::Disagreement(to_json(&report)));
    }
    if report.resource_failures() > 0 {
        return Err(Failure::Resource(to_json(&report)));
    }
    Ok(value)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gen(g) => generate(g, cli.seed),
        Command::DecideControl {
            mdp,
            method,
            max_n,
            vj_budget,
            arena_budget,
        } => {
            let m = read_json::<MdpFile>(mdp)?.to_mdp()?;
            let mut budgets = Budgets::default();
            budgets.vj = vj_budget.unwrap_or(budgets.vj);
            budgets.arena = arena_budget.unwrap_or(budgets.arena);
            let method = match method {
                MethodArg::Fixpoint => Method::Fixpoint,
                MethodArg::Sweep => Method::Sweep { max_n: *max_n },
                MethodArg::Both => Method::Both { max_n: *max_n },
            };
            let verdict = decide_control(&m, method, &budgets)?;
            Ok(serde_json::to_value(VerdictFile::new(&verdict, &m)).expect("verdict serializes"))
        }
        Command::DecideSfp { sfp } => decide_sfp(sfp),
        Command::Oracle(OracleCommand::Reach { sfp, n }) => oracle_reach(sfp, *n),
        Command::Limitedness {
            automaton,
            witness,
            max_len,
        } => run_limitedness(automaton, *witness, *max_len),
        Command::Corpus { dir, generate } => run_corpus_command(dir, *generate, cli.seed),
    }
}

fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_DISAGREEMENT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(v) => match emit(&serde_json::to_string_pretty(&v).expect("json"), cli.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("popctl: {e}");
                ExitCode::from(EXIT_DISAGREEMENT)
            }
        },
        Err(Failure::Disagreement(report)) => {
            let _ = emit(&report, cli.out.as_deref());
            eprintln!("popctl: the corpus has disagreements");
            ExitCode::from(EXIT_DISAGREEMENT)
        }
        Err(Failure::Resource(report)) => {
            let _ = emit(&report, cli.out.as_deref());
            eprintln!("popctl: some corpus checks ran out of budget");
            ExitCode::from(EXIT_RESOURCE)
        }
        Err(Failure::Error(e)) => {
            eprintln!("popctl: {e}");
            ExitCode::from(if e.is_resource() { EXIT_RESOURCE } else { EXIT_DISAGREEMENT })
        }
    }
}
