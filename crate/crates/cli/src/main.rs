use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use bifixlab::experiments::{atoms_report, check_report, run_experiment, semigroup_report, Experiment};
use bifixlab::ops::{self, BooleanKind};
use bifixlab::report::Report;
use bifixlab::witnesses::{self, Family, WitnessSpec};
use bifixlab::{export_dot, parse_dfa, serialize_dfa, state_complexity, Dfa, Limits};

/// Rough bytes per stored state or semigroup element, used to turn
/// BIFIXLAB_MAX_MEM_MB into caps.
const BYTES_PER_ITEM: u64 = 64;

#[derive(Parser)]
#[command(name = "bifixlab", version)]
#[command(about = "Complexity measures and witnesses for bifix-free regular languages")]
struct Cli {
    /// Emit reports as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Cap on states built by subset and product constructions
    #[arg(long, global = true, default_value_t = 1 << 20)]
    max_states: usize,

    /// Cap on transition semigroup elements
    #[arg(long, global = true, default_value_t = 5_000_000)]
    max_elements: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a witness DFA
    Witness {
        /// unary | ternary | ternary-dialect | wstream | atoms | revmagic | random
        family: Family,
        #[arg(short = 'n')]
        n: usize,
        /// Target reversal complexity (revmagic)
        #[arg(long)]
        alpha: Option<u64>,
        /// Alphabet size (random)
        #[arg(long)]
        letters: Option<usize>,
        /// Seed (random)
        #[arg(long)]
        seed: Option<u64>,
        /// Write to FILE instead of stdout
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Minimality, freeness and structure of a DFA
    Check { file: PathBuf },
    /// Apply an operation: union|inter|diff|symdiff|concat LHS RHS, or star|reverse FILE
    Op {
        operation: String,
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Transition semigroup of the minimal DFA
    Semigroup {
        file: PathBuf,
        /// Count elements by type
        #[arg(long)]
        classify: bool,
        /// List colliding and focused pairs
        #[arg(long)]
        pairs: bool,
    },
    /// Atoms and their complexities
    Atoms { file: PathBuf },
    /// Permute or delete letters, e.g. --map a=b,b=a,c=-
    Dialect {
        file: PathBuf,
        #[arg(long)]
        map: String,
    },
    /// Reproduce a table of complexities
    Table {
        #[arg(value_enum)]
        table: Table,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Check a family of results
    Verify {
        #[arg(value_enum)]
        what: Verify,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graphviz rendering of a DFA
    ExportDot { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Ops,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    Syntactic,
    Atoms,
    Revmagic,
    Product,
    Star,
}

fn limits(cli: &Cli) -> anyhow::Result<Limits> {
    let mut limits = Limits {
        max_states: cli.max_states,
        max_elements: cli.max_elements,
    };
    if let Ok(raw) = std::env::var("BIFIXLAB_MAX_MEM_MB") {
        let mb: u64 = raw
            .trim()
            .parse()
            .with_context(|| format!("BIFIXLAB_MAX_MEM_MB must be a whole number of megabytes, got {raw:?}"))?;
        let items = usize::try_from(mb.saturating_mul(1 << 20) / BYTES_PER_ITEM).unwrap_or(usize::MAX);
        limits.max_states = limits.max_states.min(items);
        limits.max_elements = limits.max_elements.min(items);
    }
    Ok(limits)
}

fn read_dfa(path: &Path) -> anyhow::Result<Dfa> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?
    };
    parse_dfa(&text).with_context(|| format!("{}", path.display()))
}

/// `a=b,b=a,c=-`: `a` takes the action of `b`, `c` is deleted, letters not
/// mentioned keep their own action.
fn parse_map(d: &Dfa, spec: &str) -> anyhow::Result<BTreeMap<String, String>> {
    let mut mapping: BTreeMap<String, String> = d.alphabet().iter().map(|a| (a.clone(), a.clone())).collect();
    let mut mentioned = Vec::new();
    for entry in spec.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (from, to) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("map entry {entry:?} is not of the form x=y or x=-"))?;
        let (from, to) = (from.trim(), to.trim());
        if mentioned.contains(&from) {
            bail!("letter {from:?} is mapped twice");
        }
        mentioned.push(from);
        if d.symbol_index(from).is_none() {
            bail!("unknown letter {from:?}");
        }
        if to == "-" {
            mapping.remove(from);
        } else {
            mapping.insert(from.to_string(), to.to_string());
        }
    }
    Ok(mapping)
}

enum Output {
    Text(String),
    Report(Report),
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let limits = limits(cli)?;
    Ok(match &cli.command {
        Command::Witness {
            family,
            n,
            alpha,
            letters,
            seed,
            output,
        } => {
            let spec = WitnessSpec {
                family: *family,
                n: *n,
                alpha: *alpha,
                letters: *letters,
                seed: *seed,
            };
            let text = serialize_dfa(&spec.build()?);
            match output {
                Some(path) => {
                    fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
                    Output::Text(String::new())
                }
                None => Output::Text(text),
            }
        }
        Command::Check { file } => Output::Report(check_report(&read_dfa(file)?)),
        Command::Op { operation, files } => {
            let result = match (operation.as_str(), files.as_slice()) {
                ("star", [f]) => ops::star_with(&read_dfa(f)?, &limits)?,
                ("reverse", [f]) => ops::reverse_with(&read_dfa(f)?, &limits)?,
                ("concat", [l, r]) => ops::concat_with(&read_dfa(l)?, &read_dfa(r)?, &limits)?,
                ("star" | "reverse", _) => bail!("{operation} takes one DFA"),
                (other, [l, r]) => {
                    let kind: BooleanKind = other.parse()?;
                    ops::boolean_with(&read_dfa(l)?, &read_dfa(r)?, kind, &limits)?
                }
                (_, _) => bail!("{operation} takes two DFAs"),
            };
            if cli.json {
                let value = serde_json::json!({
                    "operation": operation,
                    "state_complexity": state_complexity(&result),
                    "dfa": serialize_dfa(&result),
                });
                Output::Text(serde_json::to_string_pretty(&value)? + "\n")
            } else {
                Output::Text(serialize_dfa(&result))
            }
        }
        Command::Semigroup { file, classify, pairs } => {
            Output::Report(semigroup_report(&read_dfa(file)?, *classify, *pairs, &limits)?)
        }
        Command::Atoms { file } => Output::Report(atoms_report(&read_dfa(file)?, &limits)?),
        Command::Dialect { file, map } => {
            let d = read_dfa(file)?;
            let mapping = parse_map(&d, map)?;
            Output::Text(serialize_dfa(&witnesses::dialect(&d, &mapping)?))
        }
        Command::Table {
            table: Table::Ops,
            m,
            n,
        } => Output::Report(run_experiment(&Experiment::TableOps { m: *m, n: *n }, &limits)?),
        Command::Verify { what, n, trials, seed } => {
            let (n, trials, seed) = (*n, *trials, *seed);
            let exp = match what {
                Verify::Syntactic => Experiment::VerifySyntactic { n },
                Verify::Atoms => Experiment::VerifyAtoms { n },
                Verify::Revmagic => Experiment::VerifyRevmagic { n },
                Verify::Product => Experiment::VerifyProduct { max_n: n, trials, seed },
                Verify::Star => Experiment::VerifyStar { max_n: n, trials, seed },
            };
            Output::Report(run_experiment(&exp, &limits)?)
        }
        Command::ExportDot { file } => Output::Text(export_dot(&read_dfa(file)?)),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let (text, pass) = match out {
        Output::Text(t) => (t, true),
        Output::Report(r) if cli.json => (r.to_json(), r.pass),
        Output::Report(r) => (r.render_text(), r.pass),
    };
    let mut stdout = io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
