use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gardenhose::randomized::{derandomize, exact_error, majority_error};
use gardenhose::search::{decode_sat, encode_sat, parse_model, VarMap};
use gardenhose::table::{format_input, parse_input};
use gardenhose::tm::{compile_with_layout, enumerate_boundary};
use gardenhose::{
    brute_force_gh, BoundsReport, Error, FamilySpec, FlowStep, ProtocolTree, RandomizedStrategy, SearchConfig,
    SearchOutcome, Side, Strategy, TruthTable, TuringMachine, Verdict,
};

#[derive(Parser)]
#[command(name = "gardenhose", version, about = "Garden-hose games: build, evaluate, verify, search and analyse")]
struct Cli {
    /// Worker threads for search, compilation and error analysis.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Xor,
    Eq,
    Ip,
    Maj,
    Generic,
    Protocol,
}

#[derive(Subcommand)]
enum Command {
    /// Builds a strategy from a named family.
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        /// Truth table for `generic`.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Protocol tree for `protocol`.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluates a strategy on one input pair.
    Eval {
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Prints one line per hop plus the exit.
        #[arg(long)]
        trace: bool,
    },
    /// Checks a strategy against a truth table on every defined cell.
    Verify {
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        table: PathBuf,
    },
    /// Exhaustive search for the least pipe count.
    Oracle {
        #[arg(long)]
        table: PathBuf,
        #[arg(long = "max-pipes")]
        max_pipes: usize,
        /// Writes the witness strategy when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes a DIMACS CNF and a `.varmap` sidecar next to it.
    SatEncode {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        pipes: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Turns a solver model back into a strategy.
    SatDecode {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        varmap: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compiles a reversible Turing machine into a strategy.
    CompileTm {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lower bounds from the truth table.
    Bounds {
        #[arg(long)]
        table: PathBuf,
    },
    /// Exact error of a randomized strategy.
    RandError {
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        table: PathBuf,
        /// Also reports the error of a majority vote over K runs.
        #[arg(long)]
        majority: Option<u64>,
    },
    /// Finds a seed whose strategy is correct everywhere.
    Derandomize {
        #[arg(long)]
        strategy: PathBuf,
        #[arg(long)]
        table: PathBuf,
    },
}

/// Exit status 1 (domain failure) or 2 (usage or format error).
enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

/// Report text and whether the command succeeded.
type Outcome = Result<(String, bool), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T, gardenhose::ParseError>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn same_n(what: &str, a: usize, b: usize) -> Result<(), Failure> {
    if a != b {
        return Err(Failure::Usage(format!("{what} has n={a} but the table has n={b}")));
    }
    Ok(())
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Alice => "alice",
        Side::Bob => "bob",
    }
}

fn build(family: Family, n: Option<usize>, table: Option<&Path>, tree: Option<&Path>, out: Option<&Path>) -> Outcome {
    let need_n = || n.ok_or_else(|| Failure::Usage("--n is required for this family".into()));
    let spec = match family {
        Family::Xor => FamilySpec::Xor(need_n()?),
        Family::Eq => FamilySpec::Eq(need_n()?),
        Family::Ip => FamilySpec::Ip(need_n()?),
        Family::Maj => FamilySpec::Maj(need_n()?),
        Family::Generic => {
            let path = table.ok_or_else(|| Failure::Usage("--table is required for generic".into()))?;
            FamilySpec::Generic(load(path, TruthTable::parse)?)
        }
        Family::Protocol => {
            let path = tree.ok_or_else(|| Failure::Usage("--tree is required for protocol".into()))?;
            FamilySpec::FromProtocol(load(path, ProtocolTree::parse)?)
        }
    };
    let strategy = spec.build()?;
    if let Some(n) = n {
        same_n("--n", n, strategy.n())?;
    }
    let mut report = format!("n: {}\npipes: {}\n", strategy.n(), strategy.pipes());
    match out {
        Some(path) => {
            write(path, &strategy.to_ghs())?;
            let _ = writeln!(report, "out: {}", path.display());
        }
        None => report.push_str(&strategy.to_ghs()),
    }
    Ok((report, true))
}

fn parse_bits(bits: &str, n: usize) -> Result<usize, Failure> {
    let (len, value) = parse_input(bits)?;
    if len != n {
        return Err(Failure::Usage(format!("input {bits:?} has {len} bits, the strategy needs {n}")));
    }
    Ok(value)
}

fn eval(strategy: &Path, x: &str, y: &str, trace: bool) -> Outcome {
    let st = load(strategy, Strategy::parse)?;
    let (x, y) = (parse_bits(x, st.n())?, parse_bits(y, st.n())?);
    let result = st.evaluate(x, y);
    let mut report = String::new();
    if trace {
        let mut flow = gardenhose::Flow::new(st.alice(x), st.bob(y));
        let mut hop = 0;
        loop {
            match flow.step() {
                FlowStep::Hop { side, from, to } => {
                    hop += 1;
                    let from = if from == 0 { "tap".to_string() } else { format!("{from}") };
                    let _ = writeln!(
                        report,
                        "hop {hop}: {} {from} -> pipe {to} -> {}",
                        side_name(side),
                        side_name(side.other())
                    );
                }
                FlowStep::Exit(side) => {
                    let at = flow.position();
                    let place = if at.id == 0 { "tap".to_string() } else { format!("pipe {}", at.id) };
                    let _ = writeln!(report, "exit: {} at {place} output {}", side_name(side), side.bit() as u8);
                    break;
                }
            }
        }
    } else {
        let _ = writeln!(report, "exit: {}", side_name(result.exit));
        let _ = writeln!(report, "output: {}", result.exit.bit() as u8);
        let _ = writeln!(report, "hops: {}", result.hops);
        let pipes: Vec<String> = result.pipes().iter().map(|p| p.to_string()).collect();
        let _ = writeln!(report, "pipes: {}", pipes.join(" "));
    }
    Ok((report, true))
}

fn verify(strategy: &Path, table: &Path) -> Outcome {
    let st = load(strategy, Strategy::parse)?;
    let table = load(table, TruthTable::parse)?;
    same_n("the strategy", st.n(), table.n())?;
    Ok(match st.verify(&table)? {
        Verdict::Ok => ("status: ok\n".to_string(), true),
        Verdict::Counterexample { x, y, got, want } => (
            format!(
                "status: counterexample\nx: {}\ny: {}\ngot: {}\nwant: {}\n",
                format_input(x, st.n()),
                format_input(y, st.n()),
                got.bit() as u8,
                want.bit() as u8
            ),
            false,
        ),
    })
}

fn oracle(table: &Path, max_pipes: usize, out: Option<&Path>) -> Outcome {
    let table = load(table, TruthTable::parse)?;
    let config = SearchConfig {
        s_max: max_pipes,
        ..SearchConfig::default()
    };
    let report = brute_force_gh(&table, &config)?;
    let mut text = report.to_string();
    if let (SearchOutcome::Exact { witness, .. }, Some(path)) = (&report.outcome, out) {
        write(path, &witness.to_ghs())?;
        let _ = writeln!(text, "out: {}", path.display());
    }
    Ok((text, report.s_min().is_some()))
}

fn sat_encode(table: &Path, pipes: usize, out: &Path) -> Outcome {
    let table = load(table, TruthTable::parse)?;
    if pipes == 0 {
        return Err(Failure::Usage("--pipes must be at least 1".into()));
    }
    let cnf = encode_sat(&table, pipes);
    let varmap_path = out.with_extension("varmap");
    write(out, &cnf.to_dimacs())?;
    write(&varmap_path, &cnf.varmap.to_text())?;
    Ok((
        format!(
            "variables: {}\nclauses: {}\ncnf: {}\nvarmap: {}\n",
            cnf.num_vars(),
            cnf.clauses.len(),
            out.display(),
            varmap_path.display()
        ),
        true,
    ))
}

/// True when the solver output carries an `s UNSATISFIABLE` status line.
fn reports_unsat(text: &str) -> bool {
    text.lines().any(|l| {
        let mut t = l.split_whitespace();
        t.next() == Some("s") && t.next().is_some_and(|s| s.starts_with("UNSAT"))
    })
}

fn sat_decode(model: &Path, varmap: &Path, out: &Path) -> Outcome {
    let text = read(model)?;
    if reports_unsat(&text) {
        return Ok(("status: unsat\n".to_string(), false));
    }
    let lits = parse_model(&text).map_err(|e| Failure::Usage(format!("{}:{e}", model.display())))?;
    let varmap = load(varmap, VarMap::parse)?;
    let st = decode_sat(&lits, &varmap)?;
    write(out, &st.to_ghs())?;
    Ok((
        format!("status: sat\nn: {}\npipes: {}\nout: {}\n", st.n(), st.pipes(), out.display()),
        true,
    ))
}

fn compile_tm(machine: &Path, n: usize, out: &Path) -> Outcome {
    let m = load(machine, TuringMachine::parse)?;
    let layout = enumerate_boundary(&m, n)?;
    let st = compile_with_layout(&m, &layout)?;
    write(out, &st.to_ghs())?;
    Ok((
        format!(
            "n: {n}\nboundary_alice: {}\nboundary_bob: {}\npipes: {}\nout: {}\n",
            layout.boundary(Side::Alice).count(),
            layout.boundary(Side::Bob).count(),
            st.pipes(),
            out.display()
        ),
        true,
    ))
}

fn bounds(table: &Path) -> Outcome {
    let table = load(table, TruthTable::parse)?;
    Ok((BoundsReport::compute(&table)?.to_string(), true))
}

fn rand_error(strategy: &Path, table: &Path, majority: Option<u64>) -> Outcome {
    let rs = load(strategy, RandomizedStrategy::parse)?;
    let table = load(table, TruthTable::parse)?;
    same_n("the strategy", rs.n(), table.n())?;
    let profile = exact_error(&rs, &table)?;
    let n = table.n();
    let mut report = format!("seed_bits: {}\nworst_case: {}\n", rs.seed_bits(), profile.worst_case());
    if let Some((x, y)) = profile.worst_cell() {
        let _ = writeln!(report, "worst_cell: {} {}", format_input(x, n), format_input(y, n));
    }
    if let Some(k) = majority {
        let maj = majority_error(&rs, &table, k)?;
        let _ = writeln!(report, "majority_k: {k}\nmajority_worst_case: {}", maj.worst_case());
    }
    Ok((report, true))
}

fn derandomize_cmd(strategy: &Path, table: &Path) -> Outcome {
    let rs = load(strategy, RandomizedStrategy::parse)?;
    let table = load(table, TruthTable::parse)?;
    same_n("the strategy", rs.n(), table.n())?;
    Ok(match derandomize(&rs, &table)? {
        Some(r) => (format!("status: found\nseed: {r}\n"), true),
        None => ("status: not_found\n".to_string(), false),
    })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Build {
            family,
            n,
            table,
            tree,
            out,
        } => build(family, n, table.as_deref(), tree.as_deref(), out.as_deref()),
        Command::Eval { strategy, x, y, trace } => eval(&strategy, &x, &y, trace),
        Command::Verify { strategy, table } => verify(&strategy, &table),
        Command::Oracle { table, max_pipes, out } => oracle(&table, max_pipes, out.as_deref()),
        Command::SatEncode { table, pipes, out } => sat_encode(&table, pipes, &out),
        Command::SatDecode { model, varmap, out } => sat_decode(&model, &varmap, &out),
        Command::CompileTm { machine, n, out } => compile_tm(&machine, n, &out),
        Command::Bounds { table } => bounds(&table),
        Command::RandError {
            strategy,
            table,
            majority,
        } => rand_error(&strategy, &table, majority),
        Command::Derandomize { strategy, table } => derandomize_cmd(&strategy, &table),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok((report, ok)) => {
            print!("{report}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
