use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use metice::crystal::{crystal_enumerate, gt_enumerate, node_weight, whittaker_value, Normalization};
use metice::lattice::{boundary_from_partition, partition_function, partition_functions_by_charge};
use metice::metaplectic::{covers_mod, covers_up_to, lattice_and_cosets, n_q, tau_table, CoverParams};
use metice::report::{self, Suite};
use metice::scalar::DEFAULT_PRIME;

// Write errors (a closed pipe) are ignored so that `| head` stays quiet.
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "metice", version, about = "Metaplectic ice: exact computation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// Lattice model computations.
    Ice {
        #[command(subcommand)]
        command: IceCommand,
    },
    /// The coset piece `I_{γ,λ}` and the value `z^{w_0 λ} I_{γ,λ}`.
    Whittaker(WhittakerArgs),
    /// Crystal nodes or Gelfand–Tsetlin patterns for a partition.
    Crystal(CrystalArgs),
    /// The form, lattice, coset representatives and scattering tables of a
    /// cover.
    Cover(CoverArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Appendix,
    Rtt,
    Rrr,
    Twist,
    Ybe,
    #[value(alias = "prop71")]
    Scattering,
    #[value(alias = "thm12")]
    Square,
    #[value(alias = "thm82")]
    Whittaker,
    Sample,
    Bijection,
    Train,
    Degeneration,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Symbolic,
    Modular,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Norm {
    Normalized,
    AsPrinted,
}

impl From<Norm> for Normalization {
    fn from(n: Norm) -> Self {
        match n {
            Norm::Normalized => Normalization::Normalized,
            Norm::AsPrinted => Normalization::AsPrinted,
        }
    }
}

#[derive(Args, Clone)]
struct CoverFlags {
    /// Cover degree.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<i64>,
}

impl CoverFlags {
    fn any(&self) -> bool {
        self.n.is_some() || self.b.is_some() || self.c.is_some()
    }

    /// Defaults `b = c = 1` when only `n` is given.
    fn params(&self, r: usize) -> Result<Option<CoverParams>, String> {
        if !self.any() {
            return Ok(None);
        }
        let n = self.n.ok_or("--b/--c require --n")?;
        CoverParams::new(n, self.b.unwrap_or(1), self.c.unwrap_or(1), r)
            .map(Some)
            .map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct VerifyArgs {
    suite: SuiteName,
    /// Modulus `n_Q`; only valid without cover parameters.
    #[arg(long)]
    nq: Option<u32>,
    #[command(flatten)]
    cover: CoverFlags,
    /// Rank for cover sweeps.
    #[arg(long, default_value_t = 3)]
    rank: usize,
    /// Largest cover degree in sweeps.
    #[arg(long, default_value_t = 3)]
    max_n: u32,
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<i64>>,
    #[arg(long)]
    columns: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Symbolic)]
    mode: Mode,
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random points per check in modular mode.
    #[arg(long, default_value_t = 24)]
    points: u32,
    #[arg(long, value_enum, default_value_t = Norm::Normalized)]
    normalization: Norm,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall time per case (reports are then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum IceCommand {
    /// The partition function, for one charge vector or all of them.
    Partition(PartitionArgs),
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<i64>,
    #[arg(long)]
    columns: Option<usize>,
    #[command(flatten)]
    cover: CoverFlags,
    #[arg(long)]
    nq: Option<u32>,
    /// Left boundary charges, bottom to top, in `1..=n_Q`.
    #[arg(long, value_delimiter = ',')]
    charges: Option<Vec<u32>>,
}

#[derive(Args)]
struct WhittakerArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<i64>,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    gamma: Vec<i64>,
    #[command(flatten)]
    cover: CoverFlags,
    #[arg(long, value_enum, default_value_t = Norm::Normalized)]
    normalization: Norm,
}

#[derive(Args)]
struct CrystalArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<i64>,
    #[arg(long, default_value_t = 1)]
    nq: u32,
    /// List Gelfand–Tsetlin patterns instead of nodes.
    #[arg(long)]
    patterns: bool,
    #[arg(long, value_enum, default_value_t = Norm::Normalized)]
    normalization: Norm,
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    cover: CoverFlags,
    #[arg(long, default_value_t = 2)]
    rank: usize,
}

struct Usage(String);

impl<E: ToString> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Ice { command: IceCommand::Partition(a) } => partition(a),
        Command::Whittaker(a) => whittaker(a),
        Command::Crystal(a) => crystal(a),
        Command::Cover(a) => cover(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn modulus(nq: Option<u32>, cover: &CoverFlags, default: u32) -> Result<u32, Usage> {
    match (nq, cover.any()) {
        (Some(_), true) => Err(Usage("--nq cannot be combined with --n/--b/--c".into())),
        (Some(0), _) => Err(Usage("--nq must be positive".into())),
        (Some(q), false) => Ok(q),
        (None, true) => {
            let n = cover.n.ok_or_else(|| Usage("--b/--c require --n".into()))?;
            if n == 0 {
                return Err(Usage("--n must be positive".into()));
            }
            Ok(n_q(n, cover.b.unwrap_or(1)))
        }
        (None, false) => Ok(default),
    }
}

fn verify(a: VerifyArgs) -> Result<bool, Usage> {
    let nq = modulus(a.nq, &a.cover, 2)?;
    let (prime, seed) = match a.mode {
        Mode::Symbolic => (a.prime.unwrap_or(DEFAULT_PRIME), a.seed.unwrap_or(0)),
        Mode::Modular => (
            a.prime.unwrap_or(DEFAULT_PRIME),
            a.seed.ok_or_else(|| Usage("--mode modular requires --seed".into()))?,
        ),
    };
    if a.mode == Mode::Modular && prime < 3 {
        return Err(Usage("--prime must be an odd prime".into()));
    }
    if a.rank < 2 {
        return Err(Usage("--rank must be at least 2".into()));
    }
    let t = a.timing;
    let norm: Normalization = a.normalization.into();
    let lambda = a.lambda.clone().unwrap_or_else(|| vec![2, 2, 0]);
    let columns = a.columns.unwrap_or_else(|| lambda.first().map(|l| *l as usize).unwrap_or(0) + lambda.len());
    let covers_for = |r: usize, sweep: fn(u32, usize) -> Vec<CoverParams>| -> Result<Vec<CoverParams>, Usage> {
        Ok(match a.cover.params(r).map_err(Usage)? {
            Some(p) => vec![p],
            None => sweep(a.max_n, r),
        })
    };

    let run = |name: SuiteName| -> Result<Vec<Suite>, Usage> {
        Ok(match name {
            SuiteName::Appendix => vec![report::suite_appendix(nq, t)],
            SuiteName::Rtt => vec![report::suite_rtt(nq, t)],
            SuiteName::Rrr => vec![match a.mode {
                Mode::Symbolic => report::suite_rrr_symbolic(nq, t),
                Mode::Modular => report::suite_rrr_modular(nq, a.points, prime, seed, t),
            }],
            SuiteName::Twist => vec![report::suite_twist(nq, t)],
            SuiteName::Ybe => vec![match a.mode {
                Mode::Symbolic => report::suite_graded_ybe(nq, t),
                Mode::Modular => report::suite_graded_ybe_modular(nq, a.points, prime, seed, t),
            }],
            SuiteName::Scattering => vec![report::suite_scattering(nq, t)],
            SuiteName::Square => vec![report::suite_intertwiner_square_covers(&covers_for(a.rank, covers_up_to)?, t)],
            SuiteName::Whittaker => {
                let covers = covers_for(lambda.len(), covers_mod)?;
                vec![report::suite_whittaker_covers(&lambda, columns, &covers, norm, t)]
            }
            SuiteName::Sample => vec![report::suite_sample_state(t)],
            SuiteName::Bijection => {
                let lambdas = match &a.lambda {
                    Some(l) => vec![l.clone()],
                    None => [2, 3].iter().flat_map(|&r| report::partitions_bounded(r, 5)).collect(),
                };
                vec![report::suite_bijection(&lambdas, t)]
            }
            SuiteName::Train => vec![report::suite_train(&lambda, nq, t)],
            SuiteName::Degeneration => vec![report::suite_degeneration(t)],
            SuiteName::All => unreachable!(),
        })
    };

    let names: Vec<SuiteName> = if a.suite == SuiteName::All {
        vec![
            SuiteName::Appendix,
            SuiteName::Rtt,
            SuiteName::Rrr,
            SuiteName::Twist,
            SuiteName::Ybe,
            SuiteName::Scattering,
            SuiteName::Square,
            SuiteName::Whittaker,
            SuiteName::Sample,
            SuiteName::Bijection,
            SuiteName::Train,
            SuiteName::Degeneration,
        ]
    } else {
        vec![a.suite]
    };
    let mut suites = Vec::new();
    for n in names {
        suites.extend(run(n)?);
    }
    let pass = suites.iter().all(|s| s.pass);
    match a.format {
        Format::Json => {
            let v = if suites.len() == 1 { json!(suites[0]) } else { json!({ "suites": suites, "pass": pass }) };
            print_json(&v);
        }
        Format::Csv => {
            for (k, s) in suites.iter().enumerate() {
                let csv = s.to_csv();
                // header once
                let body = if k == 0 { csv.as_str() } else { csv.split_once('\n').map(|x| x.1).unwrap_or("") };
                out!("{body}");
            }
        }
        Format::Text => {
            for s in &suites {
                outln!("{}", s.summary());
                for note in &s.notes {
                    outln!("  {note}");
                }
                for f in s.failures() {
                    outln!("  FAIL {}", f.case);
                }
            }
            outln!("{}", if pass { "PASS" } else { "FAIL" });
        }
    }
    if a.mode == Mode::Modular {
        for s in &suites {
            for note in s.notes.iter().filter(|n| n.contains("failure probability")) {
                eprintln!("{note}");
            }
        }
    }
    Ok(pass)
}

fn partition(a: PartitionArgs) -> Result<bool, Usage> {
    let nq = modulus(a.nq, &a.cover, 1)?;
    let r = a.lambda.len();
    let columns = a.columns.unwrap_or_else(|| a.lambda.first().map(|l| *l as usize).unwrap_or(0) + r);
    let sys = boundary_from_partition(&a.lambda, r, columns, nq)?;
    let out = match &a.charges {
        Some(c) => {
            let z = partition_function(&sys, Some(c))?;
            json!({ "lambda": a.lambda, "columns": columns, "nq": nq, "charges": c, "Z": z, "text": z.to_string() })
        }
        None => {
            let all: Vec<Value> = partition_functions_by_charge(&sys)
                .into_iter()
                .map(|(c, z)| json!({ "charges": c, "Z": z, "text": z.to_string() }))
                .collect();
            json!({ "lambda": a.lambda, "columns": columns, "nq": nq, "by_charge": all })
        }
    };
    print_json(&out);
    Ok(true)
}

fn whittaker(a: WhittakerArgs) -> Result<bool, Usage> {
    let r = a.lambda.len();
    if a.gamma.len() != r {
        return Err(Usage(format!("--gamma needs {r} entries")));
    }
    let params = a.cover.params(r).map_err(Usage)?.unwrap_or(CoverParams::dot(1, r));
    let (piece, value) = whittaker_value(&a.lambda, &a.gamma, &params, a.normalization.into())?;
    print_json(&json!({
        "lambda": a.lambda,
        "gamma": a.gamma,
        "params": params,
        "piece": piece,
        "piece_text": piece.to_string(),
        "value": value,
        "value_text": value.to_string(),
    }));
    Ok(true)
}

fn crystal(a: CrystalArgs) -> Result<bool, Usage> {
    if a.nq == 0 {
        return Err(Usage("--nq must be positive".into()));
    }
    let r = a.lambda.len();
    let v = if a.patterns {
        let pats: Vec<Value> = gt_enumerate(&a.lambda).iter().map(|t| json!(t.rows)).collect();
        json!({ "lambda": a.lambda, "patterns": pats })
    } else {
        let nodes: Vec<Value> = crystal_enumerate(&a.lambda, r)?
            .iter()
            .map(|node| {
                let mut j = node.to_json();
                j["weight"] = Value::String(node_weight(node, &a.lambda, a.nq, a.normalization.into()).to_string());
                j
            })
            .collect();
        json!({ "lambda": a.lambda, "nodes": nodes })
    };
    print_json(&v);
    Ok(true)
}

fn cover(a: CoverArgs) -> Result<bool, Usage> {
    let params = a
        .cover
        .params(a.rank)
        .map_err(Usage)?
        .ok_or_else(|| Usage("--n is required".into()))?;
    let mut v = lattice_and_cosets(params).to_json();
    let tables: Vec<Value> = (1..a.rank)
        .map(|i| tau_table(&params, i).unwrap_or_else(|e| json!({ "i": i, "error": e.to_string() })))
        .collect();
    v["tau"] = json!(tables);
    print_json(&v);
    Ok(true)
}
