//! Command-line front end. [`run`] is the whole program minus process exit,
//! so tests can drive it with in-memory streams.
//!
//! Exit codes: 0 the command ran (whatever the verdict), 2 usage error,
//! 3 invalid input, 4 construction precondition unmet, 5 attempts exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::codec::{
    construct_rate_half, construct_rate_third, verify, CodecError, Construction, ScalarLinearCode,
    DEFAULT_MAX_ATTEMPTS,
};
use crate::corpus::engineered_feasible_problem;
use crate::feasibility::{analyze, check_rate_one};
use crate::linalg::{seeded_rng, FieldPrime, VectorGF};
use crate::oracle::{self, OracleError, MAX_LENGTH};
use crate::problem::{random_problem, Completeness, IndexCodingProblem, ProblemError};
use crate::structure::to_dot;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_ATTEMPTS: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "indexcode",
    version,
    about = "Analyze and build scalar linear index codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rate {
    #[value(name = "1")]
    One,
    #[value(name = "1/2")]
    Half,
    #[value(name = "1/3")]
    Third,
}

#[derive(Debug, Args)]
pub struct InputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Accept messages nobody demands.
    #[arg(long)]
    pub allow_undemanded: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate verdicts and structure of one or more problem files.
    Analyze {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        opts: InputOpts,
        /// Write the alignment graph and conflict hypergraph as Graphviz.
        #[arg(long)]
        emit_graph: Option<PathBuf>,
    },
    /// Build a random code for a feasible rate.
    Construct {
        input: PathBuf,
        #[command(flatten)]
        opts: InputOpts,
        #[arg(long, value_enum)]
        rate: Rate,
        #[arg(long, value_parser = parse_prime, default_value_t = FieldPrime::DEFAULT.p())]
        prime: u64,
        /// Generated and printed when omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
        /// Code file to write; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a code file against a problem.
    Verify {
        input: PathBuf,
        code: PathBuf,
        #[command(flatten)]
        opts: InputOpts,
    },
    /// Exhaustive minimum code length over small fields.
    Oracle {
        input: PathBuf,
        #[command(flatten)]
        opts: InputOpts,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        q: Vec<u64>,
        #[arg(long, default_value_t = MAX_LENGTH)]
        max_len: usize,
        /// Directory for witness code files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random problem.
    Gen {
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Probability that a receiver knows each other message.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Add receivers with one or two demands.
        #[arg(long)]
        groupcast: bool,
        /// Use the gadget family meeting the rate-1/3 sufficient condition.
        #[arg(long, conflicts_with_all = ["n", "density", "groupcast"])]
        engineered: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|e| format!("{e}"))?;
    FieldPrime::new(p).map(|f| f.p()).map_err(|e| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Problem { path: PathBuf, source: ProblemError },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Codec(CodecError::PreconditionUnmet { .. }) => EXIT_PRECONDITION,
            CliError::Codec(CodecError::AttemptsExhausted { .. }) => EXIT_ATTEMPTS,
            _ => EXIT_INVALID_INPUT,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_problem(path: &Path, opts: &InputOpts) -> Result<IndexCodingProblem, CliError> {
    let completeness = if opts.allow_undemanded {
        Completeness::AllowUndemanded
    } else {
        Completeness::Required
    };
    IndexCodingProblem::parse(&read(path)?, completeness).map_err(|source| CliError::Problem {
        path: path.to_owned(),
        source,
    })
}

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn resolve_seed(seed: Option<u64>, err: &mut dyn Write) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::thread_rng().gen();
        let _ = writeln!(err, "seed: {s}");
        s
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match command {
        Command::Analyze {
            inputs,
            opts,
            emit_graph,
        } => {
            if emit_graph.is_some() && inputs.len() > 1 {
                return Err(CliError::Usage("--emit-graph takes a single input".into()));
            }
            let mut reports = Vec::new();
            for path in &inputs {
                let p = load_problem(path, &opts)?;
                if let Some(g) = &emit_graph {
                    write_atomic(g, &to_dot(&p))?;
                }
                reports.push((path, analyze(&p)));
            }
            match opts.format {
                Format::Json if reports.len() == 1 => write!(out, "{}", to_json(&reports[0].1)),
                Format::Json => {
                    let all: Vec<_> = reports.iter().map(|(_, r)| r).collect();
                    write!(out, "{}", to_json(&all))
                }
                Format::Text => {
                    for (path, r) in &reports {
                        if inputs.len() > 1 {
                            writeln!(out, "== {} ==", path.display()).map_err(io)?;
                        }
                        write!(out, "{}", r.to_text()).map_err(io)?;
                    }
                    Ok(())
                }
            }
            .map_err(io)
        }
        Command::Construct {
            input,
            opts,
            rate,
            prime,
            seed,
            max_attempts,
            out: path,
        } => {
            let p = load_problem(&input, &opts)?;
            let f = FieldPrime::new(prime).expect("validated by the parser");
            let seed = resolve_seed(seed, err);
            let mut rng = seeded_rng(seed);
            let built = match rate {
                Rate::One => construct_rate_one(&p, f)?,
                Rate::Half => construct_rate_half(&p, f, &mut rng, max_attempts)?,
                Rate::Third => construct_rate_third(&p, f, &mut rng, max_attempts)?,
            };
            let code_json = built.code.to_json() + "\n";
            let summary = format!(
                "constructed length-{} code over GF({}) with seed {}; attempts_used: {}",
                built.code.length(),
                f.p(),
                seed,
                built.verification.attempts_used
            );
            match path {
                Some(path) => {
                    write_atomic(&path, &code_json)?;
                    match opts.format {
                        Format::Text => writeln!(out, "{summary}\nwrote {}", path.display()),
                        Format::Json => write!(
                            out,
                            "{}",
                            to_json(&serde_json::json!({
                                "seed": seed,
                                "prime": f.p(),
                                "attempts_used": built.verification.attempts_used,
                                "code_file": path,
                            }))
                        ),
                    }
                    .map_err(io)
                }
                None => {
                    write!(out, "{code_json}").map_err(io)?;
                    writeln!(err, "{summary}").map_err(io)
                }
            }
        }
        Command::Verify { input, code, opts } => {
            let p = load_problem(&input, &opts)?;
            let c = ScalarLinearCode::from_json(&read(&code)?)?;
            let v = verify(&p, &c)?;
            match opts.format {
                Format::Json => write!(out, "{}", to_json(&v)),
                Format::Text => {
                    let head = if v.ok { "OK" } else { "FAILED" };
                    let mut text = format!(
                        "{head} ({}/{} receivers)\n",
                        v.receivers_ok, v.receivers_total
                    );
                    for m in &v.zero_vectors {
                        text += &format!("  message {m} has the zero vector\n");
                    }
                    for viol in &v.violations {
                        text += &format!(
                            "  receiver {} cannot decode W{}\n",
                            viol.receiver, viol.message
                        );
                    }
                    write!(out, "{text}")
                }
            }
            .map_err(io)
        }
        Command::Oracle {
            input,
            opts,
            q,
            max_len,
            out: dir,
        } => {
            let p = load_problem(&input, &opts)?;
            let result = oracle::run(&p, &q, max_len)?;
            let mut witness_paths = Vec::new();
            if let Some(dir) = &dir {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.clone(),
                    source,
                })?;
                let stem = input
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                for fr in &result.fields {
                    if let Some(w) = &fr.witness {
                        let path = dir.join(format!("{stem}.q{}.code.json", fr.q));
                        write_atomic(&path, &(w.to_json() + "\n"))?;
                        witness_paths.push((fr.q, path));
                    }
                }
            }
            match opts.format {
                Format::Json => write!(out, "{}", to_json(&result)),
                Format::Text => {
                    let mut text = result.to_text();
                    for (q, path) in &witness_paths {
                        text += &format!("witness (q={q}): {}\n", path.display());
                    }
                    write!(out, "{text}")
                }
            }
            .map_err(io)
        }
        Command::Gen {
            n,
            density,
            groupcast,
            engineered,
            seed,
            out: path,
        } => {
            if !engineered && (n == 0 || !(0.0..=1.0).contains(&density)) {
                return Err(CliError::Usage(
                    "need --n >= 1 and --density in [0, 1]".into(),
                ));
            }
            let seed = resolve_seed(seed, err);
            let p = if engineered {
                engineered_feasible_problem(seed)
            } else {
                random_problem(n, density, !groupcast, seed)
            };
            let text = p.to_json() + "\n";
            match path {
                Some(path) => write_atomic(&path, &text),
                None => write!(out, "{text}").map_err(io),
            }
        }
    }
}

/// Length 1, every vector `(1)`: decodable exactly when nothing conflicts.
fn construct_rate_one(p: &IndexCodingProblem, f: FieldPrime) -> Result<Construction, CodecError> {
    let verdict = check_rate_one(p);
    if let Some(c) = verdict.conflict {
        return Err(CodecError::PreconditionUnmet {
            rate: "1",
            reason: format!("conflict {c}"),
        });
    }
    let code = ScalarLinearCode::new(f, vec![VectorGF::from(vec![1]); p.n()])?;
    let mut verification = verify(p, &code)?;
    verification.attempts_used = 1;
    Ok(Construction { code, verification })
}
