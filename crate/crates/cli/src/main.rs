use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gcc_codec::code::CodeSpec;
use gcc_codec::concat::{DecodeOptions, ErasurePattern};
use gcc_codec::config::{Algorithm, CodeConfig, Codec};
use gcc_codec::galois::{FieldSpec, Symbol};
use gcc_codec::gmd::GmdMode;
use gcc_codec::mpc::nsc_summary;
use gcc_codec::sim::{self, ExperimentConfig};
use gcc_codec::{selftest, CodecError, Matrix};
use serde_json::{json, Value};

const EXIT_DECODE_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

/// Encode, decode and simulate concatenated, generalized concatenated and
/// matrix-product codes.
#[derive(Parser)]
#[command(name = "gcc-codec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// JSON arguments are read inline when they start with `[` or `{`, and from
/// a file otherwise.
#[derive(Subcommand)]
enum Command {
    /// Encode one message per level (GCC, MPC) or per column (concatenated code).
    Encode {
        #[arg(long)]
        spec: String,
        /// JSON list of messages, e.g. `[[1,2,3],[4]]`.
        #[arg(long)]
        msg: String,
    },
    /// Decode a received word given as a JSON list of rows.
    Decode {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        word: String,
        /// JSON list with the erased positions of each row.
        #[arg(long)]
        erasures: Option<String>,
        #[arg(long, value_enum, default_value = "upto")]
        mode: Mode,
        /// Inner decoding radius beyond half the minimum distance.
        #[arg(long)]
        radius: Option<usize>,
        /// Restart the GMD trials of a column where the previous column succeeded.
        #[arg(long)]
        carry_over: bool,
        /// Multistage decoder for GCC and MPC codes.
        #[arg(long, value_enum)]
        algorithm: Option<AlgorithmArg>,
        /// Print the per-round decoder report.
        #[arg(long)]
        report: bool,
    },
    /// Run a channel simulation and write JSON lines statistics.
    Simulate {
        #[arg(long)]
        config: String,
    },
    /// Check whether a matrix is non-singular by columns and triangular.
    NscCheck {
        /// `{"field": {...}, "B": [[...]], "outer_distances": [...]}`, or
        /// `outers` with code descriptions instead of `outer_distances`.
        #[arg(long)]
        matrix: String,
    },
    /// Print length, dimension and (designed) minimum distance.
    CodeInfo {
        #[arg(long)]
        spec: String,
    },
    /// Run the oracle-backed self checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Upto,
    Beyond,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Basic,
    Improved,
}

enum Failure {
    Usage(String),
    Decode(String),
    Violation(String),
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        if e.is_decode_failure() {
            Failure::Decode(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Decode(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_DECODE_FAILURE)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("VIOLATION: {msg}");
            ExitCode::from(EXIT_VIOLATION)
        }
    }
}

fn read_json_arg(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
    }
}

fn parse<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(&read_json_arg(arg)?).map_err(|e| Failure::Usage(format!("invalid {what}: {e}")))
}

fn load_codec(spec: &str) -> Result<Codec, Failure> {
    Ok(CodeConfig::from_json(&read_json_arg(spec)?)?.build()?)
}

/// Accepts a list of rows, or a flat list for a one-row code.
fn parse_rows(arg: &str, what: &str) -> Result<Vec<Vec<Symbol>>, Failure> {
    let value: Value = parse(arg, what)?;
    let rows = match &value {
        Value::Array(items) if items.iter().all(Value::is_number) => vec![value.clone()],
        _ => match value {
            Value::Array(items) => items,
            _ => return Err(Failure::Usage(format!("{what} must be a JSON list"))),
        },
    };
    rows.into_iter()
        .map(|row| serde_json::from_value(row).map_err(|e| Failure::Usage(format!("invalid {what}: {e}"))))
        .collect()
}

fn print_json(value: &Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Encode { spec, msg } => {
            let codec = load_codec(&spec)?;
            let msgs = parse_rows(&msg, "message")?;
            let word = codec.encode(&msgs)?;
            print_json(&json!({ "codeword": word.to_rows() }))
        }
        Command::Decode { spec, word, erasures, mode, radius, carry_over, algorithm, report } => {
            let codec = load_codec(&spec)?;
            let r = Matrix::from_rows(&parse_rows(&word, "word")?)?;
            let (rows, cols) = codec.shape();
            let x = match erasures {
                Some(arg) => {
                    let lists: Vec<Vec<usize>> = parse(&arg, "erasures")?;
                    ErasurePattern::new(&lists, cols)?
                }
                None => ErasurePattern::empty(rows, cols),
            };
            let options = DecodeOptions {
                mode: match mode {
                    Mode::Upto => GmdMode::UpToGmd,
                    Mode::Beyond => GmdMode::BeyondGmd,
                },
                carry_over,
                radius,
            };
            let algorithm = algorithm.map(|a| match a {
                AlgorithmArg::Basic => Algorithm::Basic,
                AlgorithmArg::Improved => Algorithm::Improved,
            });
            match codec.decode(&r, &x, &options, algorithm) {
                Ok(rep) => {
                    let mut out = json!({
                        "messages": rep.messages,
                        "codeword": rep.codeword.as_ref().map(Matrix::to_rows),
                        "inner_invocations": rep.inner_invocations(),
                        "outer_invocations": rep.outer_invocations(),
                        "gmd_trials": rep.gmd_trials(),
                    });
                    if report {
                        out["rounds"] = json!(rep.rounds);
                    }
                    print_json(&out)
                }
                Err(CodecError::DecodeFailure { round, report: rep }) => {
                    if report {
                        print_json(&json!({ "failed_round": round, "rounds": rep.rounds }))?;
                    }
                    Err(Failure::Decode(format!("decoding failed in round {round}")))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Simulate { config } => {
            let config: ExperimentConfig = parse(&config, "experiment config")?;
            let result = sim::run_experiment(&config)?;
            match &config.output {
                Some(path) => {
                    let file = File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let mut out = BufWriter::new(file);
                    result.write_json_lines(&mut out)?;
                    out.flush()?;
                    print_json(&json!({ "summary": result.stats }))?;
                }
                None => {
                    let mut out = BufWriter::new(io::stdout().lock());
                    result.write_json_lines(&mut out)?;
                    out.flush()?;
                }
            }
            if result.stats.violation {
                return Err(Failure::Violation(format!("{} trials broke a guarantee", result.stats.violations)));
            }
            Ok(())
        }
        Command::NscCheck { matrix } => {
            let value: Value = parse(&matrix, "matrix description")?;
            let field_spec: FieldSpec = take(&value, "field")?
                .ok_or_else(|| Failure::Usage("missing \"field\"".into()))?;
            let b: Vec<Vec<Symbol>> =
                take(&value, "B")?.ok_or_else(|| Failure::Usage("missing \"B\"".into()))?;
            let field = field_spec.build()?;
            let b = Matrix::from_rows(&b)?;
            field.check_all(b.data())?;
            let distances: Option<Vec<usize>> = match take::<Vec<CodeSpec>>(&value, "outers")? {
                Some(outers) => Some(
                    outers
                        .iter()
                        .map(|spec| spec.build()?.require_distance())
                        .collect::<Result<_, CodecError>>()?,
                ),
                None => take(&value, "outer_distances")?,
            };
            let summary = nsc_summary(&field, &b, distances.as_deref())?;
            print_json(&json!(summary))
        }
        Command::CodeInfo { spec } => {
            let codec = load_codec(&spec)?;
            print_json(&json!(codec.info()))
        }
        Command::Selftest { seed } => {
            let results = selftest::run(seed)?;
            let mut failed = 0;
            for check in &results {
                let verdict = if check.passed() { "ok" } else { "FAILED" };
                println!("{verdict:>6}  {} ({} cases, {} failures)", check.name, check.cases, check.failures);
                failed += usize::from(!check.passed());
            }
            if failed > 0 {
                return Err(Failure::Violation(format!("{failed} self checks failed")));
            }
            Ok(())
        }
    }
}

fn take<T: serde::de::DeserializeOwned>(value: &Value, key: &str) -> Result<Option<T>, Failure> {
    match value.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| Failure::Usage(format!("invalid \"{key}\": {e}"))),
    }
}
