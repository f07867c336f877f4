//! `bosonic`: command-line front end for the Gaussian channel library.
//!
//! Every verb prints one JSON document on stdout. Domain errors exit with
//! status 1 and print `{"error": <kind>, "message": <text>}`; usage errors
//! exit with status 2.

use std::f64::consts::LN_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bosonic_core::channels::{self, GaussianChannel, Variant};
use bosonic_core::fock_oracle::{
    gaussian_to_fock, optimizer_witness, wehrl_functional_default, ConcaveFn, FockDensity, FockPure, OracleConfig,
};
use bosonic_core::optimizers::{self, CapacityMethod, EnergyConstraint};
use bosonic_core::records::{matrix_from_record, MatrixRecord};
use bosonic_core::structure::{self, FactorRole, OneModeFactor};
use bosonic_core::{Error, GaussianState, HermitianMatrix, DEFAULT_TOL};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bosonic", version, about = "Gaussian bosonic channel calculus")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Global {
    /// Unit for entropic outputs.
    #[arg(long, global = true, value_enum, default_value_t = Units::Nats)]
    units: Units,
    /// Numerical tolerance for validity and witness checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output format. CSV is available for scalar reports only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Units {
    Bits,
    Nats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Covariant,
    Contravariant,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Commuting,
    General,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check validity and extremality of a channel.
    Validate { channel: PathBuf },
    /// Channel `outer ∘ inner`.
    Compose { outer: PathBuf, inner: PathBuf },
    /// Tensor product of two channels.
    Tensor { first: PathBuf, second: PathBuf },
    /// Split into an extreme attenuator followed by an extreme amplifier or
    /// contravariant channel.
    Decompose { channel: PathBuf },
    /// Complementary channel of an extreme attenuator or amplifier.
    Complement { channel: PathBuf },
    /// Normal form of a channel whose `K*K` and `mu` commute.
    Diagonalize { channel: PathBuf },
    /// Image of a Gaussian state.
    Apply { channel: PathBuf, state: PathBuf },
    /// Minimal output von Neumann entropy.
    MinEntropy { channel: PathBuf },
    /// Maximal output p-norm over all inputs.
    Norm {
        channel: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Minimal output Renyi entropy of order p > 1.
    Renyi {
        channel: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Classical capacity with Gaussian encodings under an energy budget.
    Capacity {
        channel: PathBuf,
        /// Energy budget E.
        #[arg(long)]
        energy: f64,
        /// Energy matrix as JSON: a list of diagonal entries or a matrix of
        /// `{"re", "im"}` rows. Defaults to the identity (photon number).
        #[arg(long)]
        epsilon: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Monte-Carlo check that the vacuum minimizes `Tr f(output)` for a
    /// one-mode channel.
    WitnessOptimizer {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, value_enum, default_value_t = VariantArg::Covariant)]
        variant: VariantArg,
        /// neg-square, neg-xlogx, neg-power:<p> or linear.
        #[arg(long, default_value = "neg-xlogx")]
        f: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        cutoff: usize,
    },
    /// Wehrl-type functional of a one-mode state.
    Wehrl {
        /// One-mode Gaussian state JSON.
        #[arg(long, conflicts_with = "fock", required_unless_present = "fock")]
        state: Option<PathBuf>,
        /// Fock number state |n>.
        #[arg(long)]
        fock: Option<usize>,
        #[arg(long, default_value = "neg-xlogx")]
        f: String,
        /// Truncation used for Gaussian states.
        #[arg(long, default_value_t = 60)]
        cutoff: usize,
    },
    /// Largest eigenvalues of a Gaussian state.
    Spectrum {
        state: PathBuf,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
    },
}

enum Failure {
    Domain(Error),
    Input(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_fn(s: &str) -> Result<ConcaveFn, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EpsilonRecord {
    Diagonal(Vec<f64>),
    Matrix(MatrixRecord),
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let tol = cli.global.tol;
    let entropic = |nats: f64| match cli.global.units {
        Units::Nats => nats,
        Units::Bits => nats / LN_2,
    };
    let value = |v: f64| json!({ "value": v });
    let cfg = OracleConfig::default();

    let report = match &cli.verb {
        Verb::Validate { channel } => {
            let ch: GaussianChannel = read_json(channel)?;
            let valid = ch.is_valid(tol);
            let extreme = valid && ch.is_extreme(tol)?;
            json!({ "valid": valid, "extreme": extreme })
        }
        Verb::Compose { outer, inner } => {
            let (o, i): (GaussianChannel, GaussianChannel) = (read_json(outer)?, read_json(inner)?);
            to_json(&channels::compose(&o, &i)?)
        }
        Verb::Tensor { first, second } => {
            let (a, b): (GaussianChannel, GaussianChannel) = (read_json(first)?, read_json(second)?);
            to_json(&channels::tensor(&a, &b)?)
        }
        Verb::Decompose { channel } => to_json(&structure::decompose(&read_json(channel)?)?),
        Verb::Complement { channel } => to_json(&structure::complement(&read_json(channel)?)?),
        Verb::Diagonalize { channel } => to_json(&structure::diagonalize(&read_json(channel)?)?),
        Verb::Apply { channel, state } => {
            let ch: GaussianChannel = read_json(channel)?;
            let st: GaussianState = read_json(state)?;
            to_json(&channels::apply(&ch, &st)?)
        }
        Verb::MinEntropy { channel } => value(entropic(optimizers::min_output_entropy(&read_json(channel)?)?)),
        Verb::Norm { channel, p } => value(optimizers::one_to_p_norm(&read_json(channel)?, *p)?),
        Verb::Renyi { channel, p } => value(entropic(optimizers::min_renyi_entropy(&read_json(channel)?, *p)?)),
        Verb::Capacity { channel, energy, epsilon, method } => {
            let ch: GaussianChannel = read_json(channel)?;
            let eps = match epsilon {
                None => HermitianMatrix::identity(ch.modes_in()),
                Some(path) => match read_json::<EpsilonRecord>(path)? {
                    EpsilonRecord::Diagonal(d) => HermitianMatrix::from_real_diagonal(&d),
                    EpsilonRecord::Matrix(rows) => {
                        let n = rows.len();
                        HermitianMatrix::new(matrix_from_record(&rows, n, n, "epsilon")?)?
                    }
                },
            };
            let method = match method {
                MethodArg::Auto => CapacityMethod::Auto,
                MethodArg::Commuting => CapacityMethod::Commuting,
                MethodArg::General => CapacityMethod::General,
            };
            let sol = optimizers::capacity(&ch, &EnergyConstraint::new(eps, *energy)?, method)?;
            let mut out = to_json(&sol);
            out["capacity"] = json!(entropic(sol.capacity_nats));
            out["units"] = json!(units_name(cli.global.units));
            out
        }
        Verb::WitnessOptimizer { k, mu, variant, f, trials, seed, cutoff } => {
            let variant = match variant {
                VariantArg::Covariant => Variant::Covariant,
                VariantArg::Contravariant => Variant::Contravariant,
            };
            let factor = OneModeFactor { k: *k, mu: *mu, role: FactorRole::Active, variant };
            let mut report = optimizer_witness(&factor, parse_fn(f)?, *trials, *seed, *cutoff, &cfg)?;
            report.pass = *trials == 0 || report.margin >= -tol;
            to_json(&report)
        }
        Verb::Wehrl { state, fock, f, cutoff } => {
            let f = parse_fn(f)?;
            let rho = match (state, fock) {
                (_, Some(n)) => FockDensity::from_pure(&FockPure::number_state(*n, *n)?),
                (Some(path), None) => gaussian_to_fock(&read_json(path)?, *cutoff, &cfg)?,
                (None, None) => return Err(Failure::Usage("wehrl needs --state or --fock".into())),
            };
            let v = wehrl_functional_default(&rho, f)?;
            value(if f == ConcaveFn::NegXLogX { entropic(v) } else { v })
        }
        Verb::Spectrum { state, top_k } => {
            let st: GaussianState = read_json(state)?;
            json!({ "eigenvalues": st.spectrum(*top_k)? })
        }
    };
    Ok(report)
}

fn units_name(u: Units) -> &'static str {
    match u {
        Units::Bits => "bits",
        Units::Nats => "nats",
    }
}

fn scalar_cell(v: &Value) -> Option<String> {
    match v {
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::String(s) if !s.contains([',', '"', '\n']) => Some(s.clone()),
        Value::Null => Some(String::new()),
        _ => None,
    }
}

/// Flat objects become a header and one row; an object holding a single
/// numeric array becomes `index,value` rows.
fn to_csv(report: &Value) -> Option<String> {
    let obj = report.as_object()?;
    if let [(name, Value::Array(items))] = obj.iter().collect::<Vec<_>>().as_slice() {
        let mut out = format!("index,{name}\n");
        for (i, item) in items.iter().enumerate() {
            out += &format!("{i},{}\n", scalar_cell(item)?);
        }
        return Some(out);
    }
    let cells = obj.values().map(scalar_cell).collect::<Option<Vec<_>>>()?;
    let header = obj.keys().cloned().collect::<Vec<_>>().join(",");
    Some(format!("{header}\n{}\n", cells.join(",")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let failure = match run(&cli) {
        Ok(report) => match cli.global.format {
            Format::Json => {
                println!("{}", serde_json::to_string_pretty(&report).expect("JSON values serialize"));
                return ExitCode::SUCCESS;
            }
            Format::Csv => match to_csv(&report) {
                Some(text) => {
                    print!("{text}");
                    return ExitCode::SUCCESS;
                }
                None => Failure::Usage("this report is not scalar; use --format json".into()),
            },
        },
        Err(f) => f,
    };
    match failure {
        Failure::Domain(e) => {
            println!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(1)
        }
        Failure::Input(msg) => {
            println!("{}", json!({ "error": "InvalidInput", "message": msg }));
            ExitCode::from(1)
        }
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
