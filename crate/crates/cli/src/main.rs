//! `valgeo`: intrinsic volumes, mixed volumes, the convolution and product of
//! valuations, and verification campaigns. All output is JSON.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Serialize, Debug)]
#[command(name = "valgeo", version, about = "Valuations on convex polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Serialize, Debug)]
pub struct Global {
    /// Ambient dimension (required where no body fixes it)
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Monte Carlo sample count
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker thread cap (results do not depend on it)
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Intrinsic volumes mu_0..mu_n of a body; Monte Carlo when --samples is given
    Intrinsic {
        #[arg(long)]
        body: PathBuf,
    },
    /// Mixed volume V(A_1, ..., A_n); pass --body n times
    MixedVolume {
        #[arg(long = "body", required = true)]
        bodies: Vec<PathBuf>,
    },
    /// Minkowski sum A + B
    Minkowski {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// (mu_A * mu_B)(K) through formal mixed volumes, next to vol(A + B + K)
    Convolve {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long = "eval")]
        eval: PathBuf,
    },
    /// Monte Carlo (mu_A . phi)(K) with phi = mu_B, or vol without --b
    Product {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long = "eval")]
        eval: PathBuf,
    },
    /// Alesker-Fourier dual of an invariant valuation sum c_k mu_k
    Dualize {
        #[command(flatten)]
        valuation: ValuationArg,
    },
    /// Kinematic or additive coproduct table of mu_k or of a combination
    Coproduct {
        #[arg(long, value_enum, default_value_t = Kind::Kinematic)]
        kind: Kind,
        #[command(flatten)]
        valuation: ValuationArg,
    },
    /// Verification campaigns; exit 1 when any check fails
    Verify {
        #[command(subcommand)]
        target: Target,
    },
}

#[derive(Args, Serialize, Debug)]
#[group(required = true, multiple = false)]
pub struct ValuationArg {
    /// Degree k, selecting mu_k
    #[arg(long)]
    pub degree: Option<usize>,
    /// Comma-separated coefficients c_0..c_n, each `a/b` or `a/b*pi^m`
    #[arg(long)]
    pub coeffs: Option<String>,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Kinematic,
    Additive,
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Target {
    /// Exact identities of the invariant algebra
    Exact,
    /// Intersection kinematic formula against Monte Carlo
    Kinematic(PairArgs),
    /// Additive kinematic formula against Monte Carlo
    Additive(PairArgs),
    /// mu_A * mu_B = mu_(A+B) on random polytopes
    Convolution {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Every campaign above with default bodies
    All {
        #[arg(long, default_value_t = valgeo::harness::Z_MAX)]
        z_max: f64,
    },
}

#[derive(Args, Serialize, Debug)]
pub struct PairArgs {
    /// First body (defaults to cube/cube and cube/simplex pairs)
    #[arg(long, requires = "b")]
    pub a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    pub b: Option<PathBuf>,
    /// Pass threshold on |estimate - prediction| / stderr
    #[arg(long, default_value_t = valgeo::harness::Z_MAX)]
    pub z_max: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => {
            let doc = serde_json::json!({ "config": &cli, "result": outcome.result });
            let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
            match &cli.global.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
