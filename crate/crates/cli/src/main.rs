mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Serialize)]
#[command(name = "scalekit", version, about = "Finite-truncation checks for scales, Schwartz sequence spaces and matrix-block ideals")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every randomized check.
    #[arg(long, global = true, env = "SCALEKIT_SEED", default_value_t = 20240611)]
    seed: u64,
    /// Exit 0 exactly when the asserted contract fails.
    #[arg(long, global = true)]
    expect_fail: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
enum Command {
    /// Summability of a scale family: Σ σ_n/σ_m < ∞.
    Summability {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 6)]
        max_m: usize,
        #[arg(long = "K", default_value_t = 10_000)]
        k: u64,
    },
    /// Weighted summability Σ p² ℓ_n/ℓ_m < ∞.
    PSummability {
        #[arg(long)]
        ell: String,
        #[arg(long)]
        dims: String,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 8)]
        max_m: usize,
        #[arg(long = "K", default_value_t = 10_000)]
        k: u64,
    },
    /// Growth condition of a dimension sequence.
    Growth {
        #[command(flatten)]
        dims: DimsArgs,
        #[arg(long, default_value_t = 12)]
        d_max: u32,
    },
    /// Randomized ideal inequality ‖fg‖_n <= ‖f‖_n ‖g‖_B.
    IdealCheck {
        #[arg(long, default_value = "pow(k, n)")]
        family: String,
        #[arg(long, value_enum, default_value_t = IdealInstance::Pointwise)]
        instance: IdealInstance,
        /// Block dimensions (block instance only).
        #[arg(long, default_value = "k")]
        dims: String,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long = "K", default_value_t = 1000)]
        k: u64,
    },
    /// Renormalized norms with unit constants.
    Renorm {
        #[arg(long, value_enum, default_value_t = RenormInstance::BlockSocle)]
        instance: RenormInstance,
        #[arg(long, default_value = "pow(k, n)")]
        family: String,
        /// σ of the paired instance.
        #[arg(long, default_value = "k")]
        sigma: String,
        #[arg(long, default_value = "k")]
        dims: String,
        #[arg(long = "K", default_value_t = 12)]
        k: u64,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Reproduce a counterexample or worked example.
    Counterexample {
        #[command(subcommand)]
        which: Counter,
    },
    /// Growth check plus the explicit block enumeration.
    ClassifyStandardSchwartz {
        #[command(flatten)]
        dims: DimsArgs,
        #[arg(long, default_value_t = 12)]
        d_max: u32,
    },
}

#[derive(clap::Args, Serialize)]
struct DimsArgs {
    /// Dimension formula in k.
    #[arg(long, conflicts_with = "dims_file", required_unless_present = "dims_file")]
    dims: Option<String>,
    /// One dimension (integer or expression) per line.
    #[arg(long)]
    dims_file: Option<PathBuf>,
    #[arg(long = "K", default_value_t = 1000)]
    k: u64,
    /// Block order as a comma-separated permutation of 1..=K.
    #[arg(long)]
    theta: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum IdealInstance {
    Pointwise,
    Block,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RenormInstance {
    PointwiseC0,
    PairedB2,
    BlockSocle,
    Trivial,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "example")]
enum Counter {
    /// Blow-up of ‖S_K T_K‖_n / (‖S_K‖_B ‖T_K‖_m).
    B1 {
        #[arg(long, default_value = "exp(k^k)")]
        dims: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long = "K", default_value_t = 8)]
        k: u64,
    },
    /// Paired norm on c_0 that fails the ideal inequality.
    B2 {
        #[arg(long, default_value = "k")]
        sigma: String,
        #[arg(long = "K", default_value_t = 1000)]
        k: u64,
    },
    /// θ_χ is a contractive homomorphism.
    B4 {
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// θ_χ(f) is not rapidly decreasing.
    B5 {
        /// Coefficients f(1), f(2), ... (real).
        #[arg(long, default_value = "1", value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<f64>,
        #[arg(long, default_value = "1 + k")]
        chi_inverse: String,
        #[arg(long, default_value = "pow(1 + k, n)")]
        family: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long = "K", default_value_t = 2000)]
        k: u64,
    },
    /// An enumeration strictly below the identity.
    B7 {
        #[arg(long, default_value_t = 200)]
        dense: u64,
        #[arg(long, default_value_t = 8)]
        d_max: u32,
    },
    /// Dyadic rationals with σ = 2^p.
    Cantor {
        #[arg(long, default_value_t = 10)]
        pmax: u32,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 8)]
        max_m: usize,
    },
    /// Fourier seminorms of a trigonometric polynomial.
    Torus {
        /// `frequency:coefficient` pairs.
        #[arg(long, default_value = "1:1,2:1", value_delimiter = ',', allow_hyphen_values = true)]
        modes: Vec<String>,
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let envelope = json!({
        "schema": 1,
        "command": outcome.name,
        "seed": cli.seed,
        "expect_fail": cli.expect_fail,
        "config": &cli.command,
        "contract_holds": outcome.contract_holds,
        "consistent": outcome.consistent,
        "report": outcome.report,
    });
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&envelope).expect("serializable") + "\n",
        Format::Md => render::markdown(&format!("scalekit {}", outcome.name), &envelope),
        Format::Csv => render::csv(&envelope),
    };
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(2);
    }
    if !outcome.consistent {
        eprintln!("internal check failed: {}", outcome.witness.as_deref().unwrap_or("see report"));
        return ExitCode::from(1);
    }
    if !outcome.contract_holds {
        if let Some(w) = &outcome.witness {
            eprintln!("contract violated: {w}");
        }
    }
    if outcome.contract_holds != cli.expect_fail {
        ExitCode::SUCCESS
    } else {
        if cli.expect_fail {
            eprintln!("expected the contract to fail, but it holds");
        }
        ExitCode::from(1)
    }
}
