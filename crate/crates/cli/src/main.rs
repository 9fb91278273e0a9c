use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

#[derive(Parser)]
#[command(name = "modcoh", version, about = "Exact checks for module-coherent functors, Witt vectors and Picard groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Emit the report as versioned JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Append wall-clock time (breaks bitwise reproducibility).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Picard groups of monomial subrings of R0[t] (and R0[t,x]).
    #[command(subcommand)]
    Pic(PicCmd),
    /// Functor expressions: normalization, evaluation, cokernels, Hom.
    #[command(subcommand)]
    Functor(FunctorCmd),
    /// Truncated p-typical Witt vectors.
    #[command(subcommand)]
    Witt(WittCmd),
    /// The counterexamples and their growth profiles.
    #[command(subcommand)]
    Cex(CexCmd),
    /// Run the acceptance checks.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
pub enum PicCmd {
    /// The six-row table, rows 3 to 6 at p = 2, 3, 5.
    Table {
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 5])]
        primes: Vec<u64>,
    },
    Compute {
        /// e.g. "Z[5t,t^2,t^3]", "F2[t^2,t^3,x]", "Z[1/3,t^2,t^3]"
        #[arg(long)]
        ring: String,
    },
    /// Chain to the normalization with certified prime conductors.
    Chain {
        #[arg(long)]
        ring: String,
    },
}

#[derive(Subcommand)]
pub enum FunctorCmd {
    /// Rewrite an expression to a single kernel pair.
    Normalize {
        #[arg(long)]
        expr: PathBuf,
        /// Write the normalized expression here.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// F(B) with its invariant factors, checked against the direct evaluation.
    Eval {
        #[arg(long)]
        expr: PathBuf,
        #[arg(long)]
        algebra: String,
    },
    /// Cokernel of the morphism at the root of EXPR.
    Coker {
        #[arg(long)]
        expr: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Hom(F, G) evaluated at B.
    Hom {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        algebra: String,
    },
    /// mu of F(A/m^n) for n = 1..nmax over F_p[vars].
    Profile {
        #[arg(long)]
        expr: PathBuf,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
    },
}

#[derive(Subcommand)]
pub enum WittCmd {
    /// S_i, P_i and N_i over Z, with their ghost check.
    Laws {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    Add(WittBinary),
    Mul(WittBinary),
    Inv(WittUnary),
    /// The map eta on fractional monomials, checked on a degree window.
    Eta {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        window: u32,
    },
}

#[derive(Args)]
pub struct WittRingArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u32,
    /// Coefficient ring or test algebra, e.g. "F2[x]", "Z/4", "F2[x]/(x^2)".
    #[arg(long)]
    pub ring: String,
}

#[derive(Args)]
pub struct WittBinary {
    #[command(flatten)]
    pub ring: WittRingArgs,
    /// Components x_0,...,x_{n-1}.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Args)]
pub struct WittUnary {
    #[command(flatten)]
    pub ring: WittRingArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Subcommand)]
pub enum CexCmd {
    /// mu of the Cech group H(B) at B = F_p[s,t]/(s^k,t^k).
    Cohen {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u64,
    },
    /// Ann(sx - ty) against the claimed generators.
    Ann {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u64,
        /// Highest multidegree checked; defaults to 2k.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// mu of Ann(s) (x) Ann(s) at F_p[s,t,u]/(s,t,u)^n.
    Tensor {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
    },
    Growth {
        /// cohen, tensor, or a functor expression file.
        #[arg(long)]
        source: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 8)]
        nmax: u32,
        #[arg(long, default_value_t = 2)]
        d: u32,
    },
}

#[derive(Args)]
pub struct SuiteArgs {
    #[arg(value_parser = ["quick", "full"])]
    pub level: String,
    /// Run only these criteria (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match commands::run(&cli) {
        Ok(mut r) => {
            if cli.global.timing {
                r.timing_ms = Some(started.elapsed().as_millis());
            }
            let text = if cli.global.json {
                serde_json::to_string_pretty(&r.to_json()).expect("report serializes") + "\n"
            } else {
                r.to_text()
            };
            print!("{text}");
            if let Some(path) = &cli.global.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(if r.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if commands::is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
