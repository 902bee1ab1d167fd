//! Command-line front end: run verification suites, compute certified
//! primitives of Hochschild cocycles, and report cohomology classes.
//!
//! Exit codes: 0 all identities hold exactly, 1 an identity failed (the JSON
//! report carries a witness), 2 usage or input error.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use vanest::hkr::{parse_scalar_symbol, scalar_symbol_to_json, ScalarModel};
use vanest::suites::{run_suite, Fault, SuiteParams, SUITE_NAMES};
use vanest::van_est::VeCaps;

#[derive(Parser)]
#[command(
    name = "hkr",
    about = "Exact verification of coalgebra, Chevalley-Eilenberg and van Est retract identities, and certified primitives of differential Hochschild cocycles on flat polynomial models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite (or `all`) and print a JSON report
    Verify {
        /// suite name; `all` runs every suite
        suite: String,
        /// rank of the module V for the algebraic suites
        #[arg(long, default_value_t = 3)]
        dim: u32,
        /// degree window (tensor/exterior caps)
        #[arg(long, default_value_t = 3)]
        deg: usize,
        /// polynomial variable count for the symbol suites
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// seed for the randomized checks (echoed in the report)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// test mode: inject a deliberate fault
        /// (delta-ca-sign | homotopy-sign | op-prefactor)
        #[arg(long)]
        inject_fault: Option<String>,
    },
    /// Compute the certified decomposition of a scalar symbol read from a
    /// JSON file: closedness residual, primitive, class and reconstruction
    /// residual
    Primitive {
        /// path to the symbol JSON
        file: PathBuf,
    },
    /// Compute the multivector-field class representative of a scalar symbol
    Class {
        /// path to the symbol JSON
        file: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(all_passed) => {
            if all_passed {
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

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Verify {
            suite,
            dim,
            deg,
            n,
            seed,
            inject_fault,
        } => {
            if !(1..=6).contains(&dim) || !(1..=6).contains(&deg) || !(1..=4).contains(&n) {
                return Err(format!(
                    "parameters out of the supported range (1 ≤ dim ≤ 6, 1 ≤ deg ≤ 6, 1 ≤ n ≤ 4): dim={dim} deg={deg} n={n}"
                ));
            }
            let params = SuiteParams { dim, deg, n, seed };
            let fault = inject_fault.map(|f| f.parse::<Fault>()).transpose()?;
            let names: Vec<&str> = if suite == "all" {
                SUITE_NAMES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut outcomes = Vec::new();
            let mut all_passed = true;
            for name in names {
                let outcome = run_suite(name, params, fault)?;
                all_passed &= outcome.passed();
                outcomes.push(outcome.to_json());
            }
            let rendered = if outcomes.len() == 1 {
                serde_json::to_string_pretty(&outcomes[0])
            } else {
                serde_json::to_string_pretty(&serde_json::Value::Array(outcomes))
            }
            .map_err(|e| e.to_string())?;
            println!("{rendered}");
            Ok(all_passed)
        }
        Command::Primitive { file } => {
            let (symbol, n) = read_symbol(&file)?;
            let model = model_for(&symbol, n);
            let cert = model.certificate(&symbol);
            println!(
                "{}",
                serde_json::to_string_pretty(&cert.to_json()).map_err(|e| e.to_string())?
            );
            Ok(true)
        }
        Command::Class { file } => {
            let (symbol, n) = read_symbol(&file)?;
            let class = vanest::hkr::hkr_inverse(&symbol);
            let out = serde_json::json!({
                "n": n,
                "class": class.to_json(),
                "class_symbol": scalar_symbol_to_json(&vanest::hkr::hkr(&class), n)?,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?
            );
            Ok(true)
        }
    }
}

type ScalarSymbol =
    vanest::element::Element<vanest::graded::TensorWord, vanest::polynomial::Polynomial>;

fn read_symbol(file: &PathBuf) -> Result<(ScalarSymbol, u32), String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON: {e}"))?;
    parse_scalar_symbol(&value)
}

fn model_for(symbol: &ScalarSymbol, n: u32) -> ScalarModel {
    let max_k = symbol.terms().map(|(w, _)| w.len()).max().unwrap_or(0);
    ScalarModel::new(n, VeCaps::uniform(max_k + 1))
}
