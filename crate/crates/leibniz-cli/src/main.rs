use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use leibniz_core::algebra::LeibnizCheck;
use leibniz_core::catalog::{self, FamilyId};
use leibniz_core::derivations::{derivation_space, match_derivation_pattern, DerivationPattern};
use leibniz_core::gradation::{search_max_length_gradation, verify_gradation, GradationCheck};
use leibniz_core::invariants::{distinguish, profile, Distinction};
use leibniz_core::io;
use leibniz_core::scalar::parse_scalar;
use leibniz_core::series::{derived_series, lower_central_series, series_dims};
use leibniz_core::Algebra;

mod extend;
mod harness;

#[derive(Parser)]
#[command(name = "leibniz", version, about = "Exact tools for Leibniz algebras presented by structure constants")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the Leibniz identity of a serialized algebra
    Verify { file: PathBuf },
    /// Lower central and derived series dimensions
    Series { file: PathBuf },
    /// Derivation space dimension, optionally matched against a closed-form pattern
    Der {
        file: PathBuf,
        /// one of: m1delta, m2lambda, m31
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Search for a maximum-length connected gradation, or verify supplied weights
    Grade {
        file: PathBuf,
        #[arg(long)]
        max_weight: Option<i64>,
        /// comma-separated weights to verify instead of searching
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
    },
    /// Invariant profile(s); with two files, a non-isomorphism certificate
    Profile {
        file_a: PathBuf,
        file_b: Option<PathBuf>,
    },
    /// Catalog of the built-in families
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Run an extension-workbench proof script
    Extend { script: PathBuf },
    /// Run a verification suite: tables, series, derivations, gradations,
    /// extensions, profiles, or all
    Harness { suite: String },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List every family with its dimension range and documentation
    List,
    /// Emit a family instance in the serialization format
    Build {
        id: String,
        #[arg(long)]
        n: usize,
        /// parameter binding k=v (repeatable)
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf) -> Result<Algebra, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    io::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Verify { file } => {
            let a = load(&file)?;
            match a.verify_leibniz() {
                LeibnizCheck::Pass => {
                    println!("ok: Leibniz identity holds");
                    Ok(ExitCode::SUCCESS)
                }
                LeibnizCheck::Witness { i, j, k, residual } => {
                    let parts: Vec<String> = residual
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| !s.is_zero())
                        .map(|(m, s)| format!("({s})*{}", a.labels()[m]))
                        .collect();
                    println!(
                        "violation at ({},{},{}): residual {}",
                        a.labels()[i - 1],
                        a.labels()[j - 1],
                        a.labels()[k - 1],
                        parts.join(" + ")
                    );
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Cmd::Series { file } => {
            let a = load(&file)?;
            let lcs = series_dims(&lower_central_series(&a).map_err(|e| e.to_string())?);
            let der = series_dims(&derived_series(&a).map_err(|e| e.to_string())?);
            println!("lower central: {lcs:?}");
            println!("derived:       {der:?}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Der { file, pattern } => {
            let a = load(&file)?;
            let ds = derivation_space(&a).map_err(|e| e.to_string())?;
            println!("dim Der = {}", ds.dim);
            if let Some(p) = pattern {
                let pat = match p.as_str() {
                    "m1delta" => DerivationPattern::M1Delta,
                    "m2lambda" => DerivationPattern::M2Lambda,
                    "m31" => DerivationPattern::M31,
                    other => return Err(format!("unknown pattern {other:?}")),
                };
                let m = match_derivation_pattern(&a, pat).map_err(|e| e.to_string())?;
                println!("pattern: {m:?}");
                if !matches!(m, leibniz_core::derivations::PatternMatch::Pass { .. }) {
                    return Ok(ExitCode::FAILURE);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Grade {
            file,
            max_weight,
            weights,
        } => {
            let a = load(&file)?;
            if let Some(w) = weights {
                return match verify_gradation(&a, &w).map_err(|e| e.to_string())? {
                    GradationCheck::Valid(len) => {
                        println!("valid, length {len}");
                        Ok(ExitCode::SUCCESS)
                    }
                    GradationCheck::Invalid(i, j, k) => {
                        println!("invalid at product ({i},{j},{k})");
                        Ok(ExitCode::FAILURE)
                    }
                    GradationCheck::Disconnected(m) => {
                        println!("disconnected: weight {m} unoccupied");
                        Ok(ExitCode::FAILURE)
                    }
                };
            }
            match search_max_length_gradation(&a, max_weight).map_err(|e| e.to_string())? {
                Some(g) => {
                    let w: Vec<String> = g.weights.iter().map(|x| x.to_string()).collect();
                    println!("weights: {}", w.join(","));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("no maximum-length gradation found within the weight bound");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Cmd::Profile { file_a, file_b } => {
            let a = load(&file_a)?;
            let pa = profile(&a).map_err(|e| e.to_string())?;
            println!("{}", serde_json::to_string_pretty(&pa).unwrap());
            if let Some(fb) = file_b {
                let b = load(&fb)?;
                let pb = profile(&b).map_err(|e| e.to_string())?;
                println!("{}", serde_json::to_string_pretty(&pb).unwrap());
                match distinguish(&a, &b).map_err(|e| e.to_string())? {
                    Distinction::NonIsomorphic(f) => println!("non-isomorphic ({f})"),
                    Distinction::Inconclusive => println!("inconclusive (profiles agree)"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Catalog { cmd } => match cmd {
            CatalogCmd::List => {
                for e in catalog::list_families() {
                    let hi = match e.dim_range.1 {
                        Some(h) if h == e.dim_range.0 => format!("n = {}", e.dim_range.0),
                        Some(h) => format!("{} <= n <= {h}", e.dim_range.0),
                        None => format!("n >= {}", e.dim_range.0),
                    };
                    println!(
                        "{:<8} complement {}  {:<14} {}",
                        e.id.to_string(),
                        e.complement_size,
                        hi,
                        e.doc
                    );
                }
                Ok(ExitCode::SUCCESS)
            }
            CatalogCmd::Build { id, n, params, out } => {
                let id = FamilyId::from_str(&id).map_err(|e| e.to_string())?;
                let mut bindings = BTreeMap::new();
                for kv in &params {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| format!("expected k=v, got {kv:?}"))?;
                    let s = parse_scalar(v).map_err(|e| e.to_string())?;
                    let r = s
                        .as_rational()
                        .ok_or_else(|| format!("parameter {k:?} must be rational"))?;
                    bindings.insert(k.to_string(), r.clone());
                }
                let a = catalog::make(id, n, &bindings).map_err(|e| e.to_string())?;
                let text = io::serialize(&a);
                match out {
                    Some(path) => std::fs::write(&path, text)
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                    None => print!("{text}"),
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Cmd::Extend { script } => {
            let text = std::fs::read_to_string(&script)
                .map_err(|e| format!("cannot read {}: {e}", script.display()))?;
            let outcome = extend::run_script(&text)?;
            print!("{}", outcome.transcript);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Harness { suite } => {
            let Some(claims) = harness::run_suite(&suite) else {
                return Err(format!(
                    "unknown suite {suite:?}; expected one of {:?} or \"all\"",
                    harness::suite_names()
                ));
            };
            let mut failed = 0usize;
            for c in &claims {
                println!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.text);
                if !c.pass {
                    failed += 1;
                }
            }
            println!(
                "{} checks, {} failed",
                claims.len(),
                failed
            );
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
