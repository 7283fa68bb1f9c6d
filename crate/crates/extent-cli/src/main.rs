//! The `extent` command line: type-check `.stt` files, interpret them in
//! the finite presheaf model, and run the strict-stability suite.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use extent_core::extension::{interpret_decls, ShapeKind};
use extent_core::kernel::check_source;
use extent_core::presheaf::BaseId;
use extent_core::syntax::parse;
use extent_harness::{gen_instance, run_suite, InstanceSpec, SuiteConfig};

#[derive(Parser)]
#[command(name = "extent", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a .stt file
    Check {
        file: PathBuf,
        /// print the rule trace of every declaration
        #[arg(long)]
        trace: bool,
    },
    /// Interpret the extension types of a checked .stt file over a base
    Interpret {
        file: PathBuf,
        #[arg(long, default_value = "terminal", value_parser = parse_base)]
        base: BaseId,
        /// universe bound for fibers
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, default_value_t = 16384)]
        cap: usize,
    },
    /// Run the strict-stability suite
    Stability(StabilityArgs),
    /// Regenerate one instance and print both constructions side by side
    OracleDiff {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "terminal", value_parser = parse_base)]
        base: BaseId,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        #[arg(long, default_value = "endpoint")]
        shape: String,
        #[arg(long, default_value_t = 16384)]
        cap: usize,
    },
}

#[derive(Args)]
struct StabilityArgs {
    /// restrict to one base (terminal, arrow, delta1; aliases δ1/δ2)
    #[arg(long)]
    base: Option<String>,
    /// restrict to one universe bound
    #[arg(long)]
    bound: Option<usize>,
    /// restrict to one catalogue shape
    #[arg(long)]
    shape: Option<String>,
    /// number of seeded instances
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// write the deterministic report here
    #[arg(long)]
    report: Option<PathBuf>,
    /// run instances sequentially
    #[arg(long)]
    sequential: bool,
}

fn parse_base(s: &str) -> Result<BaseId, String> {
    BaseId::parse(s).ok_or_else(|| format!("unknown base `{s}` (try terminal, arrow, delta1, delta2)"))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { file, trace } => {
            let src = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let reports = match check_source(&src) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    return Ok(ExitCode::FAILURE);
                }
            };
            let mut ok = true;
            for r in &reports {
                if r.report.accepted {
                    println!("{}: ok", r.name);
                } else {
                    ok = false;
                    println!(
                        "{}: rejected: {}",
                        r.name,
                        r.report.failure.as_ref().expect("failure reason")
                    );
                }
                if trace {
                    println!("  trace: {}", r.report.trace.join(", "));
                }
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Interpret {
            file,
            base,
            bound,
            cap,
        } => {
            let src = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let decls = parse(&src).map_err(|e| anyhow::anyhow!("{}: {e}", file.display()))?;
            let reports = check_source(&src).map_err(|e| anyhow::anyhow!("{e}"))?;
            if let Some(bad) = reports.iter().find(|r| !r.report.accepted) {
                bail!(
                    "`{}` does not check: {}",
                    bad.name,
                    bad.report.failure.as_ref().expect("failure reason")
                );
            }
            let outcomes = interpret_decls(&decls, base, bound, cap)?;
            if outcomes.is_empty() {
                println!("no extension-type declarations to interpret");
            }
            for o in outcomes {
                let cards = o
                    .cards
                    .iter()
                    .map(|(stage, n)| format!("{stage}: {n}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                println!("{} over {}: |Ext| per stage {{{}}}", o.name, base, cards);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Stability(args) => {
            let config = SuiteConfig {
                n: args.n,
                seed: args.seed,
                base: args.base,
                bound: args.bound,
                shape: args.shape,
                parallel: !args.sequential,
                ..SuiteConfig::default()
            }
            .with_env_cap();
            let (report, elapsed) = run_suite(&config)?;
            println!(
                "{} instances, {} violations, {} size skips in {elapsed:?}",
                report.summary.instances, report.summary.violations, report.summary.size_skips
            );
            for (check, n) in &report.summary.checked {
                println!("  {check}: {n} checked");
            }
            for inst in report.instances.iter().filter(|i| !i.passed()) {
                println!(
                    "violation at seed {}: {}",
                    inst.seed,
                    inst.violation.as_deref().unwrap_or("unknown")
                );
            }
            if let Some(path) = args.report {
                std::fs::write(&path, report.to_json())
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("report written to {}", path.display());
            }
            Ok(if report.passed(config.max_size_skips) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::OracleDiff {
            seed,
            base,
            bound,
            shape,
            cap,
        } => {
            let Some(shape) = ShapeKind::parse(&shape) else {
                bail!(
                    "unknown shape `{shape}`; known: {}",
                    ShapeKind::ALL.map(|k| k.name()).join(", ")
                );
            };
            let spec = InstanceSpec {
                base,
                bound,
                shape,
                gamma_max: 3,
            };
            let inst = gen_instance(seed, spec, cap)?;
            let input = extent_core::extension::ExtInput::new(
                inst.input.shape.clone(),
                inst.input.gamma.clone(),
                inst.input.family.data.clone(),
                inst.input.boundary.clone(),
            )?;
            let former = extent_core::extension::ext_former(input, cap)?;
            let oracle = extent_harness::oracle::ext_oracle(&former, cap, true)?;
            let cat = inst.gamma.cat().clone();
            println!(
                "instance seed {seed} over {} (bound {bound}, shape {})",
                base,
                spec.shape.name()
            );
            for c in cat.objects() {
                for g in 0..inst.gamma.card(c) {
                    println!(
                        "stage {} element {}: former {} sections, oracle {} sections",
                        cat.object_name(c),
                        g,
                        former.sections[c.0][g].len(),
                        oracle.fibers[c.0][g].len()
                    );
                    for (i, sec) in former.sections[c.0][g].iter().enumerate() {
                        println!("  former[{i}]  = {sec:?}");
                    }
                    for (i, t) in oracle.fibers[c.0][g].iter().enumerate() {
                        println!("  oracle[{i}] = {t:?}");
                    }
                }
            }
            match oracle.agrees_with(&former) {
                Ok(()) => {
                    println!("constructions agree element-wise");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("MISMATCH: {e}");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
    }
}
