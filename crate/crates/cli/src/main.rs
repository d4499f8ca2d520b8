use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use cgl_core::commutative::CommutativeAnalysis;
use cgl_core::exec::{with_threads, Exec};
use cgl_core::fixtures;
use cgl_core::pipeline::{
    analysis_json, presentation_from_json, read_spec, run_fixtures, run_pipeline, PipelineOptions,
};
use cgl_core::poisson::ExtensionSpec;
use cgl_core::quantizer::QuantizeOptions;
use cgl_core::quantum::DEFAULT_MAX_PEEL;
use cgl_core::text::parse_scalar;
use cgl_core::verifier::{verify, VerifyOptions, DEFAULT_SEED};
use cgl_core::Error;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

/// Quantizes symmetric integral Poisson-CGL extensions over Q[q, q^-1].
#[derive(Parser)]
#[command(name = "cgl-quantizer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Extension spec (JSON).
    spec: Option<PathBuf>,
    /// Use a bundled fixture instead of a file.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct Tuning {
    /// Peeling cap for torus-to-normal-form conversion.
    #[arg(long, default_value_t = DEFAULT_MAX_PEEL)]
    max_peel: usize,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Run the checks on one thread.
    #[arg(long)]
    sequential: bool,
}

impl Tuning {
    fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            seed: self.seed,
            max_peel: self.max_peel,
            exec: if self.sequential {
                Exec::Sequential
            } else {
                Exec::default()
            },
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the Poisson-CGL axioms of a spec.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Report the y-sequence, level sets, Poisson matrix and b-monomials.
    Analyze {
        #[command(flatten)]
        input: Input,
    },
    /// Build the quantum presentation.
    Quantize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        tuning: Tuning,
        /// Run the full verifier on the result.
        #[arg(long)]
        verify: bool,
        /// Write the per-step audit to this file.
        #[arg(long)]
        audit: Option<PathBuf>,
        /// Scale the last step's relations by this scalar (must be 1 at q = 1).
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
    },
    /// Verify a presentation (or a fresh quantization) against a spec.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        tuning: Tuning,
        /// Presentation JSON as written by `quantize`.
        #[arg(long)]
        presentation: Option<PathBuf>,
    },
    /// Bundled fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    List,
    Run {
        /// Only these fixtures (repeatable).
        #[arg(long)]
        fixture: Vec<String>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        tuning: Tuning,
    },
}

/// Failure carrying its exit code.
struct Exit(u8, anyhow::Error);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit(e.exit_code() as u8, e.into())
    }
}

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        Exit(2, e)
    }
}

fn load(input: &Input) -> Result<ExtensionSpec, Exit> {
    match (&input.spec, &input.fixture) {
        (Some(path), _) => Ok(read_spec(path)?),
        (None, Some(name)) => fixtures::by_name(name).map(|f| f.spec).ok_or_else(|| {
            Exit(
                2,
                anyhow::anyhow!("unknown fixture '{name}' (try `fixtures list`)"),
            )
        }),
        (None, None) => unreachable!("clap requires an input"),
    }
}

fn print(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    );
}

fn write_json(path: &Path, v: &Value) -> Result<(), Exit> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    std::fs::write(path, text + "\n")
        .with_context(|| format!("writing {}", path.display()))
        .map_err(|e| Exit(1, e))
}

fn status(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, Exit> {
    match cli.command {
        Command::Validate { input } => {
            let spec = load(&input)?;
            let report = spec.validate();
            print(&json!({ "name": spec.name, "report": report }));
            Ok(if report.valid { 0 } else { 2 })
        }
        Command::Analyze { input } => {
            let spec = load(&input)?;
            spec.ensure_valid()?;
            let analysis = CommutativeAnalysis::new(&spec)?;
            print(&analysis_json(&analysis));
            Ok(0)
        }
        Command::Quantize {
            input,
            tuning,
            verify,
            audit,
            epsilon,
        } => {
            let spec = load(&input)?;
            let epsilon = epsilon.map(|s| parse_scalar(&s)).transpose()?;
            let opts = PipelineOptions {
                quantize: QuantizeOptions {
                    max_peel: tuning.max_peel,
                },
                verify: verify.then(|| tuning.verify_options()),
                epsilon,
            };
            let run = run_pipeline(&spec, &opts)?;
            print(&run.to_json(audit.is_none()));
            if let Some(path) = audit {
                write_json(
                    &path,
                    &serde_json::to_value(&run.quantization.steps).unwrap(),
                )?;
            }
            Ok(status(run.passed()))
        }
        Command::Verify {
            input,
            tuning,
            presentation,
        } => {
            let spec = load(&input)?;
            spec.ensure_valid()?;
            let pres = match presentation {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let v: Value = serde_json::from_str(&text)
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    presentation_from_json(&v)?
                }
                None => {
                    run_pipeline(
                        &spec,
                        &PipelineOptions {
                            quantize: QuantizeOptions {
                                max_peel: tuning.max_peel,
                            },
                            ..Default::default()
                        },
                    )?
                    .presentation
                }
            };
            let report = verify(&spec, &pres, &tuning.verify_options());
            print(&serde_json::to_value(&report).unwrap());
            Ok(status(report.passed))
        }
        Command::Fixtures {
            action: FixturesAction::List,
        } => {
            for fx in fixtures::all() {
                println!("{:<14} n = {}, r = {}", fx.name, fx.spec.n, fx.spec.r);
            }
            Ok(0)
        }
        Command::Fixtures {
            action:
                FixturesAction::Run {
                    fixture,
                    jobs,
                    tuning,
                },
        } => {
            let mut selected = Vec::new();
            for fx in fixtures::all() {
                if fixture.is_empty() || fixture.contains(&fx.name) {
                    selected.push(fx);
                }
            }
            if let Some(missing) = fixture
                .iter()
                .find(|n| !selected.iter().any(|f| &f.name == *n))
            {
                return Err(Exit(2, anyhow::anyhow!("unknown fixture '{missing}'")));
            }
            let vopts = tuning.verify_options();
            let qopts = QuantizeOptions {
                max_peel: tuning.max_peel,
            };
            let exec = if tuning.sequential {
                Exec::Sequential
            } else {
                Exec::default()
            };
            let outcomes = match jobs {
                Some(j) => with_threads(j, || run_fixtures(&selected, exec, &vopts, &qopts)),
                None => run_fixtures(&selected, exec, &vopts, &qopts),
            };
            for o in &outcomes {
                eprintln!(
                    "{:<14} {}  {:.2}s",
                    o.name,
                    if o.passed { "PASS" } else { "FAIL" },
                    o.seconds
                );
            }
            print(&serde_json::to_value(&outcomes).unwrap());
            Ok(status(outcomes.iter().all(|o| o.passed)))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
