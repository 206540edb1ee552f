//! `cluster-pump` command-line driver.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or input error,
//! 3 resource cap exceeded. Errors go to stderr as one JSON object.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cluster_pump::circuit::CliffordCircuit;
use cluster_pump::compiler::compile_pump;
use cluster_pump::experiment::{
    run_postselected, sweep, write_csv, AcceptRule, PerturbationKind, PerturbationSpec, RunConfig,
    SweepConfig,
};
use cluster_pump::f2poly::F2LaurentPoly;
use cluster_pump::lattice::{
    build, Family, FccTermination, FractalOptions, LatticeSpec, SquareTermination,
    UnionJackTermination,
};
use cluster_pump::statevector::DEFAULT_QUBIT_CAP;
use cluster_pump::verify::{symmetry_check, verify_pump};

#[derive(Parser)]
#[command(
    name = "cluster-pump",
    version,
    about = "Boundary cluster-state pumps: build, compile, verify, perturb"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    Square,
    Triangular,
    UnionJack,
    Fcc,
    Honeycomb,
    Fractal,
}

#[derive(Clone, Copy, ValueEnum)]
enum TerminationArg {
    Open,
    PeriodicX,
    Cylinder,
    Slab,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(name = "Z_TYPE", alias = "z")]
    Z,
    #[value(name = "X_TYPE", alias = "x")]
    X,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    PerGenerator,
    GlobalParity,
}

#[derive(Subcommand)]
enum Command {
    /// Write a lattice spec as JSON.
    Build {
        #[arg(long, value_enum)]
        lattice: LatticeArg,
        #[arg(long, num_args = 1..=3, required = true)]
        dims: Vec<usize>,
        /// Cellular-automaton rule for `fractal`, e.g. "1+x".
        #[arg(long)]
        ca: Option<String>,
        #[arg(long, value_enum)]
        termination: Option<TerminationArg>,
        /// Fractal: make y periodic.
        #[arg(long)]
        y_periodic: bool,
        /// Fractal: open x boundary (no polynomial certificate).
        #[arg(long)]
        x_open: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile the pump into a reduced Clifford circuit.
    Compile {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Check a circuit against the spec's bulk and boundary stabilizers.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Certify that every term commutes with every symmetry generator.
    Symcheck {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Evolve under a perturbed Hamiltonian and post-select on the bulk.
    Perturb {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "per-generator")]
        accept_rule: RuleArg,
        /// Random per-term signs seeded from `--seed`.
        #[arg(long)]
        disorder: bool,
        #[arg(long, default_value_t = DEFAULT_QUBIT_CAP)]
        cap: usize,
    },
    /// Run a JSON-configured sweep, write CSV rows and print the fits.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Full report (rows and fits) as JSON; printed to stdout if absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "usage",
            message: message.into(),
        }
    }
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: &'a str,
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return report(Failure::usage(e.to_string().trim_end())),
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> ExitCode {
    let body = serde_json::to_string(&ErrorJson {
        error: f.kind,
        message: &f.message,
    })
    .expect("plain strings");
    eprintln!("{body}");
    ExitCode::from(f.code)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: 2,
            kind: "io",
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load_spec(path: &Path) -> Result<LatticeSpec, Failure> {
    LatticeSpec::from_json(&read(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn family_from_args(
    lattice: LatticeArg,
    dims: &[usize],
    ca: Option<&str>,
    termination: Option<TerminationArg>,
    y_periodic: bool,
    x_open: bool,
) -> Result<Family, Failure> {
    let need = |k: usize| -> Result<(), Failure> {
        if dims.len() == k {
            Ok(())
        } else {
            Err(Failure::usage(format!(
                "this lattice takes {k} dims, got {}",
                dims.len()
            )))
        }
    };
    let bad_term = || Failure::usage("termination not available for this lattice");
    if ca.is_some() && !matches!(lattice, LatticeArg::Fractal) {
        return Err(Failure::usage("--ca only applies to --lattice fractal"));
    }
    Ok(match lattice {
        LatticeArg::Square => {
            need(2)?;
            let termination = match termination {
                None | Some(TerminationArg::Open) => SquareTermination::Open,
                Some(TerminationArg::PeriodicX) => SquareTermination::PeriodicX,
                _ => return Err(bad_term()),
            };
            Family::Square {
                nx: dims[0],
                ny: dims[1],
                termination,
            }
        }
        LatticeArg::UnionJack => {
            let (nx, ny, default) = match dims {
                [n] => (*n, *n, UnionJackTermination::Open),
                [nx, ny] => (*nx, *ny, UnionJackTermination::Cylinder),
                _ => return Err(Failure::usage("union-jack takes 1 or 2 dims")),
            };
            let termination = match termination {
                None => default,
                Some(TerminationArg::Open) => UnionJackTermination::Open,
                Some(TerminationArg::Cylinder) => UnionJackTermination::Cylinder,
                _ => return Err(bad_term()),
            };
            Family::UnionJack {
                nx,
                ny,
                termination,
            }
        }
        LatticeArg::Triangular => {
            need(2)?;
            if termination.is_some() {
                return Err(bad_term());
            }
            Family::Triangular {
                period: dims[0],
                rows: dims[1],
            }
        }
        LatticeArg::Fcc => {
            need(3)?;
            let termination = match termination {
                None | Some(TerminationArg::Slab) => FccTermination::SlabX,
                Some(TerminationArg::Open) => FccTermination::Open,
                _ => return Err(bad_term()),
            };
            Family::Fcc {
                nx: dims[0],
                ny: dims[1],
                nz: dims[2],
                termination,
            }
        }
        LatticeArg::Honeycomb | LatticeArg::Fractal => {
            need(3)?;
            if termination.is_some() {
                return Err(bad_term());
            }
            let f = match (lattice, ca) {
                (LatticeArg::Honeycomb, None) => "1 + x".to_string(),
                (LatticeArg::Honeycomb, Some(_)) => unreachable!(),
                (_, Some(text)) => {
                    let p: F2LaurentPoly = text
                        .parse()
                        .map_err(|e| Failure::usage(format!("--ca: {e}")))?;
                    p.to_string()
                }
                (_, None) => return Err(Failure::usage("--lattice fractal needs --ca")),
            };
            let options = FractalOptions {
                x_periodic: !x_open,
                y_periodic,
            };
            Family::Fractal {
                f,
                nx: dims[0],
                ny: dims[1],
                layers: dims[2],
                options,
            }
        }
    })
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Build {
            lattice,
            dims,
            ca,
            termination,
            y_periodic,
            x_open,
            out,
        } => {
            let family = family_from_args(
                lattice,
                &dims,
                ca.as_deref(),
                termination,
                y_periodic,
                x_open,
            )?;
            let spec = build(&family).map_err(|e| Failure::usage(e.to_string()))?;
            let mut text = spec.to_json();
            text.push('\n');
            write_or_print(out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Compile { spec, out, summary } => {
            let spec = load_spec(&spec)?;
            let cert = symmetry_check(&spec);
            if !cert.pass {
                eprint!("{}", json(&cert));
                return Ok(false);
            }
            let pump = compile_pump(&spec).map_err(|e| Failure {
                code: 1,
                kind: "compile",
                message: e.to_string(),
            })?;
            write_or_print(out.as_deref(), &pump.reduced.to_string())?;
            if let Some(path) = summary {
                write_or_print(Some(&path), &json(&pump.summary(&spec)))?;
            }
            Ok(true)
        }
        Command::Verify { spec, circuit } => {
            let spec = load_spec(&spec)?;
            let c: CliffordCircuit = read(&circuit)?
                .parse()
                .map_err(|e| Failure::usage(format!("{}: {e}", circuit.display())))?;
            let r = verify_pump(&spec, &c).map_err(|e| Failure::usage(e.to_string()))?;
            print!("{}", json(&r));
            Ok(r.pass)
        }
        Command::Symcheck { spec } => {
            let spec = load_spec(&spec)?;
            let r = symmetry_check(&spec);
            print!("{}", json(&r));
            Ok(r.pass)
        }
        Command::Perturb {
            spec,
            kind,
            eps,
            seed,
            samples,
            accept_rule,
            disorder,
            cap,
        } => {
            let spec = load_spec(&spec)?;
            let p = PerturbationSpec {
                kind: match kind {
                    KindArg::Z => PerturbationKind::ZType,
                    KindArg::X => PerturbationKind::XType,
                },
                epsilon: eps,
                disorder_seed: disorder.then_some(seed),
            };
            let accept_rule = match accept_rule {
                RuleArg::PerGenerator => AcceptRule::PerGenerator,
                RuleArg::GlobalParity => AcceptRule::GlobalParity,
            };
            let r = run_postselected(
                &spec,
                &p,
                &RunConfig {
                    seed,
                    samples,
                    accept_rule,
                    cap,
                },
            )
            .map_err(experiment_failure)?;
            print!("{}", json(&r));
            Ok(true)
        }
        Command::Sweep {
            config,
            out,
            report,
        } => {
            let cfg: SweepConfig = serde_json::from_str(&read(&config)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", config.display())))?;
            let r = sweep(&cfg).map_err(experiment_failure)?;
            let mut buf = Vec::new();
            write_csv(&r.rows, &mut buf).map_err(experiment_failure)?;
            fs::write(&out, buf).map_err(|e| Failure {
                code: 2,
                kind: "io",
                message: format!("{}: {e}", out.display()),
            })?;
            write_or_print(report.as_deref(), &json(&r))?;
            Ok(true)
        }
    }
}

fn experiment_failure(e: cluster_pump::experiment::ExperimentError) -> Failure {
    if e.is_resource_cap() {
        Failure {
            code: 3,
            kind: "resource_cap",
            message: e.to_string(),
        }
    } else {
        Failure::usage(e.to_string())
    }
}
