//! `valconv`: evaluate and convolve valuations from scene files, and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 assertion failure, 2 usage or data error.

mod scene;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use valconv::oned::Pair1D;
use valconv::valuation::probe_set;
use valconv::verify::{self, Config, Fault};
use valconv::ConvexBody;

use scene::Scene;

#[derive(Parser)]
#[command(name = "valconv", version, about = "Convolution of smooth valuations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a valuation on probe bodies; writes CSV rows `probe,value`.
    Eval {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        valuation: String,
        /// Comma-separated body names; defaults to the scene's probe list.
        #[arg(long, value_delimiter = ',')]
        probes: Option<Vec<String>>,
        /// Number of extra seeded random probes around the support bound.
        #[arg(long, default_value_t = 0)]
        random_probes: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// 1-D only: also evaluate with the (f, g) engine at this spacing.
        #[arg(long)]
        grid_spacing: Option<f64>,
        /// With --grid-spacing: fail if the two engines differ by more.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convolve two scene valuations and write the result as JSON.
    Convolve {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(value_parser = verify::SUITES)]
        suite: String,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    EdgeMergeSign,
}

enum Failure {
    Data(String),
    Assertion(String),
}

impl From<valconv::Error> for Failure {
    fn from(e: valconv::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Data(e)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Data(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Data(format!("cannot write output: {e}"))),
    }
}

fn interval_ends(k: &ConvexBody) -> Result<(f64, f64), Failure> {
    Ok((-k.support_function(&[-1.0])?, k.support_function(&[1.0])?))
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    scene: &Path,
    name: &str,
    probes: Option<Vec<String>>,
    random: usize,
    seed: u64,
    spacing: Option<f64>,
    tolerance: Option<f64>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let scene = Scene::load(scene)?;
    let psi = scene.valuation(name)?;
    let names = probes.unwrap_or_else(|| scene.probes.clone());
    let mut rows: Vec<(String, ConvexBody)> = names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| Ok((n.clone(), scene.body(n)?.clone())))
        .collect::<Result<_, String>>()?;
    if random > 0 {
        for (i, k) in probe_set(psi, seed, random)?.into_iter().enumerate() {
            rows.push((format!("random-{i}"), k));
        }
    }
    if tolerance.is_some() && spacing.is_none() {
        return Err(Failure::Data("--tolerance needs --grid-spacing".into()));
    }
    let pair = match spacing {
        Some(h) if psi.dim() == 1 => Some(Pair1D::from_valuation(psi, h)?),
        Some(_) => {
            return Err(Failure::Data(
                "--grid-spacing applies to 1-D valuations only".into(),
            ))
        }
        None => None,
    };
    let mut csv = String::from(if pair.is_some() {
        "probe,value,oned\n"
    } else {
        "probe,value\n"
    });
    let mut worst: f64 = 0.0;
    for (label, k) in &rows {
        let v = psi.evaluate(k)?;
        match &pair {
            Some(p) => {
                let (a, b) = interval_ends(k)?;
                let w = p.evaluate(a, b)?;
                worst = worst.max((v - w).abs());
                writeln!(csv, "{label},{v:.16e},{w:.16e}").expect("string write");
            }
            None => writeln!(csv, "{label},{v:.16e}").expect("string write"),
        }
    }
    emit(out, &csv)?;
    match tolerance {
        Some(t) if worst > t => Err(Failure::Assertion(format!(
            "engines differ by {worst:e}, tolerance {t:e}"
        ))),
        _ => Ok(()),
    }
}

fn cmd_convolve(scene: &Path, left: &str, right: &str, out: Option<&Path>) -> Result<(), Failure> {
    let scene = Scene::load(scene)?;
    let result = scene.valuation(left)?.convolve(scene.valuation(right)?)?;
    let mut text =
        serde_json::to_string_pretty(&result).map_err(|e| Failure::Data(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

fn cmd_verify(
    suite: &str,
    seed: u64,
    fault: Option<FaultArg>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let cfg = Config {
        seed,
        fault: fault.map(|FaultArg::EdgeMergeSign| Fault::EdgeMergeSign),
    };
    let report = verify::run_suite(suite, &cfg)?;
    for c in &report.criteria {
        eprintln!("{}", c.summary_line());
    }
    let mut text =
        serde_json::to_string_pretty(&report).map_err(|e| Failure::Data(e.to_string()))?;
    text.push('\n');
    emit(out, &text)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("suite '{suite}' failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval {
            scene,
            valuation,
            probes,
            random_probes,
            seed,
            grid_spacing,
            tolerance,
            out,
        } => cmd_eval(
            &scene,
            &valuation,
            probes,
            random_probes,
            seed,
            grid_spacing,
            tolerance,
            out.as_deref(),
        ),
        Command::Convolve {
            scene,
            left,
            right,
            out,
        } => cmd_convolve(&scene, &left, &right, out.as_deref()),
        Command::Verify {
            suite,
            seed,
            out,
            inject_fault,
        } => cmd_verify(&suite, seed, inject_fault, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("valconv: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("valconv: {msg}");
            ExitCode::from(2)
        }
    }
}
