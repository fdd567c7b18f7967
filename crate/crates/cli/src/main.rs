use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use opfunc_core::besov::{besov_norm, modulus_star, ModulusOfContinuity, SupOptions};
use opfunc_core::calculus::GridFunction;
use opfunc_core::dyadic::{maximal_admissible, Window};
use opfunc_core::experiment::{
    emit_all, kontr_grids, output_dir, preset, run_experiment, ExperimentConfig, KontrFunction, PresetParams,
    Report, EXPERIMENTS, PRESETS,
};
use opfunc_core::multiplier::{gamma2_norm, multiplier_norm_on_grid, PsiConstruction, DEFAULT_TOL};
use opfunc_core::spectral::MatrixJson;

#[derive(Parser)]
#[command(name = "opfunc", version, about = "Perturbation bounds for functions of commuting self-adjoint matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write out/{experiment}/{report.json,rows.csv,curve.dat}.
    Run {
        experiment: String,
        /// JSON config; missing fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Parent directory of the report directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List function presets and experiments.
    ListPresets,
    /// Check f(x) - f(y) = sum_j (x_j - y_j) Psi_j(x, y) on seeded pairs.
    PsiCheck {
        #[arg(long, default_value = "random")]
        preset: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 8)]
        terms: usize,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, default_value_t = 32.0)]
        half_width: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// gamma_2 norm of a matrix given as {"dim", "entries"} JSON.
    Gamma2 {
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// gamma_2 of the divided differences of g(x1 - x3) sin x2 on the N x N grid.
    GridNorm {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Besov B^s_{inf,1} norm of a preset.
    Besov {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        terms: usize,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// omega_*(delta) for t^alpha or the log-Lipschitz modulus.
    ModulusStar {
        #[arg(long)]
        delta: f64,
        /// Power exponent; omit for t (1 + ln(1/t)).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Maximal admissible dyadic cube containing (x, y).
    Cubes {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
    },
}

fn print_report(r: &Report) {
    for c in &r.checks {
        let status = match (c.exploratory, c.passed) {
            (true, _) => "info",
            (false, true) => "pass",
            (false, false) => "FAIL",
        };
        println!("{status}  {}: {:.6e} (threshold {:.3e})", c.name, c.value, c.threshold);
    }
    for a in &r.aggregates {
        println!(
            "      {}: {} rows, max ratio {:.6e}, median {:.6e}",
            a.group, a.count, a.max_ratio, a.median_ratio
        );
    }
    println!("{}", if r.passed { "PASSED" } else { "FAILED" });
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Run {
            experiment,
            config,
            seed,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let mut v: serde_json::Value = serde_json::from_str(&text)?;
                    if let Some(obj) = v.as_object_mut() {
                        obj.insert("experiment".into(), experiment.clone().into());
                    }
                    ExperimentConfig::from_json(&v.to_string())?
                }
                None => ExperimentConfig::for_experiment(&experiment),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.out = o;
            }
            let report = run_experiment(&cfg)?;
            let dir = output_dir(&cfg);
            for p in emit_all(&report, &dir)? {
                println!("wrote {}", p.display());
            }
            print_report(&report);
            Ok(report.passed)
        }
        Command::ListPresets => {
            println!("presets:");
            for (name, about) in PRESETS {
                println!("  {name:<10} {about}");
            }
            println!("experiments:");
            for (name, about) in EXPERIMENTS {
                println!("  {name:<10} {about}");
            }
            Ok(true)
        }
        Command::PsiCheck {
            preset: name,
            n,
            sigma,
            terms,
            pairs,
            half_width,
            seed,
        } => {
            let f = preset(
                &name,
                &PresetParams {
                    n,
                    k: terms,
                    sigma,
                    seed,
                    ..Default::default()
                },
            )?;
            let c = PsiConstruction::for_bandwidth(&f);
            let sweep = c.identity_sweep(&Window::cube(f.n(), -half_width, half_width), pairs, seed)?;
            println!(
                "pairs {}  large cells {}  worst residual/tolerance {:.3e}",
                sweep.pairs, sweep.large_cells, sweep.worst
            );
            Ok(sweep.ok())
        }
        Command::Gamma2 { matrix, tol } => {
            let text = fs::read_to_string(&matrix).with_context(|| format!("reading {}", matrix.display()))?;
            let m = MatrixJson::parse(&text)?.matrix()?;
            let cert = gamma2_norm(&m, tol)?;
            println!("{}", serde_json::to_string_pretty(&cert.to_json())?);
            Ok(cert.converged)
        }
        Command::GridNorm { size, tol, seed } => {
            if size < 2 {
                bail!("size must be at least 2");
            }
            let (xs, ys) = kontr_grids(size, seed);
            for j in 0..3 {
                let phi = GridFunction::divided_difference(&KontrFunction, j);
                let c = multiplier_norm_on_grid(&phi, &xs, &ys, tol)?;
                println!(
                    "delta{}  value {:.6}  lower {:.6}  upper {:.6}  gap {:.2e}",
                    j + 1,
                    c.value,
                    c.lower,
                    c.upper,
                    c.gap
                );
            }
            Ok(true)
        }
        Command::Besov {
            preset: name,
            s,
            n,
            terms,
            alpha,
        } => {
            let f = preset(
                &name,
                &PresetParams {
                    n,
                    k: terms,
                    alpha,
                    ..Default::default()
                },
            )?;
            println!("{:.12e}", besov_norm(&f, s, &SupOptions::default()));
            Ok(true)
        }
        Command::ModulusStar { delta, alpha } => {
            let w = match alpha {
                Some(a) => ModulusOfContinuity::power(a)?,
                None => ModulusOfContinuity::LogLipschitz,
            };
            println!("{:.15e}", modulus_star(&w, delta)?);
            Ok(true)
        }
        Command::Cubes { x, y } => {
            if x.len() != y.len() || x.is_empty() {
                bail!("x and y need the same positive number of coordinates");
            }
            let c = maximal_admissible(&x, &y);
            println!(
                "{}",
                serde_json::json!({
                    "cube": c,
                    "sidelength": c.sidelength(),
                    "separation": c.separation(),
                })
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
