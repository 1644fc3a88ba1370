use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermite_gap::geometry::build_domain;
use hermite_gap::solver1d::{Bc, Eigen1d, SLProblem, Unit};
use hermite_gap::solver2d::{neumann_spectrum, odd_spectrum, solve_unbounded, Spectrum2D, UnboundedOptions};
use hermite_gap_cli::battery::{battery_entries, load_dir, random_polygons, thread_count, RANDOM_POLYGONS};
use hermite_gap_cli::checks::DEFAULT_SWEEP;
use hermite_gap_cli::report::write_output;
use hermite_gap_cli::{emit_report, exit_code, read_domain_file, run_battery, CheckReport, CliError, Format, Runner, Settings};

#[derive(Parser)]
#[command(name = "hermite-gap", version, about = "Verify Hermite-operator eigenvalue inequalities on planar domains")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Finest mesh size for bounded 2-D solves.
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Slack for inequalities backed by 2-D solves.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Absolute stop tolerance of the truncation loop (default 1e-3·value).
    #[arg(long, global = true)]
    trunc_tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// First nontrivial 1-D eigenvalue on (a, b); `inf` ends are cut at 12.
    Eig1d {
        #[arg(allow_hyphen_values = true)]
        a: f64,
        #[arg(allow_hyphen_values = true)]
        b: f64,
        #[arg(long, value_enum, default_value_t = BcArg::Neumann)]
        bc: BcArg,
        #[arg(long, default_value_t = hermite_gap::solver1d::DEFAULT_GRID)]
        grid_n: usize,
    },
    /// Lowest 2-D eigenvalues of a domain file.
    Eig2d {
        domain: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Odd spectrum (half domain, Dirichlet on the axis).
        #[arg(long)]
        odd: bool,
        /// Write the finest half mesh with its modes in the ASCII mesh format.
        #[arg(long)]
        mesh_out: Option<PathBuf>,
    },
    /// Run one inequality check on a domain file.
    Check {
        #[arg(value_enum)]
        which: CheckArg,
        domain: PathBuf,
    },
    /// Parameter sweeps.
    Sweep {
        #[command(subcommand)]
        which: SweepCommand,
    },
    /// Pointwise audits of the truncation construction.
    Audit {
        #[command(subcommand)]
        which: AuditCommand,
    },
    /// Run the full battery of checked-in domains plus seeded random polygons.
    Battery {
        /// Read battery entries from this directory instead of the built-in set.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SweepCommand {
    /// μ₁ᵒᵈᵈ of dumbbells with shrinking corridors.
    Dumbbell {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SWEEP)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 1.0)]
        side: f64,
    },
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Reflection Jacobian and weight-ratio bounds on collar samples of Ωₙ.
    Jacobian {
        domain: PathBuf,
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BcArg {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Thm1,
    Thm2,
    Sw,
    An,
    Gap,
}

fn settings(g: &Global) -> Settings {
    let mut s = Settings::default();
    if let Some(h) = g.h {
        s.h = h;
    }
    if let Some(t) = g.tol {
        s.tol = t;
    }
    s.trunc_tol = g.trunc_tol;
    if let Some(seed) = g.seed {
        s.seed = seed;
    }
    s
}

fn eig1d_text(e: &Eigen1d, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(e).expect("eigen record serializes") + "\n",
        Format::Csv => format!("{}\n{}\n", Eigen1d::CSV_HEADER, e.csv_row()),
        Format::Text => format!(
            "{} eigenvalue on ({}, {}): {:.12} (order {})\n",
            e.bc,
            e.a,
            e.b,
            e.value,
            e.extrapolation.order.map_or("n/a".into(), |p| format!("{p:.3}"))
        ),
    }
}

fn spectrum_text(s: &Spectrum2D, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(s).expect("spectrum serializes") + "\n",
        Format::Csv => format!("{}\n{}", Spectrum2D::CSV_HEADER, s.csv_rows()),
        Format::Text => {
            let mut t = format!("{:?} spectrum, mesh h = {:.4}, {} bound\n", s.kind, s.mesh_h, s.bound_direction());
            for i in 0..s.values.len() {
                t += &format!("  {i}: {:.10}\n", s.best(i));
            }
            t
        }
    }
}

fn eig2d(path: &Path, k: usize, odd: bool, mesh_out: Option<&Path>, s: &Settings) -> Result<Spectrum2D, CliError> {
    let domain = build_domain(&read_domain_file(path)?.domain)?;
    let spectrum = if domain.is_unbounded_below() {
        let opts = UnboundedOptions { tol: s.trunc_tol, h: s.h_unbounded, full: !odd, radius: None };
        let sol = solve_unbounded(&domain, &opts)?;
        if odd { sol.odd.spectrum } else { sol.full.expect("full spectrum requested").spectrum }
    } else if odd {
        odd_spectrum(&domain, s.h, k)?
    } else {
        neumann_spectrum(&domain, s.h, k)?
    };
    if let Some(out) = mesh_out {
        let text = spectrum.modes_ascii().ok_or_else(|| CliError::Argument("no modes recorded".into()))?;
        write_output(&text, Some(out))?;
    }
    Ok(spectrum)
}

fn checks(cmd: &Command, runner: &Runner) -> Result<Vec<CheckReport>, CliError> {
    let reports = match cmd {
        Command::Check { which, domain } => {
            let entry = read_domain_file(domain)?;
            let d = build_domain(&entry.domain)?;
            let id = &entry.id;
            vec![match which {
                CheckArg::Thm1 => runner.check_thm1(id, &d),
                CheckArg::Thm2 => runner.check_thm2(id, &d),
                CheckArg::Sw => runner.check_sw(id, &d),
                CheckArg::An => runner.check_an(id, &d),
                CheckArg::Gap => runner.check_gap(id, &d),
            }]
        }
        Command::Sweep { which: SweepCommand::Dumbbell { eps, length, side } } => {
            vec![runner.dumbbell_sweep("dumbbell", eps, *length, *side)]
        }
        Command::Audit { which: AuditCommand::Jacobian { domain, n, samples } } => {
            let entry = read_domain_file(domain)?;
            let d = build_domain(&entry.domain)?;
            vec![runner.jacobian_audit(&entry.id, &d, *n, *samples, runner.settings.seed)]
        }
        Command::Battery { dir } => {
            let entries = match dir {
                Some(dir) => {
                    let mut e = load_dir(dir)?;
                    e.extend(random_polygons(runner.settings.seed, RANDOM_POLYGONS));
                    e
                }
                None => battery_entries(runner.settings.seed)?,
            };
            run_battery(runner, &entries, thread_count())
        }
        Command::Eig1d { .. } | Command::Eig2d { .. } => unreachable!("not a check"),
    };
    Ok(reports)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let s = settings(&cli.global);
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Eig1d { a, b, bc, grid_n } => {
            let bc = match bc {
                BcArg::Neumann => Bc::Neumann,
                BcArg::Dirichlet => Bc::Dirichlet,
            };
            let e = SLProblem::new(*a, *b, bc, &Unit, *grid_n).solve()?;
            write_output(&eig1d_text(&e, cli.global.format), out)?;
            Ok(0)
        }
        Command::Eig2d { domain, k, odd, mesh_out } => {
            let spectrum = eig2d(domain, *k, *odd, mesh_out.as_deref(), &s)?;
            write_output(&spectrum_text(&spectrum, cli.global.format), out)?;
            Ok(0)
        }
        cmd => {
            let runner = Runner::new(s);
            let reports = checks(cmd, &runner)?;
            write_output(&emit_report(&reports, cli.global.format), out)?;
            Ok(exit_code(&reports))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
