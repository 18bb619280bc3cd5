use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spinring::cli::{
    self, cmd_clusters, cmd_primitives, cmd_recursion, cmd_simulate, run_verify, ExperimentSpec,
    Level, Overrides, Selection,
};
use spinring::network::default_alpha;

#[derive(Parser)]
#[command(
    name = "spinring",
    version,
    about = "Agent qubits on a ring of environment qubits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct Common {
    /// Experiment file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Rotation angle for every site, overriding the file.
    #[arg(long)]
    alpha: Option<f64>,
    /// Steps per agent, overriding the file.
    #[arg(long)]
    steps: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// `svg` adds scatter plots next to the data files.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

impl Common {
    fn spec(&self) -> spinring::Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::load(&self.config)?;
        spec.apply(&Overrides {
            alpha: self.alpha,
            steps: self.steps,
        });
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full state-vector run; writes per-agent Bloch trajectories.
    Simulate(Common),
    /// Evolves sign-pattern primitives of the first agent.
    Primitives {
        #[command(flatten)]
        common: Common,
        /// all, periodic, aperiodic, or comma-separated patterns such as `+-,--`.
        #[arg(long, default_value = "all")]
        selection: String,
        /// Initial head angle; defaults to the file's `phi0`, else 0.
        #[arg(long)]
        phi0: Option<f64>,
        /// Cycles searched for a return of the head state.
        #[arg(long, default_value_t = cli::DEFAULT_PRIMITIVE_HORIZON)]
        horizon: usize,
    },
    /// Closed recursion for one type-0 agent on a ground-state ring.
    Recursion {
        /// Ring size.
        #[arg(long)]
        sites: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value = "recursion")]
        name: String,
    },
    /// Cluster sums, sum rule and pair surplus of the final state.
    Clusters(Common),
    /// Runs the built-in invariant checks; nonzero exit on any failure.
    Verify {
        #[arg(long, default_value = "quick")]
        level: String,
        /// Also write the JSON report to this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("{}", f.display());
    }
}

fn run(command: Command) -> spinring::Result<bool> {
    match command {
        Command::Simulate(common) => {
            let spec = common.spec()?;
            print_files(&cmd_simulate(
                &spec,
                &common.out,
                common.format == Format::Svg,
            )?);
        }
        Command::Primitives {
            common,
            selection,
            phi0,
            horizon,
        } => {
            let spec = common.spec()?;
            let selection: Selection = selection.parse()?;
            let phi0 = phi0.unwrap_or_else(|| spec.phi0());
            let outcome = cmd_primitives(
                &spec,
                phi0,
                &selection,
                horizon,
                &common.out,
                common.format == Format::Svg,
            )?;
            for r in &outcome.records {
                let mark = if r.selected { "*" } else { " " };
                let class = if r.report.is_periodic() {
                    "periodic"
                } else {
                    "aperiodic"
                };
                eprintln!("{mark} {} {class}", r.pattern);
            }
            print_files(&outcome.files);
        }
        Command::Recursion {
            sites,
            alpha,
            steps,
            out,
            name,
        } => {
            let (summary, files) = cmd_recursion(
                &name,
                sites,
                alpha.unwrap_or_else(default_alpha),
                steps,
                &out,
            )?;
            if let Some(d) = summary.max_defect {
                eprintln!("max defect against simulation: {d:e}");
            }
            print_files(&files);
        }
        Command::Clusters(common) => {
            let spec = common.spec()?;
            let (_, path) = cmd_clusters(&spec, &common.out)?;
            print_files(&[path]);
        }
        Command::Verify { level, out } => {
            let level: Level = level.parse()?;
            let report = run_verify(level)?;
            for c in &report.checks {
                let status = if c.passed { "ok  " } else { "FAIL" };
                eprintln!("{status} {:<44} {:e}", c.name, c.value);
            }
            let json = serde_json::to_string_pretty(&report)? + "\n";
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    let path = dir.join("verify_report.json");
                    std::fs::write(&path, json)?;
                    print_files(&[path]);
                }
                None => print!("{json}"),
            }
            return Ok(report.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
