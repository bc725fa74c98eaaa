//! `simulate <scenario> --config <path> [--out <path>] [--format csv|json] [--threads N]`
//!
//! Exit codes: 0 success, 2 invalid configuration or parameters, 3 no
//! phase-matching solution, 4 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use polariton_sn::sweep::{self, OutputFormat, ScenarioKind};
use polariton_sn::Error;

const AFTER_HELP: &str = "\
Defaults: E_C(0) = 1.5 eV, Omega_R = 2 meV, E_b = 10 meV, delta = 0, p_s = 2 Omega_R / E_b,
medium slopes 0.5 (minus side) and 1.0 (plus side), t_mid = 0, certification margin 1e-7,
rank tolerance 1e-10. hopfield_sweep: delta in {-1, 0, 1}, k/k0 in [0, 3] (301 points).
beta_map: delta in [-2, 2] x p_s in [0, 1] (101 x 101), |kp| = 0.05 k0.
sn_vs_dt: 0 then 199 log-spaced windows over 8 decades ending where every phase difference
has wound through 20 pi.

Exit codes: 0 success, 2 invalid configuration, 3 no phase matching, 4 I/O failure.";

#[derive(Debug, Parser)]
#[command(name = "simulate", version, about = "Tabulate microcavity pair-emission scenarios", after_help = AFTER_HELP)]
struct Cli {
    /// hopfield_sweep, beta_map or sn_vs_dt
    scenario: String,
    /// JSON configuration file
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides `output_path`, stdout when neither is set
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Worker threads; SIM_THREADS takes precedence
    #[arg(long)]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoPhaseMatching { .. } => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}

fn thread_count(cli: Option<usize>) -> Result<Option<usize>, Error> {
    match std::env::var("SIM_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!("SIM_THREADS: expected a positive integer, got `{v}`"))),
        },
        Err(_) => match cli {
            Some(0) => Err(Error::Config("--threads: must be positive".into())),
            other => Ok(other),
        },
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let kind: ScenarioKind = cli.scenario.parse()?;
    let format: OutputFormat = cli.format.parse()?;
    let threads = thread_count(cli.threads)?;
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", cli.config.display())))?;
    let config = sweep::parse_config_for(&text, Some(kind))?;
    let target = cli.out.or_else(|| config.output_path.as_ref().map(PathBuf::from));

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let table = pool.install(|| sweep::run_scenario(&config))?;
    let rendered = table.render(format);
    match target {
        Some(path) => {
            std::fs::write(&path, rendered).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(rendered.as_bytes()).map_err(Error::from)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("simulate: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
