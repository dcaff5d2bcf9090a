use std::path::{Path, PathBuf};
use std::process::ExitCode;

use causticlab_cli::{bundled, run, verify, write_outputs, CliError, Scenario};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "causticlab", version, about = "Caustics, Maxwell sets and turbulence processes from scenario files")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Output directory (default: the scenario's [output] dir, else out/<name>).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for ensembles.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print observed values with the tolerances they are judged by.
    #[arg(long, global = true)]
    tol_report: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every product of a scenario and write the artifacts.
    Run { scenario: String },
    /// Run a scenario and compare against its [expect] block.
    Verify { scenario: String },
}

fn load(arg: &str) -> Result<Scenario, CliError> {
    let path = Path::new(arg);
    let text = if path.exists() {
        std::fs::read_to_string(path).map_err(|source| CliError::Input { path: path.to_path_buf(), source })?
    } else if let Some(text) = bundled::lookup(arg) {
        text.to_string()
    } else {
        let source = std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or bundled scenario");
        return Err(CliError::Input { path: path.to_path_buf(), source });
    };
    text.parse()
}

fn execute(args: &Args) -> Result<bool, CliError> {
    if let Some(n) = args.threads {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (arg, verifying) = match &args.command {
        Command::Run { scenario } => (scenario, false),
        Command::Verify { scenario } => (scenario, true),
    };
    let mut sc = load(arg)?;
    if let Some(s) = args.seed {
        sc.seed = s;
    }
    if verifying && sc.expect.is_none() {
        return Err(CliError::NoExpectations);
    }
    let dir = args.out.clone().or_else(|| sc.out.clone()).unwrap_or_else(|| Path::new("out").join(&sc.name));
    let mut outputs = run(&sc)?;
    let mut ok = true;
    if verifying {
        let report = verify(&sc, &outputs)?;
        for c in &report.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let observed = c.observed.as_ref().map_or("missing".to_string(), |o| format!("{o:?}"));
            println!("{status} {} observed {observed} expected {:?} tol {:e}", c.check, c.expected, c.tolerance);
        }
        ok = report.passed();
        outputs.files.insert("verify.json".into(), report.to_json().into_bytes());
    }
    if args.tol_report {
        println!("default tolerance {:e}", sc.default_tolerance);
        for (k, v) in &outputs.observed {
            println!("{k} = {v:?}");
        }
    }
    let written = write_outputs(&dir, &sc, &outputs)?;
    eprintln!("wrote {} files to {}", written.len(), dir.display());
    Ok(ok)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
