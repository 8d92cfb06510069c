use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use otc::{
    compute, oracle_value, parse_input, report, run_oracle, to_json_string, InputSpec, RunFlags,
    EXIT_ERROR, EXIT_OK,
};
use otc_core::characters::CertifyMode;
use otc_core::cohomology::CheckStatus;

#[derive(Parser)]
#[command(name = "otc", version, about = "Cohomology invariants of Oeljeklaus-Toma manifolds")]
struct Cli {
    /// Worker threads for the parallel enumeration.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Certify {
    Exact,
    Numeric,
}

#[derive(clap::Args)]
struct ComputeArgs {
    input: PathBuf,
    /// Starting precision in bits.
    #[arg(long)]
    precision: Option<u64>,
    #[arg(long, value_enum)]
    certify: Option<Certify>,
    /// Re-verify mirrored index sets instead of copying verdicts.
    #[arg(long)]
    paranoid: bool,
    /// Also compute twisted Betti numbers for the input's theta.
    #[arg(long)]
    theta_from_input: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit telemetry.
    #[arg(long)]
    quiet: bool,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and print a JSON report.
    Compute(ComputeArgs),
    /// Run the pipeline and check every consistency identity.
    Verify {
        input: PathBuf,
        #[arg(long)]
        precision: Option<u64>,
        #[arg(long, value_enum)]
        certify: Option<Certify>,
    },
    /// Compare the spectrum with brute-force ball evaluation (degree <= 8).
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = 512)]
        bits: u64,
    },
}

fn mode(c: Option<Certify>) -> Option<CertifyMode> {
    c.map(|c| match c {
        Certify::Exact => CertifyMode::Exact,
        Certify::Numeric => CertifyMode::Numeric,
    })
}

fn load(path: &Path) -> Result<InputSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_input(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn configure_workers(workers: Option<usize>) -> Result<(), String> {
    let Some(n) = workers else { return Ok(()) };
    if n == 0 {
        return Err("--workers must be at least 1".into());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())?;
    Ok(())
}

fn run(cli: Cli) -> Result<i32, String> {
    configure_workers(cli.workers)?;
    match cli.command {
        Command::Compute(args) => {
            let spec = load(&args.input)?;
            let flags = RunFlags {
                precision: args.precision,
                certify: mode(args.certify),
                paranoid: args.paranoid,
                theta_from_input: args.theta_from_input,
                quiet: args.quiet,
                timing: args.timing,
            };
            let c = compute(&spec, &flags).map_err(|e| e.to_string())?;
            let text = to_json_string(&report(&c, &flags));
            match &args.out {
                Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?,
                None => print!("{text}"),
            }
            for f in c.consistency.failures() {
                eprintln!(
                    "consistency violation: {}: {}",
                    f.name,
                    f.detail.as_deref().unwrap_or("")
                );
            }
            Ok(c.exit_code())
        }
        Command::Verify {
            input,
            precision,
            certify,
        } => {
            let spec = load(&input)?;
            let flags = RunFlags {
                precision,
                certify: mode(certify),
                quiet: true,
                ..RunFlags::default()
            };
            let c = compute(&spec, &flags).map_err(|e| e.to_string())?;
            for check in &c.consistency.checks {
                let tag = match check.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skipped => "SKIP",
                };
                match &check.detail {
                    Some(d) if check.status != CheckStatus::Pass => println!("{tag} {}: {d}", check.name),
                    _ => println!("{tag} {}", check.name),
                }
            }
            if let Some(f) = c.consistency.failures().first() {
                eprintln!("violated identity: {}", f.name);
            }
            let code = c.exit_code();
            println!("{}", if code == EXIT_OK { "verify: pass" } else { "verify: fail" });
            Ok(code)
        }
        Command::Oracle { input, bits } => {
            let spec = load(&input)?;
            let r = run_oracle(&spec, &RunFlags::default(), bits).map_err(|e| e.to_string())?;
            print!("{}", to_json_string(&oracle_value(&r)));
            if r.comparison.agree {
                Ok(EXIT_OK)
            } else {
                eprintln!("oracle disagrees with the pipeline");
                Ok(EXIT_ERROR)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
