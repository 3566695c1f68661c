use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cli_harness::{echo, exit, parse_config, resolve_output_dir, run_scenario, validate, Preset};

#[derive(Parser)]
#[command(name = "bouss", version, about = "Stationary and evolution Boussinesq experiments on a periodic box")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its artifacts.
    Run(Common),
    /// Validate a config and print it with defaults filled.
    Validate(Common),
    /// Print the summary of a finished run.
    Report(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides the environment and the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Desk,
    Heavy,
}

fn load(common: &Common) -> Result<cli_harness::ScenarioConfig, String> {
    let path = common.config.as_ref().ok_or("--config is required")?;
    let raw = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    // Overrides go in before validation so box-dependent defaults follow the preset.
    let mut cfg = parse_config(&raw).map_err(|e| e.to_string())?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(p) = common.preset {
        cfg.box_spec = match p {
            PresetArg::Desk => Preset::Desk,
            PresetArg::Heavy => Preset::Heavy,
        }
        .box_spec();
    }
    validate(cfg).map_err(|e| e.to_string())
}

fn run(common: &Common) -> ExitCode {
    let cfg = match load(common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::CONFIG_ERROR as u8);
        }
    };
    let dir = resolve_output_dir(&cfg, common.out.clone());
    match run_scenario(&cfg, &dir) {
        Ok(outcome) => {
            for c in &outcome.checks {
                println!("{c}");
            }
            let failed = outcome.failures();
            if failed > 0 {
                eprintln!("error: stage `checks`: {failed} check(s) failed; artifacts in {}", dir.display());
                return ExitCode::from(exit::NUMERICAL_FAILURE as u8);
            }
            println!("artifacts written to {}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}; partial artifacts in {}", dir.display());
            ExitCode::from(exit::NUMERICAL_FAILURE as u8)
        }
    }
}

fn report(common: &Common) -> ExitCode {
    let dir = match (&common.out, &common.config) {
        (Some(d), _) => d.clone(),
        (None, Some(_)) => match load(common) {
            Ok(cfg) => resolve_output_dir(&cfg, None),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(exit::CONFIG_ERROR as u8);
            }
        },
        (None, None) => {
            eprintln!("error: report needs --out DIR or --config PATH");
            return ExitCode::from(exit::CONFIG_ERROR as u8);
        }
    };
    print_report(&dir)
}

fn print_report(dir: &Path) -> ExitCode {
    let summary = match fs::read_to_string(dir.join("summary.txt")) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: no summary in {}: {e}", dir.display());
            return ExitCode::from(exit::CONFIG_ERROR as u8);
        }
    };
    if let Ok(k) = fs::read_to_string(dir.join("constants.json")) {
        println!("constants: {}", k.split_whitespace().collect::<Vec<_>>().join(" "));
    }
    print!("{summary}");
    if summary.lines().any(|l| l.starts_with("FAIL")) {
        ExitCode::from(exit::NUMERICAL_FAILURE as u8)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(c) => run(c),
        Command::Validate(c) => match load(c) {
            Ok(cfg) => {
                println!("{}", echo(&cfg));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit::CONFIG_ERROR as u8)
            }
        },
        Command::Report(c) => report(c),
    }
}
