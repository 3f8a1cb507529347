use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use maritime_relay::config::{parse_config_with, parse_fleet};
use maritime_relay::link_budget::{chain, LinkBudgetParams};
use maritime_relay::report::{emit_results, run_study, Study};
use maritime_relay::{Architecture, Error, FleetMode, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "maritime-relay",
    version,
    about = "UAV relay simulator for shadowed ship-to-shore links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one architecture.
    Run(RunArgs),
    /// Simulate all four architectures on identical ship trajectories.
    Compare(RunArgs),
    /// Like `compare`, but defaults to the configured number of runs.
    Montecarlo(RunArgs),
    /// Print the free-space link budget at one distance.
    Linkbudget(LinkBudgetArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// nr, fpr, cfmr or lsmr.
    #[arg(long)]
    arch: Option<String>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// single or multi.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct LinkBudgetArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    /// Link distance in metres.
    #[arg(long, default_value_t = 500.0)]
    distance: f64,
    /// Required E_b/N_0 in dB.
    #[arg(long, default_value_t = 10.0)]
    ebn0_db: f64,
}

fn load(config: Option<&PathBuf>, scenario: Option<&str>) -> Result<ScenarioConfig, Error> {
    let fleet: Option<FleetMode> = scenario.map(parse_fleet).transpose()?;
    match config {
        Some(path) => parse_config_with(path, fleet),
        None => {
            let cfg = ScenarioConfig::defaults(fleet.unwrap_or(FleetMode::Multi));
            cfg.validate()?;
            Ok(cfg)
        }
    }
}

fn simulate(
    args: &RunArgs,
    default_archs: &[Architecture],
    default_runs: Option<usize>,
) -> Result<(), Error> {
    let mut cfg = load(args.config.as_ref(), args.scenario.as_deref())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let archs = match &args.arch {
        Some(raw) => {
            let arch: Architecture = raw.parse()?;
            cfg.architecture = arch;
            vec![arch]
        }
        None => default_archs.to_vec(),
    };
    let runs = args.runs.or(default_runs).unwrap_or(cfg.runs);
    if runs == 0 {
        return Err(Error::InvalidInput("--runs must be at least 1".into()));
    }
    let study = run_study(&cfg, &archs, runs)?;
    let files = emit_results(&study, &args.out)?;
    print_summary(&study)?;
    println!(
        "wrote {}",
        files.summary.parent().unwrap_or(&args.out).display()
    );
    Ok(())
}

fn print_summary(study: &Study) -> Result<(), Error> {
    let report = study.report()?;
    println!(
        "{:<6} {:>14} {:>16} {:>16}",
        "arch", "rate_bpshz", "throughput_bps", "energy_J"
    );
    for a in &report.architectures {
        println!(
            "{:<6} {:>14.4} {:>16.1} {:>16.1}",
            a.arch.as_str(),
            a.mean_rate_bpshz,
            a.mean_throughput_bps,
            a.total_energy_j
        );
    }
    Ok(())
}

fn linkbudget(args: &LinkBudgetArgs) -> Result<(), Error> {
    let cfg = load(args.config.as_ref(), args.scenario.as_deref())?;
    let params = LinkBudgetParams::from_channel(&cfg.channel, args.ebn0_db);
    let c = chain(&params, args.distance)?;
    let rows: [(&str, f64); 12] = [
        ("distance_m", c.distance_m),
        ("fspl", c.fspl_linear),
        ("fspl_db", c.fspl_db),
        ("eirp_w", c.eirp_w),
        ("rx_power_w", c.received_power_w),
        ("rx_power_dbm", c.received_power_dbm),
        ("noise_power_w", c.noise_power_w),
        ("pr_over_n", c.pr_over_n),
        ("pr_over_n_db", c.pr_over_n_db),
        ("pr_over_n0", c.pr_over_n0),
        ("rate_bps", c.rate_bps),
        ("spectral_efficiency", c.spectral_efficiency),
    ];
    for (label, value) in rows {
        println!("{label:<20} {value:e}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => simulate(args, &[Architecture::Lsmr], Some(1)),
        Command::Compare(args) => simulate(args, &Architecture::ALL, Some(1)),
        Command::Montecarlo(args) => simulate(args, &Architecture::ALL, None),
        Command::Linkbudget(args) => linkbudget(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
