use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use scenario_lab::suites::{property_suite, selftest, SuiteReport};
use scenario_lab::{list_scenarios, load_config, run_scenario, ScenarioConfig, ScenarioError, ScenarioId};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BAND: u8 = 3;

#[derive(Parser)]
#[command(name = "reslab", version, about = "Resilience rates of dynamic risk measures")]
struct Cli {
    /// Print every check, not only failures.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its CSV tables, plot spec and meta.json.
    Run(RunArgs),
    /// List the built-in scenario ids.
    ListScenarios,
    /// Run the risk-measure property suite and print a pass/fail table.
    Properties(SuiteArgs),
    /// Run the quick reduction checks of every module.
    Selftest(SuiteArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: Option<String>,
    /// JSON config; missing fields take the scenario defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    /// Output root [default: ./out, or the config's output_dir].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 20_000)]
    paths: usize,
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
}

fn scenario_list() -> String {
    list_scenarios().iter().map(|(id, d)| format!("  {id:<24} {d}")).collect::<Vec<_>>().join("\n")
}

fn fail(e: ScenarioError) -> ExitCode {
    if e.is_config() || matches!(e, ScenarioError::Io { .. }) {
        eprintln!("error: {e}");
        if e.is_config() {
            eprintln!("known scenarios:\n{}", scenario_list());
        }
        ExitCode::from(EXIT_CONFIG)
    } else {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_FAILURE)
    }
}

fn resolve(args: &RunArgs) -> Result<ScenarioConfig, ScenarioError> {
    let base = match (&args.config, &args.scenario) {
        (Some(path), scenario) => {
            let cfg = load_config(path)?;
            if let Some(s) = scenario {
                let id = ScenarioId::from_str(s)?;
                if id != cfg.scenario_id {
                    return Err(ScenarioError::Config(format!(
                        "--scenario {id} disagrees with scenario_id {} in {}",
                        cfg.scenario_id,
                        path.display()
                    )));
                }
            }
            cfg
        }
        (None, Some(s)) => ScenarioConfig::defaults(ScenarioId::from_str(s)?),
        (None, None) => return Err(ScenarioError::Config("need --scenario or --config".into())),
    };
    let out = args.out.as_ref().map(|p| p.to_string_lossy().into_owned());
    base.with_overrides(args.seed, args.paths, args.steps, out.as_deref())
}

fn run(args: RunArgs, verbose: bool) -> ExitCode {
    if !(args.tolerance_scale.is_finite() && args.tolerance_scale > 0.0) {
        return fail(ScenarioError::Config(format!("--tolerance-scale must be > 0, got {}", args.tolerance_scale)));
    }
    let cfg = match resolve(&args) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let report = match run_scenario(&cfg, args.tolerance_scale) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let dir = match report.write(&cfg, args.tolerance_scale, Path::new(&cfg.output_dir)) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!(
        "{}: {} paths, {} steps, seed {} -> {}",
        cfg.scenario_id,
        cfg.n_paths,
        cfg.n_steps,
        cfg.seed,
        dir.display()
    );
    for c in &report.checks {
        if verbose || !c.passed {
            println!("  {}  {}  {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
    }
    println!("{} of {} checks passed", report.checks.len() - failed, report.checks.len());
    ExitCode::SUCCESS
}

fn suite(result: Result<SuiteReport, ScenarioError>, verbose: bool) -> ExitCode {
    match result {
        Ok(s) => {
            if verbose {
                print!("{}", s.table());
            } else {
                for c in s.failures() {
                    println!("FAIL  {}  {}", c.name, c.detail);
                }
            }
            println!("{}: {} of {} checks passed", s.name, s.checks.len() - s.failures().len(), s.checks.len());
            if s.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_BAND)
            }
        }
        Err(e) => fail(e),
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("RESLAB_THREADS") else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| format!("RESLAB_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err("RESLAB_THREADS must be >= 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    match cli.command {
        Command::Run(args) => run(args, cli.verbose),
        Command::ListScenarios => {
            println!("{}", scenario_list());
            ExitCode::SUCCESS
        }
        Command::Properties(a) => suite(property_suite(a.paths, a.seed, a.tolerance_scale), cli.verbose),
        Command::Selftest(a) => suite(selftest(a.tolerance_scale), cli.verbose),
    }
}
