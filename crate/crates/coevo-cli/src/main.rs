//! Command-line front end: single runs, bias-grid sweeps, config validation.
//!
//! Configuration comes from flags, optionally layered over a plain-text
//! key=value file (`--config`); flags win. Results are comma-separated files
//! under `--out-dir`. Exit codes: 0 success, 2 bad configuration, 3 I/O
//! failure.

use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use coevo_core::{
    AvaParams, EngineConfig, Error, Result, RvParams, StrategySpec, SweepConfig, report,
};

#[derive(Parser)]
#[command(name = "coevo", version, about = "Two-population competitive coevolution laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its per-generation trace.
    Run(Overrides),
    /// Sweep the bias grid and write per-trial and per-cell result files.
    Sweep(Overrides),
    /// Check the configuration and print its effective values without running.
    Validate(Overrides),
}

/// Every setting is optional here; unset values fall back to the config file,
/// then to the defaults. Field names double as config-file keys (a file may
/// also spell them with `-`).
#[derive(Args, Clone, Debug, Default)]
struct Overrides {
    /// Plain-text key=value file applied beneath the flags.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// canonical, rv, ava, or sf; sweep accepts a comma-separated list.
    #[arg(long)]
    strategy: Option<String>,
    /// Host mutation bias in [0, 1].
    #[arg(long)]
    beta_h: Option<f64>,
    /// Parasite mutation bias in [0, 1].
    #[arg(long)]
    beta_p: Option<f64>,
    /// Run seed; the sweep derives one seed per trial from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per grid cell (sweep only).
    #[arg(long)]
    trials: Option<usize>,
    /// Generations per run.
    #[arg(long)]
    generations: Option<usize>,
    /// Individuals per population.
    #[arg(long)]
    pop_size: Option<usize>,
    /// Bits per genome.
    #[arg(long)]
    genome_length: Option<usize>,
    /// Opponents sampled per evaluation.
    #[arg(long)]
    sample_size: Option<usize>,
    /// Per-bit mutation probability in [0, 1].
    #[arg(long)]
    mutation_rate: Option<f64>,
    /// Contestants per tournament.
    #[arg(long)]
    tournament_size: Option<usize>,
    /// Fixed host virulence in [0.5, 1] (rv only).
    #[arg(long)]
    rv_upsilon_host: Option<f64>,
    /// Fixed parasite virulence in [0.5, 1] (rv only).
    #[arg(long)]
    rv_upsilon_par: Option<f64>,
    /// Adaptive-virulence learning rate (ava only).
    #[arg(long)]
    ava_alpha: Option<f64>,
    /// Adaptive-virulence momentum (ava only).
    #[arg(long)]
    ava_mu: Option<f64>,
    /// Adaptive-virulence target mean score (ava only).
    #[arg(long)]
    ava_tau: Option<f64>,
    /// Bias grid step (sweep only).
    #[arg(long)]
    grid_step: Option<f64>,
    /// Directory for result files.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

impl Overrides {
    /// `flags` values win over `self`.
    fn overlaid_with(mut self, mut flags: Overrides) -> Overrides {
        macro_rules! overlay {
            ($($field:ident),* $(,)?) => {
                $(self.$field = flags.$field.take().or(self.$field.take());)*
            };
        }
        overlay!(
            strategy,
            beta_h,
            beta_p,
            seed,
            trials,
            generations,
            pop_size,
            genome_length,
            sample_size,
            mutation_rate,
            tournament_size,
            rv_upsilon_host,
            rv_upsilon_par,
            ava_alpha,
            ava_mu,
            ava_tau,
            grid_step,
            out_dir,
        );
        self
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "strategy" => self.strategy = Some(value.to_string()),
            "beta_h" => self.beta_h = Some(parse_value(key, value)?),
            "beta_p" => self.beta_p = Some(parse_value(key, value)?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "trials" => self.trials = Some(parse_value(key, value)?),
            "generations" => self.generations = Some(parse_value(key, value)?),
            "pop_size" => self.pop_size = Some(parse_value(key, value)?),
            "genome_length" => self.genome_length = Some(parse_value(key, value)?),
            "sample_size" => self.sample_size = Some(parse_value(key, value)?),
            "mutation_rate" => self.mutation_rate = Some(parse_value(key, value)?),
            "tournament_size" => self.tournament_size = Some(parse_value(key, value)?),
            "rv_upsilon_host" => self.rv_upsilon_host = Some(parse_value(key, value)?),
            "rv_upsilon_par" => self.rv_upsilon_par = Some(parse_value(key, value)?),
            "ava_alpha" => self.ava_alpha = Some(parse_value(key, value)?),
            "ava_mu" => self.ava_mu = Some(parse_value(key, value)?),
            "ava_tau" => self.ava_tau = Some(parse_value(key, value)?),
            "grid_step" => self.grid_step = Some(parse_value(key, value)?),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            _ => {
                return Err(Error::Config(format!("unknown configuration key `{key}`")));
            }
        }
        Ok(())
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: Display,
{
    value
        .parse()
        .map_err(|err| Error::Config(format!("{key}: cannot parse `{value}`: {err}")))
}

fn load_config_file(path: &PathBuf) -> Result<Overrides> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        context: format!("read {}", path.display()),
        source,
    })?;
    let mut overrides = Overrides::default();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "{}:{}: expected key=value, got `{line}`",
                path.display(),
                index + 1
            )));
        };
        overrides.set(&key.trim().replace('-', "_"), value.trim())?;
    }
    Ok(overrides)
}

/// Fully resolved configuration; what `validate` prints.
struct Settings {
    strategy: String,
    engine: EngineConfig,
    rv: RvParams,
    ava: AvaParams,
    trials: usize,
    grid_step: f64,
    out_dir: PathBuf,
}

fn resolve(command: &Command, flags: &Overrides) -> Result<Settings> {
    let mut overrides = match &flags.config {
        Some(path) => load_config_file(path)?,
        None => Overrides::default(),
    };
    overrides = overrides.overlaid_with(flags.clone());

    let engine_defaults = EngineConfig::default();
    let sweep_defaults = SweepConfig::default();
    let rv_defaults = RvParams::default();
    let ava_defaults = AvaParams::default();
    let default_strategy = match command {
        // A sweep compares the adaptive strategies by default.
        Command::Sweep(_) => "ava,sf",
        _ => "canonical",
    };
    Ok(Settings {
        strategy: overrides
            .strategy
            .unwrap_or_else(|| default_strategy.to_string()),
        engine: EngineConfig {
            population_size: overrides.pop_size.unwrap_or(engine_defaults.population_size),
            genome_length: overrides
                .genome_length
                .unwrap_or(engine_defaults.genome_length),
            sample_size: overrides.sample_size.unwrap_or(engine_defaults.sample_size),
            tournament_size: overrides
                .tournament_size
                .unwrap_or(engine_defaults.tournament_size),
            mutation_rate: overrides
                .mutation_rate
                .unwrap_or(engine_defaults.mutation_rate),
            generations: overrides.generations.unwrap_or(engine_defaults.generations),
            seed: overrides.seed.unwrap_or(engine_defaults.seed),
            host_bias: overrides.beta_h.unwrap_or(engine_defaults.host_bias),
            parasite_bias: overrides.beta_p.unwrap_or(engine_defaults.parasite_bias),
        },
        rv: RvParams {
            host_virulence: overrides
                .rv_upsilon_host
                .unwrap_or(rv_defaults.host_virulence),
            parasite_virulence: overrides
                .rv_upsilon_par
                .unwrap_or(rv_defaults.parasite_virulence),
        },
        ava: AvaParams {
            learning_rate: overrides.ava_alpha.unwrap_or(ava_defaults.learning_rate),
            momentum: overrides.ava_mu.unwrap_or(ava_defaults.momentum),
            target: overrides.ava_tau.unwrap_or(ava_defaults.target),
        },
        trials: overrides.trials.unwrap_or(sweep_defaults.trials),
        grid_step: overrides.grid_step.unwrap_or(sweep_defaults.grid_step),
        out_dir: overrides.out_dir.unwrap_or_else(|| PathBuf::from(".")),
    })
}

impl Settings {
    fn strategy_specs(&self) -> Result<Vec<StrategySpec>> {
        self.strategy
            .split(',')
            .map(str::trim)
            .map(|name| match name {
                "canonical" => Ok(StrategySpec::Canonical),
                "rv" => Ok(StrategySpec::ReducedVirulence(self.rv)),
                "ava" => Ok(StrategySpec::AdaptiveVirulence(self.ava)),
                "sf" => Ok(StrategySpec::SubstitutionOfFittest),
                _ => Err(Error::Config(format!(
                    "unknown strategy `{name}` (expected canonical, rv, ava, or sf)"
                ))),
            })
            .collect()
    }

    fn single_strategy(&self) -> Result<StrategySpec> {
        let specs = self.strategy_specs()?;
        match specs.as_slice() {
            [spec] => Ok(*spec),
            _ => Err(Error::Config(format!(
                "expected exactly one strategy, got `{}`",
                self.strategy
            ))),
        }
    }

    fn validate(&self) -> Result<()> {
        self.engine.validate()?;
        for spec in self.strategy_specs()? {
            spec.validate()?;
        }
        Ok(())
    }

    fn create_out_dir(&self) -> Result<()> {
        fs::create_dir_all(&self.out_dir).map_err(|source| Error::Io {
            context: format!("create directory {}", self.out_dir.display()),
            source,
        })
    }
}

fn cmd_run(settings: &Settings) -> Result<()> {
    let spec = settings.single_strategy()?;
    let trace = coevo_core::run(&settings.engine, &spec)?;
    settings.create_out_dir()?;
    let path = settings.out_dir.join("trace.csv");
    report::write_trace(&path, &trace)?;
    println!("wrote {} ({} generations)", path.display(), trace.len());
    Ok(())
}

fn cmd_sweep(settings: &Settings) -> Result<()> {
    let config = SweepConfig {
        grid_step: settings.grid_step,
        trials: settings.trials,
        strategies: settings.strategy_specs()?,
        base: settings.engine,
    };
    let outcome = coevo_core::run_sweep(&config)?;
    settings.create_out_dir()?;
    let trials_path = settings.out_dir.join("trials.csv");
    let cells_path = settings.out_dir.join("cells.csv");
    report::write_trials(&trials_path, &outcome.trials)?;
    report::write_cells(&cells_path, &outcome.cells)?;
    println!("wrote {} ({} trials)", trials_path.display(), outcome.trials.len());
    println!("wrote {} ({} cells)", cells_path.display(), outcome.cells.len());
    Ok(())
}

fn cmd_validate(settings: &Settings) -> Result<()> {
    settings.validate()?;
    let engine = &settings.engine;
    println!("strategy={}", settings.strategy);
    println!("beta_h={}", engine.host_bias);
    println!("beta_p={}", engine.parasite_bias);
    println!("seed={}", engine.seed);
    println!("generations={}", engine.generations);
    println!("pop_size={}", engine.population_size);
    println!("genome_length={}", engine.genome_length);
    println!("sample_size={}", engine.sample_size);
    println!("mutation_rate={}", engine.mutation_rate);
    println!("tournament_size={}", engine.tournament_size);
    println!("rv_upsilon_host={}", settings.rv.host_virulence);
    println!("rv_upsilon_par={}", settings.rv.parasite_virulence);
    println!("ava_alpha={}", settings.ava.learning_rate);
    println!("ava_mu={}", settings.ava.momentum);
    println!("ava_tau={}", settings.ava.target);
    println!("trials={}", settings.trials);
    println!("grid_step={}", settings.grid_step);
    println!("out_dir={}", settings.out_dir.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    let flags = match &cli.command {
        Command::Run(f) | Command::Sweep(f) | Command::Validate(f) => f,
    };
    let settings = resolve(&cli.command, flags)?;
    match cli.command {
        Command::Run(_) => {
            settings.validate()?;
            cmd_run(&settings)
        }
        Command::Sweep(_) => cmd_sweep(&settings),
        Command::Validate(_) => cmd_validate(&settings),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_io() { 3 } else { 2 })
        }
    }
}
