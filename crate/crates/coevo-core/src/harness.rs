//! Bias-grid sweeps.
//!
//! A sweep runs every strategy over the triangular grid of mutation-bias
//! pairs with `parasite_bias >= host_bias` (the parasite-favoured half,
//! including the diagonal), several independent trials per cell. Trial seeds
//! are derived from the base seed and the trial's position, so a sweep is
//! reproducible as a whole and any single trial can be rerun on its own.
//!
//! Cells are enumerated in a canonical order: strategies by their fixed rank,
//! then host bias ascending, then parasite bias ascending. Results come back
//! in that order whether the sweep runs parallel or sequentially.

use crate::engine::{self, EngineConfig, RunTrace};
use crate::error::{Error, Result};
use crate::strategy::StrategySpec;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Lowest bias value on the sweep grid.
pub const GRID_START: f64 = 0.1;

/// A sweep: which strategies to compare, the bias grid, and the run settings
/// shared by every trial. `base.host_bias`/`base.parasite_bias` are ignored
/// (each cell overrides them); `base.seed` anchors the seed schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub grid_step: f64,
    pub trials: usize,
    pub strategies: Vec<StrategySpec>,
    pub base: EngineConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid_step: 0.1,
            trials: 20,
            strategies: vec![
                StrategySpec::AdaptiveVirulence(Default::default()),
                StrategySpec::SubstitutionOfFittest,
            ],
            base: EngineConfig::default(),
        }
    }
}

impl SweepConfig {
    /// Bias values on one grid axis: `0.1, 0.1 + step, ...` up to 1.0,
    /// rounded to nine decimals so values compare cleanly.
    pub fn grid(&self) -> Vec<f64> {
        let mut values = Vec::new();
        let mut k = 0usize;
        loop {
            let raw = GRID_START + k as f64 * self.grid_step;
            let value = (raw * 1e9).round() / 1e9;
            if value > 1.0 {
                break;
            }
            values.push(value);
            k += 1;
        }
        values
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0 && self.grid_step.is_finite()) {
            return Err(Error::Config(format!(
                "grid step {} must be positive",
                self.grid_step
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("sweep needs at least one strategy".into()));
        }
        for (i, spec) in self.strategies.iter().enumerate() {
            spec.validate()?;
            if self.strategies[..i]
                .iter()
                .any(|other| other.kind_name() == spec.kind_name())
            {
                return Err(Error::Config(format!(
                    "strategy {} listed twice",
                    spec.kind_name()
                )));
            }
        }
        self.base.validate()
    }
}

/// Outcome of a single run inside a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialResult {
    pub strategy: &'static str,
    pub host_bias: f64,
    pub parasite_bias: f64,
    pub trial: usize,
    pub seed: u64,
    /// No generation ever showed a full gap.
    pub engaged_full_run: bool,
    /// Some host reached the all-ones genome.
    pub reached_optimum: bool,
    /// Highest host ones count seen over the whole run.
    pub best_host_ones: usize,
    /// Generation of the first full gap, if any.
    pub first_disengagement: Option<usize>,
}

/// Per-cell aggregate over that cell's trials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellSummary {
    pub strategy: &'static str,
    pub host_bias: f64,
    pub parasite_bias: f64,
    pub trials: usize,
    pub engaged_count: usize,
    pub optimum_count: usize,
    pub mean_best_ones: f64,
}

/// Every trial in canonical order plus one summary row per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub trials: Vec<TrialResult>,
    pub cells: Vec<CellSummary>,
}

/// First generation whose gap is exactly 1.0. Population means are averages
/// of game scores drawn from {0, 0.5, 1}, all exactly representable, so a
/// full gap compares equal with no tolerance.
pub fn detect_disengagement(trace: &RunTrace) -> Option<usize> {
    trace.iter().find(|r| r.delta == 1.0).map(|r| r.generation)
}

/// Run one cell trial with explicit bias pair and seed.
pub fn run_trial(
    spec: &StrategySpec,
    host_bias: f64,
    parasite_bias: f64,
    trial: usize,
    seed: u64,
    base: &EngineConfig,
) -> Result<TrialResult> {
    let config = EngineConfig {
        host_bias,
        parasite_bias,
        seed,
        ..*base
    };
    let trace = engine::run(&config, spec)?;
    let first_disengagement = detect_disengagement(&trace);
    let best_host_ones = trace.iter().map(|r| r.host_max_ones).max().unwrap_or(0);
    Ok(TrialResult {
        strategy: spec.kind_name(),
        host_bias,
        parasite_bias,
        trial,
        seed,
        engaged_full_run: first_disengagement.is_none(),
        reached_optimum: best_host_ones == config.genome_length,
        best_host_ones,
        first_disengagement,
    })
}

#[derive(Clone, Copy, Debug)]
struct Task {
    spec: StrategySpec,
    host_bias: f64,
    parasite_bias: f64,
    trial: usize,
    seed: u64,
}

fn build_tasks(config: &SweepConfig) -> Vec<Task> {
    let grid = config.grid();
    let mut strategies = config.strategies.clone();
    strategies.sort_by_key(StrategySpec::rank);
    let mut tasks = Vec::new();
    let mut cell_index = 0usize;
    for spec in &strategies {
        for (i, &host_bias) in grid.iter().enumerate() {
            for &parasite_bias in &grid[i..] {
                for trial in 0..config.trials {
                    let offset = (cell_index * config.trials + trial) as u64;
                    tasks.push(Task {
                        spec: *spec,
                        host_bias,
                        parasite_bias,
                        trial,
                        seed: config.base.seed.wrapping_add(offset),
                    });
                }
                cell_index += 1;
            }
        }
    }
    tasks
}

fn run_task(task: &Task, base: &EngineConfig) -> Result<TrialResult> {
    run_trial(
        &task.spec,
        task.host_bias,
        task.parasite_bias,
        task.trial,
        task.seed,
        base,
    )
    .map_err(|source| Error::SweepCell {
        strategy: task.spec.kind_name(),
        host_bias: task.host_bias,
        parasite_bias: task.parasite_bias,
        trial: task.trial,
        source: Box::new(source),
    })
}

fn summarize(trials: &[TrialResult], per_cell: usize) -> Vec<CellSummary> {
    trials
        .chunks(per_cell)
        .map(|chunk| CellSummary {
            strategy: chunk[0].strategy,
            host_bias: chunk[0].host_bias,
            parasite_bias: chunk[0].parasite_bias,
            trials: chunk.len(),
            engaged_count: chunk.iter().filter(|t| t.engaged_full_run).count(),
            optimum_count: chunk.iter().filter(|t| t.reached_optimum).count(),
            mean_best_ones: chunk.iter().map(|t| t.best_host_ones as f64).sum::<f64>()
                / chunk.len() as f64,
        })
        .collect()
}

/// Run the sweep, using every worker thread when the `parallel` feature is
/// on. The result is identical to the sequential path: trials carry their
/// own seeds, so scheduling cannot leak into the numbers.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let tasks = build_tasks(config);
    #[cfg(feature = "parallel")]
    let trials: Result<Vec<TrialResult>> =
        tasks.par_iter().map(|t| run_task(t, &config.base)).collect();
    #[cfg(not(feature = "parallel"))]
    let trials: Result<Vec<TrialResult>> =
        tasks.iter().map(|t| run_task(t, &config.base)).collect();
    let trials = trials?;
    let cells = summarize(&trials, config.trials);
    Ok(SweepOutcome { trials, cells })
}

/// Single-threaded sweep, available whatever features are enabled. The
/// benchmark suite compares this against `run_sweep`.
pub fn run_sweep_sequential(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let tasks = build_tasks(config);
    let trials: Result<Vec<TrialResult>> =
        tasks.iter().map(|t| run_task(t, &config.base)).collect();
    let trials = trials?;
    let cells = summarize(&trials, config.trials);
    Ok(SweepOutcome { trials, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::GenerationRecord;
    use crate::strategy::{AvaParams, RvParams};

    fn tiny_base() -> EngineConfig {
        EngineConfig {
            population_size: 4,
            genome_length: 8,
            sample_size: 2,
            generations: 3,
            ..EngineConfig::default()
        }
    }

    fn record(generation: usize, delta: f64) -> GenerationRecord {
        GenerationRecord {
            generation,
            host_min_ones: 0,
            host_mean_ones: 0.0,
            host_max_ones: 0,
            parasite_min_ones: 0,
            parasite_mean_ones: 0.0,
            parasite_max_ones: 0,
            sigma_host: 0.5,
            sigma_parasite: 0.5,
            delta,
            sf_triggered: false,
            kappa: 0,
            upsilon_host: 1.0,
            upsilon_parasite: 1.0,
        }
    }

    #[test]
    fn default_grid_has_ten_values() {
        let config = SweepConfig::default();
        let grid = config.grid();
        assert_eq!(
            grid,
            vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
        );
    }

    #[test]
    fn coarse_grid_stops_at_one() {
        let config = SweepConfig {
            grid_step: 0.25,
            ..SweepConfig::default()
        };
        assert_eq!(config.grid(), vec![0.1, 0.35, 0.6, 0.85]);
    }

    #[test]
    fn validation_rejects_degenerate_sweeps() {
        let ok = SweepConfig {
            base: tiny_base(),
            ..SweepConfig::default()
        };
        assert!(ok.validate().is_ok());
        let cases = [
            SweepConfig {
                grid_step: 0.0,
                ..ok.clone()
            },
            SweepConfig {
                trials: 0,
                ..ok.clone()
            },
            SweepConfig {
                strategies: vec![],
                ..ok.clone()
            },
            SweepConfig {
                strategies: vec![
                    StrategySpec::SubstitutionOfFittest,
                    StrategySpec::SubstitutionOfFittest,
                ],
                ..ok.clone()
            },
            SweepConfig {
                strategies: vec![StrategySpec::ReducedVirulence(RvParams {
                    host_virulence: 0.2,
                    parasite_virulence: 0.75,
                })],
                ..ok.clone()
            },
        ];
        for case in cases {
            assert!(case.validate().is_err());
        }
    }

    #[test]
    fn disengagement_is_first_full_gap() {
        let trace = vec![record(1, 0.2), record(2, 1.0), record(3, 1.0)];
        assert_eq!(detect_disengagement(&trace), Some(2));
        let engaged = vec![record(1, 0.2), record(2, 0.999999)];
        assert_eq!(detect_disengagement(&engaged), None);
        assert_eq!(detect_disengagement(&vec![]), None);
    }

    #[test]
    fn tasks_enumerate_cells_in_canonical_order_with_derived_seeds() {
        // One grid value keeps this to one cell per strategy. Strategies are
        // given out of rank order on purpose.
        let config = SweepConfig {
            grid_step: 2.0,
            trials: 2,
            strategies: vec![
                StrategySpec::SubstitutionOfFittest,
                StrategySpec::Canonical,
            ],
            base: EngineConfig {
                seed: 100,
                ..tiny_base()
            },
        };
        let outcome = run_sweep_sequential(&config).unwrap();
        let order: Vec<(&str, usize, u64)> = outcome
            .trials
            .iter()
            .map(|t| (t.strategy, t.trial, t.seed))
            .collect();
        assert_eq!(
            order,
            vec![
                ("canonical", 0, 100),
                ("canonical", 1, 101),
                ("sf", 0, 102),
                ("sf", 1, 103),
            ]
        );
        assert!(outcome.trials.iter().all(|t| t.host_bias == 0.1));
        assert_eq!(outcome.cells.len(), 2);
        assert_eq!(outcome.cells[0].strategy, "canonical");
        assert_eq!(outcome.cells[1].strategy, "sf");
    }

    #[test]
    fn triangular_grid_size_matches_value_count() {
        let config = SweepConfig {
            grid_step: 0.3,
            trials: 1,
            strategies: vec![StrategySpec::Canonical],
            base: tiny_base(),
        };
        // Grid 0.1, 0.4, 0.7, 1.0: 4 values, 10 ordered pairs.
        let outcome = run_sweep_sequential(&config).unwrap();
        assert_eq!(outcome.cells.len(), 10);
        for cell in &outcome.cells {
            assert!(cell.parasite_bias >= cell.host_bias);
        }
        // Host bias ascending, parasite within it ascending.
        let pairs: Vec<(f64, f64)> = outcome
            .cells
            .iter()
            .map(|c| (c.host_bias, c.parasite_bias))
            .collect();
        let mut sorted = pairs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pairs, sorted);
    }

    #[test]
    fn parallel_and_sequential_sweeps_agree() {
        let config = SweepConfig {
            grid_step: 0.6,
            trials: 3,
            strategies: vec![
                StrategySpec::Canonical,
                StrategySpec::AdaptiveVirulence(AvaParams::default()),
            ],
            base: tiny_base(),
        };
        let parallel = run_sweep(&config).unwrap();
        let sequential = run_sweep_sequential(&config).unwrap();
        assert_eq!(parallel, sequential);
    }

    #[test]
    fn trial_seed_reruns_reproduce_sweep_rows() {
        let config = SweepConfig {
            grid_step: 2.0,
            trials: 2,
            strategies: vec![StrategySpec::SubstitutionOfFittest],
            base: tiny_base(),
        };
        let outcome = run_sweep_sequential(&config).unwrap();
        for row in &outcome.trials {
            let alone = run_trial(
                &StrategySpec::SubstitutionOfFittest,
                row.host_bias,
                row.parasite_bias,
                row.trial,
                row.seed,
                &config.base,
            )
            .unwrap();
            assert_eq!(&alone, row);
        }
    }

    #[test]
    fn summary_counts_match_trials() {
        let config = SweepConfig {
            grid_step: 2.0,
            trials: 4,
            strategies: vec![StrategySpec::Canonical],
            base: tiny_base(),
        };
        let outcome = run_sweep_sequential(&config).unwrap();
        let cell = &outcome.cells[0];
        assert_eq!(cell.trials, 4);
        assert_eq!(
            cell.engaged_count,
            outcome.trials.iter().filter(|t| t.engaged_full_run).count()
        );
        assert_eq!(
            cell.optimum_count,
            outcome.trials.iter().filter(|t| t.reached_optimum).count()
        );
        let mean: f64 = outcome
            .trials
            .iter()
            .map(|t| t.best_host_ones as f64)
            .sum::<f64>()
            / 4.0;
        assert_eq!(cell.mean_best_ones, mean);
    }
}
