//! Two-population competitive loop.
//!
//! Each generation: both populations are scored against samples of the other,
//! the active strategy rewrites selection fitness, statistics are recorded,
//! then each population is independently replaced through tournament
//! selection plus biased mutation. Draw order from the shared random stream
//! is fixed (hosts before parasites at every phase, selection before mutation
//! within a slot) so a seed fully determines a run.

use rand::Rng;

use crate::bitstring::{MutationParams, score_values};
use crate::error::{Error, Result};
use crate::population::{Individual, Population};
use crate::rng::{self, Stream};
use crate::strategy::{self, StrategySpec, StrategyState};

/// Everything that defines a single run except the strategy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    pub population_size: usize,
    pub genome_length: usize,
    pub sample_size: usize,
    pub tournament_size: usize,
    pub mutation_rate: f64,
    pub generations: usize,
    pub seed: u64,
    pub host_bias: f64,
    pub parasite_bias: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            population_size: 25,
            genome_length: 100,
            sample_size: 5,
            tournament_size: 2,
            mutation_rate: 0.005,
            generations: 1000,
            seed: 0,
            host_bias: 0.5,
            parasite_bias: 0.5,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::Config("population size must be at least 1".into()));
        }
        if self.sample_size == 0 {
            return Err(Error::Config("sample size must be at least 1".into()));
        }
        if self.sample_size > self.population_size {
            return Err(Error::Config(format!(
                "sample size {} exceeds population size {}",
                self.sample_size, self.population_size
            )));
        }
        if self.tournament_size == 0 {
            return Err(Error::Config("tournament size must be at least 1".into()));
        }
        if self.generations == 0 {
            return Err(Error::Config("generations must be at least 1".into()));
        }
        MutationParams::new(self.mutation_rate, self.host_bias)?;
        MutationParams::new(self.mutation_rate, self.parasite_bias)?;
        Ok(())
    }
}

/// Per-generation statistics, one row of a run trace. Ones statistics
/// describe the populations as evaluated, before reproduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub host_min_ones: usize,
    pub host_mean_ones: f64,
    pub host_max_ones: usize,
    pub parasite_min_ones: usize,
    pub parasite_mean_ones: f64,
    pub parasite_max_ones: usize,
    pub sigma_host: f64,
    pub sigma_parasite: f64,
    pub delta: f64,
    pub sf_triggered: bool,
    pub kappa: usize,
    pub upsilon_host: f64,
    pub upsilon_parasite: f64,
}

pub type RunTrace = Vec<GenerationRecord>;

/// Score both populations against each other. Every individual meets
/// `sample_size` distinct opponents drawn without replacement from the other
/// population; samples are independent across individuals. Sets `aptitude`
/// and resets `fitness` to it.
pub fn evaluate(
    host: &mut Population,
    parasite: &mut Population,
    sample_size: usize,
    rng: &mut Stream,
) -> Result<()> {
    evaluate_inner(host, parasite, sample_size, rng).map(|_| ())
}

fn evaluate_inner(
    host: &mut Population,
    parasite: &mut Population,
    sample_size: usize,
    rng: &mut Stream,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let host_ones: Vec<usize> = host.individuals.iter().map(|i| i.genome.ones()).collect();
    let parasite_ones: Vec<usize> = parasite.individuals.iter().map(|i| i.genome.ones()).collect();
    score_population(&mut host.individuals, &host_ones, &parasite_ones, sample_size, rng)?;
    score_population(&mut parasite.individuals, &parasite_ones, &host_ones, sample_size, rng)?;
    Ok((host_ones, parasite_ones))
}

/// Partial Fisher-Yates over an opponent index pool gives each player a
/// uniform sample of distinct opponents.
fn score_population(
    players: &mut [Individual],
    player_ones: &[usize],
    opponent_ones: &[usize],
    sample_size: usize,
    rng: &mut Stream,
) -> Result<()> {
    let opponents = opponent_ones.len();
    if sample_size == 0 || sample_size > opponents {
        return Err(Error::Config(format!(
            "sample size {sample_size} must lie in [1, {opponents}]"
        )));
    }
    let mut pool: Vec<usize> = (0..opponents).collect();
    for (player, &ones) in players.iter_mut().zip(player_ones) {
        for (slot, index) in pool.iter_mut().zip(0..) {
            *slot = index;
        }
        let mut total = 0.0;
        for drawn in 0..sample_size {
            let pick = drawn + rng::index(rng, opponents - drawn);
            pool.swap(drawn, pick);
            total += score_values(ones, opponent_ones[pool[drawn]]);
        }
        player.aptitude = total / sample_size as f64;
        player.fitness = player.aptitude;
    }
    Ok(())
}

/// Mean raw aptitude of a population.
pub fn mean_aptitude(population: &Population) -> f64 {
    strategy::aptitude_mean(&population.individuals)
}

/// Absolute gap between two population means. A value of exactly 1.0 means
/// one side wins every sampled game: the populations are disengaged.
pub fn disengagement_delta(sigma_a: f64, sigma_b: f64) -> f64 {
    (sigma_a - sigma_b).abs()
}

/// Tournament selection: `size` contestants drawn with replacement, highest
/// fitness wins, ties broken uniformly. Returns the winner's index.
pub fn tournament_select(population: &Population, size: usize, rng: &mut Stream) -> usize {
    debug_assert!(size >= 1);
    debug_assert!(!population.individuals.is_empty());
    let n = population.size();
    let mut winner = rng::index(rng, n);
    let mut ties = 1u64;
    for _ in 1..size {
        let contender = rng::index(rng, n);
        let current = population.individuals[winner].fitness;
        let challenge = population.individuals[contender].fitness;
        if challenge > current {
            winner = contender;
            ties = 1;
        } else if challenge == current {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                winner = contender;
            }
        }
    }
    winner
}

fn next_generation(population: &mut Population, tournament_size: usize, rng: &mut Stream) {
    let mut offspring = Vec::with_capacity(population.size());
    for _ in 0..population.size() {
        let parent = tournament_select(population, tournament_size, rng);
        let genome = population.individuals[parent].genome.mutate(population.mutation, rng);
        offspring.push(Individual::new(genome));
    }
    population.individuals = offspring;
}

fn ones_stats(ones: &[usize]) -> (usize, f64, usize) {
    let min = *ones.iter().min().expect("population is non-empty");
    let max = *ones.iter().max().expect("population is non-empty");
    let mean = ones.iter().sum::<usize>() as f64 / ones.len() as f64;
    (min, mean, max)
}

/// One full generation: evaluate, transform fitness, record, reproduce.
/// `generation` is 1-based and is what the strategy's schedule sees.
pub fn step_generation(
    host: &mut Population,
    parasite: &mut Population,
    state: &mut StrategyState,
    generation: usize,
    config: &EngineConfig,
    rng: &mut Stream,
) -> Result<GenerationRecord> {
    let (host_ones, parasite_ones) = evaluate_inner(host, parasite, config.sample_size, rng)?;

    // Population means and the gap are recorded as evaluated, before the
    // strategy rewrites fitness or substitutes individuals.
    let sigma_host = mean_aptitude(host);
    let sigma_parasite = mean_aptitude(parasite);
    let delta = disengagement_delta(sigma_host, sigma_parasite);

    let diagnostics = state.apply(
        &mut host.individuals,
        &mut parasite.individuals,
        generation,
    );

    let (host_min, host_mean, host_max) = ones_stats(&host_ones);
    let (parasite_min, parasite_mean, parasite_max) = ones_stats(&parasite_ones);
    let record = GenerationRecord {
        generation,
        host_min_ones: host_min,
        host_mean_ones: host_mean,
        host_max_ones: host_max,
        parasite_min_ones: parasite_min,
        parasite_mean_ones: parasite_mean,
        parasite_max_ones: parasite_max,
        sigma_host,
        sigma_parasite,
        delta,
        sf_triggered: diagnostics.sf_triggered,
        kappa: diagnostics.kappa,
        upsilon_host: diagnostics.upsilon_host,
        upsilon_parasite: diagnostics.upsilon_parasite,
    };

    next_generation(host, config.tournament_size, rng);
    next_generation(parasite, config.tournament_size, rng);
    Ok(record)
}

/// Run a full experiment from all-zero populations. The trace has one record
/// per generation, numbered from 1.
pub fn run(config: &EngineConfig, spec: &StrategySpec) -> Result<RunTrace> {
    config.validate()?;
    spec.validate()?;
    let host_mutation = MutationParams::new(config.mutation_rate, config.host_bias)?;
    let parasite_mutation = MutationParams::new(config.mutation_rate, config.parasite_bias)?;
    let mut host = Population::zeros(config.population_size, config.genome_length, host_mutation)?;
    let mut parasite = Population::zeros(
        config.population_size,
        config.genome_length,
        parasite_mutation,
    )?;
    let mut state = StrategyState::new(spec);
    let mut rng = rng::stream(config.seed);
    let mut trace = Vec::with_capacity(config.generations);
    for generation in 1..=config.generations {
        trace.push(step_generation(
            &mut host,
            &mut parasite,
            &mut state,
            generation,
            config,
            &mut rng,
        )?);
    }
    Ok(trace)
}
