//! Fitness transformations that keep two competing populations engaged.
//!
//! Selection operates on a transformed fitness, never on the raw subjective
//! aptitude. Four policies are provided:
//!
//! * `canonical`: pass-through; selection sees raw aptitudes.
//! * `rv`: fixed reduced virulence, the non-linear map `2x/v - x^2/v^2`
//!   peaking at score `x = v`, so a population with an inherent advantage
//!   can be rewarded for winning less than everything.
//! * `ava`: adaptive virulence; each population's `v` is steered every
//!   generation toward a target mean score by a momentum controller.
//! * `sf`: substitution of the fittest; when the gap between population
//!   mean aptitudes grows, the leading population's top-ranked individuals
//!   are replaced by clones of its bottom-ranked ones, the trailing
//!   population's bottom-ranked individuals by clones of its top-ranked
//!   ones, and every fitness is then shifted by the gap. Culling the
//!   leader's elite while duplicating the trailer's closes the gap from
//!   both sides.

use crate::error::{Error, Result};
use crate::population::Individual;

/// Default adaptive-virulence controller constants.
pub const AVA_DEFAULT_LEARNING_RATE: f64 = 0.0125;
pub const AVA_DEFAULT_MOMENTUM: f64 = 0.3;
pub const AVA_DEFAULT_TARGET: f64 = 0.56;

/// Starting virulence for the adaptive controller. From 0.75 the first
/// bootstrap step can reach either clamp bound in one update.
pub const AVA_INITIAL_VIRULENCE: f64 = 0.75;

/// Fixed virulence values, one per population.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RvParams {
    pub host_virulence: f64,
    pub parasite_virulence: f64,
}

impl Default for RvParams {
    fn default() -> Self {
        Self {
            host_virulence: 0.75,
            parasite_virulence: 0.75,
        }
    }
}

/// Adaptive-virulence controller constants: learning rate, momentum, and the
/// mean-score target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AvaParams {
    pub learning_rate: f64,
    pub momentum: f64,
    pub target: f64,
}

impl Default for AvaParams {
    fn default() -> Self {
        Self {
            learning_rate: AVA_DEFAULT_LEARNING_RATE,
            momentum: AVA_DEFAULT_MOMENTUM,
            target: AVA_DEFAULT_TARGET,
        }
    }
}

/// Which transformation a run applies, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StrategySpec {
    Canonical,
    ReducedVirulence(RvParams),
    AdaptiveVirulence(AvaParams),
    SubstitutionOfFittest,
}

impl StrategySpec {
    /// Stable token used in result files and on the command line.
    pub fn kind_name(&self) -> &'static str {
        match self {
            StrategySpec::Canonical => "canonical",
            StrategySpec::ReducedVirulence(_) => "rv",
            StrategySpec::AdaptiveVirulence(_) => "ava",
            StrategySpec::SubstitutionOfFittest => "sf",
        }
    }

    /// Fixed ordering used when sweeps enumerate strategies.
    pub fn rank(&self) -> usize {
        match self {
            StrategySpec::Canonical => 0,
            StrategySpec::ReducedVirulence(_) => 1,
            StrategySpec::AdaptiveVirulence(_) => 2,
            StrategySpec::SubstitutionOfFittest => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StrategySpec::Canonical | StrategySpec::SubstitutionOfFittest => Ok(()),
            StrategySpec::ReducedVirulence(p) => {
                check_virulence(p.host_virulence)?;
                check_virulence(p.parasite_virulence)
            }
            StrategySpec::AdaptiveVirulence(p) => {
                for (name, value) in [
                    ("learning rate", p.learning_rate),
                    ("momentum", p.momentum),
                    ("target", p.target),
                ] {
                    if !(0.0..=1.0).contains(&value) {
                        return Err(Error::Config(format!(
                            "adaptive virulence {name} {value} outside [0, 1]"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

fn check_virulence(virulence: f64) -> Result<()> {
    if (0.5..=1.0).contains(&virulence) {
        Ok(())
    } else {
        Err(Error::Virulence(virulence))
    }
}

/// One population's adaptive-virulence controller state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AvaChannel {
    pub virulence: f64,
    pub previous_step: f64,
}

impl Default for AvaChannel {
    fn default() -> Self {
        Self {
            virulence: AVA_INITIAL_VIRULENCE,
            previous_step: 0.0,
        }
    }
}

/// Reference gap the substitution trigger compares against: the gap measured
/// at the last generation where it did not grow. Triggered generations leave
/// it unchanged, so substitution keeps firing until the gap falls back to its
/// pre-episode level.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SfState {
    pub previous_delta: f64,
}

/// Per-run mutable state for the active strategy.
#[derive(Clone, Debug, PartialEq)]
pub enum StrategyState {
    Canonical,
    ReducedVirulence(RvParams),
    AdaptiveVirulence {
        params: AvaParams,
        host: AvaChannel,
        parasite: AvaChannel,
    },
    SubstitutionOfFittest(SfState),
}

impl StrategyState {
    pub fn new(spec: &StrategySpec) -> Self {
        match spec {
            StrategySpec::Canonical => StrategyState::Canonical,
            StrategySpec::ReducedVirulence(p) => StrategyState::ReducedVirulence(*p),
            StrategySpec::AdaptiveVirulence(p) => StrategyState::AdaptiveVirulence {
                params: *p,
                host: AvaChannel::default(),
                parasite: AvaChannel::default(),
            },
            StrategySpec::SubstitutionOfFittest => {
                StrategyState::SubstitutionOfFittest(SfState::default())
            }
        }
    }

    /// Set every individual's selection fitness from its freshly evaluated
    /// aptitude. Substitution of the fittest may also replace individuals.
    /// `generation` is 1-based. Returns the values the generation record
    /// stores.
    pub fn apply(
        &mut self,
        host: &mut [Individual],
        parasite: &mut [Individual],
        generation: usize,
    ) -> Diagnostics {
        match self {
            StrategyState::Canonical => {
                for individual in host.iter_mut().chain(parasite.iter_mut()) {
                    individual.fitness = individual.aptitude;
                }
                Diagnostics::default()
            }
            StrategyState::ReducedVirulence(p) => {
                transform_fitness(host, p.host_virulence);
                transform_fitness(parasite, p.parasite_virulence);
                Diagnostics {
                    upsilon_host: p.host_virulence,
                    upsilon_parasite: p.parasite_virulence,
                    ..Diagnostics::default()
                }
            }
            StrategyState::AdaptiveVirulence {
                params,
                host: host_channel,
                parasite: parasite_channel,
            } => {
                let host_mean = aptitude_mean(host);
                let parasite_mean = aptitude_mean(parasite);
                let applied_host = host_channel.virulence;
                let applied_parasite = parasite_channel.virulence;
                transform_fitness(host, applied_host);
                transform_fitness(parasite, applied_parasite);
                ava_update(host_channel, params, host_mean, generation);
                ava_update(parasite_channel, params, parasite_mean, generation);
                Diagnostics {
                    upsilon_host: applied_host,
                    upsilon_parasite: applied_parasite,
                    ..Diagnostics::default()
                }
            }
            StrategyState::SubstitutionOfFittest(state) => {
                let outcome = sf_apply(host, parasite, state);
                Diagnostics {
                    sf_triggered: outcome.triggered,
                    kappa: outcome.kappa,
                    ..Diagnostics::default()
                }
            }
        }
    }
}

/// Values the per-generation record stores for the active strategy.
/// Strategies without a field report the neutral sentinel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    pub sf_triggered: bool,
    pub kappa: usize,
    pub upsilon_host: f64,
    pub upsilon_parasite: f64,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self {
            sf_triggered: false,
            kappa: 0,
            upsilon_host: 1.0,
            upsilon_parasite: 1.0,
        }
    }
}

pub(crate) fn aptitude_mean(individuals: &[Individual]) -> f64 {
    debug_assert!(!individuals.is_empty());
    individuals.iter().map(|i| i.aptitude).sum::<f64>() / individuals.len() as f64
}

fn transform_fitness(individuals: &mut [Individual], virulence: f64) {
    for individual in individuals {
        individual.fitness = rv_value(individual.aptitude, virulence);
    }
}

fn rv_value(score: f64, virulence: f64) -> f64 {
    let scaled = score / virulence;
    (2.0 * scaled - scaled * scaled).clamp(0.0, 1.0)
}

/// Reduced-virulence map `2x/v - x^2/v^2`, clamped to [0, 1]. Peaks at exactly
/// 1 when `x = v`; with `v = 1` it is strictly increasing on [0, 1] and so
/// preserves the ranking of raw scores.
pub fn rv_transform(score: f64, virulence: f64) -> Result<f64> {
    check_virulence(virulence)?;
    Ok(rv_value(score, virulence))
}

/// One controller update. For the first four generations the step is
/// `(0.5 - mean_score) / t`, large enough to reach either bound immediately;
/// afterwards a momentum rule steers toward the target. Virulence is clamped
/// to [0.5, 1.0] after every update and the step is stored for the next one.
pub fn ava_update(channel: &mut AvaChannel, params: &AvaParams, mean_score: f64, generation: usize) {
    debug_assert!(generation >= 1);
    let step = if generation < 5 {
        (0.5 - mean_score) / generation as f64
    } else {
        params.momentum * channel.previous_step
            + params.learning_rate * (1.0 - params.momentum) * (params.target - mean_score)
    };
    channel.virulence = (channel.virulence + step).clamp(0.5, 1.0);
    channel.previous_step = step;
}

/// Number of substitutions for gap `delta`: `n * delta^(1/delta)` truncated,
/// clamped to [1, n]. Grows non-linearly with the gap and equals `n` exactly
/// at `delta = 1`.
pub fn sf_kappa(population_size: usize, delta: f64) -> usize {
    debug_assert!(population_size >= 1);
    debug_assert!(delta > 0.0 && delta <= 1.0);
    let raw = population_size as f64 * libm::pow(delta, 1.0 / delta);
    (raw as usize).clamp(1, population_size)
}

/// Which end of the ranked list is overwritten.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MirrorSide {
    /// Overwrite the top `kappa` ranks with their mirror positions.
    PunishLeader,
    /// Overwrite the bottom `kappa` ranks with their mirror positions.
    BoostTrailer,
}

/// Positional-mirror substitution on a descending-ranked aptitude list:
/// position `i` (0-based) receives the value at position `n-1-i` when it lies
/// in the substituted range; all other positions are untouched. All sources
/// are read from the input list, so overlapping ranges (`kappa > n/2`) keep
/// their original values. This is the aptitude view of the substitution the
/// full strategy performs on individuals.
pub fn sf_mirror_substitute(ranked: &[f64], kappa: usize, side: MirrorSide) -> Result<Vec<f64>> {
    let n = ranked.len();
    if kappa > n {
        return Err(Error::SubstitutionCount { kappa, size: n });
    }
    let mut out = ranked.to_vec();
    match side {
        MirrorSide::PunishLeader => {
            for i in 0..kappa {
                out[i] = ranked[n - 1 - i];
            }
        }
        MirrorSide::BoostTrailer => {
            for i in (n - kappa)..n {
                out[i] = ranked[n - 1 - i];
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    Up,
    Down,
}

/// Uniform aptitude shift saturating at the [0, 1] bounds: up is
/// `min(x + delta, 1)`, down is `max(x - delta, 0)`.
pub fn sf_shift(values: &[f64], delta: f64, direction: ShiftDirection) -> Vec<f64> {
    match direction {
        ShiftDirection::Up => values.iter().map(|v| (v + delta).min(1.0)).collect(),
        ShiftDirection::Down => values.iter().map(|v| (v - delta).max(0.0)).collect(),
    }
}

/// What a substitution pass did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SfOutcome {
    pub triggered: bool,
    pub kappa: usize,
}

/// Trigger check plus the full substitution pipeline, in place.
///
/// Computes each population's mean aptitude and the gap `delta` between them.
/// If the gap did not grow past the stored reference, fitness stays equal to
/// aptitude, nothing else changes, and the reference is set to the current
/// gap. Otherwise the higher-mean population has its top `kappa` ranks
/// replaced by clones of the mirrored bottom ranks (deleting its leading
/// edge) and every fitness shifted down by `delta`; the lower-mean population
/// has its bottom `kappa` ranks replaced by clones of the mirrored top ranks
/// (duplicating its best) and every fitness shifted up. Clones carry genome
/// and aptitude together. The reference gap is left alone on trigger, so a
/// sustained escape keeps substituting every generation instead of only on
/// strictly rising ones; without that hysteresis the brake gets one or two
/// bites per escape episode, which is too slow to prevent a full sweep under
/// biased drift.
pub fn sf_apply(
    host: &mut [Individual],
    parasite: &mut [Individual],
    state: &mut SfState,
) -> SfOutcome {
    debug_assert!(!host.is_empty());
    debug_assert_eq!(host.len(), parasite.len());
    let sigma_host = aptitude_mean(host);
    let sigma_parasite = aptitude_mean(parasite);
    let delta = (sigma_host - sigma_parasite).abs();
    if delta > state.previous_delta {
        let kappa = sf_kappa(host.len(), delta);
        let (leader, trailer) = if sigma_host > sigma_parasite {
            (host, parasite)
        } else {
            (parasite, host)
        };
        substitute_individuals(leader, kappa, MirrorSide::PunishLeader);
        shift_fitness(leader, delta, ShiftDirection::Down);
        substitute_individuals(trailer, kappa, MirrorSide::BoostTrailer);
        shift_fitness(trailer, delta, ShiftDirection::Up);
        SfOutcome {
            triggered: true,
            kappa,
        }
    } else {
        state.previous_delta = delta;
        SfOutcome {
            triggered: false,
            kappa: 0,
        }
    }
}

/// Descending-aptitude rank order; stable, so ties keep population order.
fn ranked_order(individuals: &[Individual]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..individuals.len()).collect();
    order.sort_by(|&a, &b| individuals[b].aptitude.total_cmp(&individuals[a].aptitude));
    order
}

/// Replace the individuals on the affected rank range with clones of their
/// mirror ranks. All sources are cloned before any slot is overwritten, so
/// overlapping ranges read pre-substitution individuals.
fn substitute_individuals(individuals: &mut [Individual], kappa: usize, side: MirrorSide) {
    let n = individuals.len();
    debug_assert!(kappa <= n);
    let order = ranked_order(individuals);
    let range = match side {
        MirrorSide::PunishLeader => 0..kappa,
        MirrorSide::BoostTrailer => (n - kappa)..n,
    };
    let replacements: Vec<(usize, Individual)> = range
        .map(|rank| (order[rank], individuals[order[n - 1 - rank]].clone()))
        .collect();
    for (slot, individual) in replacements {
        individuals[slot] = individual;
    }
}

fn shift_fitness(individuals: &mut [Individual], delta: f64, direction: ShiftDirection) {
    for individual in individuals {
        individual.fitness = match direction {
            ShiftDirection::Up => (individual.aptitude + delta).min(1.0),
            ShiftDirection::Down => (individual.aptitude - delta).max(0.0),
        };
    }
}
