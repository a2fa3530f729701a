//! Deterministic laboratory for two-population competitive coevolution.
//!
//! Hosts and parasites evolve bitstring genomes against each other on the
//! greater-than-or-equals game: an individual scores 1 against an opponent
//! with fewer ones, 0.5 against an equal count, 0 otherwise. When mutation
//! biases differ, the favoured population can win everything, selection
//! gradients vanish on both sides, and the system disengages. This crate
//! implements the engine, a set of engagement-preserving fitness
//! transformations (fixed and adaptive reduced virulence, substitution of
//! the fittest), and a sweep harness that maps engagement and optimality
//! over the bias grid.
//!
//! Runs are reproducible: a seed plus a configuration fully determines every
//! trace byte, across platforms and thread counts.

pub mod bitstring;
pub mod engine;
pub mod error;
pub mod harness;
pub mod population;
pub mod report;
pub mod rng;
pub mod strategy;

pub use bitstring::{Genome, MutationParams, play_game, score_values};
pub use engine::{
    EngineConfig, GenerationRecord, RunTrace, disengagement_delta, evaluate, mean_aptitude, run,
    step_generation, tournament_select,
};
pub use error::{Error, Result};
pub use harness::{
    CellSummary, SweepConfig, SweepOutcome, TrialResult, detect_disengagement, run_sweep,
    run_sweep_sequential, run_trial,
};
pub use population::{Individual, Population};
pub use strategy::{
    AvaChannel, AvaParams, Diagnostics, MirrorSide, RvParams, SfOutcome, SfState, ShiftDirection,
    StrategySpec, StrategyState, ava_update, rv_transform, sf_apply, sf_kappa,
    sf_mirror_substitute, sf_shift,
};
