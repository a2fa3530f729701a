//! Bit-vector genomes, the greater-than-or-equals game, and biased mutation.
//!
//! A genome's scalar value is its count of set bits. Two genomes compete by
//! comparing scalar values: the larger one scores 1, a draw scores 0.5 for
//! each side. Mutation assigns (rather than flips) bits, with a bias
//! controlling how often an assigned bit is a 1, so an unselected population
//! drifts toward `bias * length` ones.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Fixed-length bit vector. Immutable once constructed; mutation returns a
/// fresh genome.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Genome {
    bits: Vec<bool>,
}

impl Genome {
    /// All-zero genome of length `len`.
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyGenome);
        }
        Ok(Self {
            bits: vec![false; len],
        })
    }

    /// Genome with the given bit pattern.
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyGenome);
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of set bits: the genome's scalar value in the game.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Per-bit mutation: each bit mutates with probability `rate`; a mutated
    /// bit is assigned 1 with probability `bias`, 0 otherwise. Draws are
    /// consumed in bit order, at most two per bit (mutate?, then value), so a
    /// seeded stream reproduces the same offspring exactly.
    pub fn mutate(&self, params: MutationParams, rng: &mut Stream) -> Genome {
        let mut bits = self.bits.clone();
        for bit in &mut bits {
            if rng.random::<f64>() < params.rate() {
                *bit = rng.random::<f64>() < params.bias();
            }
        }
        Genome { bits }
    }
}

/// Per-bit mutation probability plus the bias of assigned values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MutationParams {
    rate: f64,
    bias: f64,
}

impl MutationParams {
    pub fn new(rate: f64, bias: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::Config(format!(
                "mutation rate {rate} outside [0, 1]"
            )));
        }
        if !(0.0..=1.0).contains(&bias) {
            return Err(Error::Config(format!(
                "mutation bias {bias} outside [0, 1]"
            )));
        }
        Ok(Self { rate, bias })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }
}

/// Score of `a` against `b`: 1 if `a` has more ones, 0.5 on a draw, 0
/// otherwise. The two perspectives always sum to 1.
pub fn play_game(a: &Genome, b: &Genome) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(score_values(a.ones(), b.ones()))
}

/// The comparison score on raw scalar values.
pub fn score_values(a: usize, b: usize) -> f64 {
    match a.cmp(&b) {
        Ordering::Greater => 1.0,
        Ordering::Equal => 0.5,
        Ordering::Less => 0.0,
    }
}
