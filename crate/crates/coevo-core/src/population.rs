//! Individuals and populations.

use crate::bitstring::{Genome, MutationParams};
use crate::error::{Error, Result};

/// One candidate solution: a genome plus its scores for the current
/// generation. `aptitude` is the raw mean game score; `fitness` is what
/// selection actually sees after the strategy transform.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub aptitude: f64,
    pub fitness: f64,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Self {
            genome,
            aptitude: 0.0,
            fitness: 0.0,
        }
    }
}

/// A population and the mutation operator its offspring use.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub individuals: Vec<Individual>,
    pub mutation: MutationParams,
}

impl Population {
    /// All-zero genomes; both populations start from the same point.
    pub fn zeros(size: usize, genome_length: usize, mutation: MutationParams) -> Result<Self> {
        if size == 0 {
            return Err(Error::Config("population size must be at least 1".into()));
        }
        let genome = Genome::zeros(genome_length)?;
        let individuals = (0..size).map(|_| Individual::new(genome.clone())).collect();
        Ok(Self {
            individuals,
            mutation,
        })
    }

    pub fn size(&self) -> usize {
        self.individuals.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_rejects_empty_population() {
        let mutation = MutationParams::new(0.005, 0.5).unwrap();
        assert!(Population::zeros(0, 10, mutation).is_err());
        assert!(Population::zeros(3, 0, mutation).is_err());
    }

    #[test]
    fn zeros_builds_identical_unscored_individuals() {
        let mutation = MutationParams::new(0.005, 0.5).unwrap();
        let population = Population::zeros(4, 16, mutation).unwrap();
        assert_eq!(population.size(), 4);
        for individual in &population.individuals {
            assert_eq!(individual.genome.ones(), 0);
            assert_eq!(individual.genome.len(), 16);
            assert_eq!(individual.aptitude, 0.0);
            assert_eq!(individual.fitness, 0.0);
        }
    }
}
