use alloc::vec::Vec;

use crate::error::Result;
use crate::fitness::FitnessFunction;
use crate::rng::RandomSource;

/// A candidate solution: a fixed-length vector of real genes plus its last evaluation.
///
/// Genes cannot be modified in place; operators build new chromosomes, which start
/// unevaluated. `fitness` is `None` until [`Chromosome::update_fitness`] runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    genes: Vec<f64>,
    fitness: Option<f64>,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>) -> Self {
        Self { genes, fitness: None }
    }

    /// A chromosome with a known fitness, e.g. one restored from a previous run.
    pub fn with_fitness(genes: Vec<f64>, fitness: f64) -> Self {
        Self { genes, fitness: Some(fitness) }
    }

    pub fn genes(&self) -> &[f64] {
        &self.genes
    }

    pub fn into_genes(self) -> Vec<f64> {
        self.genes
    }

    pub fn dimension(&self) -> usize {
        self.genes.len()
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    pub fn is_evaluated(&self) -> bool {
        self.fitness.is_some()
    }

    /// Evaluate the genes with `f` and store the result.
    pub fn update_fitness(&mut self, f: &mut FitnessFunction, rng: &mut RandomSource) -> Result<f64> {
        let value = f.evaluate(&self.genes, rng)?;
        self.fitness = Some(value);
        Ok(value)
    }
}

impl From<Vec<f64>> for Chromosome {
    fn from(genes: Vec<f64>) -> Self {
        Self::new(genes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::FitnessKind;
    use alloc::vec;

    #[test]
    fn update_fitness_refreshes_value() {
        let mut f = FitnessFunction::new(FitnessKind::Rosenbrock, 2).unwrap();
        let mut rng = RandomSource::new(0);
        let mut c = Chromosome::new(vec![1.0, 1.0]);
        assert_eq!(c.fitness(), None);
        assert_eq!(c.update_fitness(&mut f, &mut rng).unwrap(), 0.0);
        assert_eq!(c.fitness(), Some(0.0));

        let mut stale = Chromosome::with_fitness(vec![0.0, 0.0], 123.0);
        stale.update_fitness(&mut f, &mut rng).unwrap();
        assert_eq!(stale.fitness(), Some(1.0));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let mut f = FitnessFunction::new(FitnessKind::Ackley, 3).unwrap();
        let mut c = Chromosome::new(vec![0.0; 2]);
        assert!(c.update_fitness(&mut f, &mut RandomSource::new(0)).is_err());
        assert!(!c.is_evaluated());
    }
}
