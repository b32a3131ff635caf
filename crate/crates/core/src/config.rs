//! Parameter records for the two optimizers.

use alloc::format;

use crate::error::{Error, Result};

/// Parameters of the generational genetic algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct GaConfig {
    pub pop_size: usize,
    /// Per-gene mutation probability.
    pub mut_rate: f64,
    /// Fraction of the population replaced each generation.
    pub kill_rate: f64,
    /// Early-exit threshold on raw best fitness.
    pub delta: f64,
    pub max_gen: usize,
    /// Per-gene probability that a two-parent child takes the second parent's gene.
    pub crossover_rate: f64,
    /// Parents per child. Above two, each gene's donor is uniform among the parents.
    pub parents: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            pop_size: 50,
            mut_rate: 0.1,
            kill_rate: 0.4,
            delta: 0.0,
            max_gen: 1000,
            crossover_rate: 0.5,
            parents: 2,
        }
    }
}

fn check_rate(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} must lie in [0, 1], got {value}")))
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "popSize must be at least 2, got {}",
                self.pop_size
            )));
        }
        if self.max_gen < 1 {
            return Err(Error::InvalidConfig("maxGen must be at least 1".into()));
        }
        if self.parents < 2 {
            return Err(Error::InvalidConfig(format!(
                "crossover needs at least 2 parents, got {}",
                self.parents
            )));
        }
        check_rate("mutRate", self.mut_rate)?;
        check_rate("killRate", self.kill_rate)?;
        check_rate("crossoverRate", self.crossover_rate)?;
        if self.delta.is_nan() || self.delta < 0.0 {
            return Err(Error::InvalidConfig(format!("delta must be >= 0, got {}", self.delta)));
        }
        Ok(())
    }

    /// Children bred per generation, `ceil(killRate * popSize)`.
    ///
    /// The product is nudged down by 1e-9 before rounding up so that values such as
    /// `0.1 * 30 = 3.0000000000000004` count as 3.
    pub fn children_per_generation(&self) -> usize {
        let raw = self.kill_rate * self.pop_size as f64 - 1e-9;
        (libm::ceil(raw).max(0.0) as usize).min(self.pop_size)
    }
}

/// Parameters of DE/rand/1/bin.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct DeConfig {
    pub pop_size: usize,
    /// Difference-vector multiplier, strictly positive.
    pub beta: f64,
    /// Binomial crossover probability of taking a trial gene.
    pub crossover_rate: f64,
    pub delta: f64,
    pub max_gen: usize,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            pop_size: 50,
            beta: 0.5,
            crossover_rate: 0.5,
            delta: 0.0,
            max_gen: 1000,
        }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beta.is_nan() || self.beta <= 0.0 {
            return Err(Error::InvalidConfig(format!("beta must be > 0, got {}", self.beta)));
        }
        self.validate_allowing_zero_beta()
    }

    /// Every check except `beta > 0`; used where the difference term is switched off
    /// on purpose.
    pub(crate) fn validate_allowing_zero_beta(&self) -> Result<()> {
        if self.pop_size < 4 {
            return Err(Error::InvalidConfig(format!(
                "differential evolution needs popSize >= 4, got {}",
                self.pop_size
            )));
        }
        if self.max_gen < 1 {
            return Err(Error::InvalidConfig("maxGen must be at least 1".into()));
        }
        if self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::InvalidConfig(format!("beta must be >= 0, got {}", self.beta)));
        }
        check_rate("crossoverRate", self.crossover_rate)?;
        if self.delta.is_nan() || self.delta < 0.0 {
            return Err(Error::InvalidConfig(format!("delta must be >= 0, got {}", self.delta)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        GaConfig::default().validate().unwrap();
        DeConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            GaConfig { pop_size: 1, ..Default::default() },
            GaConfig { max_gen: 0, ..Default::default() },
            GaConfig { mut_rate: 1.5, ..Default::default() },
            GaConfig { kill_rate: -0.1, ..Default::default() },
            GaConfig { crossover_rate: f64::NAN, ..Default::default() },
            GaConfig { parents: 1, ..Default::default() },
            GaConfig { delta: -1.0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?} should be rejected");
        }
        assert!(DeConfig { beta: 0.0, ..Default::default() }.validate().is_err());
        assert!(DeConfig { pop_size: 3, ..Default::default() }.validate().is_err());
        assert!(DeConfig { beta: 0.0, ..Default::default() }
            .validate_allowing_zero_beta()
            .is_ok());
    }

    #[test]
    fn children_count_rounds_up() {
        let count = |pop_size, kill_rate| {
            GaConfig { pop_size, kill_rate, ..Default::default() }.children_per_generation()
        };
        assert_eq!(count(50, 0.4), 20);
        assert_eq!(count(30, 0.1), 3);
        assert_eq!(count(5, 0.1), 1);
        assert_eq!(count(5, 0.4), 2);
        assert_eq!(count(50, 0.0), 0);
        assert_eq!(count(50, 1.0), 50);
    }
}
