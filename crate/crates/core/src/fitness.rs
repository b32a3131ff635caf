//! Benchmark objectives. Lower raw values are better.
//!
//! | function   | box per gene   | optimum             | noise-free box maximum      |
//! |------------|----------------|---------------------|-----------------------------|
//! | Ackley     | ±32.768        | 0 at (0, ..., 0)    | ≈ 22.3                      |
//! | Quartic    | ±1.28          | 0 + noise at 0      | 1.28^4 · D(D+1)/2           |
//! | Rosenbrock | ±30            | 0 at (1, ..., 1)    | (D-1) · 86 490 961          |
//!
//! Inputs outside the box are legal; they just push the observed maximum up.

use core::f64::consts::{E, PI};
use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::fault::Fault;
use crate::rng::RandomSource;

/// 1.28^4.
pub const QUARTIC_CORNER_TERM: f64 = 2.684_354_56;
/// Starting observed maximum for Ackley.
pub const ACKLEY_NOMINAL_MAX: f64 = 22.3;

/// Which benchmark a [`FitnessFunction`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FitnessKind {
    Ackley,
    Quartic,
    Rosenbrock,
}

impl FitnessKind {
    pub const ALL: [FitnessKind; 3] = [Self::Ackley, Self::Quartic, Self::Rosenbrock];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ackley => "ackley",
            Self::Quartic => "quartic",
            Self::Rosenbrock => "rosenbrock",
        }
    }

    pub fn is_deterministic(self) -> bool {
        !matches!(self, Self::Quartic)
    }

    /// Symmetric per-gene box `(lower, upper)`.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Self::Ackley => (-32.768, 32.768),
            Self::Quartic => (-1.28, 1.28),
            Self::Rosenbrock => (-30.0, 30.0),
        }
    }

    /// Initial observed maximum for a `dimension`-gene instance.
    pub fn initial_max(self, dimension: usize) -> f64 {
        match self {
            Self::Ackley => ACKLEY_NOMINAL_MAX,
            Self::Quartic => theoretical_quartic_max(dimension),
            Self::Rosenbrock => {
                let (low, _) = self.bounds();
                // every pair term peaks with both genes at the lower corner
                let term = 100.0 * (low - low * low) * (low - low * low) + (low - 1.0) * (low - 1.0);
                dimension.saturating_sub(1) as f64 * term
            }
        }
    }
}

impl fmt::Display for FitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for FitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ackley" | "ackleys" => Ok(Self::Ackley),
            "quartic" => Ok(Self::Quartic),
            "rosenbrock" => Ok(Self::Rosenbrock),
            _ => Err(Error::UnknownFitness(s.to_string())),
        }
    }
}

/// Ackley's function.
pub fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let square_mean = x.iter().map(|v| v * v).sum::<f64>() / d;
    let cos_mean = x.iter().map(|v| libm::cos(2.0 * PI * v)).sum::<f64>() / d;
    -20.0 * libm::exp(-0.2 * libm::sqrt(square_mean)) - libm::exp(cos_mean) + 20.0 + E
}

/// The polynomial part of the Quartic function, `sum i * x_i^4` with 1-based `i`.
pub fn quartic_noise_free(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| {
            let sq = v * v;
            (i + 1) as f64 * sq * sq
        })
        .sum()
}

/// Rosenbrock's function.
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let a = w[1] - w[0] * w[0];
            let b = w[0] - 1.0;
            100.0 * a * a + b * b
        })
        .sum()
}

/// Noise-free Quartic value at `(±1.28, ..., ±1.28)`.
pub fn theoretical_quartic_max(dimension: usize) -> f64 {
    let d = dimension as f64;
    QUARTIC_CORNER_TERM * d * (d + 1.0) / 2.0
}

/// Expected Quartic value at the corner once the `dimension` uniform draws are added.
pub fn quartic_max_mean(dimension: usize) -> f64 {
    theoretical_quartic_max(dimension) + dimension as f64 / 2.0
}

/// Variance of the Quartic value at any fixed input: `dimension` uniform draws.
pub fn quartic_max_variance(dimension: usize) -> f64 {
    dimension as f64 / 12.0
}

/// An objective bound to a dimension, tracking the largest raw value it has produced.
#[derive(Debug, Clone)]
pub struct FitnessFunction {
    kind: FitnessKind,
    dimension: usize,
    lower: f64,
    upper: f64,
    observed_max: f64,
    omit_noise: bool,
}

impl FitnessFunction {
    pub fn new(kind: FitnessKind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfig("fitness dimension must be positive".into()));
        }
        let (lower, upper) = kind.bounds();
        Ok(Self {
            kind,
            dimension,
            lower,
            upper,
            observed_max: kind.initial_max(dimension),
            omit_noise: false,
        })
    }

    /// Apply the fitness-level part of `fault`, if any.
    pub fn with_fault(mut self, fault: Option<Fault>) -> Self {
        self.omit_noise = fault == Some(Fault::QuarticNoNoise);
        self
    }

    pub fn kind(&self) -> FitnessKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper
    }

    pub fn observed_max(&self) -> f64 {
        self.observed_max
    }

    pub fn is_deterministic(&self) -> bool {
        self.kind.is_deterministic()
    }

    /// Raw objective value. Quartic draws one uniform `[0, 1)` term per gene from
    /// `rng`; the deterministic functions leave `rng` untouched.
    pub fn evaluate(&mut self, x: &[f64], rng: &mut RandomSource) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        let value = match self.kind {
            FitnessKind::Ackley => ackley(x),
            FitnessKind::Rosenbrock => rosenbrock(x),
            FitnessKind::Quartic => {
                let mut noise = 0.0;
                for _ in 0..self.dimension {
                    noise += rng.uniform();
                }
                if self.omit_noise {
                    quartic_noise_free(x)
                } else {
                    quartic_noise_free(x) + noise
                }
            }
        };
        if value > self.observed_max {
            self.observed_max = value;
        }
        Ok(value)
    }

    /// `raw / observedMax` clamped to `[0, 1]`; 0 when the observed maximum is 0.
    pub fn scaled_fitness(&self, raw: f64) -> f64 {
        if self.observed_max <= 0.0 {
            return 0.0;
        }
        (raw / self.observed_max).clamp(0.0, 1.0)
    }
}
