//! Two-sample testing for statistical metamorphic relations.
//!
//! Samples are compared with Welch's unequal-variance t-test. The null hypothesis is
//! always "equal means"; the alternative is ordered as `mean(a)` vs `mean(b)`.

use core::fmt;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Significance level used by every relation.
pub const ALPHA: f64 = 0.05;
/// Observations per sample in the relation catalog.
pub const SAMPLE_SIZE: usize = 20;

const BETA_CF_TOLERANCE: f64 = 1e-14;
const BETA_CF_MAX_ITER: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub enum Alternative {
    /// `mean(a) > mean(b)`
    Greater,
    /// `mean(a) < mean(b)`
    Less,
    TwoSided,
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Greater => "greater",
            Self::Less => "less",
            Self::TwoSided => "twoSided",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub enum SampleLabel {
    Initial,
    FollowUp,
}

/// Observations from one side of a statistical relation.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub observations: Vec<f64>,
    pub label: SampleLabel,
}

impl Sample {
    pub fn new(label: SampleLabel, observations: Vec<f64>) -> Self {
        Self { observations, label }
    }

    pub fn initial(observations: Vec<f64>) -> Self {
        Self::new(SampleLabel::Initial, observations)
    }

    pub fn follow_up(observations: Vec<f64>) -> Self {
        Self::new(SampleLabel::FollowUp, observations)
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Arithmetic mean; exact for constant samples, where summation could round.
    pub fn mean(&self) -> f64 {
        if let Some(v) = self.constant_value() {
            return v;
        }
        self.observations.iter().sum::<f64>() / self.observations.len() as f64
    }

    fn constant_value(&self) -> Option<f64> {
        let (&first, rest) = self.observations.split_first()?;
        rest.iter().all(|&x| x == first).then_some(first)
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.observations.len();
        if n < 2 || self.constant_value().is_some() {
            return 0.0;
        }
        let m = self.mean();
        self.observations.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
    }
}

/// Result of a two-sample comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct TestVerdict {
    /// Welch t statistic, or `mean(a) - mean(b)` when both samples are constant.
    pub statistic: f64,
    pub p_value: f64,
    pub alternative: Alternative,
    pub reject: bool,
    /// Both samples had zero variance; the verdict is an exact mean comparison.
    pub degenerate: bool,
}

/// Welch's t-test at [`ALPHA`].
pub fn welch_test(a: &Sample, b: &Sample, alternative: Alternative) -> Result<TestVerdict> {
    welch_test_at(a, b, alternative, ALPHA)
}

pub fn welch_test_at(a: &Sample, b: &Sample, alternative: Alternative, alpha: f64) -> Result<TestVerdict> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(Error::SampleTooSmall(s.len()));
        }
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (a.mean(), b.mean());
    let (va, vb) = (a.variance() / na, b.variance() / nb);

    if va == 0.0 && vb == 0.0 {
        let reject = match alternative {
            Alternative::Greater => ma > mb,
            Alternative::Less => ma < mb,
            Alternative::TwoSided => ma != mb,
        };
        return Ok(TestVerdict {
            statistic: ma - mb,
            p_value: if reject { 0.0 } else { 1.0 },
            alternative,
            reject,
            degenerate: true,
        });
    }

    let statistic = (ma - mb) / libm::sqrt(va + vb);
    let df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    let p_value = match alternative {
        Alternative::Greater => students_t_sf(statistic, df),
        Alternative::Less => students_t_cdf(statistic, df),
        Alternative::TwoSided => (2.0 * students_t_sf(libm::fabs(statistic), df)).min(1.0),
    }
    .clamp(0.0, 1.0);
    Ok(TestVerdict {
        statistic,
        p_value,
        alternative,
        reject: p_value < alpha,
        degenerate: false,
    })
}

/// Run `procedure` `n` times, each on substream `k` of `rng`.
pub fn collect_sample(
    label: SampleLabel,
    n: usize,
    rng: &RandomSource,
    mut procedure: impl FnMut(&mut RandomSource) -> f64,
) -> Sample {
    let observations = (0..n as u64)
        .map(|k| procedure(&mut rng.derive(k)))
        .collect();
    Sample::new(label, observations)
}

/// Fallible variant of [`collect_sample`].
pub fn try_collect_sample(
    label: SampleLabel,
    n: usize,
    rng: &RandomSource,
    mut procedure: impl FnMut(&mut RandomSource) -> Result<f64>,
) -> Result<Sample> {
    let observations = (0..n as u64)
        .map(|k| procedure(&mut rng.derive(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sample::new(label, observations))
}

/// Student-t CDF with `df` degrees of freedom.
pub fn students_t_cdf(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    let tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Student-t survival function, computed without cancellation for large `t`.
pub fn students_t_sf(t: f64, df: f64) -> f64 {
    students_t_cdf(-t, df)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b)
        + a * libm::log(x)
        + b * libm::log1p(-x);
    let front = libm::exp(ln_front);
    // the continued fraction converges fast for x < (a + 1) / (a + b + 2)
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if libm::fabs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if libm::fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if libm::fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if libm::fabs(del - 1.0) < BETA_CF_TOLERANCE {
            break;
        }
    }
    h
}
