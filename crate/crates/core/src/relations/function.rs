//! Relations over the fitness functions themselves.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Evidence, ExactRecord, Expect, Params, Verdict};
use crate::error::Result;
use crate::fault::ExecutionContext;
use crate::fitness::FitnessKind;
use crate::rng::RandomSource;
use crate::stats::{self, Alternative, Sample, SampleLabel, SAMPLE_SIZE};

/// Dimension of the origin/unit-vector comparison.
pub const MINIMUM_ORDERING_DIM: usize = 4;
/// Dimension of the corner-sample comparison.
pub const MAXIMUM_SAMPLE_DIM: usize = 2;
/// Dimension of the adaptive-maximum relation.
pub const ADAPTIVE_MAX_DIM: usize = 3;
/// Absolute tolerance for permutation invariance.
pub const PERMUTATION_TOLERANCE: f64 = 1e-9;

const PERMUTATION_INPUT: [f64; 3] = [6.4, 2.5, 1.25];

fn exact(record: ExactRecord, initial: Vec<f64>, follow_up: Vec<f64>, params: Params) -> Evidence {
    Evidence {
        pass: record.passed(),
        verdict: Verdict::Exact(record),
        initial: Sample::initial(initial),
        follow_up: Sample::follow_up(follow_up),
        secondary: None,
        params,
    }
}

pub(super) fn statistical(
    initial: Sample,
    follow_up: Sample,
    alternative: Alternative,
    expect: Expect,
    params: Params,
) -> Result<Evidence> {
    let verdict = stats::welch_test(&initial, &follow_up, alternative)?;
    Ok(Evidence {
        pass: expect.passes(&verdict),
        verdict: Verdict::Statistical(verdict),
        initial,
        follow_up,
        secondary: None,
        params,
    })
}

/// Quartic at the origin stays in `[0, D)` and below quartic at `(0, ..., 0, 1)`.
pub(super) fn quartic_minimum_ordering(ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let d = MINIMUM_ORDERING_DIM;
    let mut f = ctx.fitness(FitnessKind::Quartic, d)?;
    let origin = vec![0.0; d];
    let mut unit = vec![0.0; d];
    unit[d - 1] = 1.0;

    let mut record = ExactRecord::new();
    let mut initial = Vec::with_capacity(SAMPLE_SIZE);
    let mut follow_up = Vec::with_capacity(SAMPLE_SIZE);
    for k in 0..SAMPLE_SIZE as u64 {
        let mut draw = rng.derive(k);
        let low = f.evaluate(&origin, &mut draw)?;
        let high = f.evaluate(&unit, &mut draw)?;
        record.check((0.0..d as f64).contains(&low), || {
            format!("draw {k}: quartic(origin) = {low} outside [0, {d})")
        });
        record.check(low < high, || {
            format!("draw {k}: quartic(origin) = {low} not below quartic(unit) = {high}")
        });
        initial.push(low);
        follow_up.push(high);
    }
    let params = Params::from([("dimension".into(), d.into())]);
    Ok(exact(record, initial, follow_up, params))
}

/// Two independent samples at the `(1.28, ..., 1.28)` corner; pass when equality is retained.
pub(super) fn quartic_maximum_samples(ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let d = MAXIMUM_SAMPLE_DIM;
    let corner = vec![FitnessKind::Quartic.bounds().1; d];
    let sample = |label, stream| {
        let mut f = ctx.fitness(FitnessKind::Quartic, d)?;
        stats::try_collect_sample(label, SAMPLE_SIZE, &rng.derive(stream), |r| f.evaluate(&corner, r))
    };
    let initial = sample(SampleLabel::Initial, 0)?;
    let follow_up = sample(SampleLabel::FollowUp, 1)?;
    let params = Params::from([("dimension".into(), d.into()), ("input".into(), corner[0].into())]);
    statistical(initial, follow_up, Alternative::TwoSided, Expect::Retain, params)
}

fn shuffle(values: &mut [f64], rng: &mut RandomSource) {
    for i in (1..values.len()).rev() {
        let j = rng.index(i + 1);
        values.swap(i, j);
    }
}

fn permutations3(x: [f64; 3]) -> [[f64; 3]; 6] {
    let [a, b, c] = x;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

/// Ackley is invariant under any reordering of its inputs.
///
/// Checks every ordering of a fixed 3-D point, then random points with random
/// permutations until `SAMPLE_SIZE` pairs are compared.
pub(super) fn ackley_permutation(ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let d = PERMUTATION_INPUT.len();
    let mut f = ctx.fitness(FitnessKind::Ackley, d)?;
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = permutations3(PERMUTATION_INPUT)
        .into_iter()
        .map(|p| (PERMUTATION_INPUT.to_vec(), p.to_vec()))
        .collect();
    let (low, high) = FitnessKind::Ackley.bounds();
    for k in pairs.len()..SAMPLE_SIZE {
        let mut r = rng.derive(k as u64);
        let x: Vec<f64> = (0..d).map(|_| r.uniform_in(low, high)).collect();
        let mut y = x.clone();
        shuffle(&mut y, &mut r);
        pairs.push((x, y));
    }

    let mut record = ExactRecord::new();
    let mut initial = Vec::with_capacity(pairs.len());
    let mut follow_up = Vec::with_capacity(pairs.len());
    // Ackley is deterministic; this stream is never drawn from.
    let mut unused = rng.derive(u64::MAX);
    for (x, y) in &pairs {
        let a = f.evaluate(x, &mut unused)?;
        let b = f.evaluate(y, &mut unused)?;
        record.check((a - b).abs() <= PERMUTATION_TOLERANCE, || {
            format!("ackley({x:?}) = {a} but ackley({y:?}) = {b}")
        });
        initial.push(a);
        follow_up.push(b);
    }
    let params = Params::from([
        ("dimension".into(), d.into()),
        ("tolerance".into(), PERMUTATION_TOLERANCE.into()),
    ]);
    Ok(exact(record, initial, follow_up, params))
}

/// Input outside the box used to raise the observed maximum.
pub fn out_of_range_input(kind: FitnessKind) -> f64 {
    match kind {
        FitnessKind::Rosenbrock => 80.0,
        // Ackley never reaches this relation; the value only has to exceed the box.
        FitnessKind::Quartic | FitnessKind::Ackley => 3.0,
    }
}

/// Scaled fitness at the upper corner drops after one out-of-range evaluation.
pub(super) fn adaptive_maximum(kind: FitnessKind, ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let d = ADAPTIVE_MAX_DIM;
    let mut f = ctx.fitness(kind, d)?;
    let corner = vec![kind.bounds().1; d];
    let outside = vec![out_of_range_input(kind); d];

    let initial = stats::try_collect_sample(SampleLabel::Initial, SAMPLE_SIZE, &rng.derive(0), |r| {
        let raw = f.evaluate(&corner, r)?;
        Ok(f.scaled_fitness(raw))
    })?;
    let max_before = f.observed_max();
    f.evaluate(&outside, &mut rng.derive(2))?;
    let max_after = f.observed_max();
    let follow_up = stats::try_collect_sample(SampleLabel::FollowUp, SAMPLE_SIZE, &rng.derive(1), |r| {
        let raw = f.evaluate(&corner, r)?;
        Ok(f.scaled_fitness(raw))
    })?;
    let params = Params::from([
        ("dimension".into(), d.into()),
        ("corner".into(), corner[0].into()),
        ("outOfRange".into(), outside[0].into()),
        ("maxBefore".into(), max_before.into()),
        ("maxAfter".into(), max_after.into()),
    ]);
    statistical(initial, follow_up, Alternative::Greater, Expect::Reject, params)
}

/// Known optimum: the arguments minimizing each function.
pub fn optimum(kind: FitnessKind, dimension: usize) -> Vec<f64> {
    match kind {
        FitnessKind::Rosenbrock => vec![1.0; dimension],
        FitnessKind::Ackley | FitnessKind::Quartic => vec![0.0; dimension],
    }
}

/// Lower and higher dimension compared by the scaling relation.
pub const SCALING_DIMS: (usize, usize) = (2, 4);

/// The optimum's scaled fitness does not depend on the dimension.
///
/// Deterministic functions must agree within the permutation tolerance. Quartic's
/// optimum is noisy, so both sides only have to stay below `D / observedMax`.
pub(super) fn dimension_scaling(kind: FitnessKind, ctx: &ExecutionContext, rng: &RandomSource) -> Result<Evidence> {
    let (low_d, high_d) = SCALING_DIMS;
    let mut low = ctx.fitness(kind, low_d)?;
    let mut high = ctx.fitness(kind, high_d)?;
    let x_low = optimum(kind, low_d);
    let x_high = optimum(kind, high_d);

    let mut record = ExactRecord::new();
    let mut initial = Vec::with_capacity(SAMPLE_SIZE);
    let mut follow_up = Vec::with_capacity(SAMPLE_SIZE);
    for k in 0..SAMPLE_SIZE as u64 {
        let mut r = rng.derive(k);
        let raw_low = low.evaluate(&x_low, &mut r)?;
        let raw_high = high.evaluate(&x_high, &mut r)?;
        let a = low.scaled_fitness(raw_low);
        let b = high.scaled_fitness(raw_high);
        if kind.is_deterministic() {
            record.check((a - b).abs() <= PERMUTATION_TOLERANCE, || {
                format!("draw {k}: scaled optimum {a} at D={low_d} vs {b} at D={high_d}")
            });
        } else {
            let bound_low = low_d as f64 / low.observed_max();
            let bound_high = high_d as f64 / high.observed_max();
            record.check(a < bound_low, || format!("draw {k}: {a} not below {bound_low} at D={low_d}"));
            record.check(b < bound_high, || format!("draw {k}: {b} not below {bound_high} at D={high_d}"));
        }
        initial.push(a);
        follow_up.push(b);
    }
    let params = Params::from([
        ("initial.dimension".into(), low_d.into()),
        ("followUp.dimension".into(), high_d.into()),
    ]);
    Ok(exact(record, initial, follow_up, params))
}
