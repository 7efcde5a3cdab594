//! Studentized randomization tests.
//!
//! A statistic is supplied through [`Studentized`]: it evaluates a dataset to
//! an estimate with a standard deviation on the `√n` scale and turns that
//! into `T = √n (estimate - θ) / σ`. The engine draws one group element per
//! observation, recomputes the statistic on the transformed data centered at
//! the group-invariant parameter value, and compares the observed statistic
//! with the resulting conditional distribution. Ties at the critical value
//! are resolved with the randomization weight `γ`, which makes the test
//! exact whenever the data distribution is invariant under the group.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::groups::{check_support, enumerate_elements, sample_element, GroupAction, GroupError, GroupKind};
use crate::normal;
use crate::pearson::PairedObservation;
use crate::rng::RandomSource;

/// Default cap on `|G|^n` for exact enumeration.
pub const DEFAULT_EXACT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("at least one replicate is required")]
    NoReplicates,
    #[error("the dataset is empty")]
    EmptyData,
    #[error("degenerate randomization distribution: every replicate was degenerate")]
    DegenerateDistribution,
    #[error("orbit of {orbit} element vectors exceeds the budget of {budget}; use Monte-Carlo mode")]
    BudgetExceeded { orbit: u128, budget: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Result of fitting a statistic to one dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub estimate: f64,
    /// Standard deviation of `√n (estimate - θ)`.
    pub sigma: f64,
    pub n: usize,
    pub degenerate: bool,
}

impl Evaluation {
    pub fn std_err(&self) -> f64 {
        self.sigma / libm::sqrt(self.n as f64)
    }
}

/// One randomized statistic with its degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replicate {
    pub value: f64,
    pub degenerate: bool,
}

/// A parameter estimator with a consistent standard error.
pub trait Studentized<T> {
    fn evaluate(&self, data: &[T]) -> Evaluation;

    /// `√n (estimate - theta) / σ`, or `None` for a degenerate evaluation.
    fn statistic(&self, eval: &Evaluation, theta: f64) -> Option<f64>;

    /// Statistic of a group-transformed dataset centered at `center`.
    /// Degenerate replicates default to `0`.
    fn randomized(&self, eval: &Evaluation, center: f64) -> Replicate {
        match self.statistic(eval, center) {
            Some(value) => Replicate { value, degenerate: false },
            None => Replicate { value: 0.0, degenerate: true },
        }
    }

    /// Parameter value of every group-invariant distribution.
    fn invariant_value(&self) -> f64;

    /// `{θ : |T(θ)| ≤ c}`, or the whole parameter range when degenerate.
    fn interval(&self, eval: &Evaluation, critical_value: f64) -> (f64, f64);

    /// Observed statistic with the conservative convention `0` for
    /// degenerate data.
    fn observed(&self, eval: &Evaluation, theta: f64) -> f64 {
        self.statistic(eval, theta).unwrap_or(0.0)
    }
}

impl<T, S: Studentized<T> + ?Sized> Studentized<T> for &S {
    fn evaluate(&self, data: &[T]) -> Evaluation {
        (**self).evaluate(data)
    }
    fn statistic(&self, eval: &Evaluation, theta: f64) -> Option<f64> {
        (**self).statistic(eval, theta)
    }
    fn randomized(&self, eval: &Evaluation, center: f64) -> Replicate {
        (**self).randomized(eval, center)
    }
    fn invariant_value(&self) -> f64 {
        (**self).invariant_value()
    }
    fn interval(&self, eval: &Evaluation, critical_value: f64) -> (f64, f64) {
        (**self).interval(eval, critical_value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sidedness {
    #[default]
    TwoSided,
    Upper,
    Lower,
}

impl Sidedness {
    /// Maps a statistic so that large values are evidence against `H₀`.
    /// `+∞` (the degenerate randomized value) stays extreme on every side.
    pub fn orient(self, t: f64) -> f64 {
        if t == f64::INFINITY {
            return t;
        }
        match self {
            Sidedness::TwoSided => t.abs(),
            Sidedness::Upper => t,
            Sidedness::Lower => -t,
        }
    }
}

/// A statistic together with the hypothesis it is tested against.
#[derive(Debug, Clone, Copy)]
pub struct StatisticSpec<S> {
    pub statistic: S,
    pub null_value: f64,
    pub sidedness: Sidedness,
}

impl<S> StatisticSpec<S> {
    pub fn two_sided(statistic: S, null_value: f64) -> Self {
        Self {
            statistic,
            null_value,
            sidedness: Sidedness::TwoSided,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    MonteCarlo,
    Exact,
    Bootstrap,
    Permutation,
    Asymptotic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::MonteCarlo => "monte-carlo",
            Mode::Exact => "exact",
            Mode::Bootstrap => "bootstrap",
            Mode::Permutation => "permutation",
            Mode::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub gamma: f64,
    pub reject_prob: f64,
    pub p_value: f64,
    pub estimate: f64,
    pub std_err: f64,
    /// Number of non-dropped replicates, or the orbit size in exact mode.
    pub replicates: usize,
    /// Replicates discarded as degenerate (bootstrap only).
    pub dropped: usize,
    /// Randomized replicates that hit a degenerate convention.
    pub degenerate_replicates: usize,
    pub mode: Mode,
}

/// Conditional reference distribution of the oriented statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDistribution {
    sorted: Vec<f64>,
    observed: Evaluation,
    statistic: f64,
    sidedness: Sidedness,
    mode: Mode,
    dropped: usize,
    degenerate: usize,
}

impl ReferenceDistribution {
    fn new(
        mut values: Vec<f64>,
        observed: Evaluation,
        statistic: f64,
        sidedness: Sidedness,
        mode: Mode,
    ) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            sorted: values,
            observed,
            statistic,
            sidedness,
            mode,
            dropped: 0,
            degenerate: 0,
        }
    }

    /// Oriented reference values in increasing order.
    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn statistic(&self) -> f64 {
        self.statistic
    }

    pub fn evaluation(&self) -> &Evaluation {
        &self.observed
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn degenerate_replicates(&self) -> usize {
        self.degenerate
    }

    fn count_greater(&self, c: f64) -> usize {
        self.sorted.len() - self.sorted.partition_point(|&v| v <= c)
    }

    fn count_at_least(&self, c: f64) -> usize {
        self.sorted.len() - self.sorted.partition_point(|&v| v < c)
    }

    /// Critical value and tie weight at level `alpha`.
    pub fn critical_value(&self, alpha: f64) -> (f64, f64) {
        let m = self.sorted.len();
        let k = libm::ceil((1.0 - alpha) * m as f64 - 1e-9).clamp(1.0, m as f64) as usize;
        let c = self.sorted[k - 1];
        if self.mode == Mode::Bootstrap {
            return (c, 0.0);
        }
        let greater = self.count_greater(c);
        let equal = self.count_at_least(c) - greater;
        let gamma = ((alpha * m as f64 - greater as f64) / equal as f64).clamp(0.0, 1.0);
        (c, gamma)
    }

    /// `φ = 1{t > c} + γ 1{t = c}` for an already oriented statistic.
    pub fn reject_prob(&self, oriented: f64, alpha: f64) -> f64 {
        let (c, gamma) = self.critical_value(alpha);
        if oriented > c {
            1.0
        } else if oriented == c {
            gamma
        } else {
            0.0
        }
    }

    pub fn p_value(&self, oriented: f64) -> f64 {
        let at_least = self.count_at_least(oriented) as f64;
        let m = self.sorted.len() as f64;
        match self.mode {
            Mode::Bootstrap => (1.0 + at_least) / (m + 1.0),
            _ => at_least / m,
        }
    }

    pub fn decide(&self, alpha: f64) -> Result<TestResult, EngineError> {
        check_alpha(alpha)?;
        let oriented = self.sidedness.orient(self.statistic);
        let (critical_value, gamma) = self.critical_value(alpha);
        Ok(TestResult {
            statistic: self.statistic,
            critical_value,
            gamma,
            reject_prob: self.reject_prob(oriented, alpha),
            p_value: self.p_value(oriented),
            estimate: self.observed.estimate,
            std_err: self.observed.std_err(),
            replicates: match self.mode {
                Mode::MonteCarlo | Mode::Permutation => self.sorted.len() - 1,
                _ => self.sorted.len(),
            },
            dropped: self.dropped,
            degenerate_replicates: self.degenerate,
            mode: self.mode,
        })
    }
}

fn check_alpha(alpha: f64) -> Result<(), EngineError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(EngineError::InvalidAlpha(alpha))
    }
}

/// Monte-Carlo conditional distribution from `replicates` element vectors.
/// Replicate `b` draws from `source.substream(b)`. The observed statistic
/// is part of the returned reference set.
pub fn randomization_distribution<T, S>(
    data: &[T],
    spec: &StatisticSpec<S>,
    kind: GroupKind,
    replicates: usize,
    source: RandomSource,
) -> Result<ReferenceDistribution, EngineError>
where
    T: GroupAction,
    S: Studentized<T>,
{
    check_support::<T>(kind)?;
    if replicates == 0 {
        return Err(EngineError::NoReplicates);
    }
    if data.is_empty() {
        return Err(EngineError::EmptyData);
    }
    let statistic = &spec.statistic;
    let eval = statistic.evaluate(data);
    let observed = statistic.observed(&eval, spec.null_value);
    let center = statistic.invariant_value();

    let mut values = Vec::with_capacity(replicates + 1);
    let mut buffer: Vec<T> = Vec::with_capacity(data.len());
    let mut degenerate = 0;
    for b in 0..replicates {
        let mut rng = source.substream(b as u64).rng();
        buffer.clear();
        buffer.extend(data.iter().map(|obs| obs.act_unchecked(&sample_element(kind, &mut rng))));
        let rep = statistic.randomized(&statistic.evaluate(&buffer), center);
        degenerate += rep.degenerate as usize;
        values.push(spec.sidedness.orient(rep.value));
    }
    if degenerate == replicates {
        return Err(EngineError::DegenerateDistribution);
    }
    values.push(spec.sidedness.orient(observed));
    let mut dist = ReferenceDistribution::new(values, eval, observed, spec.sidedness, Mode::MonteCarlo);
    dist.degenerate = degenerate;
    Ok(dist)
}

pub fn randomization_test<T, S>(
    data: &[T],
    spec: &StatisticSpec<S>,
    kind: GroupKind,
    replicates: usize,
    alpha: f64,
    source: RandomSource,
) -> Result<TestResult, EngineError>
where
    T: GroupAction,
    S: Studentized<T>,
{
    check_alpha(alpha)?;
    randomization_distribution(data, spec, kind, replicates, source)?.decide(alpha)
}

/// Number of element vectors `|G|^n`, saturating to `u128::MAX`.
pub fn orbit_size(kind: GroupKind, n: usize) -> Result<u128, EngineError> {
    let order = kind.order().ok_or(GroupError::NotFinite(kind))? as u128;
    let mut size: u128 = 1;
    for _ in 0..n {
        size = size.saturating_mul(order);
    }
    Ok(size)
}

/// Exact conditional distribution over all `|G|^n` element vectors.
pub fn exact_distribution<T, S>(
    data: &[T],
    spec: &StatisticSpec<S>,
    kind: GroupKind,
    budget: u64,
) -> Result<ReferenceDistribution, EngineError>
where
    T: GroupAction,
    S: Studentized<T>,
{
    check_support::<T>(kind)?;
    if data.is_empty() {
        return Err(EngineError::EmptyData);
    }
    let elements = enumerate_elements(kind)?;
    let orbit = orbit_size(kind, data.len())?;
    if orbit > budget as u128 {
        return Err(EngineError::BudgetExceeded { orbit, budget });
    }
    let statistic = &spec.statistic;
    let eval = statistic.evaluate(data);
    let observed = statistic.observed(&eval, spec.null_value);
    let center = statistic.invariant_value();

    let n = data.len();
    let mut digits = alloc::vec![0usize; n];
    let mut buffer: Vec<T> = data.iter().map(|obs| obs.act_unchecked(&elements[0])).collect();
    let mut values = Vec::with_capacity(orbit as usize);
    let mut degenerate = 0;
    loop {
        let rep = statistic.randomized(&statistic.evaluate(&buffer), center);
        degenerate += rep.degenerate as usize;
        values.push(spec.sidedness.orient(rep.value));

        // odometer increment; only the digits that change are re-applied
        let mut i = 0;
        while i < n {
            digits[i] += 1;
            if digits[i] < elements.len() {
                buffer[i] = data[i].act_unchecked(&elements[digits[i]]);
                break;
            }
            digits[i] = 0;
            buffer[i] = data[i].act_unchecked(&elements[0]);
            i += 1;
        }
        if i == n {
            break;
        }
    }
    if degenerate == values.len() {
        return Err(EngineError::DegenerateDistribution);
    }
    let mut dist = ReferenceDistribution::new(values, eval, observed, spec.sidedness, Mode::Exact);
    dist.degenerate = degenerate;
    Ok(dist)
}

pub fn exact_enumeration_test<T, S>(
    data: &[T],
    spec: &StatisticSpec<S>,
    kind: GroupKind,
    alpha: f64,
) -> Result<TestResult, EngineError>
where
    T: GroupAction,
    S: Studentized<T>,
{
    check_alpha(alpha)?;
    exact_distribution(data, spec, kind, DEFAULT_EXACT_BUDGET)?.decide(alpha)
}

/// `|G|^{-n} Σ_g φ(g ∘ data)` over the full orbit. Every orbit point shares
/// the same conditional distribution, so this equals `alpha` whenever the
/// tie weight is not clamped.
pub fn orbit_average_reject_prob(dist: &ReferenceDistribution, alpha: f64) -> Result<f64, EngineError> {
    check_alpha(alpha)?;
    if dist.mode != Mode::Exact {
        return Ok(f64::NAN);
    }
    let (c, gamma) = dist.critical_value(alpha);
    let greater = dist.count_greater(c) as f64;
    let equal = (dist.count_at_least(c) - dist.count_greater(c)) as f64;
    Ok((greater + gamma * equal) / dist.len() as f64)
}

/// Efron bootstrap distribution: resample with replacement and studentize
/// around the original estimate. Degenerate resamples are dropped.
pub fn bootstrap_distribution<T, S>(
    data: &[T],
    spec: &StatisticSpec<S>,
    replicates: usize,
    source: RandomSource,
) -> Result<ReferenceDistribution, EngineError>
where
    T: Clone,
    S: Studentized<T>,
{
    if replicates == 0 {
        return Err(EngineError::NoReplicates);
    }
    if data.is_empty() {
        return Err(EngineError::EmptyData);
    }
    let statistic = &spec.statistic;
    let eval = statistic.evaluate(data);
    let observed = statistic.observed(&eval, spec.null_value);
    let n = data.len();

    let mut values = Vec::with_capacity(replicates);
    let mut buffer: Vec<T> = Vec::with_capacity(n);
    let mut dropped = 0;
    for b in 0..replicates {
        let mut rng = source.substream(b as u64).rng();
        buffer.clear();
        buffer.extend((0..n).map(|_| data[rng.random_range(0..n)].clone()));
        match statistic.statistic(&statistic.evaluate(&buffer), eval.estimate) {
            Some(t) if t.is_finite() => values.push(spec.sidedness.orient(t)),
            _ => dropped += 1,
        }
    }
    if values.is_empty() {
        return Err(EngineError::DegenerateDistribution);
    }
    let mut dist = ReferenceDistribution::new(values, eval, observed, spec.sidedness, Mode::Bootstrap);
    dist.dropped = dropped;
    Ok(dist)
}

pub fn bootstrap_test<T, S>(
    data: &[T],
    spec: &StatisticSpec<S>,
    replicates: usize,
    alpha: f64,
    source: RandomSource,
) -> Result<TestResult, EngineError>
where
    T: Clone,
    S: Studentized<T>,
{
    check_alpha(alpha)?;
    bootstrap_distribution(data, spec, replicates, source)?.decide(alpha)
}

/// Writes `data` with its `x` coordinates uniformly permuted into `out`.
pub fn permute_pairing<R: Rng + ?Sized>(data: &[PairedObservation], rng: &mut R, out: &mut Vec<PairedObservation>) {
    let mut xs: Vec<f64> = data.iter().map(|p| p.x).collect();
    xs.shuffle(rng);
    out.clear();
    out.extend(data.iter().zip(xs).map(|(p, x)| PairedObservation::new(x, p.y)));
}

/// Reference distribution from permuting the `x` coordinates across pairs,
/// keeping `y` in place. The observed statistic is part of the set.
pub fn pairing_permutation_distribution<S>(
    data: &[PairedObservation],
    spec: &StatisticSpec<S>,
    replicates: usize,
    source: RandomSource,
) -> Result<ReferenceDistribution, EngineError>
where
    S: Studentized<PairedObservation>,
{
    if replicates == 0 {
        return Err(EngineError::NoReplicates);
    }
    if data.is_empty() {
        return Err(EngineError::EmptyData);
    }
    let statistic = &spec.statistic;
    let eval = statistic.evaluate(data);
    let observed = statistic.observed(&eval, spec.null_value);

    let mut buffer: Vec<PairedObservation> = Vec::with_capacity(data.len());
    let mut values = Vec::with_capacity(replicates + 1);
    let mut degenerate = 0;
    for b in 0..replicates {
        let mut rng = source.substream(b as u64).rng();
        permute_pairing(data, &mut rng, &mut buffer);
        let rep = statistic.randomized(&statistic.evaluate(&buffer), spec.null_value);
        degenerate += rep.degenerate as usize;
        values.push(spec.sidedness.orient(rep.value));
    }
    if degenerate == replicates {
        return Err(EngineError::DegenerateDistribution);
    }
    values.push(spec.sidedness.orient(observed));
    let mut dist = ReferenceDistribution::new(values, eval, observed, spec.sidedness, Mode::Permutation);
    dist.degenerate = degenerate;
    Ok(dist)
}

pub fn pairing_permutation_test<S>(
    data: &[PairedObservation],
    spec: &StatisticSpec<S>,
    replicates: usize,
    alpha: f64,
    source: RandomSource,
) -> Result<TestResult, EngineError>
where
    S: Studentized<PairedObservation>,
{
    check_alpha(alpha)?;
    pairing_permutation_distribution(data, spec, replicates, source)?.decide(alpha)
}

/// Standard normal critical value at level `alpha` for the given side.
pub fn normal_critical_value(alpha: f64, sidedness: Sidedness) -> f64 {
    match sidedness {
        Sidedness::TwoSided => normal::quantile(1.0 - alpha / 2.0),
        _ => normal::quantile(1.0 - alpha),
    }
}

/// Asymptotic test with standard normal quantiles.
pub fn normal_test<T, S>(data: &[T], spec: &StatisticSpec<S>, alpha: f64) -> Result<TestResult, EngineError>
where
    S: Studentized<T>,
{
    check_alpha(alpha)?;
    if data.is_empty() {
        return Err(EngineError::EmptyData);
    }
    let statistic = &spec.statistic;
    let eval = statistic.evaluate(data);
    let t = statistic.observed(&eval, spec.null_value);
    let c = normal_critical_value(alpha, spec.sidedness);
    let p_value = match spec.sidedness {
        Sidedness::TwoSided => 2.0 * normal::survival(t.abs()),
        Sidedness::Upper => normal::survival(t),
        Sidedness::Lower => normal::cdf(t),
    };
    Ok(TestResult {
        statistic: t,
        critical_value: c,
        gamma: 0.0,
        reject_prob: if spec.sidedness.orient(t) > c { 1.0 } else { 0.0 },
        p_value,
        estimate: eval.estimate,
        std_err: eval.std_err(),
        replicates: 0,
        dropped: 0,
        degenerate_replicates: 0,
        mode: Mode::Asymptotic,
    })
}

/// Confidence set `{θ : |T(θ)| ≤ c}`.
pub fn invert_ci<T, S: Studentized<T>>(data: &[T], statistic: &S, critical_value: f64) -> (f64, f64) {
    statistic.interval(&statistic.evaluate(data), critical_value)
}

/// `mean(f h) - mean(f) mean(h)` over transformed observations.
pub fn randomized_covariance(f_values: &[f64], h_values: &[f64]) -> f64 {
    assert_eq!(f_values.len(), h_values.len(), "length mismatch");
    let n = f_values.len() as f64;
    let mean_f = f_values.iter().sum::<f64>() / n;
    let mean_h = h_values.iter().sum::<f64>() / n;
    let mean_fh = f_values.iter().zip(h_values).map(|(f, h)| f * h).sum::<f64>() / n;
    mean_fh - mean_f * mean_h
}

/// `n · Var(estimate)` over `draws` random group transformations of a fixed
/// dataset: the conditional variance of `√n` times the randomized estimate.
pub fn randomized_estimate_variance<T, S>(
    data: &[T],
    statistic: &S,
    kind: GroupKind,
    draws: usize,
    source: RandomSource,
) -> Result<f64, EngineError>
where
    T: GroupAction,
    S: Studentized<T>,
{
    check_support::<T>(kind)?;
    if draws == 0 {
        return Err(EngineError::NoReplicates);
    }
    let mut buffer: Vec<T> = Vec::with_capacity(data.len());
    let mut estimates = Vec::with_capacity(draws);
    for b in 0..draws {
        let mut rng = source.substream(b as u64).rng();
        buffer.clear();
        buffer.extend(data.iter().map(|obs| obs.act_unchecked(&sample_element(kind, &mut rng))));
        estimates.push(statistic.evaluate(&buffer).estimate);
    }
    let (_, var) = crate::diagnostics::mean_variance(&estimates);
    Ok(data.len() as f64 * var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn reference(values: Vec<f64>, statistic: f64, mode: Mode) -> ReferenceDistribution {
        let eval = Evaluation {
            estimate: 0.0,
            sigma: 1.0,
            n: 1,
            degenerate: false,
        };
        ReferenceDistribution::new(values, eval, statistic, Sidedness::TwoSided, mode)
    }

    #[test]
    fn fully_tied_reference_rejects_with_probability_alpha() {
        let dist = reference(vec![1.5; 100], 1.5, Mode::MonteCarlo);
        let r = dist.decide(0.05).unwrap();
        assert_eq!(r.critical_value, 1.5);
        assert!((r.gamma - 0.05).abs() < 1e-15);
        assert!((r.reject_prob - 0.05).abs() < 1e-15);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn order_statistic_and_gamma() {
        // 20 distinct values; k = ceil(0.95 * 20) = 19
        let values: Vec<f64> = (1..=20).map(f64::from).collect();
        let dist = reference(values, 19.0, Mode::Exact);
        let (c, gamma) = dist.critical_value(0.05);
        assert_eq!(c, 19.0);
        // one value above, one at c: γ = (1 - 1) / 1
        assert_eq!(gamma, 0.0);
        let (c, gamma) = dist.critical_value(0.10);
        assert_eq!(c, 18.0);
        assert_eq!(gamma, 0.0);
        let (c, gamma) = dist.critical_value(0.07);
        assert_eq!(c, 19.0);
        assert!((gamma - 0.4).abs() < 1e-12);
    }

    #[test]
    fn p_values_are_monotone() {
        let values: Vec<f64> = (0..10).map(f64::from).collect();
        let dist = reference(values, 0.0, Mode::MonteCarlo);
        let mut last = 1.0;
        for k in 0..12 {
            let p = dist.p_value(k as f64 * 0.9);
            assert!(p <= last);
            last = p;
        }
    }

    #[test]
    fn bootstrap_p_value_and_gamma() {
        let dist = reference(vec![2.0], 1.0, Mode::Bootstrap);
        let r = dist.decide(0.05).unwrap();
        assert_eq!(r.critical_value, 2.0);
        assert_eq!(r.gamma, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.reject_prob, 0.0);
    }

    #[test]
    fn sidedness() {
        assert_eq!(Sidedness::TwoSided.orient(-2.0), 2.0);
        assert_eq!(Sidedness::Upper.orient(-2.0), -2.0);
        assert_eq!(Sidedness::Lower.orient(-2.0), 2.0);
        assert_eq!(Sidedness::Lower.orient(f64::INFINITY), f64::INFINITY);
    }

    #[test]
    fn normal_critical_values() {
        assert!((normal_critical_value(0.05, Sidedness::TwoSided) - 1.959964).abs() < 1e-6);
        assert!((normal_critical_value(0.10, Sidedness::TwoSided) - 1.644854).abs() < 1e-6);
    }

    #[test]
    fn covariance_examples() {
        assert_eq!(randomized_covariance(&[2.0; 5], &[2.0; 5]), 0.0);
        let f = [1.0, 3.0, -2.0, 0.5];
        let (_, var) = crate::diagnostics::mean_variance(&f);
        assert!((randomized_covariance(&f, &f) - var).abs() < 1e-12);
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(GroupKind::Exchange, 8).unwrap(), 256);
        assert_eq!(orbit_size(GroupKind::Mirror, 2).unwrap(), 16);
        assert!(orbit_size(GroupKind::Rotation, 2).is_err());
        assert_eq!(orbit_size(GroupKind::Mirror, 100).unwrap(), u128::MAX);
    }

    #[test]
    fn invalid_alpha() {
        let dist = reference(vec![1.0], 0.0, Mode::Exact);
        assert_eq!(dist.decide(0.0), Err(EngineError::InvalidAlpha(0.0)));
        assert!(dist.decide(1.0).is_err());
    }
}
