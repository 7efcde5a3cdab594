//! Right-continuous step functions and Lebesgue-Stieltjes sums against them.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum StepError {
    #[error("time {time} is outside the domain [0, {horizon}]")]
    OutOfDomain { time: f64, horizon: f64 },
    #[error("jump times must be finite and strictly increasing")]
    UnsortedJumps,
    #[error("{times} jump times but {values} values")]
    LengthMismatch { times: usize, values: usize },
}

/// A right-continuous, piecewise-constant function on `[0, horizon]`.
///
/// `values[k]` is the value on `[jump_times[k], jump_times[k + 1])`; before
/// the first jump the function equals `initial_value`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    jump_times: Vec<f64>,
    values: Vec<f64>,
    initial_value: f64,
    horizon: f64,
}

impl StepFunction {
    pub fn new(initial_value: f64, jump_times: Vec<f64>, values: Vec<f64>) -> Result<Self, StepError> {
        if jump_times.len() != values.len() {
            return Err(StepError::LengthMismatch {
                times: jump_times.len(),
                values: values.len(),
            });
        }
        if jump_times.iter().any(|t| !t.is_finite())
            || jump_times.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(StepError::UnsortedJumps);
        }
        Ok(Self {
            jump_times,
            values,
            initial_value,
            horizon: f64::INFINITY,
        })
    }

    /// Constant function.
    pub fn constant(value: f64) -> Self {
        Self {
            jump_times: Vec::new(),
            values: Vec::new(),
            initial_value: value,
            horizon: f64::INFINITY,
        }
    }

    /// Restricts the checked domain of [`eval`](Self::eval) to `[0, horizon]`.
    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub(crate) fn from_sorted_parts(initial_value: f64, jump_times: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(jump_times.len(), values.len());
        debug_assert!(jump_times.windows(2).all(|w| w[0] < w[1]));
        Self {
            jump_times,
            values,
            initial_value,
            horizon: f64::INFINITY,
        }
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn initial_value(&self) -> f64 {
        self.initial_value
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Value after the last jump.
    pub fn terminal_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(self.initial_value)
    }

    /// Domain-checked right-continuous evaluation.
    pub fn eval(&self, t: f64) -> Result<f64, StepError> {
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(StepError::OutOfDomain {
                time: t,
                horizon: self.horizon,
            });
        }
        Ok(self.at(t))
    }

    /// Right-continuous evaluation without the domain check.
    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        let k = self.jump_times.partition_point(|&u| u <= t);
        if k == 0 {
            self.initial_value
        } else {
            self.values[k - 1]
        }
    }

    /// `f(t-)`: the value at the largest jump strictly before `t`.
    #[inline]
    pub fn left_limit(&self, t: f64) -> f64 {
        let k = self.jump_times.partition_point(|&u| u < t);
        if k == 0 {
            self.initial_value
        } else {
            self.values[k - 1]
        }
    }

    /// `f(t) - f(t-)`.
    pub fn jump_at(&self, t: f64) -> f64 {
        self.at(t) - self.left_limit(t)
    }

    /// `(f(t) + f(t-)) / 2`.
    pub fn normalized_at(&self, t: f64) -> f64 {
        0.5 * (self.at(t) + self.left_limit(t))
    }

    /// The normalized version `t -> (f(t) + f(t-)) / 2` as an integrand.
    pub fn normalized(&self) -> impl Fn(f64) -> f64 + '_ {
        move |t| self.normalized_at(t)
    }

    /// Jump locations with their signed sizes.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mut previous = self.initial_value;
        self.jump_times
            .iter()
            .zip(self.values.iter())
            .map(move |(&t, &v)| {
                let size = v - previous;
                previous = v;
                (t, size)
            })
    }

    /// Index range of the jumps that fall inside `interval`.
    fn jump_range(&self, interval: &Interval) -> core::ops::Range<usize> {
        let lo = if interval.lower_closed {
            self.jump_times.partition_point(|&u| u < interval.lower)
        } else {
            self.jump_times.partition_point(|&u| u <= interval.lower)
        };
        let hi = if interval.upper_closed {
            self.jump_times.partition_point(|&u| u <= interval.upper)
        } else {
            self.jump_times.partition_point(|&u| u < interval.upper)
        };
        lo..hi.max(lo)
    }
}

/// An interval of the time axis with explicit boundary inclusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    /// `[lower, upper]`
    pub fn closed(lower: f64, upper: f64) -> Self {
        Self { lower, upper, lower_closed: true, upper_closed: true }
    }

    /// `[lower, upper)`
    pub fn closed_open(lower: f64, upper: f64) -> Self {
        Self { lower, upper, lower_closed: true, upper_closed: false }
    }

    /// `(lower, upper)`
    pub fn open(lower: f64, upper: f64) -> Self {
        Self { lower, upper, lower_closed: false, upper_closed: false }
    }

    /// `(lower, upper]`
    pub fn open_closed(lower: f64, upper: f64) -> Self {
        Self { lower, upper, lower_closed: false, upper_closed: true }
    }

    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lower_closed { t >= self.lower } else { t > self.lower };
        let below = if self.upper_closed { t <= self.upper } else { t < self.upper };
        above && below
    }
}

/// `∫_interval g dF = Σ g(u) ΔF(u)` over the jumps `u` of `dF` inside `interval`.
pub fn stieltjes_integral<G>(g: G, df: &StepFunction, interval: Interval) -> f64
where
    G: Fn(f64) -> f64,
{
    let range = df.jump_range(&interval);
    let mut previous = if range.start == 0 {
        df.initial_value
    } else {
        df.values[range.start - 1]
    };
    let mut total = 0.0;
    for k in range {
        let value = df.values[k];
        total += g(df.jump_times[k]) * (value - previous);
        previous = value;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn half_drop() -> StepFunction {
        StepFunction::new(1.0, vec![1.0], vec![0.5]).unwrap()
    }

    #[test]
    fn right_continuous_evaluation() {
        let f = half_drop();
        assert_eq!(f.eval(0.99).unwrap(), 1.0);
        assert_eq!(f.eval(1.0).unwrap(), 0.5);
        assert_eq!(f.left_limit(1.0), 1.0);
        assert_eq!(f.jump_at(1.0), -0.5);
    }

    #[test]
    fn domain_errors() {
        let f = half_drop().with_horizon(2.0);
        assert!(matches!(f.eval(-0.1), Err(StepError::OutOfDomain { .. })));
        assert!(matches!(f.eval(2.5), Err(StepError::OutOfDomain { .. })));
        assert!(f.eval(f64::NAN).is_err());
        assert_eq!(f.eval(2.0).unwrap(), 0.5);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            StepFunction::new(1.0, vec![2.0, 1.0], vec![0.5, 0.2]),
            Err(StepError::UnsortedJumps)
        );
        assert_eq!(
            StepFunction::new(1.0, vec![1.0, 1.0], vec![0.5, 0.2]),
            Err(StepError::UnsortedJumps)
        );
        assert!(matches!(
            StepFunction::new(1.0, vec![1.0], vec![]),
            Err(StepError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn normalized_values() {
        let f = StepFunction::new(1.0, vec![1.0], vec![0.0]).unwrap();
        assert_eq!(f.normalized_at(1.0), 0.5);
        assert_eq!(f.normalized()(0.5), 1.0);
        let g = StepFunction::new(1.0, vec![1.0, 2.0], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((g.normalized_at(2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn integral_examples() {
        let f = StepFunction::new(1.0, vec![0.5, 1.5, 3.0], vec![0.7, 0.2, 0.0]).unwrap();
        let mass = stieltjes_integral(|_| 1.0, &f, Interval::closed(0.0, 3.0));
        assert!((mass + 1.0).abs() < 1e-15);

        let single = StepFunction::new(1.0, vec![2.0], vec![0.5]).unwrap();
        assert_eq!(stieltjes_integral(|t| t, &single, Interval::closed(0.0, 5.0)), -1.0);

        // KM of {1, 2} without censoring in both margins: -∫ S^± dS = 3/4·1/2 + 1/4·1/2.
        let s = StepFunction::new(1.0, vec![1.0, 2.0], vec![0.5, 0.0]).unwrap();
        let p = -stieltjes_integral(s.normalized(), &s, Interval::closed(0.0, 2.0));
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn interval_boundaries() {
        let f = StepFunction::new(1.0, vec![1.0, 2.0, 3.0], vec![0.75, 0.5, 0.25]).unwrap();
        let one = |_| 1.0;
        assert_eq!(stieltjes_integral(one, &f, Interval::closed(1.0, 3.0)), -0.75);
        assert_eq!(stieltjes_integral(one, &f, Interval::open(1.0, 3.0)), -0.25);
        assert_eq!(stieltjes_integral(one, &f, Interval::closed_open(1.0, 3.0)), -0.5);
        assert_eq!(stieltjes_integral(one, &f, Interval::open_closed(1.0, 3.0)), -0.5);
        assert_eq!(stieltjes_integral(one, &f, Interval::closed_open(2.0, 2.0)), 0.0);
        assert_eq!(stieltjes_integral(one, &f, Interval::open(3.0, 1.0)), 0.0);
        assert!(Interval::closed_open(0.0, 1.0).contains(0.0));
        assert!(!Interval::closed_open(0.0, 1.0).contains(1.0));
    }

    #[test]
    fn jumps_iterate_sizes() {
        let f = StepFunction::new(1.0, vec![1.0, 2.0], vec![0.6, 0.1]).unwrap();
        let jumps: Vec<_> = f.jumps().collect();
        assert_eq!(jumps.len(), 2);
        assert!((jumps[0].1 + 0.4).abs() < 1e-15);
        assert!((jumps[1].1 + 0.5).abs() < 1e-15);
        assert_eq!(f.terminal_value(), 0.1);
    }
}
