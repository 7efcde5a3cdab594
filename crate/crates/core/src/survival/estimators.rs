//! Kaplan-Meier, reverse Kaplan-Meier and Nelson-Aalen estimators.
//!
//! At tied times events precede censorings: an event at `u` is at risk at
//! `u`, and a censoring at `u` is at risk for the censoring estimator only
//! after the events at `u` are removed.

use alloc::vec::Vec;

use crate::step::StepFunction;

/// Distinct observed times with their event, censoring and at-risk counts.
struct RiskTable {
    times: Vec<f64>,
    events: Vec<usize>,
    censored: Vec<usize>,
    at_risk: Vec<usize>,
}

fn risk_table(times: &[f64], deltas: &[bool]) -> RiskTable {
    assert_eq!(times.len(), deltas.len(), "times and indicators differ in length");
    let mut order: Vec<(f64, bool)> = times.iter().copied().zip(deltas.iter().copied()).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut table = RiskTable {
        times: Vec::new(),
        events: Vec::new(),
        censored: Vec::new(),
        at_risk: Vec::new(),
    };
    let mut remaining = order.len();
    let mut i = 0;
    while i < order.len() {
        let t = order[i].0;
        let (mut d, mut c) = (0, 0);
        while i < order.len() && order[i].0 == t {
            if order[i].1 {
                d += 1;
            } else {
                c += 1;
            }
            i += 1;
        }
        table.times.push(t);
        table.events.push(d);
        table.censored.push(c);
        table.at_risk.push(remaining);
        remaining -= d + c;
    }
    table
}

fn product_limit(table: &RiskTable, events: impl Fn(usize) -> usize, at_risk: impl Fn(usize) -> usize) -> StepFunction {
    let mut jump_times = Vec::new();
    let mut values = Vec::new();
    let mut s = 1.0;
    for k in 0..table.times.len() {
        let d = events(k);
        if d > 0 {
            s *= 1.0 - d as f64 / at_risk(k) as f64;
            jump_times.push(table.times[k]);
            values.push(s);
        }
    }
    StepFunction::from_sorted_parts(1.0, jump_times, values)
}

/// Product-limit estimator `Ŝ(t) = Π_{u ≤ t} (1 - d(u)/Y(u))`.
pub fn kaplan_meier(times: &[f64], deltas: &[bool]) -> StepFunction {
    let table = risk_table(times, deltas);
    product_limit(&table, |k| table.events[k], |k| table.at_risk[k])
}

/// Reverse Kaplan-Meier estimator of the censoring survival function.
pub fn censoring_km(times: &[f64], deltas: &[bool]) -> StepFunction {
    let table = risk_table(times, deltas);
    product_limit(&table, |k| table.censored[k], |k| table.at_risk[k] - table.events[k])
}

/// `Λ̂(t) = Σ_{u ≤ t} d(u)/Y(u)`.
pub fn nelson_aalen(times: &[f64], deltas: &[bool]) -> StepFunction {
    let table = risk_table(times, deltas);
    let mut jump_times = Vec::new();
    let mut values = Vec::new();
    let mut lambda = 0.0;
    for k in 0..table.times.len() {
        if table.events[k] > 0 {
            lambda += table.events[k] as f64 / table.at_risk[k] as f64;
            jump_times.push(table.times[k]);
            values.push(lambda);
        }
    }
    StepFunction::from_sorted_parts(0.0, jump_times, values)
}

/// Estimators of one margin of a censored sample.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalFit {
    pub s_hat: StepFunction,
    pub h_hat: StepFunction,
    pub lambda_hat: StepFunction,
    /// `σ̂²(t) = Σ_{events u ≤ t} ΔΛ̂(u) / (Ĥ(u-)Ŝ(u))`.
    pub sigma2: StepFunction,
    /// `#{X_i > t}`; the number at risk `Y(t)` is its left limit.
    pub at_risk: StepFunction,
    /// Smallest positive `Ĥ(X_i-)Ŝ(X_i)` over the sample; substituted for
    /// vanishing denominators. `0` when no positive value exists.
    pub floor: f64,
    /// The floor replaced a zero denominator at an event time before `tau`.
    pub floor_used: bool,
    pub events: usize,
    pub n: usize,
}

impl MarginalFit {
    pub fn fit(times: &[f64], deltas: &[bool], tau: f64) -> Self {
        let table = risk_table(times, deltas);
        let n = times.len();
        let s_hat = product_limit(&table, |k| table.events[k], |k| table.at_risk[k]);
        let h_hat = product_limit(&table, |k| table.censored[k], |k| table.at_risk[k] - table.events[k]);
        let lambda_hat = nelson_aalen(times, deltas);

        let floor = table
            .times
            .iter()
            .map(|&x| h_hat.left_limit(x) * s_hat.at(x))
            .filter(|&v| v > 0.0)
            .fold(f64::INFINITY, f64::min);
        let floor = if floor.is_finite() { floor } else { 0.0 };

        let mut floor_used = false;
        let mut sigma_times = Vec::new();
        let mut sigma_values = Vec::new();
        let mut sigma = 0.0;
        for (&u, increment) in lambda_hat.jump_times().iter().zip(lambda_hat.jumps().map(|(_, d)| d)) {
            let mut denominator = h_hat.left_limit(u) * s_hat.at(u);
            if denominator <= 0.0 {
                denominator = floor;
                floor_used |= u < tau;
            }
            if denominator > 0.0 {
                sigma += increment / denominator;
            }
            sigma_times.push(u);
            sigma_values.push(sigma);
        }
        let sigma2 = StepFunction::from_sorted_parts(0.0, sigma_times, sigma_values);

        let mut remaining = n;
        let mut risk_times = Vec::with_capacity(table.times.len());
        let mut risk_values = Vec::with_capacity(table.times.len());
        for k in 0..table.times.len() {
            remaining -= table.events[k] + table.censored[k];
            risk_times.push(table.times[k]);
            risk_values.push(remaining as f64);
        }
        let at_risk = StepFunction::from_sorted_parts(n as f64, risk_times, risk_values);

        let events = table.events.iter().sum();
        Self {
            s_hat,
            h_hat,
            lambda_hat,
            sigma2,
            at_risk,
            floor,
            floor_used,
            events,
            n,
        }
    }

    /// `Y(t) = #{X_i ≥ t}`.
    pub fn number_at_risk(&self, t: f64) -> usize {
        self.at_risk.left_limit(t) as usize
    }

    /// `Ĥ(x-)Ŝ(x)` with the floor substituted for a zero value.
    pub fn guarded_denominator(&self, x: f64) -> f64 {
        let v = self.h_hat.left_limit(x) * self.s_hat.at(x);
        if v > 0.0 {
            v
        } else {
            self.floor
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn km_without_censoring_is_one_minus_ecdf() {
        let s = kaplan_meier(&[1.0, 2.0, 3.0], &[true; 3]);
        assert!(close(s.at(1.0), 2.0 / 3.0));
        assert!(close(s.at(2.5), 1.0 / 3.0));
        assert_eq!(s.at(3.0), 0.0);
        assert_eq!(s.at(0.5), 1.0);
    }

    #[test]
    fn km_with_censoring() {
        let s = kaplan_meier(&[1.0, 2.0, 3.0], &[true, false, true]);
        assert!(close(s.at(1.0), 2.0 / 3.0));
        assert!(close(s.at(2.0), 2.0 / 3.0));
        assert_eq!(s.at(3.0), 0.0);
        assert_eq!(s.jump_times(), &[1.0, 3.0]);
    }

    #[test]
    fn km_with_ties() {
        let s = kaplan_meier(&[1.0, 1.0, 2.0], &[true; 3]);
        assert!(close(s.at(1.0), 1.0 / 3.0));
    }

    #[test]
    fn nelson_aalen_examples() {
        let l = nelson_aalen(&[1.0, 2.0, 3.0], &[true; 3]);
        let jumps: Vec<f64> = l.jumps().map(|(_, d)| d).collect();
        assert!(close(jumps[0], 1.0 / 3.0) && close(jumps[1], 0.5) && close(jumps[2], 1.0));
        let none = nelson_aalen(&[1.0, 2.0], &[false, false]);
        assert_eq!(none.at(5.0), 0.0);
        assert!(none.jump_times().is_empty());
    }

    #[test]
    fn censoring_km_examples() {
        let h = censoring_km(&[1.0, 2.0, 3.0], &[true; 3]);
        assert!(h.jump_times().is_empty());
        assert_eq!(h.at(10.0), 1.0);

        let h = censoring_km(&[1.0, 2.0], &[false, false]);
        assert_eq!(h.at(1.0), 0.5);
        assert_eq!(h.at(2.0), 0.0);

        let h = censoring_km(&[1.0, 1.0], &[true, false]);
        assert_eq!(h.at(1.0), 0.0);
    }

    #[test]
    fn marginal_fit_risk_set_and_variance() {
        let f = MarginalFit::fit(&[1.0, 3.0], &[true, true], 5.0);
        assert_eq!(f.number_at_risk(1.0), 2);
        assert_eq!(f.number_at_risk(1.5), 1);
        assert_eq!(f.number_at_risk(3.5), 0);
        // σ²: ½ / ½ at 1, then the terminal jump uses the floor ½
        assert_eq!(f.sigma2.at(0.5), 0.0);
        assert!(close(f.sigma2.at(1.0), 1.0));
        assert!(close(f.sigma2.at(3.0), 3.0));
        assert_eq!(f.floor, 0.5);
        assert!(f.floor_used);
        assert_eq!(f.events, 2);
    }
}
