//! Mann-Whitney effect `p = -∫ S₁^± dS₂` of two censored margins, its
//! influence function and the studentized statistic.
//!
//! The influence values are evaluated on the merged grid of event times of
//! both margins with prefix sums, so one fit costs `O(n log n)`.

use alloc::vec::Vec;

use super::estimators::MarginalFit;
use super::{truncate, CensoredPairedObservation, SurvivalError};
use crate::engine::{Evaluation, Studentized};

#[derive(Debug, Clone, PartialEq)]
pub struct MwFit {
    pub p_hat: f64,
    pub sigma_phi_hat: f64,
    pub if_values: Vec<f64>,
    pub tau: f64,
    /// A margin has no events, or the standard error vanishes.
    pub degenerate: bool,
    /// A zero `Ĥ(X-)Ŝ(X)` denominator before `tau` was replaced by the floor.
    pub floor_used: bool,
    /// Event counts of the two margins.
    pub events: [usize; 2],
}

impl MwFit {
    pub fn std_err(&self) -> f64 {
        self.sigma_phi_hat / libm::sqrt(self.if_values.len() as f64)
    }

    /// First margin (1-based) without events, if any.
    pub fn empty_margin(&self) -> Option<usize> {
        self.events.iter().position(|&e| e == 0).map(|j| j + 1)
    }
}

/// Survival curves of both margins on the merged grid of their jump times.
struct Grid {
    times: Vec<f64>,
    /// `Ŝⱼ(g)` for each grid point.
    s: [Vec<f64>; 2],
    /// `Ŝⱼ(g-)`.
    s_minus: [Vec<f64>; 2],
}

impl Grid {
    fn new(fits: &[MarginalFit; 2]) -> Self {
        let a = fits[0].s_hat.jump_times();
        let b = fits[1].s_hat.jump_times();
        let mut times = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    y
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            times.push(next);
        }

        let curve = |fit: &MarginalFit| {
            let jumps = fit.s_hat.jump_times();
            let values = fit.s_hat.values();
            let mut s = Vec::with_capacity(times.len());
            let mut s_minus = Vec::with_capacity(times.len());
            let mut k = 0;
            let mut current = 1.0;
            for &g in &times {
                s_minus.push(current);
                if k < jumps.len() && jumps[k] == g {
                    current = values[k];
                    k += 1;
                }
                s.push(current);
            }
            (s, s_minus)
        };
        let (s1, s1m) = curve(&fits[0]);
        let (s2, s2m) = curve(&fits[1]);
        Self {
            times,
            s: [s1, s2],
            s_minus: [s1m, s2m],
        }
    }

    /// `-Σ_{g ≤ τ} Ŝ₁^±(g) ΔŜ₂(g)`.
    fn effect(&self, tau: f64) -> f64 {
        let mut p = 0.0;
        for m in 0..self.times.len() {
            if self.times[m] > tau {
                break;
            }
            let normalized = 0.5 * (self.s[0][m] + self.s_minus[0][m]);
            p += normalized * (self.s_minus[1][m] - self.s[1][m]);
        }
        p
    }
}

fn margin_data(sample: &[CensoredPairedObservation]) -> [(Vec<f64>, Vec<bool>); 2] {
    [
        (sample.iter().map(|o| o.time1).collect(), sample.iter().map(|o| o.event1).collect()),
        (sample.iter().map(|o| o.time2).collect(), sample.iter().map(|o| o.event2).collect()),
    ]
}

/// Full fit: effect, influence values and their standard deviation.
/// Observations are truncated at `tau` first.
pub fn mw_fit(sample: &[CensoredPairedObservation], tau: f64) -> Result<MwFit, SurvivalError> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(SurvivalError::InvalidTau);
    }
    if sample.is_empty() {
        return Err(SurvivalError::Empty);
    }
    let truncated: Vec<CensoredPairedObservation> = sample.iter().map(|&o| truncate(o, tau)).collect();
    let [(t1, d1), (t2, d2)] = margin_data(&truncated);
    let fits = [MarginalFit::fit(&t1, &d1, tau), MarginalFit::fit(&t2, &d2, tau)];
    let events = [fits[0].events, fits[1].events];
    let grid = Grid::new(&fits);
    let p_hat = grid.effect(tau);

    let n = truncated.len();
    let mut if_values = alloc::vec![0.0; n];
    let mut floor_used = fits[0].floor_used || fits[1].floor_used;
    let mut degenerate = events[0] == 0 || events[1] == 0;

    if !degenerate {
        let m = grid.times.len();
        let mut pk = alloc::vec![0.0; m + 1];
        let mut pc = alloc::vec![0.0; m + 1];
        let mut pe = alloc::vec![0.0; m + 1];
        for j in 0..2 {
            let k = 1 - j;
            let fit = &fits[j];
            // (-1)^j for the 1-based margin index
            let sign = if j == 0 { -1.0 } else { 1.0 };
            for q in 0..m {
                let g = grid.times[q];
                let (dk, sigma_dk, e) = if g < tau {
                    let ds_j = grid.s[j][q] - grid.s_minus[j][q];
                    let ds_k = grid.s[k][q] - grid.s_minus[k][q];
                    let dk = grid.s[j][q] * ds_k - grid.s[k][q] * ds_j;
                    let d_lambda = fit.lambda_hat.jump_at(g);
                    let e = if d_lambda > 0.0 {
                        grid.s[k][q] * d_lambda / fit.h_hat.left_limit(g)
                    } else {
                        0.0
                    };
                    (dk, fit.sigma2.at(g) * dk, e)
                } else {
                    (0.0, 0.0, 0.0)
                };
                pk[q + 1] = pk[q] + dk;
                pc[q + 1] = pc[q] + sigma_dk;
                pe[q + 1] = pe[q] + e;
            }
            let total = pk[m];

            for (value, obs) in if_values.iter_mut().zip(truncated.iter()) {
                let (x, delta) = if j == 0 {
                    (obs.time1, obs.event1)
                } else {
                    (obs.time2, obs.event2)
                };
                let lt = grid.times.partition_point(|&g| g < x);
                let le = grid.times.partition_point(|&g| g <= x);

                let (a, b) = if delta && x < tau {
                    let denominator = fit.guarded_denominator(x);
                    let a = if denominator > 0.0 {
                        (total - pk[le]) / denominator
                    } else {
                        degenerate = true;
                        0.0
                    };
                    floor_used |= fit.h_hat.left_limit(x) * fit.s_hat.at(x) <= 0.0;
                    let s_k_minus = if lt == 0 { 1.0 } else { grid.s[k][lt - 1] };
                    (a, s_k_minus / fit.h_hat.left_limit(x))
                } else {
                    (0.0, 0.0)
                };
                let c = pc[lt];
                let d = if x < tau { fit.sigma2.at(x) * (total - pk[lt]) } else { 0.0 };
                let e = pe[le];
                // stored with the orientation of the derivative of p̂
                *value -= 0.5 * sign * (a - b - c - d + e);
            }
        }
    }

    let variance = variance_of(&if_values);
    let sigma_phi_hat = libm::sqrt(variance);
    if !(sigma_phi_hat > 0.0 && sigma_phi_hat.is_finite()) {
        degenerate = true;
    }
    Ok(MwFit {
        p_hat,
        sigma_phi_hat,
        if_values,
        tau,
        degenerate,
        floor_used,
        events,
    })
}

fn require_events(fit: &MwFit) -> Result<(), SurvivalError> {
    match fit.empty_margin() {
        Some(margin) => Err(SurvivalError::Degenerate { margin }),
        None => Ok(()),
    }
}

/// `p̂ = -∫_{[0,τ]} Ŝ₁^± dŜ₂`.
pub fn mw_effect(sample: &[CensoredPairedObservation], tau: f64) -> Result<f64, SurvivalError> {
    let fit = mw_fit(sample, tau)?;
    require_events(&fit)?;
    Ok(fit.p_hat)
}

pub fn mw_influence(sample: &[CensoredPairedObservation], tau: f64) -> Result<Vec<f64>, SurvivalError> {
    let fit = mw_fit(sample, tau)?;
    require_events(&fit)?;
    Ok(fit.if_values)
}

/// Centered `1/n` variance.
pub fn variance_of(values: &[f64]) -> f64 {
    crate::diagnostics::mean_variance(values).1
}

/// `σ̂²_φ`, the `1/n` variance of the influence values.
pub fn mw_variance(sample: &[CensoredPairedObservation], tau: f64) -> Result<f64, SurvivalError> {
    Ok(variance_of(&mw_influence(sample, tau)?))
}

/// `√n (p̂ - p0)/σ̂_φ`, or `0` for degenerate data.
pub fn mw_statistic(sample: &[CensoredPairedObservation], tau: f64, p0: f64) -> f64 {
    match mw_fit(sample, tau) {
        Ok(fit) if !fit.degenerate => {
            libm::sqrt(fit.if_values.len() as f64) * (fit.p_hat - p0) / fit.sigma_phi_hat
        }
        _ => 0.0,
    }
}

/// The studentized Mann-Whitney effect truncated at `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    pub tau: f64,
}

impl MannWhitney {
    pub fn new(tau: f64) -> Self {
        Self { tau }
    }
}

impl Studentized<CensoredPairedObservation> for MannWhitney {
    fn evaluate(&self, data: &[CensoredPairedObservation]) -> Evaluation {
        match mw_fit(data, self.tau) {
            Ok(fit) => Evaluation {
                estimate: fit.p_hat,
                sigma: fit.sigma_phi_hat,
                n: data.len(),
                degenerate: fit.degenerate,
            },
            Err(_) => Evaluation {
                estimate: 0.5,
                sigma: 0.0,
                n: data.len(),
                degenerate: true,
            },
        }
    }

    fn statistic(&self, eval: &Evaluation, theta: f64) -> Option<f64> {
        if eval.degenerate || !(eval.sigma > 0.0) {
            None
        } else {
            Some(libm::sqrt(eval.n as f64) * (eval.estimate - theta) / eval.sigma)
        }
    }

    fn invariant_value(&self) -> f64 {
        0.5
    }

    fn interval(&self, eval: &Evaluation, critical_value: f64) -> (f64, f64) {
        if eval.degenerate || !(eval.sigma > 0.0) {
            return (0.0, 1.0);
        }
        let half = critical_value * eval.std_err();
        ((eval.estimate - half).max(0.0), (eval.estimate + half).min(1.0))
    }
}
