//! Pearson correlation with the Fisher-z studentized statistic.
//!
//! All empirical moments use the `1/n` convention. The variance of `ρ̂` is
//! the empirical variance of the estimated influence values
//! `Zᵢ = X̃ᵢỸᵢ - ρ̂/2 (X̃ᵢ² + Ỹᵢ²)` on standardized data.

use crate::engine::{Evaluation, Replicate, Studentized};
use crate::groups::{GroupAction, GroupElement, GroupKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedObservation {
    pub x: f64,
    pub y: f64,
}

impl PairedObservation {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl GroupAction for PairedObservation {
    const NAME: &'static str = "paired observations";

    fn supports(kind: GroupKind) -> bool {
        matches!(kind, GroupKind::Rotation | GroupKind::Mirror)
    }

    #[inline]
    fn act_unchecked(&self, element: &GroupElement) -> Self {
        match *element {
            GroupElement::Rotation { theta } => {
                let (s, c) = libm::sincos(theta);
                Self {
                    x: self.x * c - self.y * s,
                    y: self.x * s + self.y * c,
                }
            }
            GroupElement::Mirror { eps_x, eps_y } => Self {
                x: if eps_x < 0 { -self.x } else { self.x },
                y: if eps_y < 0 { -self.y } else { self.y },
            },
            GroupElement::Exchange { .. } => *self,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PearsonError {
    #[error("degenerate sample: a marginal empirical variance is zero")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationFit {
    pub rho_hat: f64,
    pub sigma_rho_hat: f64,
    pub n: usize,
    /// A marginal variance is zero; `rho_hat` and `sigma_rho_hat` are `0`.
    pub degenerate: bool,
}

impl CorrelationFit {
    /// Whether the studentized statistic is undefined for this fit.
    pub fn is_singular(&self) -> bool {
        self.degenerate || !(self.sigma_rho_hat > 0.0) || self.rho_hat.abs() >= 1.0
    }
}

pub fn fit(sample: &[PairedObservation]) -> CorrelationFit {
    let n = sample.len();
    let degenerate = CorrelationFit {
        rho_hat: 0.0,
        sigma_rho_hat: 0.0,
        n,
        degenerate: true,
    };
    if n < 2 {
        return degenerate;
    }
    let nf = n as f64;
    let (mut mx, mut my) = (0.0, 0.0);
    for p in sample {
        mx += p.x;
        my += p.y;
    }
    mx /= nf;
    my /= nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in sample {
        let dx = p.x - mx;
        let dy = p.y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if !(sxx > 0.0 && syy > 0.0) {
        return degenerate;
    }
    let rho = (sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0);

    let inv_sx = 1.0 / libm::sqrt(sxx / nf);
    let inv_sy = 1.0 / libm::sqrt(syy / nf);
    let half_rho = 0.5 * rho;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for p in sample {
        let u = (p.x - mx) * inv_sx;
        let v = (p.y - my) * inv_sy;
        let z = u * v - half_rho * (u * u + v * v);
        sum += z;
        sum_sq += z * z;
    }
    let mean = sum / nf;
    let variance = (sum_sq / nf - mean * mean).max(0.0);
    CorrelationFit {
        rho_hat: rho,
        sigma_rho_hat: libm::sqrt(variance),
        n,
        degenerate: false,
    }
}

pub fn pearson_rho(sample: &[PairedObservation]) -> Result<f64, PearsonError> {
    let f = fit(sample);
    if f.degenerate {
        Err(PearsonError::Degenerate)
    } else {
        Ok(f.rho_hat)
    }
}

/// `σ̂²_ρ`, the `1/n` variance of the estimated influence values.
pub fn rho_variance(sample: &[PairedObservation]) -> Result<f64, PearsonError> {
    let f = fit(sample);
    if f.degenerate {
        Err(PearsonError::Degenerate)
    } else {
        Ok(f.sigma_rho_hat * f.sigma_rho_hat)
    }
}

fn studentize(rho_hat: f64, sigma: f64, n: usize, rho0: f64) -> f64 {
    libm::sqrt(n as f64) * (1.0 - rho_hat * rho_hat) / sigma * (libm::atanh(rho_hat) - libm::atanh(rho0))
}

/// `√n (1 - ρ̂²)/σ̂ (atanh ρ̂ - atanh ρ₀)`, or `0` when the fit is singular.
pub fn correlation_statistic(sample: &[PairedObservation], rho0: f64) -> f64 {
    let f = fit(sample);
    if f.is_singular() {
        0.0
    } else {
        studentize(f.rho_hat, f.sigma_rho_hat, f.n, rho0)
    }
}

/// `{ρ : |T(ρ)| ≤ c}`; `(-1, 1)` when the fit is singular.
pub fn fisher_ci(sample: &[PairedObservation], critical_value: f64) -> (f64, f64) {
    let f = fit(sample);
    ci_from_fit(f.rho_hat, f.sigma_rho_hat, f.n, f.is_singular(), critical_value)
}

fn ci_from_fit(rho: f64, sigma: f64, n: usize, singular: bool, c: f64) -> (f64, f64) {
    if singular {
        return (-1.0, 1.0);
    }
    let z = libm::atanh(rho);
    let half = c * sigma / (libm::sqrt(n as f64) * (1.0 - rho * rho));
    (libm::tanh(z - half), libm::tanh(z + half))
}

/// The Fisher-z studentized correlation statistic.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FisherZ;

impl FisherZ {
    fn singular(eval: &Evaluation) -> bool {
        eval.degenerate || !(eval.sigma > 0.0) || eval.estimate.abs() >= 1.0
    }
}

impl Studentized<PairedObservation> for FisherZ {
    fn evaluate(&self, data: &[PairedObservation]) -> Evaluation {
        let f = fit(data);
        Evaluation {
            estimate: f.rho_hat,
            sigma: f.sigma_rho_hat,
            n: f.n,
            degenerate: f.degenerate,
        }
    }

    fn statistic(&self, eval: &Evaluation, theta: f64) -> Option<f64> {
        if Self::singular(eval) || !(theta.abs() < 1.0) {
            None
        } else {
            Some(studentize(eval.estimate, eval.sigma, eval.n, theta))
        }
    }

    /// A zero numerator of `ρ̃` sends the statistic to `+∞`.
    fn randomized(&self, eval: &Evaluation, center: f64) -> Replicate {
        if !eval.degenerate && eval.estimate == 0.0 {
            return Replicate {
                value: f64::INFINITY,
                degenerate: true,
            };
        }
        match self.statistic(eval, center) {
            Some(value) => Replicate { value, degenerate: false },
            None => Replicate { value: 0.0, degenerate: true },
        }
    }

    fn invariant_value(&self) -> f64 {
        0.0
    }

    fn interval(&self, eval: &Evaluation, critical_value: f64) -> (f64, f64) {
        ci_from_fit(eval.estimate, eval.sigma, eval.n, Self::singular(eval), critical_value)
    }
}
