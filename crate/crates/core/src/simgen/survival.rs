//! Paired survival times from a copula, with uniform censoring.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::SimError;
use crate::survival::{truncate, CensoredPairedObservation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Copula {
    /// Gumbel-Hougaard with `θ ≥ 1`.
    GumbelHougaard(f64),
    /// Clayton with `θ ∈ (-1, 0)`.
    Clayton(f64),
    Independence,
}

impl Copula {
    fn validate(self) -> Result<(), SimError> {
        match self {
            Copula::GumbelHougaard(theta) if !(theta >= 1.0 && theta.is_finite()) => Err(SimError::InvalidCopula(theta)),
            Copula::Clayton(theta) if !(theta > -1.0 && theta < 0.0) => Err(SimError::InvalidCopula(theta)),
            _ => Ok(()),
        }
    }

    /// Draws `(U₁, U₂)` with uniform margins.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> (f64, f64) {
        match self {
            Copula::Independence => (open_uniform(rng), open_uniform(rng)),
            Copula::GumbelHougaard(theta) => {
                let alpha = 1.0 / theta;
                let v = positive_stable(alpha, rng);
                let e1: f64 = Exp1.sample(rng);
                let e2: f64 = Exp1.sample(rng);
                (
                    libm::exp(-libm::pow(e1 / v, alpha)),
                    libm::exp(-libm::pow(e2 / v, alpha)),
                )
            }
            Copula::Clayton(theta) => {
                let u = open_uniform(rng);
                let w = open_uniform(rng);
                let inner = (libm::pow(w, -theta / (1.0 + theta)) - 1.0) * libm::pow(u, -theta) + 1.0;
                (u, libm::pow(inner, -1.0 / theta))
            }
        }
    }
}

fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Positive stable variable with Laplace transform `exp(-s^α)`, `α ∈ (0, 1]`
/// (Kanter's representation).
fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    let u = PI * open_uniform(rng);
    let e: f64 = Exp1.sample(rng);
    let a = libm::sin(alpha * u) / libm::pow(libm::sin(u), 1.0 / alpha);
    let b = libm::pow(libm::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
    a * b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Marginals {
    /// Both times `Exp(2)`.
    EqualExp,
    /// `Exp(2)` against the equal mixture of `Exp(3)` and `Exp(λ)`.
    ExpVsMixture { lambda: f64 },
}

/// `½ (e^{-3t} + e^{-λt})`.
pub fn mixture_survival(t: f64, lambda: f64) -> f64 {
    0.5 * (libm::exp(-3.0 * t) + libm::exp(-lambda * t))
}

fn exp_quantile(u: f64, rate: f64) -> f64 {
    -libm::log1p(-u) / rate
}

fn mixture_quantile(u: f64, lambda: f64) -> f64 {
    let target = 1.0 - u;
    let (fast, slow) = if lambda > 3.0 { (lambda, 3.0) } else { (3.0, lambda) };
    let mut lo = exp_quantile(u, fast);
    let mut hi = exp_quantile(u, slow);
    let mut t = 0.5 * (lo + hi);
    for _ in 0..100 {
        let s = mixture_survival(t, lambda) - target;
        if s == 0.0 {
            break;
        }
        if s > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = -0.5 * (3.0 * libm::exp(-3.0 * t) + lambda * libm::exp(-lambda * t));
        let newton = t - s / slope;
        t = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (hi - lo) <= 1e-15 * hi {
            break;
        }
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalSpec {
    pub copula: Copula,
    pub marginals: Marginals,
    /// Upper end `b` of the uniform censoring distribution.
    pub censor_max: f64,
    pub tau: f64,
    /// `ν`: the first time is divided by `1 + ν/2`.
    pub power_shift: f64,
    pub n: usize,
}

impl SurvivalSpec {
    pub fn new(
        copula: Copula,
        marginals: Marginals,
        censor_max: f64,
        tau: f64,
        power_shift: f64,
        n: usize,
    ) -> Result<Self, SimError> {
        copula.validate()?;
        if !(censor_max > 0.0) {
            return Err(SimError::InvalidDesign("censoring bound must be positive"));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(SimError::InvalidDesign("tau must be positive and finite"));
        }
        if !(power_shift >= 0.0) {
            return Err(SimError::InvalidDesign("power shift must be nonnegative"));
        }
        if let Marginals::ExpVsMixture { lambda } = marginals {
            if !(lambda > 0.0) {
                return Err(SimError::InvalidDesign("mixture rate must be positive"));
            }
        }
        Ok(Self {
            copula,
            marginals,
            censor_max,
            tau,
            power_shift,
            n,
        })
    }

    /// Latent survival times `(T₁, T₂)` before censoring.
    pub fn latent_times<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let (u1, u2) = self.copula.sample(rng);
        let t1 = exp_quantile(u1, 2.0);
        let t2 = match self.marginals {
            Marginals::EqualExp => exp_quantile(u2, 2.0),
            Marginals::ExpVsMixture { lambda } => mixture_quantile(u2, lambda),
        };
        (t1 / (1.0 + 0.5 * self.power_shift), t2)
    }

    fn censoring<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        (self.censor_max * u).min(self.tau)
    }
}

/// Censored pairs before truncation at `tau`.
pub fn gen_censored_paired_raw<R: Rng + ?Sized>(spec: &SurvivalSpec, rng: &mut R) -> Vec<CensoredPairedObservation> {
    (0..spec.n)
        .map(|_| {
            let (t1, t2) = spec.latent_times(rng);
            let c1 = spec.censoring(rng);
            let c2 = spec.censoring(rng);
            CensoredPairedObservation::new(t1.min(c1), t1 <= c1, t2.min(c2), t2 <= c2)
        })
        .collect()
}

pub fn gen_censored_paired<R: Rng + ?Sized>(spec: &SurvivalSpec, rng: &mut R) -> Vec<CensoredPairedObservation> {
    let mut data = gen_censored_paired_raw(spec, rng);
    for obs in data.iter_mut() {
        *obs = truncate(*obs, spec.tau);
    }
    data
}

/// Fractions of censored first and second times among `n` generated pairs,
/// counted before truncation at `tau`.
pub fn censoring_rates<R: Rng + ?Sized>(spec: &SurvivalSpec, n: usize, rng: &mut R) -> [f64; 2] {
    let spec = SurvivalSpec { n, ..*spec };
    let data = gen_censored_paired_raw(&spec, rng);
    let c1 = data.iter().filter(|o| !o.event1).count();
    let c2 = data.iter().filter(|o| !o.event2).count();
    [c1 as f64 / n as f64, c2 as f64 / n as f64]
}

/// `p(λ) = ∫₀^τ S₁ f₂ + ½ S₁(τ) S₂(τ)` for `S₁ = Exp(2)` and the mixture
/// second margin, in closed form.
pub fn mixture_balance(lambda: f64, tau: f64) -> f64 {
    let fast = 3.0 * (1.0 - libm::exp(-5.0 * tau)) / 5.0;
    let slow = lambda * (1.0 - libm::exp(-(2.0 + lambda) * tau)) / (2.0 + lambda);
    0.5 * (fast + slow) + 0.5 * libm::exp(-2.0 * tau) * mixture_survival(tau, lambda)
}

/// Rate `λ` of the mixture margin for which the truncated Mann-Whitney
/// effect equals ½.
pub fn mixture_rate_solver(tau: f64) -> Result<f64, SimError> {
    if !(tau > 0.0) {
        return Err(SimError::InvalidDesign("tau must be positive"));
    }
    let f = |lambda: f64| mixture_balance(lambda, tau) - 0.5;
    let (mut lo, mut hi) = (1e-12, 10.0);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo.signum() == f_hi.signum() {
        return Err(SimError::NoRoot);
    }
    let increasing = f_hi > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_at_unit_horizon() {
        let lambda = mixture_rate_solver(1.0).unwrap();
        assert!((lambda - 1.316).abs() < 5e-4, "{lambda}");
        assert!((mixture_balance(lambda, 1.0) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn solver_without_truncation() {
        let lambda = mixture_rate_solver(200.0).unwrap();
        assert!((lambda - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn mixture_quantile_inverts_survival() {
        for k in 1..100 {
            let u = k as f64 / 100.0;
            let t = mixture_quantile(u, 1.316);
            let err = (mixture_survival(t, 1.316) - (1.0 - u)).abs();
            assert!(err < 1e-13, "u = {u}, err = {err}");
        }
    }

    #[test]
    fn invalid_designs() {
        assert!(SurvivalSpec::new(Copula::Clayton(0.5), Marginals::EqualExp, 1.0, 1.0, 0.0, 5).is_err());
        assert!(SurvivalSpec::new(Copula::GumbelHougaard(0.5), Marginals::EqualExp, 1.0, 1.0, 0.0, 5).is_err());
        assert!(SurvivalSpec::new(Copula::Independence, Marginals::EqualExp, 0.0, 1.0, 0.0, 5).is_err());
        assert!(SurvivalSpec::new(Copula::Independence, Marginals::EqualExp, 1.0, 1.0, -1.0, 5).is_err());
    }
}
