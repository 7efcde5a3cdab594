//! Bivariate distributions for the correlation scenarios.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, Gamma, StandardNormal};

use super::SimError;
use crate::pearson::PairedObservation;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BivariateKind {
    /// Standard bivariate normal with correlation `ρ`.
    Normal(f64),
    /// Elliptical `t₅`: a `ρ`-correlated normal pair over a shared
    /// `√(χ²₅/5)`.
    T5(f64),
    /// Two independent `χ²₅`.
    Chi5Independent,
    /// `(X + Z, Y + Z)` with `X, Y ~ Γ(2.5(1-ρ), 2)` and `Z ~ Γ(2.5ρ, 2)`;
    /// margins are `χ²₅` with correlation `ρ ∈ [0, 1)`.
    Chi5Correlated(f64),
    /// `T5(ρ)` or `Chi5Correlated(ρ) - (5, 5)` with probability ½ each.
    /// Both components have mean zero, so the mixture has correlation `ρ`.
    Mixture(f64),
}

impl BivariateKind {
    pub fn rho(&self) -> f64 {
        match *self {
            BivariateKind::Normal(r)
            | BivariateKind::T5(r)
            | BivariateKind::Chi5Correlated(r)
            | BivariateKind::Mixture(r) => r,
            BivariateKind::Chi5Independent => 0.0,
        }
    }

    /// Same family with a different correlation.
    pub fn with_rho(&self, rho: f64) -> Self {
        match *self {
            BivariateKind::Normal(_) => BivariateKind::Normal(rho),
            BivariateKind::T5(_) => BivariateKind::T5(rho),
            BivariateKind::Chi5Independent | BivariateKind::Chi5Correlated(_) => {
                if rho == 0.0 {
                    BivariateKind::Chi5Independent
                } else {
                    BivariateKind::Chi5Correlated(rho)
                }
            }
            BivariateKind::Mixture(_) => BivariateKind::Mixture(rho),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateSpec {
    kind: BivariateKind,
    n: usize,
}

impl BivariateSpec {
    pub fn new(kind: BivariateKind, n: usize) -> Result<Self, SimError> {
        let rho = kind.rho();
        let ok = match kind {
            BivariateKind::Chi5Correlated(_) | BivariateKind::Mixture(_) => (0.0..1.0).contains(&rho),
            _ => rho > -1.0 && rho < 1.0,
        };
        if ok {
            Ok(Self { kind, n })
        } else {
            Err(SimError::InvalidCorrelation(rho))
        }
    }

    pub fn kind(&self) -> BivariateKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

fn normal_pair<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> (f64, f64) {
    let z1: f64 = StandardNormal.sample(rng);
    let z2: f64 = StandardNormal.sample(rng);
    (z1, rho * z1 + libm::sqrt(1.0 - rho * rho) * z2)
}

fn t5_pair<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> (f64, f64) {
    let (x, y) = normal_pair(rho, rng);
    let w: f64 = ChiSquared::new(5.0).expect("valid degrees of freedom").sample(rng);
    let scale = libm::sqrt(5.0 / w);
    (x * scale, y * scale)
}

fn chi5_pair<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> (f64, f64) {
    if rho == 0.0 {
        let chi = ChiSquared::new(5.0).expect("valid degrees of freedom");
        return (chi.sample(rng), chi.sample(rng));
    }
    let own = Gamma::new(2.5 * (1.0 - rho), 2.0).expect("positive shape");
    let shared = Gamma::new(2.5 * rho, 2.0).expect("positive shape");
    let z: f64 = shared.sample(rng);
    (own.sample(rng) + z, own.sample(rng) + z)
}

fn draw<R: Rng + ?Sized>(kind: BivariateKind, rng: &mut R) -> (f64, f64) {
    match kind {
        BivariateKind::Normal(rho) => normal_pair(rho, rng),
        BivariateKind::T5(rho) => t5_pair(rho, rng),
        BivariateKind::Chi5Independent => chi5_pair(0.0, rng),
        BivariateKind::Chi5Correlated(rho) => chi5_pair(rho, rng),
        BivariateKind::Mixture(rho) => {
            if rng.random::<bool>() {
                t5_pair(rho, rng)
            } else {
                let (x, y) = chi5_pair(rho, rng);
                (x - 5.0, y - 5.0)
            }
        }
    }
}

pub fn gen_bivariate<R: Rng + ?Sized>(spec: &BivariateSpec, rng: &mut R) -> Vec<PairedObservation> {
    (0..spec.n)
        .map(|_| {
            let (x, y) = draw(spec.kind, rng);
            PairedObservation::new(x, y)
        })
        .collect()
}
