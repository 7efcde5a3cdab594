//! Data generators for the simulation studies.

mod bivariate;
mod survival;

pub use bivariate::{gen_bivariate, BivariateKind, BivariateSpec};
pub use survival::{
    censoring_rates, gen_censored_paired, gen_censored_paired_raw, mixture_balance, mixture_rate_solver, mixture_survival,
    Copula, Marginals, SurvivalSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("correlation {0} is outside the supported range")]
    InvalidCorrelation(f64),
    #[error("copula parameter {0} is outside the supported range")]
    InvalidCopula(f64),
    #[error("invalid survival design: {0}")]
    InvalidDesign(&'static str),
    #[error("no root of the balance equation in (0, 10)")]
    NoRoot,
}
