//! Studentized randomization tests built from per-observation group actions.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! core: step functions and Stieltjes sums, the rotation / mirror / exchange
//! groups, the Fisher-z correlation statistic, Kaplan-Meier based estimation
//! of the Mann-Whitney effect for right-censored paired data, the generic
//! randomization engine and the simulation data generators.
//!
//! File formats, the experiment harness and the command line live in the
//! `randtest` crate.

#![no_std]

extern crate alloc;

pub mod diagnostics;
pub mod engine;
pub mod groups;
pub mod normal;
pub mod pearson;
pub mod rng;
pub mod simgen;
pub mod step;
pub mod survival;

pub use engine::{
    Evaluation, Mode, ReferenceDistribution, Sidedness, StatisticSpec, Studentized, TestResult,
};
pub use groups::{GroupAction, GroupElement, GroupKind};
pub use pearson::{CorrelationFit, FisherZ, PairedObservation};
pub use rng::RandomSource;
pub use step::{Interval, StepFunction};
pub use survival::{CensoredPairedObservation, MannWhitney, MarginalFit, MwFit};
