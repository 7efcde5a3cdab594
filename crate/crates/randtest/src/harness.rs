//! Monte-Carlo rejection-rate experiments.
//!
//! A grid crosses scenarios, sample sizes, effect sizes, levels and methods.
//! Each `(scenario, effect, n)` cell draws `reps` datasets from its own
//! random stream; every method and level sees the same datasets, and each
//! method builds one reference distribution per dataset that serves all
//! levels. Rejection rates average the randomized test function `φ`, so tie
//! weights count fractionally.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use randtest_core::engine::{
    bootstrap_distribution, exact_distribution, normal_critical_value, orbit_size, pairing_permutation_distribution,
    randomization_distribution, EngineError, DEFAULT_EXACT_BUDGET,
};
use randtest_core::simgen::{
    censoring_rates, gen_bivariate, gen_censored_paired, BivariateKind, BivariateSpec, Copula, Marginals, SimError,
    SurvivalSpec,
};
use randtest_core::{
    FisherZ, GroupAction, GroupKind, MannWhitney, RandomSource, ReferenceDistribution, StatisticSpec, Studentized,
};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("grid has no {0}")]
    EmptyList(&'static str),
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("method `{method}` cannot be used with scenario `{scenario}`")]
    Incompatible { scenario: String, method: Method },
    #[error("scenario `{scenario}` with effect {effect}: {source}")]
    Design {
        scenario: String,
        effect: f64,
        #[source]
        source: SimError,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Mirror,
    Rotation,
    Exchange,
    Bootstrap,
    PairingPermutation,
    Normal,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Mirror,
        Method::Rotation,
        Method::Exchange,
        Method::Bootstrap,
        Method::PairingPermutation,
        Method::Normal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mirror => "mirror",
            Method::Rotation => "rotation",
            Method::Exchange => "exchange",
            Method::Bootstrap => "bootstrap",
            Method::PairingPermutation => "pairing-permutation",
            Method::Normal => "normal",
        }
    }

    fn group(self) -> Option<GroupKind> {
        match self {
            Method::Mirror => Some(GroupKind::Mirror),
            Method::Rotation => Some(GroupKind::Rotation),
            Method::Exchange => Some(GroupKind::Exchange),
            _ => None,
        }
    }

    pub fn supports(self, scenario: &Scenario) -> bool {
        match (self, scenario) {
            (Method::Bootstrap | Method::Normal, _) => true,
            (Method::Mirror | Method::Rotation | Method::PairingPermutation, Scenario::Correlation(_)) => true,
            (Method::Exchange, Scenario::Survival(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Survival design without the sample size and power shift, which the grid
/// supplies per cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalDesign {
    pub copula: Copula,
    pub marginals: Marginals,
    pub censor_max: f64,
    pub tau: f64,
}

impl SurvivalDesign {
    pub fn spec(&self, power_shift: f64, n: usize) -> Result<SurvivalSpec, SimError> {
        SurvivalSpec::new(self.copula, self.marginals, self.censor_max, self.tau, power_shift, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// The effect is the correlation `ρ`.
    Correlation(BivariateKind),
    /// The effect is the power shift `ν`.
    Survival(SurvivalDesign),
}

impl Scenario {
    pub fn name(&self) -> String {
        match self {
            Scenario::Correlation(kind) => match kind {
                BivariateKind::Normal(_) => "normal",
                BivariateKind::T5(_) => "t5",
                BivariateKind::Chi5Independent | BivariateKind::Chi5Correlated(_) => "chi5",
                BivariateKind::Mixture(_) => "mixture",
            }
            .to_string(),
            Scenario::Survival(d) => {
                let copula = match d.copula {
                    Copula::GumbelHougaard(_) => "gumbel",
                    Copula::Clayton(_) => "clayton",
                    Copula::Independence => "independence",
                };
                let margins = match d.marginals {
                    Marginals::EqualExp => "exp",
                    Marginals::ExpVsMixture { .. } => "mixture",
                };
                format!("{copula}/{margins}/b={}", d.censor_max)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub scenarios: Vec<Scenario>,
    pub n: Vec<usize>,
    pub alpha: Vec<f64>,
    pub methods: Vec<Method>,
    /// Repetitions `M` per cell.
    pub reps: usize,
    /// Replicates `B` per randomization or bootstrap distribution.
    pub replicates: usize,
    pub seed: u64,
    /// Enumerate finite groups exactly whenever the orbit fits the budget.
    pub exact: bool,
}

impl ExperimentGrid {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.scenarios.is_empty() {
            return Err(HarnessError::EmptyList("scenarios"));
        }
        if self.n.is_empty() {
            return Err(HarnessError::EmptyList("sample sizes"));
        }
        if self.alpha.is_empty() {
            return Err(HarnessError::EmptyList("levels"));
        }
        if self.methods.is_empty() {
            return Err(HarnessError::EmptyList("methods"));
        }
        if self.reps == 0 {
            return Err(HarnessError::ZeroCount("reps"));
        }
        if self.replicates == 0 {
            return Err(HarnessError::ZeroCount("B"));
        }
        if self.n.contains(&0) {
            return Err(HarnessError::ZeroCount("n"));
        }
        if let Some(&a) = self.alpha.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
            return Err(HarnessError::InvalidAlpha(a));
        }
        for scenario in &self.scenarios {
            if let Some(&method) = self.methods.iter().find(|m| !m.supports(scenario)) {
                return Err(HarnessError::Incompatible {
                    scenario: scenario.name(),
                    method,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub n: usize,
    pub alpha: f64,
    pub method: Method,
    pub effect: f64,
    pub rejection_rate: f64,
    pub mc_stderr: f64,
    pub reps: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl ResultRow {
    /// `rejection_rate ± mc_stderr`, clipped to `[0, 1]`.
    pub fn band(&self) -> (f64, f64) {
        (
            (self.rejection_rate - self.mc_stderr).max(0.0),
            (self.rejection_rate + self.mc_stderr).min(1.0),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub const HEADER: [&'static str; 10] = [
        "scenario",
        "n",
        "alpha",
        "method",
        "effect",
        "rejection_rate",
        "mc_stderr",
        "M",
        "B",
        "seed",
    ];

    pub fn write_csv<W: Write>(&self, output: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(output);
        w.write_record(Self::HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.scenario.clone(),
                r.n.to_string(),
                r.alpha.to_string(),
                r.method.to_string(),
                r.effect.to_string(),
                r.rejection_rate.to_string(),
                r.mc_stderr.to_string(),
                r.reps.to_string(),
                r.replicates.to_string(),
                r.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, HarnessError> {
        let mut buffer = Vec::new();
        self.write_csv(&mut buffer)?;
        Ok(String::from_utf8(buffer).expect("csv output is UTF-8"))
    }

    pub fn find(&self, scenario: &str, n: usize, alpha: f64, method: Method, effect: f64) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.scenario == scenario && r.n == n && r.alpha == alpha && r.method == method && r.effect == effect)
    }
}

/// Type-I error rates: every scenario at its null (`ρ = 0` or `ν = 0`).
pub fn run_type1_grid(grid: &ExperimentGrid) -> Result<ResultTable, HarnessError> {
    run_power_grid(grid, &[0.0])
}

/// Rejection rates at each effect size; effect `0` is the null.
pub fn run_power_grid(grid: &ExperimentGrid, effects: &[f64]) -> Result<ResultTable, HarnessError> {
    grid.validate()?;
    if effects.is_empty() {
        return Err(HarnessError::EmptyList("effects"));
    }
    let mut rows = Vec::new();
    for (si, scenario) in grid.scenarios.iter().enumerate() {
        for &effect in effects {
            let generator = Generator::new(scenario, effect)?;
            for &n in &grid.n {
                // keyed by value, so a cell reproduces in any grid that contains it
                let cell = RandomSource::new(grid.seed, si as u64)
                    .substream(effect.to_bits())
                    .substream(n as u64);
                let sums = run_cell(grid, &generator, n, cell);
                for (ai, &alpha) in grid.alpha.iter().enumerate() {
                    for (mi, &method) in grid.methods.iter().enumerate() {
                        let rate = sums[mi * grid.alpha.len() + ai] / grid.reps as f64;
                        rows.push(ResultRow {
                            scenario: scenario.name(),
                            n,
                            alpha,
                            method,
                            effect,
                            rejection_rate: rate,
                            mc_stderr: (rate * (1.0 - rate) / grid.reps as f64).sqrt(),
                            reps: grid.reps,
                            replicates: grid.replicates,
                            seed: grid.seed,
                        });
                    }
                }
            }
        }
    }
    Ok(ResultTable { rows })
}

/// Fractions of censored components in each margin among `count` pairs,
/// before truncation.
pub fn censoring_rate_estimate(spec: &SurvivalSpec, count: usize, source: RandomSource) -> [f64; 2] {
    censoring_rates(spec, count, &mut source.rng())
}

enum Generator {
    Correlation(BivariateKind),
    Survival(SurvivalDesign, f64),
}

impl Generator {
    fn new(scenario: &Scenario, effect: f64) -> Result<Self, HarnessError> {
        let design_error = |source| HarnessError::Design {
            scenario: scenario.name(),
            effect,
            source,
        };
        match *scenario {
            Scenario::Correlation(kind) => {
                let kind = kind.with_rho(effect);
                BivariateSpec::new(kind, 1).map_err(design_error)?;
                Ok(Generator::Correlation(kind))
            }
            Scenario::Survival(design) => {
                design.spec(effect, 1).map_err(design_error)?;
                Ok(Generator::Survival(design, effect))
            }
        }
    }
}

/// Per-method, per-level sums of `φ` over the cell's repetitions, laid out
/// method-major.
fn run_cell(grid: &ExperimentGrid, generator: &Generator, n: usize, cell: RandomSource) -> Vec<f64> {
    let per_rep: Vec<Vec<f64>> = (0..grid.reps as u64)
        .into_par_iter()
        .map(|rep| {
            let source = cell.substream(rep);
            match *generator {
                Generator::Correlation(kind) => {
                    let spec = BivariateSpec::new(kind, n).expect("validated design");
                    let data = gen_bivariate(&spec, &mut source.rng());
                    rep_reject_probs(grid, &data, &StatisticSpec::two_sided(FisherZ, 0.0), source, |d, s, b, src| {
                        pairing_permutation_distribution(d, s, b, src)
                    })
                }
                Generator::Survival(design, shift) => {
                    let spec = design.spec(shift, n).expect("validated design");
                    let data = gen_censored_paired(&spec, &mut source.rng());
                    let statistic = MannWhitney::new(design.tau);
                    rep_reject_probs(grid, &data, &StatisticSpec::two_sided(statistic, 0.5), source, |_, _, _, _| {
                        unreachable!("pairing permutation is rejected for survival scenarios")
                    })
                }
            }
        })
        .collect();
    let mut sums = vec![0.0; grid.methods.len() * grid.alpha.len()];
    for rep in &per_rep {
        for (total, value) in sums.iter_mut().zip(rep) {
            *total += value;
        }
    }
    sums
}

/// `φ` for every method and level on one dataset. A method whose reference
/// distribution is entirely degenerate does not reject.
fn rep_reject_probs<T, S, P>(
    grid: &ExperimentGrid,
    data: &[T],
    spec: &StatisticSpec<S>,
    source: RandomSource,
    permutation: P,
) -> Vec<f64>
where
    T: GroupAction + Clone,
    S: Studentized<T>,
    P: Fn(&[T], &StatisticSpec<S>, usize, RandomSource) -> Result<ReferenceDistribution, EngineError>,
{
    let mut out = Vec::with_capacity(grid.methods.len() * grid.alpha.len());
    for (mi, &method) in grid.methods.iter().enumerate() {
        let stream = source.substream(1 + mi as u64);
        if method == Method::Normal {
            let statistic = &spec.statistic;
            let t = statistic.observed(&statistic.evaluate(data), spec.null_value);
            let oriented = spec.sidedness.orient(t);
            out.extend(grid.alpha.iter().map(|&a| {
                if oriented > normal_critical_value(a, spec.sidedness) {
                    1.0
                } else {
                    0.0
                }
            }));
            continue;
        }
        let dist = match method {
            Method::Bootstrap => bootstrap_distribution(data, spec, grid.replicates, stream),
            Method::PairingPermutation => permutation(data, spec, grid.replicates, stream),
            _ => {
                let kind = method.group().expect("group method");
                let exact = grid.exact
                    && orbit_size(kind, data.len()).is_ok_and(|size| size <= DEFAULT_EXACT_BUDGET as u128);
                if exact {
                    exact_distribution(data, spec, kind, DEFAULT_EXACT_BUDGET)
                } else {
                    randomization_distribution(data, spec, kind, grid.replicates, stream)
                }
            }
        };
        match dist {
            Ok(dist) => {
                let oriented = spec.sidedness.orient(dist.statistic());
                out.extend(grid.alpha.iter().map(|&a| dist.reject_prob(oriented, a)));
            }
            Err(_) => out.extend(std::iter::repeat_n(0.0, grid.alpha.len())),
        }
    }
    out
}
