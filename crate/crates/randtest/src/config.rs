//! `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored; list values are
//! comma separated. Recognized keys:
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `family` | `correlation` or `survival` | required |
//! | `scenarios` | correlation: `normal`, `t5`, `chi5`, `mixture` | required for correlation |
//! | `copulas` | survival: `gumbel`, `clayton`, `independence` | required for survival |
//! | `marginals` | survival: `exp`, `mixture` | `exp` |
//! | `censoring` | survival: upper ends `b` of the censoring law | required for survival |
//! | `tau` | survival horizon | `1` |
//! | `gumbel_theta`, `clayton_theta` | copula parameters | `5`, `-0.6` |
//! | `mixture_rate` | rate `λ` of the mixture margin | solved for `p = ½` |
//! | `n` | sample sizes | required |
//! | `alpha` | levels | `0.05` |
//! | `methods` | `mirror`, `rotation`, `exchange`, `bootstrap`, `pairing-permutation`, `normal` | required |
//! | `reps` | repetitions `M` | `2000` |
//! | `B` | replicates per reference distribution | `999` |
//! | `seed` | root seed | `1` |
//! | `exact` | enumerate finite groups when within budget | `false` |
//! | `effects` | effect sizes (`ρ` or `ν`); a power grid when present | absent |

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use randtest_core::simgen::{mixture_rate_solver, BivariateKind, Copula, Marginals};

use crate::harness::{ExperimentGrid, HarnessError, Method, Scenario, SurvivalDesign};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: {message}")]
    Value { key: String, message: String },
    #[error(transparent)]
    Grid(#[from] HarnessError),
}

const KEYS: [&str; 17] = [
    "family",
    "scenarios",
    "copulas",
    "marginals",
    "censoring",
    "tau",
    "gumbel_theta",
    "clayton_theta",
    "mixture_rate",
    "n",
    "alpha",
    "methods",
    "reps",
    "B",
    "seed",
    "exact",
    "effects",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub grid: ExperimentGrid,
    /// Present for power grids.
    pub effects: Option<Vec<f64>>,
}

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn raw(&self, key: &'static str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn scalar<T: FromStr>(&self, key: &'static str, default: Option<T>) -> Result<T, ConfigError> {
        match self.raw(key) {
            Some(v) => v.parse().map_err(|_| ConfigError::Value {
                key: key.into(),
                message: format!("cannot parse `{v}`"),
            }),
            None => default.ok_or(ConfigError::Missing(key)),
        }
    }

    fn list<T: FromStr>(&self, key: &'static str, default: Option<Vec<T>>) -> Result<Vec<T>, ConfigError> {
        let Some(v) = self.raw(key) else {
            return default.ok_or(ConfigError::Missing(key));
        };
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse().map_err(|_| ConfigError::Value {
                    key: key.into(),
                    message: format!("cannot parse `{s}`"),
                })
            })
            .collect()
    }
}

fn unknown(key: &str, value: &str) -> ConfigError {
    ConfigError::Value {
        key: key.into(),
        message: format!("unknown value `{value}`"),
    }
}

pub fn parse_config(text: &str) -> Result<SimulationConfig, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| ConfigError::Syntax { line: i + 1, message };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key = value`, found `{line}`")))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(syntax(format!("unknown key `{key}`")));
        }
        if map.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(syntax(format!("duplicate key `{key}`")));
        }
    }
    let e = Entries(map);

    let family: String = e.scalar("family", None)?;
    let scenarios = match family.as_str() {
        "correlation" => correlation_scenarios(&e)?,
        "survival" => survival_scenarios(&e)?,
        other => return Err(unknown("family", other)),
    };
    let methods = e
        .list::<String>("methods", None)?
        .iter()
        .map(|m| m.parse::<Method>().map_err(|_| unknown("methods", m)))
        .collect::<Result<Vec<_>, _>>()?;
    let grid = ExperimentGrid {
        scenarios,
        n: e.list("n", None)?,
        alpha: e.list("alpha", Some(vec![0.05]))?,
        methods,
        reps: e.scalar("reps", Some(2000))?,
        replicates: e.scalar("B", Some(999))?,
        seed: e.scalar("seed", Some(1))?,
        exact: e.scalar("exact", Some(false))?,
    };
    let effects = match e.raw("effects") {
        Some(_) => Some(e.list("effects", None)?),
        None => None,
    };
    grid.validate()?;
    if effects.as_ref().is_some_and(Vec::is_empty) {
        return Err(HarnessError::EmptyList("effects").into());
    }
    Ok(SimulationConfig { grid, effects })
}

pub fn read_config(path: &Path) -> Result<SimulationConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

fn correlation_scenarios(e: &Entries) -> Result<Vec<Scenario>, ConfigError> {
    e.list::<String>("scenarios", None)?
        .iter()
        .map(|s| {
            let kind = match s.as_str() {
                "normal" => BivariateKind::Normal(0.0),
                "t5" => BivariateKind::T5(0.0),
                "chi5" => BivariateKind::Chi5Independent,
                "mixture" => BivariateKind::Mixture(0.0),
                other => return Err(unknown("scenarios", other)),
            };
            Ok(Scenario::Correlation(kind))
        })
        .collect()
}

fn survival_scenarios(e: &Entries) -> Result<Vec<Scenario>, ConfigError> {
    let tau: f64 = e.scalar("tau", Some(1.0))?;
    let gumbel: f64 = e.scalar("gumbel_theta", Some(5.0))?;
    let clayton: f64 = e.scalar("clayton_theta", Some(-0.6))?;
    let copulas = e
        .list::<String>("copulas", None)?
        .iter()
        .map(|c| match c.as_str() {
            "gumbel" => Ok(Copula::GumbelHougaard(gumbel)),
            "clayton" => Ok(Copula::Clayton(clayton)),
            "independence" => Ok(Copula::Independence),
            other => Err(unknown("copulas", other)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut marginals = Vec::new();
    for m in e.list::<String>("marginals", Some(vec!["exp".into()]))? {
        marginals.push(match m.as_str() {
            "exp" => Marginals::EqualExp,
            "mixture" => {
                let lambda = match e.raw("mixture_rate") {
                    Some(_) => e.scalar("mixture_rate", None)?,
                    None => mixture_rate_solver(tau).map_err(|err| ConfigError::Value {
                        key: "tau".into(),
                        message: err.to_string(),
                    })?,
                };
                Marginals::ExpVsMixture { lambda }
            }
            other => return Err(unknown("marginals", other)),
        });
    }
    let censoring: Vec<f64> = e.list("censoring", None)?;
    let mut out = Vec::new();
    for &copula in &copulas {
        for &m in &marginals {
            for &censor_max in &censoring {
                let design = SurvivalDesign {
                    copula,
                    marginals: m,
                    censor_max,
                    tau,
                };
                design.spec(0.0, 1).map_err(|err| ConfigError::Value {
                    key: "copulas".into(),
                    message: err.to_string(),
                })?;
                out.push(Scenario::Survival(design));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_correlation_grid() {
        let cfg = parse_config(
            "# smoke\nfamily = correlation\nscenarios = normal, chi5\nn = 10,20\nalpha=0.01,0.05\n\
             methods = mirror,normal\nreps = 3\nB = 19\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.grid.scenarios.len(), 2);
        assert_eq!(cfg.grid.n, vec![10, 20]);
        assert_eq!(cfg.grid.methods, vec![Method::Mirror, Method::Normal]);
        assert_eq!((cfg.grid.reps, cfg.grid.replicates, cfg.grid.seed), (3, 19, 7));
        assert!(cfg.effects.is_none());
    }

    #[test]
    fn parses_a_survival_power_grid() {
        let cfg = parse_config(
            "family = survival\ncopulas = gumbel, clayton\nmarginals = exp, mixture\ncensoring = 2.7, 1.1\n\
             n = 25\nmethods = exchange\neffects = 0, 0.2\n",
        )
        .unwrap();
        assert_eq!(cfg.grid.scenarios.len(), 8);
        assert_eq!(cfg.effects, Some(vec![0.0, 0.2]));
        assert_eq!(cfg.grid.alpha, vec![0.05]);
        assert_eq!(cfg.grid.scenarios[0].name(), "gumbel/exp/b=2.7");
    }

    #[test]
    fn reports_problems() {
        let err = parse_config("family = correlation\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }), "{err}");
        let err = parse_config("family = correlation\nscenarios = normal\nmethods = mirror\n").unwrap_err();
        assert!(matches!(err, ConfigError::Missing("n")), "{err}");
        let err = parse_config("family = correlation\nscenarios = normal\nn = 5\nmethods = exchange\n").unwrap_err();
        assert!(err.to_string().contains("cannot be used with scenario `normal`"), "{err}");
        assert!(parse_config("family = correlation\nfamily = survival\n").is_err());
        assert!(parse_config("family = correlation\nscenarios = normal\nn = 5\nmethods = mirror\nreps = 0\n").is_err());
        assert!(parse_config("no equals sign\n").is_err());
    }
}
