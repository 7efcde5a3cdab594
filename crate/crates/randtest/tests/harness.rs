use randtest::harness::{
    censoring_rate_estimate, run_power_grid, run_type1_grid, ExperimentGrid, HarnessError, Method, Scenario,
    SurvivalDesign,
};
use randtest_core::engine::{exact_distribution, orbit_average_reject_prob, DEFAULT_EXACT_BUDGET};
use randtest_core::simgen::{gen_censored_paired, mixture_rate_solver, BivariateKind, Copula, Marginals, SurvivalSpec};
use randtest_core::{GroupKind, MannWhitney, RandomSource, StatisticSpec};

fn correlation_grid(kind: BivariateKind, n: usize, methods: Vec<Method>, reps: usize, b: usize) -> ExperimentGrid {
    ExperimentGrid {
        scenarios: vec![Scenario::Correlation(kind)],
        n: vec![n],
        alpha: vec![0.05],
        methods,
        reps,
        replicates: b,
        seed: 2024,
        exact: false,
    }
}

fn gumbel_design() -> SurvivalDesign {
    SurvivalDesign {
        copula: Copula::GumbelHougaard(5.0),
        marginals: Marginals::EqualExp,
        censor_max: 1.6,
        tau: 1.0,
    }
}

#[test]
fn mirror_test_holds_its_level_for_normal_data() {
    let grid = correlation_grid(BivariateKind::Normal(0.0), 50, vec![Method::Mirror], 2000, 999);
    let table = run_type1_grid(&grid).unwrap();
    let rate = table.rows[0].rejection_rate;
    assert!((0.035..=0.065).contains(&rate), "{rate}");
}

#[test]
fn normal_quantiles_are_liberal_for_small_t5_samples() {
    let grid = correlation_grid(BivariateKind::T5(0.0), 15, vec![Method::Normal], 2000, 1);
    let row = &run_type1_grid(&grid).unwrap().rows[0];
    assert!(row.rejection_rate > 0.05 + 2.0 * row.mc_stderr, "{}", row.rejection_rate);
}

#[test]
fn single_repetition_emits_one_row() {
    let grid = correlation_grid(BivariateKind::Mixture(0.0), 20, vec![Method::Rotation], 1, 9);
    let table = run_type1_grid(&grid).unwrap();
    assert_eq!(table.rows.len(), 1);
    let row = &table.rows[0];
    assert_eq!((row.reps, row.replicates, row.seed, row.effect), (1, 9, 2024, 0.0));
    assert!((0.0..=1.0).contains(&row.rejection_rate));
}

#[test]
fn power_increases_with_correlation_and_methods_agree() {
    let methods = vec![Method::Mirror, Method::Rotation, Method::PairingPermutation, Method::Bootstrap];
    let grid = correlation_grid(BivariateKind::Normal(0.0), 100, methods.clone(), 2000, 199);
    let table = run_power_grid(&grid, &[0.05, 0.2]).unwrap();
    let mut at_high = Vec::new();
    for &m in &methods {
        let low = table.find("normal", 100, 0.05, m, 0.05).unwrap();
        let high = table.find("normal", 100, 0.05, m, 0.2).unwrap();
        let se = (low.mc_stderr.powi(2) + high.mc_stderr.powi(2)).sqrt();
        assert!(high.rejection_rate - low.rejection_rate >= 3.0 * se, "{m}: {} vs {}", low.rejection_rate, high.rejection_rate);
        at_high.push(high.rejection_rate);
    }
    let spread = at_high.iter().cloned().fold(f64::MIN, f64::max) - at_high.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 0.05, "{at_high:?}");
}

#[test]
fn null_cell_of_a_power_grid_reproduces_the_type1_run() {
    let grid = ExperimentGrid {
        scenarios: vec![Scenario::Survival(gumbel_design())],
        n: vec![30],
        alpha: vec![0.05, 0.10],
        methods: vec![Method::Exchange, Method::Normal],
        reps: 40,
        replicates: 99,
        seed: 5,
        exact: false,
    };
    let type1 = run_type1_grid(&grid).unwrap();
    let power = run_power_grid(&grid, &[0.3, 0.0]).unwrap();
    for row in &type1.rows {
        let same = power.find(&row.scenario, row.n, row.alpha, row.method, 0.0).unwrap();
        assert_eq!(same, row);
    }
    assert_eq!(power.rows.len(), 2 * type1.rows.len());
}

#[test]
fn grids_are_deterministic_across_thread_counts() {
    let grid = ExperimentGrid {
        scenarios: vec![Scenario::Correlation(BivariateKind::T5(0.0)), Scenario::Correlation(BivariateKind::Chi5Independent)],
        n: vec![15, 25],
        alpha: vec![0.01, 0.05, 0.10],
        methods: vec![Method::Mirror, Method::Bootstrap, Method::Normal],
        reps: 30,
        replicates: 49,
        seed: 77,
        exact: false,
    };
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = serial.install(|| run_type1_grid(&grid)).unwrap().to_csv_string().unwrap();
    let b = wide.install(|| run_type1_grid(&grid)).unwrap().to_csv_string().unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1 + 2 * 2 * 3 * 3);
}

#[test]
fn bands_stay_in_the_unit_interval() {
    let grid = ExperimentGrid {
        scenarios: vec![Scenario::Correlation(BivariateKind::Normal(0.0))],
        n: vec![10],
        alpha: vec![0.01, 0.10],
        methods: vec![Method::Mirror, Method::Normal],
        reps: 20,
        replicates: 19,
        seed: 1,
        exact: false,
    };
    for row in run_power_grid(&grid, &[0.0, 0.9]).unwrap().rows {
        let expected = (row.rejection_rate * (1.0 - row.rejection_rate) / row.reps as f64).sqrt();
        assert!((row.mc_stderr - expected).abs() < 1e-15);
        let (lo, hi) = row.band();
        assert!(0.0 <= lo && lo <= hi && hi <= 1.0);
    }
}

#[test]
fn incompatible_cells_are_named() {
    let grid = correlation_grid(BivariateKind::Normal(0.0), 10, vec![Method::Exchange], 1, 1);
    match run_type1_grid(&grid) {
        Err(HarnessError::Incompatible { scenario, method }) => {
            assert_eq!(scenario, "normal");
            assert_eq!(method, Method::Exchange);
        }
        other => panic!("{other:?}"),
    }
    let mut empty = correlation_grid(BivariateKind::Normal(0.0), 10, vec![Method::Mirror], 1, 1);
    empty.n.clear();
    assert!(matches!(run_type1_grid(&empty), Err(HarnessError::EmptyList(_))));
}

#[test]
fn exact_exchange_column_averages_to_alpha_on_each_orbit() {
    let design = gumbel_design();
    let spec = StatisticSpec::two_sided(MannWhitney::new(design.tau), 0.5);
    for n in [6, 8, 10] {
        for seed in 0..5 {
            let sspec = design.spec(0.0, n).unwrap();
            let data = gen_censored_paired(&sspec, &mut RandomSource::new(seed, n as u64).rng());
            let Ok(dist) = exact_distribution(&data, &spec, GroupKind::Exchange, DEFAULT_EXACT_BUDGET) else {
                continue;
            };
            for alpha in [0.01, 0.05, 0.10] {
                assert!((orbit_average_reject_prob(&dist, alpha).unwrap() - alpha).abs() < 1e-12);
            }
        }
    }
    let grid = ExperimentGrid {
        scenarios: vec![Scenario::Survival(design)],
        n: vec![8],
        alpha: vec![0.05],
        methods: vec![Method::Exchange],
        reps: 200,
        replicates: 1,
        seed: 3,
        exact: true,
    };
    let rate = run_type1_grid(&grid).unwrap().rows[0].rejection_rate;
    assert!((0.0..=0.15).contains(&rate), "{rate}");
}

#[test]
fn censoring_rates_match_the_design_table() {
    let equal = SurvivalSpec::new(Copula::Independence, Marginals::EqualExp, 2.7, 1.0, 0.0, 1).unwrap();
    let rates = censoring_rate_estimate(&equal, 100_000, RandomSource::new(1, 0));
    assert!((rates[0] - 0.246).abs() < 0.01, "{rates:?}");

    let lambda = mixture_rate_solver(1.0).unwrap();
    let mixed = SurvivalSpec::new(Copula::Independence, Marginals::ExpVsMixture { lambda }, 1.6, 1.0, 0.0, 1).unwrap();
    let rates = censoring_rate_estimate(&mixed, 100_000, RandomSource::new(2, 0));
    assert!((rates[1] - 0.331).abs() < 0.01, "{rates:?}");

    // a long censoring window still leaves the share beyond the horizon
    let wide = SurvivalSpec::new(Copula::Independence, Marginals::EqualExp, 1e6, 1.0, 0.0, 1).unwrap();
    let rates = censoring_rate_estimate(&wide, 100_000, RandomSource::new(3, 0));
    let beyond_horizon = (-2.0f64).exp();
    assert!((rates[0] - beyond_horizon).abs() < 0.01, "{rates:?}");
}
