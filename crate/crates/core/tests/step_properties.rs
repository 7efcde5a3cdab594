use proptest::prelude::*;
use randtest_core::step::{stieltjes_integral, Interval, StepFunction};

/// Nonincreasing step function from 1 built from jump positions on a grid of
/// quarter units and multiplicative drop factors.
fn survival_like() -> impl Strategy<Value = StepFunction> {
    prop::collection::btree_set(0u32..40, 0..12).prop_flat_map(|slots| {
        let k = slots.len();
        (Just(slots), prop::collection::vec(0.0f64..1.0, k))
    })
    .prop_map(|(slots, factors)| {
        let times: Vec<f64> = slots.iter().map(|&s| s as f64 * 0.25).collect();
        let mut value = 1.0;
        let values = factors
            .iter()
            .map(|f| {
                value *= f;
                value
            })
            .collect();
        StepFunction::new(1.0, times, values).unwrap()
    })
}

fn arbitrary_step() -> impl Strategy<Value = StepFunction> {
    prop::collection::btree_set(0u32..40, 0..12).prop_flat_map(|slots| {
        let k = slots.len();
        (Just(slots), prop::collection::vec(-3.0f64..3.0, k), -3.0f64..3.0)
    })
    .prop_map(|(slots, values, initial)| {
        let times: Vec<f64> = slots.iter().map(|&s| s as f64 * 0.25).collect();
        StepFunction::new(initial, times, values).unwrap()
    })
}

proptest! {
    #[test]
    fn integration_by_parts(f in survival_like(), g in survival_like()) {
        let tau = 10.0;
        let whole = Interval::closed(0.0, tau);
        let lhs = -stieltjes_integral(f.normalized(), &g, whole) - stieltjes_integral(g.normalized(), &f, whole);
        let rhs = 1.0 - f.at(tau) * g.at(tau);
        prop_assert!((lhs - rhs).abs() < 1e-12, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn left_limit_plus_jump_is_value(f in arbitrary_step()) {
        for &t in f.jump_times() {
            prop_assert!((f.left_limit(t) + f.jump_at(t) - f.at(t)).abs() < 1e-15);
        }
        for (t, size) in f.jumps() {
            prop_assert!((f.at(t) - f.left_limit(t) - size).abs() < 1e-15);
        }
    }

    #[test]
    fn normalization_is_identity_off_jumps(f in arbitrary_step(), slot in 0u32..40) {
        // the midpoints between quarter units never carry a jump
        let t = slot as f64 * 0.25 + 0.125;
        prop_assert_eq!(f.normalized_at(t), f.at(t));
    }

    #[test]
    fn total_mass_over_all_jumps(f in survival_like()) {
        let mass = stieltjes_integral(|_| 1.0, &f, Interval::closed(0.0, 10.0));
        prop_assert!((mass - (f.terminal_value() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn intervals_split_additively(f in arbitrary_step(), cut in 0u32..40) {
        let c = cut as f64 * 0.25;
        let g = |t: f64| t * t - 1.0;
        let whole = stieltjes_integral(g, &f, Interval::closed(0.0, 10.0));
        let left = stieltjes_integral(g, &f, Interval::closed_open(0.0, c));
        let right = stieltjes_integral(g, &f, Interval::closed(c, 10.0));
        prop_assert!((whole - left - right).abs() < 1e-9);
    }
}
