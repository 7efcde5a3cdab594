use proptest::prelude::*;
use randtest_core::groups::{apply, enumerate_elements, sample_element, GroupElement, GroupKind};
use randtest_core::{CensoredPairedObservation, PairedObservation, RandomSource};

fn rotation() -> impl Strategy<Value = GroupElement> {
    (0.0f64..std::f64::consts::TAU).prop_map(|theta| GroupElement::Rotation { theta })
}

fn mirror() -> impl Strategy<Value = GroupElement> {
    (prop::bool::ANY, prop::bool::ANY).prop_map(|(a, b)| GroupElement::Mirror {
        eps_x: if a { 1 } else { -1 },
        eps_y: if b { 1 } else { -1 },
    })
}

fn exchange() -> impl Strategy<Value = GroupElement> {
    prop::bool::ANY.prop_map(|swap| GroupElement::Exchange { swap })
}

fn pair() -> impl Strategy<Value = PairedObservation> {
    (-100.0f64..100.0, -100.0f64..100.0).prop_map(|(x, y)| PairedObservation::new(x, y))
}

fn censored() -> impl Strategy<Value = CensoredPairedObservation> {
    (0.0f64..10.0, prop::bool::ANY, 0.0f64..10.0, prop::bool::ANY)
        .prop_map(|(a, d, b, e)| CensoredPairedObservation::new(a, d, b, e))
}

fn close(a: &PairedObservation, b: &PairedObservation, tol: f64) -> bool {
    (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol
}

proptest! {
    #[test]
    fn rotations_compose(a in rotation(), b in rotation(), v in pair()) {
        let two_steps = apply(&a, &apply(&b, &v).unwrap()).unwrap();
        let composed = apply(&a.compose(&b).unwrap(), &v).unwrap();
        prop_assert!(close(&two_steps, &composed, 1e-12 * (1.0 + v.x.abs() + v.y.abs())));
    }

    #[test]
    fn mirrors_compose(a in mirror(), b in mirror(), v in pair()) {
        let two_steps = apply(&a, &apply(&b, &v).unwrap()).unwrap();
        prop_assert_eq!(two_steps, apply(&a.compose(&b).unwrap(), &v).unwrap());
        prop_assert_eq!(apply(&a, &apply(&a, &v).unwrap()).unwrap(), v);
    }

    #[test]
    fn exchanges_compose(a in exchange(), b in exchange(), v in censored()) {
        let two_steps = apply(&a, &apply(&b, &v).unwrap()).unwrap();
        prop_assert_eq!(two_steps, apply(&a.compose(&b).unwrap(), &v).unwrap());
        prop_assert_eq!(apply(&a, &apply(&a, &v).unwrap()).unwrap(), v);
    }

    #[test]
    fn rotations_preserve_radius(a in rotation(), v in pair()) {
        let w = apply(&a, &v).unwrap();
        let r = v.x.hypot(v.y);
        prop_assert!((w.x.hypot(w.y) - r).abs() <= 1e-12 * (1.0 + r));
    }

    #[test]
    fn identities_fix_everything(v in pair(), c in censored()) {
        prop_assert_eq!(apply(&GroupKind::Rotation.identity(), &v).unwrap(), v);
        prop_assert_eq!(apply(&GroupKind::Mirror.identity(), &v).unwrap(), v);
        prop_assert_eq!(apply(&GroupKind::Exchange.identity(), &c).unwrap(), c);
    }

    #[test]
    fn sampled_elements_stay_in_range(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed, 0).rng();
        for _ in 0..16 {
            match sample_element(GroupKind::Rotation, &mut rng) {
                GroupElement::Rotation { theta } => prop_assert!((0.0..std::f64::consts::TAU).contains(&theta)),
                _ => prop_assert!(false),
            }
            match sample_element(GroupKind::Mirror, &mut rng) {
                GroupElement::Mirror { eps_x, eps_y } => {
                    prop_assert!(eps_x.abs() == 1 && eps_y.abs() == 1)
                }
                _ => prop_assert!(false),
            }
        }
    }
}

#[test]
fn enumerated_groups_are_closed_under_composition() {
    for kind in [GroupKind::Mirror, GroupKind::Exchange] {
        let elements = enumerate_elements(kind).unwrap();
        for a in &elements {
            for b in &elements {
                assert!(elements.contains(&a.compose(b).unwrap()));
            }
        }
    }
}
