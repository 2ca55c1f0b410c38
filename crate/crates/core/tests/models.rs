use contactlab::model::{builtin, random_contact_lie, BUILTIN_NAMES};
use contactlab::LieContactModel;
use proptest::prelude::*;

#[test]
fn builtins_pass_every_identity() {
    for name in BUILTIN_NAMES {
        let model = builtin(name).unwrap();
        let checks: Vec<_> = model
            .validity(1e-12)
            .checks
            .into_iter()
            .chain(model.levi_civita_checks(1e-12))
            .chain(model.nabla_j_checks(1e-12))
            .chain(model.nf_checks(1e-12))
            .collect();
        for c in checks {
            assert!(c.pass, "{name}: {} = {:e}", c.id, c.max_violation);
        }
    }
}

#[test]
fn builtin_json_round_trips() {
    for name in BUILTIN_NAMES {
        let model = builtin(name).unwrap();
        let back = LieContactModel::from_json(&model.to_json()).unwrap();
        assert_eq!(back.to_json(), model.to_json());
        assert_eq!(back.space(), model.space());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_models_satisfy_the_identities(dim in prop::sample::select(vec![3usize, 5]), seed in 0u64..10_000) {
        let model = match random_contact_lie(dim, seed, 50) {
            Ok(m) => m,
            Err(_) => return Err(TestCaseError::reject("no model for this seed")),
        };
        prop_assert!(model.validity(1e-10).passed());
        for c in model.levi_civita_checks(1e-9).into_iter().chain(model.nabla_j_checks(1e-9)).chain(model.nf_checks(1e-9)) {
            prop_assert!(c.pass, "{}: {:e}", c.id, c.max_violation);
        }
        let back = LieContactModel::from_json(&model.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), model.to_json());
    }

    #[test]
    fn nijenhuis_02_vanishes_in_dim_3(seed in 0u64..10_000) {
        // the (0,2) part of a contact-valued form needs two J-antilinear slots
        if let Ok(model) = random_contact_lie(3, seed, 50) {
            prop_assert!(model.nijenhuis_02().max_abs() <= 1e-12);
        }
    }
}
