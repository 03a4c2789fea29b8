use hecke_core::algebra::catalog;
use hecke_core::hecke::presets;
use hecke_core::hecke::random::{random_character, RandomOptions};
use hecke_core::multdep::probe::ProbePlan;
use hecke_core::multdep::probe::local_probe_with_plan;
use hecke_core::multdep::{mult_relation, random_element, random_instance, sunit_factor, ProbeMode};
use hecke_core::rayclass::{Modulus, RayClassGroup};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn label() -> impl Strategy<Value = &'static str> {
    prop::sample::select(catalog::labels())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sunit_factorization_reassembles(label in label(), seed in any::<u64>(), height in 1i64..200) {
        let k = catalog::field(label).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&k, height, &mut rng);
        let f = sunit_factor(&k, &x).unwrap();
        prop_assert_eq!(f.reassemble(&k).unwrap(), x);
        prop_assert!(f.exponents.iter().all(|&e| e != 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn local_orders_divide_global_exponent(label in label(), seed in any::<u64>()) {
        let k = catalog::field(label).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&k, 300, &[2, 3], &mut rng);
        let rel = mult_relation(&k, &inst.c, &inst.a, None).unwrap();
        let plan = ProbePlan::new(&k, 10_000, false);
        let rep = local_probe_with_plan(&k, &plan, &inst.c, &inst.a, ProbeMode::Exact, false).unwrap();
        if let Some(r) = rel {
            for t in rep.t_values.keys() {
                prop_assert_eq!(r.t_exact as u128 % t, 0, "t_q = {} does not divide {}", t, r.t_exact);
            }
            prop_assert_eq!(rep.witness_count == 0, r.t_exact == 1);
        } else {
            prop_assert!(inst.planted.is_none());
        }
    }

    #[test]
    fn planted_relations_are_found(label in label(), seed in any::<u64>()) {
        let k = catalog::field(label).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&k, 300, &[2, 3], &mut rng);
        if inst.planted.is_some() {
            let r = mult_relation(&k, &inst.c, &inst.a, None).unwrap();
            prop_assert!(r.is_some());
        }
    }

    #[test]
    fn characters_are_multiplicative(label in label(), seed in any::<u64>()) {
        let k = catalog::field(label).unwrap();
        let l = catalog::field(presets::default_value_field(label)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chi = random_character(&k, &l, &RandomOptions::default(), &mut rng).unwrap();
        let a = random_element(&k, 30, &mut rng);
        let b = random_element(&k, 30, &mut rng);
        let g = chi.group();
        prop_assume!(g.is_coprime(&a) && g.is_coprime(&b));
        let ab = k.mul(&a, &b);
        prop_assert_eq!(chi.eval(&ab).unwrap(), l.mul(&chi.eval(&a).unwrap(), &chi.eval(&b).unwrap()));
    }

    #[test]
    fn ray_class_map_is_a_homomorphism(seed in any::<u64>(), c in 1i64..40) {
        let k = catalog::field("qsqrt5").unwrap();
        let m = Modulus::with_all_real(&k, &k.from_int(c)).unwrap();
        let g = RayClassGroup::new(&k, &m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&k, 50, &mut rng);
        let b = random_element(&k, 50, &mut rng);
        prop_assume!(g.is_coprime(&a) && g.is_coprime(&b));
        let sum: Vec<u64> = g
            .resolve(&a)
            .unwrap()
            .iter()
            .zip(g.resolve(&b).unwrap())
            .zip(g.divisors())
            .map(|((x, y), d)| (x + y) % d)
            .collect();
        prop_assert_eq!(g.resolve(&k.mul(&a, &b)).unwrap(), sum);
    }

    #[test]
    fn primitive_character_agrees_off_the_modulus(label in label(), seed in any::<u64>()) {
        let k = catalog::field(label).unwrap();
        let l = catalog::field(presets::default_value_field(label)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chi = random_character(&k, &l, &RandomOptions::default(), &mut rng).unwrap();
        let prim = chi.primitive().unwrap();
        prop_assert!(prim.modulus().divides(&k, chi.modulus()));
        let a = random_element(&k, 30, &mut rng);
        prop_assume!(chi.group().is_coprime(&a));
        prop_assert_eq!(prim.eval(&a).unwrap(), chi.eval(&a).unwrap());
    }
}
