use proptest::prelude::*;

use verlinde_core::affine::StarContext;
use verlinde_core::chain::Truncation;
use verlinde_core::combinatorics::alcove_weights;
use verlinde_core::formal::{
    action_radius, anti_invariant_extension, invariant_extension, module_action, top_degree_cycle_check, weight_system,
    Pattern, WindowVector,
};
use verlinde_core::{RootSystem, Weight, WeightMap};

fn sys(s: &str) -> RootSystem {
    RootSystem::new(s.parse().unwrap())
}

fn window(length: usize) -> Truncation {
    Truncation { length, margin: 0 }
}

#[test]
fn top_degree_boundary_is_injective() {
    for (name, k, len) in [("A1", 1, 4), ("A2", 1, 3), ("B2", 1, 2), ("G2", 0, 2)] {
        let rs = sys(name);
        let ctx = StarContext::new(&rs, k);
        let trunc = Truncation::new(&ctx, len);
        let cx = verlinde_core::chain::TruncatedComplex::build(&ctx, &trunc, &Default::default()).unwrap();
        let top = cx.top_degree();
        let m = cx.boundary_matrix(&ctx, top);
        let snf = verlinde_core::snf::smith_normal_form(&m);
        assert_eq!(snf.rank(), cx.dimension(top), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_preserves_patterns(k in 0u32..3, a in 0i64..3, b in 0i64..3, lam in 0i64..2) {
        let rs = sys("A1");
        let ctx = StarContext::new(&rs, k);
        let chi = WeightMap::singleton(Weight::from([a]), 1);
        let ws = weight_system(&rs, &chi).unwrap();
        let anti = anti_invariant_extension(&ctx, &Weight::from([b]), window(12)).unwrap();
        let out = module_action(&ctx, &ws, &anti).unwrap();
        prop_assert_eq!(out.pattern(), Pattern::AntiInvariant);
        prop_assert_eq!(out.window().length, 12 - action_radius(&ctx, &ws));
        prop_assert!(WindowVector::new(&ctx, out.window(), out.entries().clone(), Pattern::AntiInvariant).is_ok());

        let lam = Weight::from([lam.min(k as i64)]);
        let inv = invariant_extension(&ctx, &lam, window(12)).unwrap();
        let out = module_action(&ctx, &ws, &inv).unwrap();
        prop_assert_eq!(out.pattern(), Pattern::Invariant);
        prop_assert!(top_degree_cycle_check(&ctx, &out));
    }

    #[test]
    fn action_is_multiplicative(k in 0u32..3, a in 0i64..3, b in 0i64..3, c in 0i64..4) {
        let rs = sys("A1");
        let ctx = StarContext::new(&rs, k);
        let (wa, wb) = (
            weight_system(&rs, &WeightMap::singleton(Weight::from([a]), 1)).unwrap(),
            weight_system(&rs, &WeightMap::singleton(Weight::from([b]), 1)).unwrap(),
        );
        let prod = verlinde_core::combinatorics::tensor_decompose(&rs, &Weight::from([a]), &Weight::from([b])).unwrap();
        let wab = weight_system(&rs, &prod).unwrap();
        let v = anti_invariant_extension(&ctx, &Weight::from([c]), window(16)).unwrap();
        let twice = module_action(&ctx, &wa, &module_action(&ctx, &wb, &v).unwrap()).unwrap();
        let once = module_action(&ctx, &wab, &v).unwrap();
        let len = twice.window().length.min(once.window().length);
        let (x, y) = (twice.restrict(&ctx, len), once.restrict(&ctx, len));
        prop_assert_eq!(x.entries(), y.entries());
    }

    #[test]
    fn invariant_extensions_are_cycles(k in 0u32..3, len in 0usize..5, ix in 0usize..6) {
        let rs = sys("A2");
        let ctx = StarContext::new(&rs, k);
        let alcove = alcove_weights(&rs, k);
        let lam = &alcove[ix % alcove.len()];
        let v = invariant_extension(&ctx, lam, window(len)).unwrap();
        prop_assert!(top_degree_cycle_check(&ctx, &v));
        prop_assert_eq!(v.get(lam), 1);
    }
}
