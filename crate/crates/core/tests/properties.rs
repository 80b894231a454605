use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use graphpack::curve::{
    enumerate_generating_vectors, nondecreasing_tuples, riemann_hurwitz_genus, CurveAction, CurveType,
};
use graphpack::group::{builtin, parse_catalog, FiniteGroup, GroupElement, DEFAULT_CATALOG};
use graphpack::packing::{max_packing, verify_packing, PackingOptions};
use graphpack::slope::{invariants, simple_galois_slope, AdmissibleConfiguration, BranchComponent, SlopeSums, Stratum};

fn groups() -> &'static [Arc<FiniteGroup>] {
    static GROUPS: OnceLock<Vec<Arc<FiniteGroup>>> = OnceLock::new();
    GROUPS.get_or_init(|| DEFAULT_CATALOG.iter().map(|s| Arc::new(builtin(s).unwrap())).collect())
}

/// Every (group, triangle type up to 8, vector class) with curve genus at least 2.
fn actions() -> &'static [CurveAction] {
    static ACTIONS: OnceLock<Vec<CurveAction>> = OnceLock::new();
    ACTIONS.get_or_init(|| {
        let mut out = Vec::new();
        for g in groups().iter().filter(|g| g.order() <= 60) {
            for t in nondecreasing_tuples(3, 2, 8) {
                let t = CurveType::spherical(&t).unwrap();
                if !matches!(riemann_hurwitz_genus(g.order() as u64, 0, t.branch_orders()), Ok(genus) if genus >= 2) {
                    continue;
                }
                for v in enumerate_generating_vectors(g, &t, false).unwrap() {
                    out.push(CurveAction::new(g.clone(), t.clone(), v).unwrap());
                }
            }
        }
        out
    })
}

fn group_and_element() -> impl Strategy<Value = (usize, usize)> {
    (0..groups().len()).prop_flat_map(|i| (Just(i), 0..groups()[i].order()))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #[test]
    fn class_sizes_sum_to_order(i in 0..groups().len()) {
        let g = &groups()[i];
        let total: usize = g.conjugacy_classes().iter().map(|c| c.len()).sum();
        prop_assert_eq!(total, g.order());
    }

    #[test]
    fn inverse_has_same_order((i, x) in group_and_element()) {
        let g = &groups()[i];
        let x = GroupElement::new(x);
        prop_assert_eq!(g.element_order(x), g.element_order(g.inv(x)));
        prop_assert!(g.pow(x, g.element_order(x)).is_identity());
    }

    #[test]
    fn associativity((i, x) in group_and_element(), y in any::<usize>(), z in any::<usize>()) {
        let g = &groups()[i];
        let (x, y, z) = (GroupElement::new(x), GroupElement::new(y % g.order()), GroupElement::new(z % g.order()));
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
    }

    #[test]
    fn catalog_round_trip(i in 0..groups().len()) {
        let g = &groups()[i];
        prop_assume!(g.permutation_representation().is_some());
        let rep = g.permutation_representation().unwrap();
        let mut text = format!("group G degree {}\n", rep.degree);
        for x in g.elements() {
            let images: Vec<String> = rep.images[x.index()].iter().map(|p| (p + 1).to_string()).collect();
            text.push_str(&images.join(" "));
            text.push('\n');
        }
        text.push_str("end\n");
        let parsed = parse_catalog(text.as_bytes()).unwrap();
        prop_assert_eq!(parsed[0].order(), g.order());
    }

    #[test]
    fn fixed_set_is_inverse_and_conjugation_closed(a in 0..actions().len(), y in any::<usize>()) {
        let action = &actions()[a];
        let g = action.group();
        let y = GroupElement::new(y % g.order());
        for x in action.fixed_set() {
            let x = GroupElement::new(x);
            prop_assert!(action.fixed_set().contains(g.inv(x).index()));
            prop_assert!(action.fixed_set().contains(g.conjugate(x, y).index()));
        }
        prop_assert!(!action.fixed_set().contains(0));
    }

    #[test]
    fn translated_witness_is_packing(a in 0..actions().len(), t in any::<usize>()) {
        let action = &actions()[a];
        let g = action.group();
        let r = max_packing(g, action.fixed_set(), &PackingOptions::unbounded()).unwrap();
        prop_assert!(verify_packing(g, action.fixed_set(), &r.witness));
        prop_assert!(r.m as u64 <= action.mu_bound());
        let t = GroupElement::new(t % g.order());
        let translated: Vec<GroupElement> = r.witness.iter().map(|&x| g.mul(t, x)).collect();
        prop_assert!(verify_packing(g, action.fixed_set(), &translated));
    }

    #[test]
    fn signature_identity(
        e2_half in 1i64..5,
        d1 in 1u64..4,
        parts in prop::collection::vec(prop::collection::vec((2u64..7, 1u64..3), 1..4), 0..4),
    ) {
        let e2 = -2 * e2_half;
        let e1 = e2;
        let d = parts.first().map(|p| p.iter().map(|(r, n)| r * n).sum()).unwrap_or(1);
        let components: Vec<BranchComponent> = parts
            .iter()
            .filter(|p| p.iter().map(|(r, n)| r * n).sum::<u64>() == d)
            .map(|p| BranchComponent { d1, d2: d1, strata: p.iter().map(|&(r, n)| Stratum { r, n }).collect() })
            .collect();
        let config = AdmissibleConfiguration::new(e1, e2, d, components, false).unwrap();
        if let Ok(inv) = invariants(&config) {
            prop_assert_eq!(q(3, 1) * &inv.sigma, &inv.c1sq - q(2, 1) * &inv.c2);
            prop_assert_eq!(&inv.slope, &(&inv.c1sq / &inv.c2));
        }
    }

    #[test]
    fn running_sums_match_formula(genus in 2u64..20, r in prop::collection::vec(2u64..40, 1..25)) {
        let m = q(r.len() as i64, 1);
        let inv_sq: BigRational = r.iter().map(|&x| q(1, (x * x) as i64)).sum();
        let inv: BigRational = r.iter().map(|&x| q(1, x as i64)).sum();
        let direct = q(2, 1) + (&m - inv_sq) / (q(2 * genus as i64 - 2, 1) + &m - inv);
        prop_assert_eq!(simple_galois_slope(genus, &r), direct.clone());
        if let Ok(sums) = SlopeSums::for_indices(genus, &r) {
            prop_assert_eq!(sums.slope(), direct);
        }
    }
}
