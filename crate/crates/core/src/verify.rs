//! End-to-end check of the SL(2,3) packing on a genus 2 curve and the slope
//! it produces.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::curve::{enumerate_exceptional_types, is_rigid_triangle, CurveAction, CurveType, GeneratingVector};
use crate::group::{builtin, matrix_permutation, FiniteGroup, GroupElement};
use crate::packing::{max_packing, packing_ratio, verify_packing, PackingOptions};
use crate::slope::{branch_divisibility_ok, cyclic_cover_fiber_genus, eight_thirds, simple_galois_slope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("check {step} ({name}) failed: {detail}")]
pub struct VerificationFailed {
    pub step: usize,
    pub name: &'static str,
    pub detail: String,
}

pub const CHECKS: [&str; 12] = [
    "sl2(3) has order 24",
    "g1 and g2 generate",
    "(g1, g2, g3) has type (3,3,4)",
    "the quotient curve has genus 2",
    "the explicit 3-element set is a packing",
    "the maximum packing has size 3",
    "m = 3(g-1)",
    "three order-3 graphs give slope 8/3",
    "the cyclic triple cover has fibre genus 7",
    "order-3 branching over 3 graphs divides",
    "(3,3,4) is a rigid triangle",
    "the exceptional types table",
];

const EXCEPTIONAL_ROWS: [(&[u32], i64, i64); 8] = [
    (&[2, 2, 2, 3], 4, 12),
    (&[2, 3, 7], 12, 84),
    (&[2, 3, 8], 6, 48),
    (&[2, 3, 9], 4, 36),
    (&[2, 4, 5], 8, 40),
    (&[2, 4, 6], 4, 24),
    (&[2, 5, 5], 4, 20),
    (&[3, 3, 4], 6, 24),
];

const G1: [[usize; 2]; 2] = [[0, 2], [1, 2]];
const G2: [[usize; 2]; 2] = [[0, 1], [2, 2]];
const G3: [[usize; 2]; 2] = [[2, 2], [2, 1]];
const PACKING: [[[usize; 2]; 2]; 3] = [[[1, 0], [0, 1]], [[2, 0], [1, 2]], [[0, 1], [2, 1]]];

struct Runner {
    step: usize,
    passed: Vec<&'static str>,
}

impl Runner {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) -> Result<(), VerificationFailed> {
        let name = CHECKS[self.step];
        self.step += 1;
        if ok {
            self.passed.push(name);
            Ok(())
        } else {
            Err(VerificationFailed { step: self.step, name, detail: detail() })
        }
    }

    fn fail(&self, detail: String) -> VerificationFailed {
        VerificationFailed { step: self.step + 1, name: CHECKS[self.step], detail }
    }
}

/// Runs every check against the builtin `sl2(3)`.
pub fn verify_paper() -> Result<Vec<&'static str>, VerificationFailed> {
    let group =
        builtin("sl2(3)").map_err(|e| VerificationFailed { step: 1, name: CHECKS[0], detail: e.to_string() })?;
    verify_with(Arc::new(group))
}

/// Runs the checks against `group`, which is expected to be SL(2,3) acting on
/// the nonzero vectors of `(Z/3)²`. Returns the names of the passed checks.
pub fn verify_with(group: Arc<FiniteGroup>) -> Result<Vec<&'static str>, VerificationFailed> {
    let mut run = Runner { step: 0, passed: Vec::new() };
    let g = &*group;
    run.check(g.order() == 24, || format!("order is {}", g.order()))?;

    let lookup = |m: [[usize; 2]; 2]| g.element_of_permutation(&matrix_permutation(3, m));
    let (Some(g1), Some(g2), Some(g3)) = (lookup(G1), lookup(G2), lookup(G3)) else {
        return Err(run.fail("the generator matrices are not elements of the group".into()));
    };
    run.check(g.generates(&[g1, g2]), || "they generate a proper subgroup".into())?;

    let mut orders = [g1, g2, g3].map(|x| g.element_order(x) as u32);
    orders.sort_unstable();
    let product = g.product([g1, g2, g3]);
    run.check(orders == [3, 3, 4] && product.is_identity(), || {
        format!("orders {orders:?}, product is identity: {}", product.is_identity())
    })?;

    let curve_type = CurveType::spherical(&[3, 3, 4]).expect("valid orders");
    let action = CurveAction::new(group.clone(), curve_type.clone(), GeneratingVector::new(vec![g1, g2, g3]))
        .map_err(|e| run.fail(e.to_string()))?;
    let genus = action.genus();
    run.check(genus == 2, || format!("genus is {genus}"))?;

    let explicit: Option<Vec<GroupElement>> = PACKING.iter().map(|&m| lookup(m)).collect();
    let explicit_ok = explicit.is_some_and(|s| verify_packing(g, action.fixed_set(), &s));
    run.check(explicit_ok, || "two of its graphs meet".into())?;

    let result =
        max_packing(g, action.fixed_set(), &PackingOptions::unbounded()).map_err(|e| run.fail(e.to_string()))?;
    run.check(result.m == 3 && !result.time_bounded, || format!("maximum is {}", result.m))?;

    let ratio = packing_ratio(result.m as u64, genus).map_err(|e| run.fail(e.to_string()))?;
    run.check(result.m as u64 == 3 * (genus - 1) && ratio == BigRational::from_integer(3.into()), || {
        format!("m = {}, g = {genus}", result.m)
    })?;

    let slope = simple_galois_slope(genus, &[3, 3, 3]);
    run.check(slope == eight_thirds(), || format!("slope is {slope}"))?;

    let fibre = cyclic_cover_fiber_genus(3, genus, 3);
    run.check(fibre == Ok(7), || format!("fibre genus is {fibre:?}"))?;

    run.check(branch_divisibility_ok(3, 3), || "3 does not divide 3".into())?;

    run.check(is_rigid_triangle(&curve_type), || "not rigid".into())?;

    let table = enumerate_exceptional_types();
    let table_ok = table.len() == EXCEPTIONAL_ROWS.len()
        && table.iter().zip(EXCEPTIONAL_ROWS).all(|(e, (orders, m, n))| {
            e.curve_type.quotient_genus() == 0
                && e.curve_type.branch_orders() == orders
                && e.m_coefficient == BigRational::from_integer(BigInt::from(m))
                && e.order_coefficient == BigRational::from_integer(BigInt::from(n))
        });
    run.check(table_ok, || format!("{} rows do not match", table.len()))?;

    Ok(run.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        assert_eq!(verify_paper().unwrap(), CHECKS.to_vec());
    }

    #[test]
    fn wrong_group_of_order_24() {
        let err = verify_with(Arc::new(builtin("symmetric(4)").unwrap())).unwrap_err();
        assert_eq!(err.step, 2);
    }

    #[test]
    fn wrong_order() {
        let err = verify_with(Arc::new(builtin("cyclic(5)").unwrap())).unwrap_err();
        assert_eq!((err.step, err.name), (1, CHECKS[0]));
    }

    #[test]
    fn relabelled_table_breaks_matrix_lookup() {
        let sl = builtin("sl2(3)").unwrap();
        let table = sl.multiplication_table();
        let relabelled = FiniteGroup::from_multiplication_table("sl2(3)", &table).unwrap();
        let err = verify_with(Arc::new(relabelled)).unwrap_err();
        assert_eq!(err.step, 2);
    }
}
