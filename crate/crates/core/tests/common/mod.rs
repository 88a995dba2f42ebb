#![allow(dead_code)]

use argus_core::Formula;
use proptest::prelude::*;

/// Truth value of `f` under `values`, straight from the connective tables.
pub fn truth(f: &Formula, values: &[bool]) -> bool {
    match f {
        Formula::Atom(k) => values[*k],
        Formula::Not(x) => !truth(x, values),
        Formula::And(l, r) => truth(l, values) && truth(r, values),
        Formula::Or(l, r) => truth(l, values) || truth(r, values),
        Formula::Implies(l, r) => !truth(l, values) || truth(r, values),
        Formula::Iff(l, r) => truth(l, values) == truth(r, values),
    }
}

/// Every assignment over `n` atoms, atom `k` taken from bit `k` of the row number.
pub fn truth_table(n: usize) -> Vec<Vec<bool>> {
    (0..1u32 << n).map(|row| (0..n).map(|k| row >> k & 1 == 1).collect()).collect()
}

pub fn formula(atoms: usize, depth: u32) -> BoxedStrategy<Formula> {
    let leaf = (0..atoms).prop_map(Formula::Atom);
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Formula::iff(l, r)),
        ]
    })
    .boxed()
}
