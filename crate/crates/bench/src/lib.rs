//! Benchmark fixtures.

use std::collections::BTreeMap;

use compser_core::decompose::Setting;
use compser_core::{
    is_alternated, AdmissibleTriple, CuspContext, CuspidalLabel, CuspidalSymbol, FamilyEntry,
    HalfInt, JordanBlock, Parity, StronglyPositiveDescriptor,
};

fn rho() -> CuspidalSymbol {
    CuspidalSymbol::self_dual("rho", 1, Parity::Integer).unwrap()
}

fn pi() -> CuspidalSymbol {
    CuspidalSymbol::self_dual("pi", 2, Parity::Integer).unwrap()
}

/// `σ_sp` with `Jord = {(5, ρ)}` over `Jord_ρ(σ_cusp) = {1}`.
pub fn base_sp() -> StronglyPositiveDescriptor {
    let ctx = CuspContext::new(
        CuspidalLabel::new("sigma").unwrap(),
        BTreeMap::from([(rho(), [1].into())]),
    )
    .unwrap();
    let t = AdmissibleTriple::from_entries(ctx, [JordanBlock::new(rho(), 5).unwrap()], &[], &[])
        .unwrap();
    is_alternated(&t).into_result().unwrap()
}

/// `k` nested segments `[ν^{-2m} π, ν^{2m+1} π]`, all induced.
pub fn nested(k: usize) -> Setting {
    let family = (0..k as i64)
        .map(|m| {
            FamilyEntry::new(pi(), HalfInt::from_int(2 * m), HalfInt::from_int(2 * m + 1)).unwrap()
        })
        .collect();
    Setting::new(base_sp(), family, (0..k).collect(), vec![]).unwrap()
}

/// `S = {[ν^{-3} ρ, ν^4 ρ]}`, `Y = {[ν^{-6} ρ, ν^7 ρ]}`: the largest oracle
/// searches among the shipped examples.
pub fn oracle_setting() -> Setting {
    let family = vec![
        FamilyEntry::new(rho(), HalfInt::from_int(3), HalfInt::from_int(4)).unwrap(),
        FamilyEntry::new(rho(), HalfInt::from_int(6), HalfInt::from_int(7)).unwrap(),
    ];
    Setting::new(base_sp(), family, vec![0], vec![1]).unwrap()
}
