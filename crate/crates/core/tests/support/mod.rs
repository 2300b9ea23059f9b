#![allow(dead_code)]

use std::collections::BTreeMap;

use compser_core::decompose::Setting;
use compser_core::{
    is_alternated, AdmissibleTriple, CuspContext, CuspidalLabel, CuspidalSymbol, FamilyEntry,
    HalfInt, JordanBlock, Parity, StronglyPositiveDescriptor,
};

pub fn h(s: &str) -> HalfInt {
    s.parse().unwrap()
}

pub fn sigma_label() -> CuspidalLabel {
    CuspidalLabel::new("sigma").unwrap()
}

/// `ρ` with `Jord_ρ(σ_cusp) = {1}`.
pub fn rho() -> CuspidalSymbol {
    CuspidalSymbol::self_dual("rho", 1, Parity::Integer).unwrap()
}

/// Integer parity, empty `Jord_π(σ_cusp)`: `π ⋊ σ_cusp` reduces.
pub fn pi() -> CuspidalSymbol {
    CuspidalSymbol::self_dual("pi", 2, Parity::Integer).unwrap()
}

/// Half-integer parity, empty `Jord_τ(σ_cusp)`.
pub fn tau(n: usize) -> CuspidalSymbol {
    CuspidalSymbol::self_dual(&format!("tau{n}"), 1, Parity::HalfInteger).unwrap()
}

/// `σ_sp` with `Jord = {(5, ρ)}` over `Jord_ρ(σ_cusp) = {1}`.
pub fn base_sp() -> StronglyPositiveDescriptor {
    let ctx = CuspContext::new(sigma_label(), BTreeMap::from([(rho(), [1].into())])).unwrap();
    let t = AdmissibleTriple::from_entries(ctx, [JordanBlock::new(rho(), 5).unwrap()], &[], &[])
        .unwrap();
    is_alternated(&t).into_result().unwrap()
}

pub fn entry(rho: CuspidalSymbol, b: &str, c: &str) -> FamilyEntry {
    FamilyEntry::new(rho, h(b), h(c)).unwrap()
}

/// `k - h` nested entries `[ν^{-2m} π, ν^{2m+1} π]` and `h` half-edge entries
/// `[ν^{1/2} τ_m, ν^{3/2} τ_m]`, all in `S`.
pub fn generic_setting(k: usize, half_edges: usize) -> Setting {
    assert!(half_edges <= k);
    let mut family = Vec::new();
    for m in 0..k - half_edges {
        family.push(entry(pi(), &(2 * m).to_string(), &(2 * m + 1).to_string()));
    }
    for m in 0..half_edges {
        family.push(entry(tau(m), "-1/2", "3/2"));
    }
    Setting::new(base_sp(), family, (0..k).collect(), vec![]).unwrap()
}

/// A named setting with its family split into `S` and `Y`.
pub struct Instance {
    pub name: &'static str,
    pub setting: Setting,
}

fn inst(name: &'static str, family: Vec<FamilyEntry>, s: Vec<usize>, y: Vec<usize>) -> Instance {
    Instance {
        name,
        setting: Setting::new(base_sp(), family, s, y).unwrap(),
    }
}

/// Oracle battery instances with `|S ∪ Y| ≤ 3`.
pub fn battery_instances() -> Vec<Instance> {
    vec![
        inst("S={ρ[-3,4]}", vec![entry(rho(), "3", "4")], vec![0], vec![]),
        inst(
            "S={π[0,1], τ[1/2,3/2]}",
            vec![entry(pi(), "0", "1"), entry(tau(0), "-1/2", "3/2")],
            vec![0, 1],
            vec![],
        ),
        inst(
            "S={ρ[-3,4]}, Y={τ[-1/2,5/2]}",
            vec![entry(rho(), "3", "4"), entry(tau(0), "1/2", "5/2")],
            vec![0],
            vec![1],
        ),
        inst(
            "S={π[0,1], π[-2,3]}, Y={ρ[-3,4]}",
            vec![
                entry(pi(), "0", "1"),
                entry(pi(), "2", "3"),
                entry(rho(), "3", "4"),
            ],
            vec![0, 1],
            vec![2],
        ),
        inst(
            "S={ρ[-3,4], τ[1/2,3/2], π[0,1]}",
            vec![
                entry(rho(), "3", "4"),
                entry(tau(0), "-1/2", "3/2"),
                entry(pi(), "0", "1"),
            ],
            vec![0, 1, 2],
            vec![],
        ),
        inst(
            "S={τ[-1/2,5/2]}, Y={ρ[-3,4], ρ[-6,7]}",
            vec![
                entry(tau(0), "1/2", "5/2"),
                entry(rho(), "3", "4"),
                entry(rho(), "6", "7"),
            ],
            vec![0],
            vec![1, 2],
        ),
        inst(
            "Y={τ0[1/2,3/2], τ1[1/2,3/2], π[0,1]}",
            vec![
                entry(tau(0), "-1/2", "3/2"),
                entry(tau(1), "-1/2", "3/2"),
                entry(pi(), "0", "1"),
            ],
            vec![],
            vec![0, 1, 2],
        ),
    ]
}
