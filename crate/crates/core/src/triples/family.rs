//! Segment families `Δ_i = [ν^{-b_i} ρ_i, ν^{c_i} ρ_i]` and their validity conditions.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::StronglyPositiveDescriptor;
use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Parity};
use crate::segment::{linked, Segment};
use crate::symbols::CuspidalSymbol;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyEntry {
    rho: CuspidalSymbol,
    b: HalfInt,
    c: HalfInt,
}

impl FamilyEntry {
    pub fn new(rho: CuspidalSymbol, b: HalfInt, c: HalfInt) -> Result<Self> {
        Segment::centered(rho.clone(), b, c)?;
        Ok(FamilyEntry { rho, b, c })
    }

    pub fn rho(&self) -> &CuspidalSymbol {
        &self.rho
    }

    pub fn b(&self) -> HalfInt {
        self.b
    }

    pub fn c(&self) -> HalfInt {
        self.c
    }

    pub fn segment(&self) -> Segment {
        Segment::centered(self.rho.clone(), self.b, self.c).expect("checked at construction")
    }

    /// `-b = 1/2`.
    pub fn is_half_edge(&self) -> bool {
        self.b.doubled() == -1
    }

    /// `2b + 1`, or `None` for a half-edge entry.
    pub fn lower_block(&self) -> Result<Option<u32>> {
        if self.is_half_edge() {
            return Ok(None);
        }
        block_value(self.b).map(Some)
    }

    /// `2c + 1`.
    pub fn upper_block(&self) -> Result<u32> {
        block_value(self.c)
    }
}

fn block_value(t: HalfInt) -> Result<u32> {
    let v = t.doubled() + 1;
    u32::try_from(v)
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::domain(format!("2·{t}+1 is not a positive block")))
}

impl fmt::Display for FamilyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.segment(), f)
    }
}

/// One failed condition of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyViolation {
    NotSelfDual {
        index: usize,
    },
    /// None of the three admissible shapes applies to entry `index`.
    Shape {
        index: usize,
        reason: String,
    },
    /// `δ(Δ_i) × δ(Δ_j)` (or `δ(Δ_i~) × δ(Δ_j)` when `contragredient`) reduces.
    Linked {
        i: usize,
        j: usize,
        contragredient: bool,
    },
    /// Same `ρ` but neither `c_i < b_j` nor `c_j < b_i`.
    Overlap {
        i: usize,
        j: usize,
    },
}

impl fmt::Display for FamilyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyViolation::NotSelfDual { index } => {
                write!(f, "entry {index}: ρ is not self-dual")
            }
            FamilyViolation::Shape { index, reason } => write!(f, "entry {index}: {reason}"),
            FamilyViolation::Linked {
                i,
                j,
                contragredient: false,
            } => write!(f, "entries ({i}, {j}): Δ_{i} and Δ_{j} are linked"),
            FamilyViolation::Linked {
                i,
                j,
                contragredient: true,
            } => write!(f, "entries ({i}, {j}): Δ_{i}~ and Δ_{j} are linked"),
            FamilyViolation::Overlap { i, j } => write!(
                f,
                "entries ({i}, {j}): same ρ but neither c_{i} < b_{j} nor c_{j} < b_{i}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub violations: Vec<FamilyViolation>,
}

impl FamilyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidFamily(
                self.violations.iter().map(ToString::to_string).collect(),
            ))
        }
    }
}

/// Checks every entry against the shape conditions relative to `sp`, and
/// every pair for irreducibility of `δ(Δ_i) × δ(Δ_j)` and `δ(Δ_i~) × δ(Δ_j)`.
pub fn validate_family(entries: &[FamilyEntry], sp: &StronglyPositiveDescriptor) -> FamilyReport {
    let mut violations = Vec::new();
    for (index, e) in entries.iter().enumerate() {
        if !e.rho.is_self_dual() {
            violations.push(FamilyViolation::NotSelfDual { index });
        } else if let Err(reason) = check_shape(e, sp) {
            violations.push(FamilyViolation::Shape { index, reason });
        }
    }
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            let (di, dj) = (entries[i].segment(), entries[j].segment());
            if linked(&di, &dj) {
                violations.push(FamilyViolation::Linked {
                    i,
                    j,
                    contragredient: false,
                });
            }
            if linked(&di.contragredient(), &dj) {
                violations.push(FamilyViolation::Linked {
                    i,
                    j,
                    contragredient: true,
                });
            }
            let (ei, ej) = (&entries[i], &entries[j]);
            if ei.rho == ej.rho && !(ei.c < ej.b || ej.c < ei.b) {
                violations.push(FamilyViolation::Overlap { i, j });
            }
        }
    }
    FamilyReport { violations }
}

fn check_shape(
    e: &FamilyEntry,
    sp: &StronglyPositiveDescriptor,
) -> std::result::Result<(), String> {
    let rho = &e.rho;
    let ctx = sp.triple().context();
    let jord = sp.triple().jord_rho(rho);
    let parity = rho.parity().ok_or_else(|| format!("{rho} has no parity"))?;
    if e.b >= e.c {
        return Err(format!("b = {} is not below c = {}", e.b, e.c));
    }
    if e.b.parity() != parity || e.c.parity() != parity {
        return Err(format!(
            "b = {}, c = {} do not match the {} parity of {rho}",
            e.b,
            e.c,
            parity.as_str()
        ));
    }
    if jord.is_empty() {
        match parity {
            Parity::HalfInteger => {
                if !ctx.half_reduces(rho) {
                    return Err(format!("ν^1/2 {rho} ⋊ σ_cusp is irreducible"));
                }
                if e.b < -HalfInt::HALF {
                    return Err(format!("b = {} is below -1/2", e.b));
                }
            }
            Parity::Integer => {
                if !ctx.rho_reduces(rho) {
                    return Err(format!("{rho} ⋊ σ_cusp is irreducible"));
                }
                if e.b.is_negative() {
                    return Err(format!("b = {} is negative", e.b));
                }
            }
        }
        return Ok(());
    }
    if e.b.doubled() < 0 {
        return Err(format!("2b+1 = {} is not positive", e.b.doubled() + 1));
    }
    let lo = (e.b.doubled() + 1) as u32;
    let hi = (e.c.doubled() + 1) as u32;
    if let Some(a) = jord.iter().find(|&&a| lo <= a && a <= hi) {
        return Err(format!("[{lo}, {hi}] meets Jord_{rho} at {a}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::CuspidalLabel;
    use crate::triples::{is_alternated, AdmissibleTriple, CuspContext, JordanBlock};
    use std::collections::BTreeMap;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn setup() -> (CuspidalSymbol, CuspidalSymbol, StronglyPositiveDescriptor) {
        let rho = CuspidalSymbol::self_dual("rho", 1, Parity::Integer).unwrap();
        let tau = CuspidalSymbol::self_dual("tau", 2, Parity::HalfInteger).unwrap();
        let ctx = CuspContext::new(
            CuspidalLabel::new("sigma").unwrap(),
            BTreeMap::from([(rho.clone(), [1].into())]),
        )
        .unwrap();
        let t = AdmissibleTriple::from_entries(
            ctx,
            [JordanBlock::new(rho.clone(), 5).unwrap()],
            &[],
            &[],
        )
        .unwrap();
        (rho, tau, is_alternated(&t).into_result().unwrap())
    }

    #[test]
    fn valid_family_passes() {
        let (rho, tau, sp) = setup();
        let f = vec![
            FamilyEntry::new(rho.clone(), h("3"), h("4")).unwrap(),
            FamilyEntry::new(tau.clone(), h("-1/2"), h("3/2")).unwrap(),
            FamilyEntry::new(rho, h("6"), h("7")).unwrap(),
        ];
        let report = validate_family(&f, &sp);
        assert!(report.is_valid(), "{report:?}");
    }

    #[test]
    fn gap_must_avoid_jord() {
        let (rho, _, sp) = setup();
        let f = vec![FamilyEntry::new(rho, h("1"), h("3")).unwrap()];
        let report = validate_family(&f, &sp);
        assert!(matches!(
            report.violations[..],
            [FamilyViolation::Shape { index: 0, .. }]
        ));
    }

    #[test]
    fn linked_pair_is_reported() {
        let (_, tau, sp) = setup();
        let f = vec![
            FamilyEntry::new(tau.clone(), h("1/2"), h("5/2")).unwrap(),
            FamilyEntry::new(tau, h("-3/2"), h("7/2")).unwrap(),
        ];
        let report = validate_family(&f, &sp);
        assert!(report.violations.contains(&FamilyViolation::Linked {
            i: 0,
            j: 1,
            contragredient: false
        }));
        assert!(report.into_result().is_err());
    }

    #[test]
    fn two_half_edges_on_one_rho_fail() {
        let (_, tau, sp) = setup();
        let f = vec![
            FamilyEntry::new(tau.clone(), h("-1/2"), h("3/2")).unwrap(),
            FamilyEntry::new(tau, h("-1/2"), h("7/2")).unwrap(),
        ];
        let report = validate_family(&f, &sp);
        assert!(report
            .violations
            .contains(&FamilyViolation::Overlap { i: 0, j: 1 }));
    }

    #[test]
    fn touching_entries_are_flagged() {
        // [0, 2] and [-2, 3] on an empty-Jord symbol are nested and unlinked,
        // but c_0 = b_1 = 2 would duplicate the block 5.
        let rho2 = CuspidalSymbol::self_dual("rho2", 1, Parity::Integer).unwrap();
        let (_, _, sp) = setup();
        let f = vec![
            FamilyEntry::new(rho2.clone(), h("0"), h("2")).unwrap(),
            FamilyEntry::new(rho2, h("2"), h("3")).unwrap(),
        ];
        let report = validate_family(&f, &sp);
        assert_eq!(
            report.violations,
            vec![FamilyViolation::Overlap { i: 0, j: 1 }]
        );
    }

    #[test]
    fn non_self_dual_entry() {
        let (_, _, sp) = setup();
        let pi = CuspidalSymbol::with_contragredient("pi", "piv", 1).unwrap();
        let f = vec![FamilyEntry::new(pi, h("0"), h("1")).unwrap()];
        assert_eq!(
            validate_family(&f, &sp).violations,
            vec![FamilyViolation::NotSelfDual { index: 0 }]
        );
    }

    #[test]
    fn blocks() {
        let (rho, tau, _) = setup();
        let e = FamilyEntry::new(rho, h("3"), h("4")).unwrap();
        assert_eq!(e.lower_block().unwrap(), Some(7));
        assert_eq!(e.upper_block().unwrap(), 9);
        let half = FamilyEntry::new(tau, h("-1/2"), h("3/2")).unwrap();
        assert!(half.is_half_edge());
        assert_eq!(half.lower_block().unwrap(), None);
        assert_eq!(half.upper_block().unwrap(), 4);
    }
}
