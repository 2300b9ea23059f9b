//! Admissible triples `(Jord, σ_cusp, ε)` and the strongly positive case.

mod epsilon;
mod family;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use epsilon::{EpsilonData, PairEntry, RhoEpsilon, Sign, SingletonEntry};
pub use family::{validate_family, FamilyEntry, FamilyReport, FamilyViolation};

use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Parity};
use crate::segment::Segment;
use crate::symbols::{CuspidalLabel, CuspidalSymbol};

/// A Jordan block `(a, ρ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanBlock {
    pub rho: CuspidalSymbol,
    pub a: u32,
}

impl JordanBlock {
    pub fn new(rho: CuspidalSymbol, a: u32) -> Result<Self> {
        let parity = block_parity(&rho)?;
        if a == 0 {
            return Err(Error::InvalidTriple(format!(
                "block (0, {rho}) is not positive"
            )));
        }
        if (a % 2 == 1) != parity.block_is_odd() {
            return Err(Error::InvalidTriple(format!(
                "block ({a}, {rho}) has the wrong parity for a {} symbol",
                parity.as_str()
            )));
        }
        Ok(JordanBlock { rho, a })
    }
}

impl fmt::Display for JordanBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.rho)
    }
}

fn block_parity(rho: &CuspidalSymbol) -> Result<Parity> {
    if !rho.is_self_dual() {
        return Err(Error::InvalidTriple(format!(
            "{rho} is not self-dual and cannot carry Jordan blocks"
        )));
    }
    rho.parity()
        .ok_or_else(|| Error::InvalidTriple(format!("{rho} has no parity")))
}

/// The cuspidal data a triple is built over: `σ_cusp` and `Jord_ρ(σ_cusp)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspContext {
    cusp: CuspidalLabel,
    cusp_jord: BTreeMap<CuspidalSymbol, BTreeSet<u32>>,
}

impl CuspContext {
    pub fn new(
        cusp: CuspidalLabel,
        cusp_jord: BTreeMap<CuspidalSymbol, BTreeSet<u32>>,
    ) -> Result<Arc<Self>> {
        for (rho, set) in &cusp_jord {
            for &a in set {
                JordanBlock::new(rho.clone(), a)?;
            }
        }
        let cusp_jord = cusp_jord
            .into_iter()
            .filter(|(_, s)| !s.is_empty())
            .collect();
        Ok(Arc::new(CuspContext { cusp, cusp_jord }))
    }

    pub fn cusp(&self) -> &CuspidalLabel {
        &self.cusp
    }

    pub fn cusp_jord(&self, rho: &CuspidalSymbol) -> BTreeSet<u32> {
        self.cusp_jord.get(rho).cloned().unwrap_or_default()
    }

    pub fn cusp_jord_rhos(&self) -> impl Iterator<Item = &CuspidalSymbol> {
        self.cusp_jord.keys()
    }

    /// `ρ ⋊ σ_cusp` reduces: the reducibility point is `0`.
    pub fn rho_reduces(&self, rho: &CuspidalSymbol) -> bool {
        rho.parity() == Some(Parity::Integer) && !self.cusp_jord.contains_key(rho)
    }

    /// `ν^{1/2} ρ ⋊ σ_cusp` reduces.
    pub fn half_reduces(&self, rho: &CuspidalSymbol) -> bool {
        rho.parity() == Some(Parity::HalfInteger) && !self.cusp_jord.contains_key(rho)
    }

    /// `ε` is defined on `(a, ρ)` iff `a` is even or `ρ ⋊ σ_cusp` reduces.
    pub fn singletons_defined(&self, rho: &CuspidalSymbol) -> bool {
        rho.parity() == Some(Parity::HalfInteger) || self.rho_reduces(rho)
    }
}

/// An admissible triple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleTriple {
    jord: BTreeSet<JordanBlock>,
    eps: EpsilonData,
    context: Arc<CuspContext>,
}

impl AdmissibleTriple {
    /// The triple of `σ_cusp` itself viewed with an empty Jord over the context.
    pub fn empty(context: Arc<CuspContext>) -> Self {
        AdmissibleTriple {
            jord: BTreeSet::new(),
            eps: EpsilonData::empty(),
            context,
        }
    }

    pub fn from_entries(
        context: Arc<CuspContext>,
        jord: impl IntoIterator<Item = JordanBlock>,
        singletons: &[SingletonEntry],
        pairs: &[PairEntry],
    ) -> Result<Self> {
        let jord: BTreeSet<JordanBlock> = jord.into_iter().collect();
        let mut blocks: BTreeMap<CuspidalSymbol, (bool, BTreeSet<u32>)> = BTreeMap::new();
        for b in &jord {
            JordanBlock::new(b.rho.clone(), b.a)?;
            blocks
                .entry(b.rho.clone())
                .or_insert_with(|| (context.singletons_defined(&b.rho), BTreeSet::new()))
                .1
                .insert(b.a);
        }
        let eps = EpsilonData::from_entries(&blocks, singletons, pairs)?;
        Ok(AdmissibleTriple { jord, eps, context })
    }

    pub fn jord(&self) -> &BTreeSet<JordanBlock> {
        &self.jord
    }

    pub fn eps(&self) -> &EpsilonData {
        &self.eps
    }

    pub fn context(&self) -> &Arc<CuspContext> {
        &self.context
    }

    pub fn cusp(&self) -> &CuspidalLabel {
        self.context.cusp()
    }

    /// `Jord_ρ`, ascending.
    pub fn jord_rho(&self, rho: &CuspidalSymbol) -> Vec<u32> {
        self.jord
            .iter()
            .filter(|b| &b.rho == rho)
            .map(|b| b.a)
            .collect()
    }

    pub fn rhos(&self) -> BTreeSet<CuspidalSymbol> {
        self.jord.iter().map(|b| b.rho.clone()).collect()
    }

    pub fn contains_block(&self, rho: &CuspidalSymbol, a: u32) -> bool {
        self.jord.contains(&JordanBlock {
            rho: rho.clone(),
            a,
        })
    }

    /// Removable pairs: consecutive same-`ρ` blocks with pair value `+1`,
    /// ordered by symbol name then lower block.
    pub fn removable_pairs(&self) -> Vec<(JordanBlock, JordanBlock)> {
        let mut out = Vec::new();
        for rho in self.rhos() {
            let blocks = self.jord_rho(&rho);
            for w in blocks.windows(2) {
                if self.eps.pair(&rho, w[0], w[1]) == Some(Sign::Plus) {
                    out.push((
                        JordanBlock {
                            rho: rho.clone(),
                            a: w[0],
                        },
                        JordanBlock {
                            rho: rho.clone(),
                            a: w[1],
                        },
                    ));
                }
            }
        }
        out
    }

    /// Removes a pair of blocks and restricts `ε`.
    pub fn remove_pair(&self, lower: &JordanBlock, upper: &JordanBlock) -> Result<Self> {
        if !self.jord.contains(lower) || !self.jord.contains(upper) || lower.rho != upper.rho {
            return Err(Error::domain(format!(
                "{lower} and {upper} are not a pair of blocks of this triple"
            )));
        }
        let mut out = self.clone();
        out.jord.remove(lower);
        out.jord.remove(upper);
        let e = out
            .eps
            .rho_mut(&lower.rho, self.context.singletons_defined(&lower.rho));
        e.remove(lower.a);
        e.remove(upper.a);
        out.eps.prune();
        Ok(out)
    }

    fn insert_block(&mut self, rho: &CuspidalSymbol, a: u32, sign: Sign) -> Result<()> {
        let block = JordanBlock::new(rho.clone(), a)?;
        if !self.jord.insert(block) {
            return Err(Error::domain(format!(
                "({a}, {rho}) is already a Jordan block"
            )));
        }
        self.eps
            .rho_mut(rho, self.context.singletons_defined(rho))
            .insert(a, sign);
        Ok(())
    }

    /// Sum of `a · m_ρ` over Jord, a size invariant used in tests.
    pub fn weight(&self) -> u64 {
        self.jord
            .iter()
            .map(|b| u64::from(b.a) * u64::from(b.rho.gl_size()))
            .sum()
    }
}

impl fmt::Display for AdmissibleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ({}", self.cusp())?;
        for rho in self.rhos() {
            let e = self
                .eps
                .rho(&rho)
                .expect("every rho in Jord has epsilon data");
            write!(f, "; {rho}")?;
            if !e.is_absolute() {
                f.write_str("~")?;
            }
            f.write_str("[")?;
            for (k, a) in self.jord_rho(&rho).into_iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{a}{}", e.raw_sign(a).expect("block present"))?;
            }
            f.write_str("]")?;
        }
        f.write_str(")")
    }
}

/// Why a triple fails to be alternated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlternationViolation {
    /// Consecutive blocks with `ε(a)ε(a_-)^{-1} = 1`.
    EqualNeighbours {
        rho: CuspidalSymbol,
        lower: u32,
        upper: u32,
    },
    /// No increasing bijection onto `Jord'_ρ(σ_cusp)`.
    CardinalityMismatch {
        rho: CuspidalSymbol,
        blocks: Vec<u32>,
        targets: Vec<u32>,
    },
    /// The increasing bijection sends a block above itself.
    PartnerExceedsBlock {
        rho: CuspidalSymbol,
        a: u32,
        phi: u32,
    },
}

impl fmt::Display for AlternationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlternationViolation::EqualNeighbours { rho, lower, upper } => write!(
                f,
                "ε({upper},{rho})ε({lower},{rho})^-1 = 1 for consecutive blocks"
            ),
            AlternationViolation::CardinalityMismatch {
                rho,
                blocks,
                targets,
            } => write!(
                f,
                "Jord_{rho} = {blocks:?} has no increasing bijection onto {targets:?}"
            ),
            AlternationViolation::PartnerExceedsBlock { rho, a, phi } => {
                write!(f, "Φ_{rho}({a}) = {phi} exceeds the block")
            }
        }
    }
}

/// An alternated triple together with its bijections `Φ_ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StronglyPositiveDescriptor {
    triple: AdmissibleTriple,
    phi: BTreeMap<CuspidalSymbol, Vec<(u32, u32)>>,
}

impl StronglyPositiveDescriptor {
    pub fn triple(&self) -> &AdmissibleTriple {
        &self.triple
    }

    /// `(a, Φ_ρ(a))` pairs with `a` ascending.
    pub fn phi(&self, rho: &CuspidalSymbol) -> &[(u32, u32)] {
        self.phi.get(rho).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn phi_map(&self) -> &BTreeMap<CuspidalSymbol, Vec<(u32, u32)>> {
        &self.phi
    }
}

pub enum Alternation {
    Alternated(StronglyPositiveDescriptor),
    Violated(AlternationViolation),
}

impl Alternation {
    pub fn is_alternated(&self) -> bool {
        matches!(self, Alternation::Alternated(_))
    }

    pub fn into_result(self) -> Result<StronglyPositiveDescriptor> {
        match self {
            Alternation::Alternated(d) => Ok(d),
            Alternation::Violated(v) => Err(Error::NotAlternated(v.to_string())),
        }
    }
}

/// Checks the alternated conditions and constructs `Φ_ρ` for every `ρ`.
pub fn is_alternated(t: &AdmissibleTriple) -> Alternation {
    let ctx = &t.context;
    let mut rhos = t.rhos();
    rhos.extend(ctx.cusp_jord_rhos().cloned());
    let mut phi = BTreeMap::new();
    for rho in rhos {
        let blocks = t.jord_rho(&rho);
        for w in blocks.windows(2) {
            if t.eps.pair(&rho, w[0], w[1]) == Some(Sign::Plus) {
                return Alternation::Violated(AlternationViolation::EqualNeighbours {
                    rho,
                    lower: w[0],
                    upper: w[1],
                });
            }
        }
        let mut targets = ctx.cusp_jord(&rho);
        let even = rho.parity() == Some(Parity::HalfInteger);
        if even {
            if let Some(&min) = blocks.first() {
                if t.eps.singleton(&rho, min) == Some(Sign::Plus) {
                    targets.insert(0);
                }
            }
        }
        let targets: Vec<u32> = targets.into_iter().collect();
        if targets.len() != blocks.len() {
            return Alternation::Violated(AlternationViolation::CardinalityMismatch {
                rho,
                blocks,
                targets,
            });
        }
        let pairs: Vec<(u32, u32)> = blocks.into_iter().zip(targets).collect();
        if let Some(&(a, p)) = pairs.iter().find(|(a, p)| p > a) {
            return Alternation::Violated(AlternationViolation::PartnerExceedsBlock {
                rho,
                a,
                phi: p,
            });
        }
        if !pairs.is_empty() {
            phi.insert(rho, pairs);
        }
    }
    Alternation::Alternated(StronglyPositiveDescriptor {
        triple: t.clone(),
        phi,
    })
}

/// Result of removing `+1` pairs until none remain.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub removed: Vec<(JordanBlock, JordanBlock)>,
    pub result: AdmissibleTriple,
    /// `Some` when the final triple is alternated, i.e. the input is admissible.
    pub alternated: Option<StronglyPositiveDescriptor>,
}

impl Reduction {
    pub fn is_admissible(&self) -> bool {
        self.alternated.is_some()
    }
}

/// Greedy reduction: always removes the first removable pair (smallest symbol
/// name, then smallest block).
pub fn reduce_to_alternated(t: &AdmissibleTriple) -> Reduction {
    let mut current = t.clone();
    let mut removed = Vec::new();
    while let Some((lo, hi)) = current.removable_pairs().into_iter().next() {
        current = current
            .remove_pair(&lo, &hi)
            .expect("removable pair belongs to the triple");
        removed.push((lo, hi));
    }
    let alternated = match is_alternated(&current) {
        Alternation::Alternated(d) => Some(d),
        Alternation::Violated(_) => None,
    };
    Reduction {
        removed,
        result: current,
        alternated,
    }
}

/// The segments of the embedding `σ_sp ↪ ∏ δ([ν^{(Φ(a)+1)/2} ρ, ν^{(a-1)/2} ρ]) ⋊ σ_cusp`,
/// symbols by name and blocks ascending; empty segments are dropped.
pub fn sp_embedding(sp: &StronglyPositiveDescriptor) -> (Vec<Segment>, CuspidalLabel) {
    let mut segments = Vec::new();
    for (rho, pairs) in &sp.phi {
        for &(a, p) in pairs {
            let x = HalfInt::from_doubled(i64::from(p) + 1);
            let y = HalfInt::from_doubled(i64::from(a) - 1);
            if let Some(s) = Segment::new(rho.clone(), x, y).expect("a and Φ(a) share parity") {
                segments.push(s);
            }
        }
    }
    (segments, sp.triple.cusp().clone())
}

/// One extension of a triple by chosen family entries, with the sign label
/// used for every non-half-edge entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extension {
    pub triple: AdmissibleTriple,
    /// `(entry index, label)`; half-edge entries carry `None`.
    pub labels: Vec<(usize, Option<Sign>)>,
}

/// Extends `base` by the blocks of each chosen entry.
///
/// A half-edge entry (`-b = 1/2`) adds `(2c+1, ρ)` with `ε = +1`. Any other
/// entry adds `(2b+1, ρ), (2c+1, ρ)` with pair value `+1`; its label is the
/// absolute sign when singletons are defined and otherwise the pair value
/// against the largest same-`ρ` block already present. Output order is
/// lexicographic in labels with `+` first.
pub fn enumerate_extensions(
    base: &AdmissibleTriple,
    chosen: &[(usize, FamilyEntry)],
) -> Result<Vec<Extension>> {
    let mut partial = vec![Extension {
        triple: base.clone(),
        labels: Vec::new(),
    }];
    for (index, entry) in chosen {
        let rho = entry.rho();
        let upper = entry.upper_block()?;
        let mut next = Vec::with_capacity(partial.len() * 2);
        for ext in partial {
            match entry.lower_block()? {
                None => {
                    if !base.context.singletons_defined(rho) {
                        return Err(Error::domain(format!(
                            "entry {index}: ε({upper}, {rho}) is not defined"
                        )));
                    }
                    let mut t = ext.triple.clone();
                    t.insert_block(rho, upper, Sign::Plus)?;
                    let mut labels = ext.labels.clone();
                    labels.push((*index, None));
                    next.push(Extension { triple: t, labels });
                }
                Some(lower) => {
                    let absolute = base.context.singletons_defined(rho);
                    let reference = if absolute {
                        Some(Sign::Plus)
                    } else {
                        ext.triple
                            .eps
                            .rho(rho)
                            .and_then(|e| e.blocks().last().and_then(|a| e.raw_sign(a)))
                    };
                    let reference = reference.ok_or_else(|| {
                        Error::domain(format!(
                            "entry {index}: no reference block fixes the sign of the new pair for {rho}"
                        ))
                    })?;
                    for label in Sign::BOTH {
                        let s = reference * label;
                        let mut t = ext.triple.clone();
                        t.insert_block(rho, lower, s)?;
                        t.insert_block(rho, upper, s)?;
                        let mut labels = ext.labels.clone();
                        labels.push((*index, Some(label)));
                        next.push(Extension { triple: t, labels });
                    }
                }
            }
        }
        partial = next;
    }
    Ok(partial)
}
