//! The `ε`-function of an admissible triple.
//!
//! Pair values are multiplicative and symmetric, so for each `ρ` they are
//! determined by a sign per block, up to a global flip. When singletons are
//! defined the signs are absolute; otherwise they are normalized so that the
//! smallest block carries `+`. Coherence is therefore structural.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbols::CuspidalSymbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Parse(format!(
                "epsilon value must be ±1, got {other}"
            ))),
        }
    }

    pub fn parse(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "-1" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("invalid sign `{other}`"))),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Signs of the blocks attached to one `ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RhoEpsilon {
    absolute: bool,
    signs: BTreeMap<u32, Sign>,
}

impl RhoEpsilon {
    pub(crate) fn new(absolute: bool, signs: BTreeMap<u32, Sign>) -> Self {
        let mut e = RhoEpsilon { absolute, signs };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.absolute {
            return;
        }
        if let Some((_, &first)) = self.signs.iter().next() {
            if first == Sign::Minus {
                for s in self.signs.values_mut() {
                    *s = *s * Sign::Minus;
                }
            }
        }
    }

    pub fn is_absolute(&self) -> bool {
        self.absolute
    }

    pub fn blocks(&self) -> impl Iterator<Item = u32> + '_ {
        self.signs.keys().copied()
    }

    /// Sign of `a` in the stored gauge.
    pub(crate) fn raw_sign(&self, a: u32) -> Option<Sign> {
        self.signs.get(&a).copied()
    }

    pub fn singleton(&self, a: u32) -> Option<Sign> {
        if self.absolute {
            self.signs.get(&a).copied()
        } else {
            None
        }
    }

    pub fn pair(&self, a: u32, b: u32) -> Option<Sign> {
        if a == b {
            return None;
        }
        Some(*self.signs.get(&a)? * *self.signs.get(&b)?)
    }

    pub(crate) fn remove(&mut self, a: u32) {
        self.signs.remove(&a);
        self.normalize();
    }

    pub(crate) fn insert(&mut self, a: u32, s: Sign) {
        self.signs.insert(a, s);
        self.normalize();
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// `ε` for all `ρ` of a triple.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpsilonData {
    per_rho: BTreeMap<CuspidalSymbol, RhoEpsilon>,
}

/// A singleton entry `ε(a, ρ)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SingletonEntry {
    pub rho: CuspidalSymbol,
    pub a: u32,
    pub sign: Sign,
}

/// A pair entry `ε(a, ρ) ε(a', ρ)^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairEntry {
    pub rho: CuspidalSymbol,
    pub a: u32,
    pub b: u32,
    pub sign: Sign,
}

impl EpsilonData {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Solves for block signs from explicit entries.
    ///
    /// `blocks` lists the Jordan blocks per `ρ` together with whether singletons
    /// are defined for that `ρ`. Every block must be determined by the entries;
    /// contradictory entries are rejected.
    pub fn from_entries(
        blocks: &BTreeMap<CuspidalSymbol, (bool, BTreeSet<u32>)>,
        singletons: &[SingletonEntry],
        pairs: &[PairEntry],
    ) -> Result<Self> {
        // Node 0 stands for the absolute reference; blocks are positive.
        let mut edges: BTreeMap<&CuspidalSymbol, Vec<(u32, u32, Sign)>> = BTreeMap::new();
        for e in singletons {
            let (absolute, set) = blocks
                .get(&e.rho)
                .filter(|(_, set)| set.contains(&e.a))
                .ok_or_else(|| {
                    Error::IncoherentEpsilon(format!("({}, {}) is not a Jordan block", e.a, e.rho))
                })?;
            if !absolute {
                return Err(Error::IncoherentEpsilon(format!(
                    "epsilon is not defined on the singleton ({}, {})",
                    e.a, e.rho
                )));
            }
            debug_assert!(set.contains(&e.a));
            edges.entry(&e.rho).or_default().push((0, e.a, e.sign));
        }
        for e in pairs {
            let (_, set) = blocks.get(&e.rho).ok_or_else(|| {
                Error::IncoherentEpsilon(format!("no Jordan blocks for {}", e.rho))
            })?;
            if e.a == e.b {
                return Err(Error::IncoherentEpsilon(format!(
                    "pair ({}, {}) with equal blocks for {}",
                    e.a, e.b, e.rho
                )));
            }
            for a in [e.a, e.b] {
                if !set.contains(&a) {
                    return Err(Error::IncoherentEpsilon(format!(
                        "({a}, {}) is not a Jordan block",
                        e.rho
                    )));
                }
            }
            edges.entry(&e.rho).or_default().push((e.a, e.b, e.sign));
        }

        let mut per_rho = BTreeMap::new();
        for (rho, (absolute, set)) in blocks {
            if set.is_empty() {
                continue;
            }
            let rho_edges = edges.get(rho).map(Vec::as_slice).unwrap_or(&[]);
            let root = if *absolute {
                0
            } else {
                *set.iter().next().unwrap()
            };
            let mut adj: BTreeMap<u32, Vec<(u32, Sign)>> = BTreeMap::new();
            for &(u, v, s) in rho_edges {
                adj.entry(u).or_default().push((v, s));
                adj.entry(v).or_default().push((u, s));
            }
            let mut sign: BTreeMap<u32, Sign> = BTreeMap::new();
            sign.insert(root, Sign::Plus);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let su = sign[&u];
                for &(v, s) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                    let want = su * s;
                    match sign.get(&v) {
                        Some(&have) if have != want => {
                            return Err(Error::IncoherentEpsilon(format!(
                                "entries for {rho} contradict each other around block {v}"
                            )));
                        }
                        Some(_) => {}
                        None => {
                            sign.insert(v, want);
                            queue.push_back(v);
                        }
                    }
                }
            }
            let mut signs = BTreeMap::new();
            for &a in set {
                let s = sign.get(&a).copied().ok_or_else(|| {
                    Error::IncoherentEpsilon(format!(
                        "epsilon is undetermined on ({a}, {rho}); add a {} entry",
                        if *absolute { "singleton" } else { "pair" }
                    ))
                })?;
                signs.insert(a, s);
            }
            per_rho.insert(rho.clone(), RhoEpsilon::new(*absolute, signs));
        }
        Ok(EpsilonData { per_rho })
    }

    pub fn rho(&self, rho: &CuspidalSymbol) -> Option<&RhoEpsilon> {
        self.per_rho.get(rho)
    }

    pub(crate) fn rho_mut(&mut self, rho: &CuspidalSymbol, absolute: bool) -> &mut RhoEpsilon {
        self.per_rho
            .entry(rho.clone())
            .or_insert_with(|| RhoEpsilon::new(absolute, BTreeMap::new()))
    }

    pub(crate) fn prune(&mut self) {
        self.per_rho.retain(|_, e| !e.is_empty());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CuspidalSymbol, &RhoEpsilon)> {
        self.per_rho.iter()
    }

    pub fn singleton(&self, rho: &CuspidalSymbol, a: u32) -> Option<Sign> {
        self.per_rho.get(rho)?.singleton(a)
    }

    pub fn pair(&self, rho: &CuspidalSymbol, a: u32, b: u32) -> Option<Sign> {
        self.per_rho.get(rho)?.pair(a, b)
    }

    /// All defined singleton values.
    pub fn singleton_entries(&self) -> Vec<SingletonEntry> {
        let mut out = Vec::new();
        for (rho, e) in &self.per_rho {
            if e.absolute {
                for (&a, &sign) in &e.signs {
                    out.push(SingletonEntry {
                        rho: rho.clone(),
                        a,
                        sign,
                    });
                }
            }
        }
        out
    }

    /// Pair values between consecutive blocks; together with the singletons
    /// these determine every other value.
    pub fn consecutive_pair_entries(&self) -> Vec<PairEntry> {
        let mut out = Vec::new();
        for (rho, e) in &self.per_rho {
            if e.absolute {
                continue;
            }
            let blocks: Vec<u32> = e.signs.keys().copied().collect();
            for w in blocks.windows(2) {
                out.push(PairEntry {
                    rho: rho.clone(),
                    a: w[0],
                    b: w[1],
                    sign: e.pair(w[0], w[1]).expect("both blocks present"),
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::Parity;

    fn rho() -> CuspidalSymbol {
        CuspidalSymbol::self_dual("rho", 1, Parity::Integer).unwrap()
    }

    fn blocks(absolute: bool, a: &[u32]) -> BTreeMap<CuspidalSymbol, (bool, BTreeSet<u32>)> {
        BTreeMap::from([(rho(), (absolute, a.iter().copied().collect()))])
    }

    fn pair(a: u32, b: u32, sign: Sign) -> PairEntry {
        PairEntry {
            rho: rho(),
            a,
            b,
            sign,
        }
    }

    fn single(a: u32, sign: Sign) -> SingletonEntry {
        SingletonEntry {
            rho: rho(),
            a,
            sign,
        }
    }

    #[test]
    fn pair_values_are_multiplicative_and_symmetric() {
        let eps = EpsilonData::from_entries(
            &blocks(false, &[1, 3, 5]),
            &[],
            &[pair(1, 3, Sign::Minus), pair(3, 5, Sign::Minus)],
        )
        .unwrap();
        let r = rho();
        assert_eq!(eps.pair(&r, 1, 5), Some(Sign::Plus));
        assert_eq!(eps.pair(&r, 5, 1), eps.pair(&r, 1, 5));
        for (a, b, c) in [(1, 3, 5), (3, 1, 5), (5, 1, 3)] {
            assert_eq!(
                eps.pair(&r, a, c),
                Some(eps.pair(&r, a, b).unwrap() * eps.pair(&r, b, c).unwrap())
            );
        }
        assert_eq!(eps.singleton(&r, 1), None);
        assert_eq!(eps.pair(&r, 3, 3), None);
    }

    #[test]
    fn singletons_fix_pairs() {
        let eps = EpsilonData::from_entries(
            &blocks(true, &[1, 3]),
            &[single(1, Sign::Plus), single(3, Sign::Minus)],
            &[],
        )
        .unwrap();
        assert_eq!(eps.pair(&rho(), 1, 3), Some(Sign::Minus));
    }

    #[test]
    fn incoherent_and_undetermined_inputs_are_rejected() {
        let contradiction = EpsilonData::from_entries(
            &blocks(true, &[1, 3]),
            &[single(1, Sign::Plus), single(3, Sign::Minus)],
            &[pair(1, 3, Sign::Plus)],
        );
        assert!(matches!(contradiction, Err(Error::IncoherentEpsilon(_))));

        let undetermined =
            EpsilonData::from_entries(&blocks(false, &[1, 3, 5]), &[], &[pair(1, 3, Sign::Plus)]);
        assert!(undetermined.is_err());

        let not_defined =
            EpsilonData::from_entries(&blocks(false, &[1]), &[single(1, Sign::Plus)], &[]);
        assert!(not_defined.is_err());

        let unknown_block =
            EpsilonData::from_entries(&blocks(false, &[1, 3]), &[], &[pair(1, 7, Sign::Plus)]);
        assert!(unknown_block.is_err());
    }

    #[test]
    fn relative_signs_are_gauge_normalized() {
        let a = EpsilonData::from_entries(&blocks(false, &[1, 3]), &[], &[pair(1, 3, Sign::Minus)])
            .unwrap();
        let b = EpsilonData::from_entries(&blocks(false, &[1, 3]), &[], &[pair(3, 1, Sign::Minus)])
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.consecutive_pair_entries(), vec![pair(1, 3, Sign::Minus)]);
    }
}
