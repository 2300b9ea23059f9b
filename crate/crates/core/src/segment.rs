//! Zelevinsky segments `[ν^x ρ, ν^y ρ]`.
//!
//! A [`Segment`] is always nonempty. The empty segment is `None` wherever an
//! operation may produce it; in products it is the identity and is dropped.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::symbols::{is_symbol_char, same_rho, CuspidalSymbol, SymbolTable};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    rho: CuspidalSymbol,
    x: HalfInt,
    y: HalfInt,
}

impl Segment {
    /// Builds `[ν^x ρ, ν^y ρ]`; `Ok(None)` when `y - x + 1 <= 0`.
    pub fn new(rho: CuspidalSymbol, x: HalfInt, y: HalfInt) -> Result<Option<Segment>> {
        let diff = y.checked_sub(x)?;
        if !diff.is_integer() {
            return Err(Error::domain(format!(
                "segment endpoints {x} and {y} differ by a non-integer"
            )));
        }
        if y < x {
            return Ok(None);
        }
        Ok(Some(Segment { rho, x, y }))
    }

    /// Like [`Segment::new`] but rejects the empty case.
    pub fn nonempty(rho: CuspidalSymbol, x: HalfInt, y: HalfInt) -> Result<Segment> {
        Segment::new(rho.clone(), x, y)?
            .ok_or_else(|| Error::domain(format!("segment [{rho}^{x}, {rho}^{y}] is empty")))
    }

    /// `[ν^{-b} ρ, ν^c ρ]`, the shape used by segment families.
    pub fn centered(rho: CuspidalSymbol, b: HalfInt, c: HalfInt) -> Result<Segment> {
        Segment::nonempty(rho, b.checked_neg()?, c)
    }

    pub fn rho(&self) -> &CuspidalSymbol {
        &self.rho
    }

    pub fn x(&self) -> HalfInt {
        self.x
    }

    pub fn y(&self) -> HalfInt {
        self.y
    }

    /// Number of cuspidal twists, `y - x + 1`; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u64 {
        ((self.y.doubled() - self.x.doubled()) / 2 + 1) as u64
    }

    /// The exponent center `(x + y)/2`.
    pub fn e_value(&self) -> HalfInt {
        self.x
            .midpoint(self.y)
            .expect("segment endpoints share parity")
    }

    /// `[ν^{-y} ρ~, ν^{-x} ρ~]`.
    pub fn contragredient(&self) -> Segment {
        Segment {
            rho: self.rho.contragredient(),
            x: -self.y,
            y: -self.x,
        }
    }

    pub fn contains(&self, other: &Segment) -> bool {
        same_rho(&self.rho, &other.rho)
            && aligned(self, other)
            && self.x <= other.x
            && other.y <= self.y
    }

    pub fn contains_exponent(&self, rho: &CuspidalSymbol, t: HalfInt) -> bool {
        same_rho(&self.rho, rho) && (t - self.x).is_integer() && self.x <= t && t <= self.y
    }

    /// The twists `ν^x ρ, ..., ν^y ρ` as a multiset.
    pub fn cuspidal_support(&self) -> Support {
        let mut s = Support::new();
        s.add_segment(self);
        s
    }

    /// Total GL rank `m_ρ · len`.
    pub fn rank(&self) -> u64 {
        self.len() * u64::from(self.rho.gl_size())
    }

    /// Parses `[rho^x, rho^y]`.
    pub fn parse(text: &str, symbols: &SymbolTable) -> Result<Segment> {
        let bad = |why: &str| Error::Parse(format!("segment `{text}`: {why}"));
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| bad("expected `[rho^x, rho^y]`"))?;
        let (lo, hi) = inner.split_once(',').ok_or_else(|| bad("missing comma"))?;
        let endpoint = |part: &str| -> Result<(CuspidalSymbol, HalfInt)> {
            let (name, exp) = part
                .trim()
                .split_once('^')
                .ok_or_else(|| bad("missing `^`"))?;
            if name.is_empty() || !name.chars().all(is_symbol_char) {
                return Err(bad("invalid symbol name"));
            }
            Ok((symbols.get(name)?.clone(), exp.parse()?))
        };
        let (rho_lo, x) = endpoint(lo)?;
        let (rho_hi, y) = endpoint(hi)?;
        if !same_rho(&rho_lo, &rho_hi) {
            return Err(bad("endpoints name different symbols"));
        }
        Segment::nonempty(rho_lo, x, y)
    }
}

fn aligned(a: &Segment, b: &Segment) -> bool {
    (a.x - b.x).is_integer()
}

/// `e(Δ)`.
pub fn e_value(s: &Segment) -> HalfInt {
    s.e_value()
}

pub fn contragredient(s: &Segment) -> Segment {
    s.contragredient()
}

/// True iff neither segment contains the other and their union is a segment.
pub fn linked(a: &Segment, b: &Segment) -> bool {
    if !same_rho(&a.rho, &b.rho) || !aligned(a, b) {
        return false;
    }
    if a.contains(b) || b.contains(a) {
        return false;
    }
    // union is an interval: overlapping or adjacent
    let lo = a.x.max(b.x);
    let hi = a.y.min(b.y);
    lo <= hi + HalfInt::ONE
}

/// `(a ∪ b, a ∩ b)` for linked segments; the intersection may be empty.
pub fn union_intersection(a: &Segment, b: &Segment) -> Result<(Segment, Option<Segment>)> {
    if !linked(a, b) {
        return Err(Error::domain(format!(
            "segments {a} and {b} are not linked"
        )));
    }
    let union = Segment {
        rho: a.rho.clone(),
        x: a.x.min(b.x),
        y: a.y.max(b.y),
    };
    let intersection = Segment::new(a.rho.clone(), a.x.max(b.x), a.y.min(b.y))?;
    Ok((union, intersection))
}

/// `δ(a) × δ(b)` is irreducible exactly when the segments are not linked.
pub fn product_irreducible(a: &Segment, b: &Segment) -> bool {
    !linked(a, b)
}

pub fn cuspidal_support(s: Option<&Segment>) -> Support {
    s.map(Segment::cuspidal_support).unwrap_or_default()
}

/// Canonical order: symbol name, then `e` descending, then length descending.
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rho
            .cmp(&other.rho)
            .then_with(|| other.e_value().cmp(&self.e_value()))
            .then_with(|| other.len().cmp(&self.len()))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}^{}, {}^{}]", self.rho, self.x, self.rho, self.y)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A multiset of cuspidal twists `ν^t ρ`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Support {
    counts: BTreeMap<(CuspidalSymbol, HalfInt), u32>,
}

impl Support {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, rho: CuspidalSymbol, t: HalfInt, n: u32) {
        if n > 0 {
            *self.counts.entry((rho, t)).or_insert(0) += n;
        }
    }

    pub fn add_segment(&mut self, s: &Segment) {
        let mut t = s.x;
        while t <= s.y {
            self.add(s.rho.clone(), t, 1);
            t = t + HalfInt::ONE;
        }
    }

    /// Multiset sum.
    pub fn extend(&mut self, other: &Support) {
        for ((rho, t), n) in &other.counts {
            self.add(rho.clone(), *t, *n);
        }
    }

    /// Folds `ν^t ρ` and `ν^{-t} ρ~` together, the identification made by `⋊`.
    pub fn folded(&self) -> Support {
        let mut out = Support::new();
        for ((rho, t), n) in &self.counts {
            if t.is_negative() {
                out.add(rho.contragredient(), -*t, *n);
            } else if t.doubled() == 0 && !rho.is_self_dual() {
                let r = rho.clone().min(rho.contragredient());
                out.add(r, *t, *n);
            } else {
                out.add(rho.clone(), *t, *n);
            }
        }
        out
    }

    pub fn count(&self, rho: &CuspidalSymbol, t: HalfInt) -> u32 {
        self.counts.get(&(rho.clone(), t)).copied().unwrap_or(0)
    }

    /// Number of twists, weighted by `m_ρ`.
    pub fn rank(&self) -> u64 {
        self.counts
            .iter()
            .map(|((rho, _), n)| u64::from(*n) * u64::from(rho.gl_size()))
            .sum()
    }

    pub fn size(&self) -> u64 {
        self.counts.values().map(|&n| u64::from(n)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Multiset inclusion.
    pub fn is_subset(&self, other: &Support) -> bool {
        self.counts
            .iter()
            .all(|((rho, t), n)| other.count(rho, *t) >= *n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CuspidalSymbol, HalfInt, u32)> {
        self.counts.iter().map(|((rho, t), n)| (rho, *t, *n))
    }
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(
                self.counts.iter().flat_map(|((rho, t), n)| {
                    std::iter::repeat_n(format!("{rho}^{t}"), *n as usize)
                }),
            )
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::Parity;
    use proptest::prelude::*;

    fn rho() -> CuspidalSymbol {
        CuspidalSymbol::self_dual("rho", 1, Parity::Integer).unwrap()
    }

    fn rho_half() -> CuspidalSymbol {
        CuspidalSymbol::self_dual("rho", 1, Parity::HalfInteger).unwrap()
    }

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn seg(r: &CuspidalSymbol, x: &str, y: &str) -> Segment {
        Segment::nonempty(r.clone(), h(x), h(y)).unwrap()
    }

    #[test]
    fn e_values() {
        assert_eq!(seg(&rho(), "-1", "2").e_value(), h("1/2"));
        assert_eq!(seg(&rho_half(), "1/2", "5/2").e_value(), h("3/2"));
        assert_eq!(seg(&rho(), "0", "0").e_value(), h("0"));
    }

    #[test]
    fn empty_and_malformed_segments() {
        assert_eq!(Segment::new(rho(), h("1"), h("0")).unwrap(), None);
        assert_eq!(Segment::new(rho(), h("3"), h("0")).unwrap(), None);
        assert!(Segment::new(rho(), h("0"), h("1/2")).is_err());
        assert!(Segment::nonempty(rho(), h("1"), h("0")).is_err());
        assert_eq!(cuspidal_support(None), Support::new());
    }

    #[test]
    fn contragredient_matches_definition() {
        let s = seg(&rho(), "-1", "2");
        assert_eq!(s.contragredient(), seg(&rho(), "-2", "1"));
        assert_eq!(s.contragredient().contragredient(), s);
        let empty: Option<Segment> = Segment::new(rho(), h("2"), h("1")).unwrap();
        assert_eq!(empty.map(|s| s.contragredient()), None);

        let pi = CuspidalSymbol::with_contragredient("pi", "piv", 2).unwrap();
        let t = seg(&pi, "0", "1");
        assert_eq!(t.contragredient().rho().name(), "piv");
        assert_eq!(t.contragredient().contragredient(), t);
    }

    #[test]
    fn linkage() {
        let r = rho();
        assert!(linked(&seg(&r, "0", "1"), &seg(&r, "1", "2")));
        assert!(!linked(&seg(&r, "0", "3"), &seg(&r, "1", "2")));
        let other = CuspidalSymbol::self_dual("rho'", 1, Parity::Integer).unwrap();
        assert!(!linked(&seg(&r, "0", "1"), &seg(&other, "0", "1")));
        // adjacent segments are linked
        assert!(linked(&seg(&r, "-1", "0"), &seg(&r, "1", "2")));
        // a gap breaks linkage
        assert!(!linked(&seg(&r, "-1", "0"), &seg(&r, "2", "3")));
        // misaligned exponents never link
        let rh = rho_half();
        let a = seg(&r, "0", "1");
        let b = Segment::nonempty(rh, h("1/2"), h("3/2")).unwrap();
        assert!(!linked(&a, &b));
    }

    #[test]
    fn unions_and_intersections() {
        let r = rho();
        assert_eq!(
            union_intersection(&seg(&r, "0", "1"), &seg(&r, "1", "2")).unwrap(),
            (seg(&r, "0", "2"), Some(seg(&r, "1", "1")))
        );
        assert_eq!(
            union_intersection(&seg(&r, "-1", "0"), &seg(&r, "1", "2")).unwrap(),
            (seg(&r, "-1", "2"), None)
        );
        let rh = rho_half();
        assert_eq!(
            union_intersection(&seg(&rh, "1/2", "3/2"), &seg(&rh, "3/2", "5/2")).unwrap(),
            (seg(&rh, "1/2", "5/2"), Some(seg(&rh, "3/2", "3/2")))
        );
        assert!(union_intersection(&seg(&r, "0", "3"), &seg(&r, "1", "2")).is_err());
    }

    #[test]
    fn irreducibility() {
        let r = rho();
        assert!(product_irreducible(&seg(&r, "0", "3"), &seg(&r, "1", "2")));
        assert!(!product_irreducible(&seg(&r, "0", "1"), &seg(&r, "1", "2")));
        let d = seg(&r, "-2", "5");
        assert!(product_irreducible(&d, &d));
    }

    #[test]
    fn supports() {
        let r = rho();
        let s = seg(&r, "0", "2").cuspidal_support();
        assert_eq!(s.size(), 3);
        for t in ["0", "1", "2"] {
            assert_eq!(s.count(&r, h(t)), 1);
        }
        let rh = rho_half();
        let single = seg(&rh, "1/2", "1/2").cuspidal_support();
        assert_eq!(single.size(), 1);
        assert_eq!(single.count(&rh, h("1/2")), 1);
    }

    #[test]
    fn text_round_trip() {
        let mut table = SymbolTable::new();
        table.insert(rho_half()).unwrap();
        let s = seg(&rho_half(), "-3/2", "5/2");
        assert_eq!(s.to_string(), "[rho^-3/2, rho^5/2]");
        assert_eq!(Segment::parse(&s.to_string(), &table).unwrap(), s);
        assert!(Segment::parse("[rho^1/2, sigma^3/2]", &table).is_err());
        assert!(Segment::parse("rho^1/2, rho^3/2", &table).is_err());
        assert!(Segment::parse("[rho^5/2, rho^1/2]", &table).is_err());
    }

    fn arb_segment() -> impl Strategy<Value = Segment> {
        (prop::bool::ANY, -6i64..6, 0i64..6).prop_map(|(half, lo, len)| {
            let r = if half { rho_half() } else { rho() };
            let x = HalfInt::from_doubled(2 * lo + i64::from(half));
            Segment::nonempty(r, x, x + HalfInt::from_int(len)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn linked_is_symmetric(a in arb_segment(), b in arb_segment()) {
            prop_assert_eq!(linked(&a, &b), linked(&b, &a));
            prop_assert_eq!(product_irreducible(&a, &b), product_irreducible(&b, &a));
            if linked(&a, &b) {
                prop_assert!(same_rho(a.rho(), b.rho()));
            }
        }

        #[test]
        fn union_intersection_preserves_support(a in arb_segment(), b in arb_segment()) {
            if linked(&a, &b) {
                let (u, i) = union_intersection(&a, &b).unwrap();
                let mut lhs = a.cuspidal_support();
                lhs.extend(&b.cuspidal_support());
                let mut rhs = u.cuspidal_support();
                rhs.extend(&cuspidal_support(i.as_ref()));
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn contragredient_negates_e(a in arb_segment()) {
            prop_assert_eq!(a.contragredient().e_value(), -a.e_value());
            prop_assert_eq!(a.contragredient().contragredient(), a);
        }
    }
}
