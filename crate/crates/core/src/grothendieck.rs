//! Formal `ℤ`-linear sums over standard basis terms.
//!
//! GL-side terms are multisegments (products of `δ(Δ)`); classical-side terms
//! are induced representations `∏ δ(Δ) ⋊ σ` kept in a canonical form in which
//! every segment has been replaced by its contragredient whenever `e(Δ) < 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::segment::{Segment, Support};
use crate::symbols::{CuspidalLabel, SymbolTable};

/// A finite multiset of nonempty segments in canonical order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multisegment {
    segments: Vec<Segment>,
}

impl Multisegment {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_segments<I: IntoIterator<Item = Segment>>(segments: I) -> Self {
        let mut segments: Vec<Segment> = segments.into_iter().collect();
        segments.sort();
        Multisegment { segments }
    }

    /// Collects possibly-empty segments, dropping the empty ones.
    pub fn from_options<I: IntoIterator<Item = Option<Segment>>>(segments: I) -> Self {
        Self::from_segments(segments.into_iter().flatten())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    /// Adds the nonempty segments among `segments`.
    pub fn extend_options<I: IntoIterator<Item = Option<Segment>>>(&mut self, segments: I) {
        for s in segments.into_iter().flatten() {
            self.push(s);
        }
    }

    pub fn push(&mut self, s: Segment) {
        let pos = self.segments.partition_point(|t| t <= &s);
        self.segments.insert(pos, s);
    }

    pub fn support(&self) -> Support {
        support_of(self)
    }

    /// Total GL rank of the product.
    pub fn rank(&self) -> u64 {
        self.segments.iter().map(Segment::rank).sum()
    }

    /// Segments ordered by `e` descending, the order used for standard modules.
    pub fn standard_order(&self) -> Vec<Segment> {
        let mut v = self.segments.clone();
        v.sort_by(|a, b| {
            b.e_value()
                .cmp(&a.e_value())
                .then_with(|| a.rho().cmp(b.rho()))
                .then_with(|| b.len().cmp(&a.len()))
        });
        v
    }

    /// Parses `1` or `[..] × [..] × ...`.
    pub fn parse(text: &str, symbols: &SymbolTable) -> Result<Self> {
        let text = text.trim();
        if text == "1" {
            return Ok(Self::empty());
        }
        text.split('×')
            .map(|part| Segment::parse(part, symbols))
            .collect::<Result<Vec<_>>>()
            .map(Self::from_segments)
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            return f.write_str("1");
        }
        for (k, s) in self.segments.iter().enumerate() {
            if k > 0 {
                f.write_str(" × ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product in the standard basis of `R(GL)`: multiset union.
pub fn gl_multiply(a: &Multisegment, b: &Multisegment) -> Multisegment {
    Multisegment::from_segments(a.segments.iter().chain(&b.segments).cloned())
}

pub fn support_of(m: &Multisegment) -> Support {
    let mut s = Support::new();
    for seg in &m.segments {
        s.add_segment(seg);
    }
    s
}

/// Representative of `{Δ, Δ~}` used on the classical side.
pub fn canonical_classical_segment(s: Segment) -> Segment {
    let e = s.e_value();
    if e.is_negative() {
        s.contragredient()
    } else if e.doubled() == 0 && !s.rho().is_self_dual() {
        let dual = s.contragredient();
        s.min(dual)
    } else {
        s
    }
}

/// The class of `(∏ δ(Δ)) ⋊ σ_anchor`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InducedTerm {
    gl: Multisegment,
    anchor: CuspidalLabel,
}

impl InducedTerm {
    pub fn new<I: IntoIterator<Item = Segment>>(segments: I, anchor: CuspidalLabel) -> Self {
        InducedTerm {
            gl: Multisegment::from_segments(segments.into_iter().map(canonical_classical_segment)),
            anchor,
        }
    }

    pub fn cuspidal(anchor: CuspidalLabel) -> Self {
        InducedTerm {
            gl: Multisegment::empty(),
            anchor,
        }
    }

    pub fn gl(&self) -> &Multisegment {
        &self.gl
    }

    pub fn anchor(&self) -> &CuspidalLabel {
        &self.anchor
    }

    /// `δ(Δ) ⋊ self`.
    pub fn induce(&self, s: Segment) -> InducedTerm {
        let mut gl = self.gl.clone();
        gl.push(canonical_classical_segment(s));
        InducedTerm {
            gl,
            anchor: self.anchor.clone(),
        }
    }

    /// Cuspidal support of the GL part with `ν^t ρ ~ ν^{-t} ρ~` identified.
    pub fn folded_support(&self) -> Support {
        self.gl.support().folded()
    }

    pub fn rank(&self) -> u64 {
        self.gl.rank()
    }

    pub fn parse(text: &str, symbols: &SymbolTable) -> Result<Self> {
        let text = text.trim();
        let (gl, anchor) = match text.rsplit_once('⋊') {
            Some((gl, anchor)) => (Multisegment::parse(gl, symbols)?, anchor),
            None => (Multisegment::empty(), text),
        };
        let anchor = CuspidalLabel::new(anchor.trim())?;
        Ok(InducedTerm::new(gl.segments, anchor))
    }
}

impl fmt::Display for InducedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gl.is_empty() {
            write!(f, "{}", self.anchor)
        } else {
            write!(f, "{} ⋊ {}", self.gl, self.anchor)
        }
    }
}

impl fmt::Debug for InducedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A standard term `δ' ⊗ σ'` of a Jacquet module.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JacquetTerm {
    pub gl_part: Multisegment,
    pub classical_part: InducedTerm,
}

impl JacquetTerm {
    pub fn new(gl_part: Multisegment, classical_part: InducedTerm) -> Self {
        JacquetTerm {
            gl_part,
            classical_part,
        }
    }

    /// `1 ⊗ σ`.
    pub fn trivial(classical_part: InducedTerm) -> Self {
        JacquetTerm::new(Multisegment::empty(), classical_part)
    }

    pub fn parse(text: &str, symbols: &SymbolTable) -> Result<Self> {
        let (gl, cl) = text
            .split_once('⊗')
            .ok_or_else(|| Error::Parse(format!("jacquet term `{text}`: missing `⊗`")))?;
        Ok(JacquetTerm::new(
            Multisegment::parse(gl, symbols)?,
            InducedTerm::parse(cl, symbols)?,
        ))
    }
}

impl fmt::Display for JacquetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.gl_part, self.classical_part)
    }
}

impl fmt::Debug for JacquetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Σ c_t · t` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalSum<B: Ord> {
    coeffs: BTreeMap<B, BigInt>,
}

impl<B: Ord> Default for FormalSum<B> {
    fn default() -> Self {
        FormalSum {
            coeffs: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone> FormalSum<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(term: B) -> Self {
        let mut s = Self::zero();
        s.add_term(term, BigInt::from(1));
        s
    }

    pub fn add_term(&mut self, term: B, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(term) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_sum(&mut self, other: &FormalSum<B>) {
        for (t, c) in &other.coeffs {
            self.add_term(t.clone(), c.clone());
        }
    }

    pub fn scaled(&self, k: &BigInt) -> FormalSum<B> {
        let mut out = Self::zero();
        if k.is_zero() {
            return out;
        }
        for (t, c) in &self.coeffs {
            out.coeffs.insert(t.clone(), c * k);
        }
        out
    }

    pub fn coefficient(&self, term: &B) -> BigInt {
        self.coeffs.get(term).cloned().unwrap_or_default()
    }

    /// `self ≤ other`: `other - self` has nonnegative coefficients.
    pub fn leq(&self, other: &FormalSum<B>) -> bool {
        let mut diff = other.clone();
        diff.add_sum(&self.scaled(&BigInt::from(-1)));
        diff.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = &B> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn total_coefficient(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&B) -> bool) {
        self.coeffs.retain(|t, _| keep(t));
    }
}

impl<B: Ord + Clone> FromIterator<(B, BigInt)> for FormalSum<B> {
    fn from_iter<I: IntoIterator<Item = (B, BigInt)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (t, c) in iter {
            s.add_term(t, c);
        }
        s
    }
}

pub fn sum_add<B: Ord + Clone>(a: &FormalSum<B>, b: &FormalSum<B>) -> FormalSum<B> {
    let mut out = a.clone();
    out.add_sum(b);
    out
}

pub fn sum_leq<B: Ord + Clone>(a: &FormalSum<B>, b: &FormalSum<B>) -> bool {
    a.leq(b)
}

impl<B: Ord + fmt::Display> fmt::Display for FormalSum<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (k, (t, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if *c == BigInt::from(1) {
                write!(f, "{t}")?;
            } else {
                write!(f, "{c}·({t})")?;
            }
        }
        Ok(())
    }
}

impl<B: Ord + fmt::Debug> fmt::Debug for FormalSum<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::{HalfInt, Parity};
    use crate::symbols::CuspidalSymbol;
    use proptest::prelude::*;

    fn rho() -> CuspidalSymbol {
        CuspidalSymbol::self_dual("rho", 1, Parity::Integer).unwrap()
    }

    fn rho_h() -> CuspidalSymbol {
        CuspidalSymbol::self_dual("rho", 1, Parity::HalfInteger).unwrap()
    }

    fn seg(x: i64, y: i64) -> Segment {
        Segment::nonempty(rho(), HalfInt::from_int(x), HalfInt::from_int(y)).unwrap()
    }

    #[test]
    fn multiplication_basics() {
        let a = Multisegment::from_segments([seg(0, 1)]);
        let b = Multisegment::from_segments([seg(-1, 2)]);
        assert_eq!(gl_multiply(&a, &b).len(), 2);
        assert_eq!(gl_multiply(&Multisegment::empty(), &b), b);
        assert_eq!(gl_multiply(&b, &b).segments(), &[seg(-1, 2), seg(-1, 2)]);
    }

    #[test]
    fn supports_of_multisegments() {
        let m = Multisegment::from_segments([seg(0, 1), seg(1, 1)]);
        let s = support_of(&m);
        assert_eq!(s.count(&rho(), HalfInt::from_int(0)), 1);
        assert_eq!(s.count(&rho(), HalfInt::from_int(1)), 2);
        assert!(support_of(&Multisegment::empty()).is_empty());
        let half = Segment::nonempty(rho_h(), HalfInt::from_doubled(-1), HalfInt::from_doubled(1))
            .unwrap();
        let s = support_of(&Multisegment::from_segments([half]));
        assert_eq!(s.size(), 2);
        assert_eq!(s.count(&rho_h(), HalfInt::from_doubled(-1)), 1);
    }

    #[test]
    fn formal_sum_order_and_addition() {
        let t = Multisegment::from_segments([seg(0, 1)]);
        let u = Multisegment::from_segments([seg(1, 2)]);
        let a: FormalSum<Multisegment> = FormalSum::single(t.clone());
        let b: FormalSum<Multisegment> = [(t.clone(), BigInt::from(2)), (u, BigInt::from(1))]
            .into_iter()
            .collect();
        assert_eq!(sum_add(&a, &FormalSum::zero()), a);
        assert!(sum_leq(&a, &a));
        assert!(sum_leq(&a, &b));
        assert!(!sum_leq(&b, &a));
        let mut c = a.clone();
        c.add_term(t, BigInt::from(-1));
        assert!(c.is_zero());
    }

    #[test]
    fn induced_terms_identify_contragredients() {
        let anchor = CuspidalLabel::new("sigma").unwrap();
        let a = InducedTerm::new([seg(-2, 1)], anchor.clone());
        let b = InducedTerm::new([seg(-1, 2)], anchor.clone());
        assert_eq!(a, b);
        assert_eq!(a.gl().segments(), &[seg(-1, 2)]);

        let pi = CuspidalSymbol::with_contragredient("pi", "piv", 1).unwrap();
        let s = Segment::nonempty(pi, HalfInt::from_int(-1), HalfInt::from_int(1)).unwrap();
        let c = InducedTerm::new([s.clone()], anchor.clone());
        let d = InducedTerm::new([s.contragredient()], anchor);
        assert_eq!(c, d);
    }

    #[test]
    fn text_forms_parse_back() {
        let mut table = SymbolTable::new();
        table.insert(rho()).unwrap();
        let anchor = CuspidalLabel::new("sigma").unwrap();
        let term = JacquetTerm::new(
            Multisegment::from_segments([seg(0, 1), seg(-3, 2)]),
            InducedTerm::new([seg(1, 4)], anchor.clone()),
        );
        let text = term.to_string();
        assert_eq!(JacquetTerm::parse(&text, &table).unwrap(), term);
        let trivial = JacquetTerm::trivial(InducedTerm::cuspidal(anchor));
        assert_eq!(trivial.to_string(), "1 ⊗ sigma");
        assert_eq!(JacquetTerm::parse("1 ⊗ sigma", &table).unwrap(), trivial);
    }

    fn arb_multiseg() -> impl Strategy<Value = Multisegment> {
        prop::collection::vec((-4i64..4, 0i64..4), 0..4)
            .prop_map(|v| Multisegment::from_segments(v.into_iter().map(|(x, l)| seg(x, x + l))))
    }

    proptest! {
        #[test]
        fn gl_product_is_commutative_monoid(a in arb_multiseg(), b in arb_multiseg(), c in arb_multiseg()) {
            prop_assert_eq!(gl_multiply(&gl_multiply(&a, &b), &c), gl_multiply(&a, &gl_multiply(&b, &c)));
            prop_assert_eq!(gl_multiply(&a, &b), gl_multiply(&b, &a));
            prop_assert_eq!(gl_multiply(&a, &Multisegment::empty()), a.clone());
            let mut s = support_of(&a);
            s.extend(&support_of(&b));
            prop_assert_eq!(support_of(&gl_multiply(&a, &b)), s);
        }

        #[test]
        fn induced_canonicalization_is_idempotent(a in arb_multiseg(), flips in prop::collection::vec(any::<bool>(), 4)) {
            let anchor = CuspidalLabel::new("sigma").unwrap();
            let t = InducedTerm::new(a.segments().iter().cloned(), anchor.clone());
            let again = InducedTerm::new(t.gl().segments().iter().cloned(), anchor.clone());
            prop_assert_eq!(&t, &again);
            let flipped = InducedTerm::new(
                a.segments().iter().zip(flips.iter().cycle()).map(|(s, &f)| if f { s.contragredient() } else { s.clone() }),
                anchor,
            );
            prop_assert_eq!(t, flipped);
        }
    }
}
