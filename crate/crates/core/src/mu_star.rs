//! The structure formula for `μ*` of induced representations.
//!
//! For `Δ = [ν^x ρ, ν^y ρ]` and `μ*(σ) = Σ δ' ⊗ σ'`,
//!
//! ```text
//! μ*(δ(Δ) ⋊ σ) = Σ_{0≤j≤i≤y-x+1} Σ δ([ν^{i-y} ρ~, ν^{-x} ρ~]) × δ([ν^{y+1-j} ρ, ν^y ρ]) × δ'
//!                                 ⊗ δ([ν^{y+1-i} ρ, ν^{y-j} ρ]) ⋊ σ'
//! ```

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grothendieck::{FormalSum, InducedTerm, JacquetTerm};
use crate::halfint::HalfInt;
use crate::segment::Segment;
use crate::symbols::CuspidalLabel;
use crate::triples::{sp_embedding, StronglyPositiveDescriptor};

/// The three factors produced by one index pair `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexTerm {
    pub i: u64,
    pub j: u64,
    /// `[ν^{i-y} ρ~, ν^{-x} ρ~]`
    pub lower: Option<Segment>,
    /// `[ν^{y+1-j} ρ, ν^y ρ]`
    pub upper: Option<Segment>,
    /// `[ν^{y+1-i} ρ, ν^{y-j} ρ]`
    pub classical: Option<Segment>,
}

fn int(n: u64) -> HalfInt {
    HalfInt::from_int(i64::try_from(n).expect("segment length fits i64"))
}

/// Factors of the `(i, j)` summand for `seg`.
pub fn index_term(seg: &Segment, i: u64, j: u64) -> IndexTerm {
    assert!(j <= i && i <= seg.len(), "index pair out of range");
    let (x, y) = (seg.x(), seg.y());
    let rho = seg.rho();
    let top = y + HalfInt::ONE;
    let lower = Segment::new(rho.contragredient(), int(i) - y, -x).expect("aligned");
    let upper = Segment::new(rho.clone(), top - int(j), y).expect("aligned");
    let classical = Segment::new(rho.clone(), top - int(i), y - int(j)).expect("aligned");
    IndexTerm {
        i,
        j,
        lower,
        upper,
        classical,
    }
}

/// All `(i, j)` summands for `seg`, ordered by `i` then `j`.
pub fn index_terms(seg: &Segment) -> Vec<IndexTerm> {
    let n = seg.len();
    let mut out = Vec::with_capacity(((n + 1) * (n + 2) / 2) as usize);
    for i in 0..=n {
        for j in 0..=i {
            out.push(index_term(seg, i, j));
        }
    }
    out
}

/// Number of index pairs `0 ≤ j ≤ i ≤ len`.
pub fn index_pair_count(len: u64) -> u64 {
    (len + 1) * (len + 2) / 2
}

fn apply(term: &IndexTerm, base: &JacquetTerm) -> JacquetTerm {
    let mut gl = base.gl_part.clone();
    gl.extend_options([term.lower.clone(), term.upper.clone()]);
    let classical = match &term.classical {
        Some(s) => base.classical_part.induce(s.clone()),
        None => base.classical_part.clone(),
    };
    JacquetTerm::new(gl, classical)
}

/// `μ*(δ(seg) ⋊ σ)` from `base = μ*(σ)`.
pub fn expand_segment(seg: &Segment, base: &FormalSum<JacquetTerm>) -> FormalSum<JacquetTerm> {
    expand_with(seg, base, |_| true)
}

fn expand_with(
    seg: &Segment,
    base: &FormalSum<JacquetTerm>,
    keep: impl Fn(&IndexTerm) -> bool,
) -> FormalSum<JacquetTerm> {
    let terms: Vec<IndexTerm> = index_terms(seg).into_iter().filter(|t| keep(t)).collect();
    let mut out = FormalSum::zero();
    for (b, c) in base.iter() {
        for t in &terms {
            out.add_term(apply(t, b), c.clone());
        }
    }
    out
}

/// A `μ*` expansion together with the representation it expands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuStarExpansion {
    pub sum: FormalSum<JacquetTerm>,
    pub source: InducedTerm,
}

impl MuStarExpansion {
    /// `{1 ⊗ σ_anchor : 1}`.
    pub fn cuspidal(anchor: CuspidalLabel) -> Self {
        let source = InducedTerm::cuspidal(anchor);
        MuStarExpansion {
            sum: FormalSum::single(JacquetTerm::trivial(source.clone())),
            source,
        }
    }

    /// Coefficient of `1 ⊗ source`.
    pub fn source_coefficient(&self) -> BigInt {
        self.sum
            .coefficient(&JacquetTerm::trivial(self.source.clone()))
    }

    /// Every term has GL rank plus classical rank equal to the rank of the source.
    pub fn graded_consistent(&self) -> bool {
        let total = self.source.rank();
        self.sum
            .terms()
            .all(|t| t.gl_part.rank() + t.classical_part.rank() == total)
    }

    /// Further induction by `seg` on the left.
    pub fn induce(&self, seg: &Segment) -> Self {
        MuStarExpansion {
            sum: expand_segment(seg, &self.sum),
            source: self.source.induce(seg.clone()),
        }
    }
}

impl fmt::Display for MuStarExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "μ*({})", self.source)?;
        for (t, c) in self.sum.iter() {
            writeln!(f, "  {c:>4}  {t}")?;
        }
        Ok(())
    }
}

/// `μ*(δ(Δ_1) × ⋯ × δ(Δ_k) ⋊ σ_anchor)`, expanded from the innermost
/// segment `Δ_k` outwards.
pub fn mu_star_induced(family: &[Segment], anchor: CuspidalLabel) -> MuStarExpansion {
    mu_star_over(family, MuStarExpansion::cuspidal(anchor))
}

/// `μ*(δ(Δ_1) × ⋯ × δ(Δ_k) ⋊ σ)` given `μ*(σ)`.
pub fn mu_star_over(family: &[Segment], base: MuStarExpansion) -> MuStarExpansion {
    family.iter().rev().fold(base, |acc, s| acc.induce(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    Raw,
    PositiveFiltered,
}

impl FilterMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterMode::Raw => "raw",
            FilterMode::PositiveFiltered => "positive-filtered",
        }
    }
}

/// True when every exponent in the GL part is positive.
pub fn is_positive_term(t: &JacquetTerm) -> bool {
    t.gl_part.segments().iter().all(|s| s.x().is_positive())
}

/// `μ*` of the standard module containing `σ_sp`, optionally keeping only
/// terms with positive GL exponents.
///
/// In filtered mode every kept term must come from the index choice
/// `i = y - x + 1` for each embedding segment; this is checked.
pub fn sp_upper_mu_star(
    sp: &StronglyPositiveDescriptor,
    mode: FilterMode,
) -> Result<MuStarExpansion> {
    let (segments, cusp) = sp_embedding(sp);
    let raw = mu_star_induced(&segments, cusp.clone());
    if mode == FilterMode::Raw {
        return Ok(raw);
    }
    let mut filtered = raw.sum.clone();
    filtered.retain(is_positive_term);

    let forced = segments
        .iter()
        .rev()
        .fold(MuStarExpansion::cuspidal(cusp).sum, |acc, s| {
            expand_with(s, &acc, |t| t.i == s.len())
        });
    if forced != filtered {
        return Err(Error::InvariantViolation(
            "positive terms of the strongly positive embedding do not all have i = y - x + 1"
                .into(),
        ));
    }
    Ok(MuStarExpansion {
        sum: filtered,
        source: raw.source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grothendieck::Multisegment;
    use crate::halfint::Parity;
    use crate::symbols::CuspidalSymbol;
    use num_traits::One;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn rho() -> CuspidalSymbol {
        CuspidalSymbol::self_dual("rho", 1, Parity::Integer).unwrap()
    }

    fn sigma() -> CuspidalLabel {
        CuspidalLabel::new("sigma").unwrap()
    }

    fn seg(x: &str, y: &str) -> Segment {
        Segment::nonempty(rho(), h(x), h(y)).unwrap()
    }

    fn jt(gl: &[Segment], cl: &[Segment]) -> JacquetTerm {
        JacquetTerm::new(
            Multisegment::from_segments(gl.iter().cloned()),
            InducedTerm::new(cl.iter().cloned(), sigma()),
        )
    }

    #[test]
    fn single_point_segment_by_hand() {
        // Δ = [ν^0 ρ, ν^0 ρ]: (i,j) = (0,0), (1,0), (1,1).
        let d = seg("0", "0");
        let terms = index_terms(&d);
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[0].lower, Some(seg("0", "0")));
        assert_eq!(
            (terms[0].upper.clone(), terms[0].classical.clone()),
            (None, None)
        );
        assert_eq!(terms[1].classical, Some(seg("0", "0")));
        assert_eq!(
            (terms[1].lower.clone(), terms[1].upper.clone()),
            (None, None)
        );
        assert_eq!(terms[2].upper, Some(seg("0", "0")));
        assert_eq!(
            (terms[2].lower.clone(), terms[2].classical.clone()),
            (None, None)
        );

        let e = mu_star_induced(std::slice::from_ref(&d), sigma());
        // (0,0) and (1,1) give the same term δ([ν^0 ρ]) ⊗ σ.
        let mut expected = FormalSum::zero();
        expected.add_term(jt(std::slice::from_ref(&d), &[]), BigInt::from(2));
        expected.add_term(jt(&[], &[d]), BigInt::one());
        assert_eq!(e.sum, expected);
    }

    #[test]
    fn two_point_segment_by_hand() {
        // Δ = [ν^1 ρ, ν^2 ρ]
        let d = seg("1", "2");
        let e = mu_star_induced(std::slice::from_ref(&d), sigma());
        let mut expected = FormalSum::zero();
        for (gl, cl) in [
            (vec![seg("-2", "-1")], vec![]),
            (vec![seg("-1", "-1")], vec![seg("2", "2")]),
            (vec![seg("-1", "-1"), seg("2", "2")], vec![]),
            (vec![], vec![seg("1", "2")]),
            (vec![seg("2", "2")], vec![seg("1", "1")]),
            (vec![seg("1", "2")], vec![]),
        ] {
            expected.add_term(jt(&gl, &cl), BigInt::one());
        }
        assert_eq!(e.sum, expected);
    }

    #[test]
    fn pair_count_is_triangular() {
        for n in 0..8u64 {
            let d = Segment::nonempty(rho(), HalfInt::ZERO, HalfInt::from_int(n as i64)).unwrap();
            let mut brute = 0;
            for i in 0..=n + 1 {
                for _ in 0..=i {
                    brute += 1;
                }
            }
            assert_eq!(index_terms(&d).len() as u64, brute);
            assert_eq!(index_pair_count(n + 1), (n + 2) * (n + 3) / 2);
        }
    }

    #[test]
    fn zero_indices_give_full_contragredient() {
        let d = seg("-1", "3");
        let t = index_term(&d, 0, 0);
        assert_eq!(t.lower, Some(d.contragredient()));
        assert_eq!((t.upper, t.classical), (None, None));
    }

    #[test]
    fn sp_filter_keeps_forced_terms() {
        let r = rho();
        let ctx =
            crate::triples::CuspContext::new(sigma(), BTreeMap::from([(r.clone(), [1].into())]))
                .unwrap();
        let t = crate::triples::AdmissibleTriple::from_entries(
            ctx,
            [crate::triples::JordanBlock::new(r, 5).unwrap()],
            &[],
            &[],
        )
        .unwrap();
        let sp = crate::triples::is_alternated(&t).into_result().unwrap();
        let raw = sp_upper_mu_star(&sp, FilterMode::Raw).unwrap();
        let pos = sp_upper_mu_star(&sp, FilterMode::PositiveFiltered).unwrap();
        assert!(pos.sum.leq(&raw.sum));
        assert_eq!(pos.source_coefficient(), BigInt::one());
        // [ν^1, ν^2] ⋊ σ: positive terms are j = 0, 1, 2 with i = 2
        assert_eq!(pos.sum.len(), 3);
        assert_eq!(raw.sum.len(), 6);
    }

    #[test]
    fn fixed_point_sp_is_cuspidal() {
        let r = rho();
        let ctx =
            crate::triples::CuspContext::new(sigma(), BTreeMap::from([(r.clone(), [3].into())]))
                .unwrap();
        let t = crate::triples::AdmissibleTriple::from_entries(
            ctx,
            [crate::triples::JordanBlock::new(r, 3).unwrap()],
            &[],
            &[],
        )
        .unwrap();
        let sp = crate::triples::is_alternated(&t).into_result().unwrap();
        let pos = sp_upper_mu_star(&sp, FilterMode::PositiveFiltered).unwrap();
        assert_eq!(
            pos.sum,
            FormalSum::single(JacquetTerm::trivial(InducedTerm::cuspidal(sigma())))
        );
    }

    fn arb_segment() -> impl Strategy<Value = Segment> {
        (-8i64..8, 0i64..5, any::<bool>()).prop_map(|(x2, len, half)| {
            let x = if half {
                HalfInt::from_doubled(2 * x2 + 1)
            } else {
                HalfInt::from_int(x2)
            };
            Segment::nonempty(rho(), x, x + HalfInt::from_int(len)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn contragredient_gives_same_expansion(s in arb_segment()) {
            let a = mu_star_induced(std::slice::from_ref(&s), sigma());
            let b = mu_star_induced(&[s.contragredient()], sigma());
            prop_assert_eq!(&a.sum, &b.sum);
            prop_assert_eq!(a.source_coefficient(), BigInt::one());
            prop_assert!(a.graded_consistent());
        }
    }
}
