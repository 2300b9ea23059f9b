//! Composition series of `∏_{i∈S} δ(Δ_i) ⋊ σ` and family normalization.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::grothendieck::Multisegment;
use crate::segment::{linked, union_intersection, Segment};
use crate::triples::{
    enumerate_extensions, validate_family, AdmissibleTriple, Extension, FamilyEntry,
    StronglyPositiveDescriptor,
};

/// A strongly positive discrete series with a validated family split into
/// the induced part `S` and the part `Y` already absorbed into `σ`.
#[derive(Clone, Debug)]
pub struct Setting {
    sp: StronglyPositiveDescriptor,
    family: Vec<FamilyEntry>,
    s: Vec<usize>,
    y: Vec<usize>,
}

impl Setting {
    pub fn new(
        sp: StronglyPositiveDescriptor,
        family: Vec<FamilyEntry>,
        s: Vec<usize>,
        y: Vec<usize>,
    ) -> Result<Self> {
        validate_family(&family, &sp).into_result()?;
        let mut seen = BTreeSet::new();
        for &i in s.iter().chain(&y) {
            if i >= family.len() {
                return Err(Error::domain(format!("index {i} is outside the family")));
            }
            if !seen.insert(i) {
                return Err(Error::domain(format!("index {i} appears twice in S ∪ Y")));
            }
        }
        if s.len() >= 32 {
            return Err(Error::domain("S is limited to 31 segments"));
        }
        Ok(Setting { sp, family, s, y })
    }

    pub fn sp(&self) -> &StronglyPositiveDescriptor {
        &self.sp
    }

    pub fn family(&self) -> &[FamilyEntry] {
        &self.family
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn entries(&self, indices: &[usize]) -> Vec<(usize, FamilyEntry)> {
        indices
            .iter()
            .map(|&i| (i, self.family[i].clone()))
            .collect()
    }

    pub fn segment(&self, i: usize) -> Segment {
        self.family[i].segment()
    }

    /// Number of entries in `indices` with `-b ≠ 1/2`.
    pub fn l_prime(&self, indices: &[usize]) -> u32 {
        indices
            .iter()
            .filter(|&&i| !self.family[i].is_half_edge())
            .count() as u32
    }

    /// The discrete series `σ ↪ ∏_{i∈Y} δ(Δ_i) ⋊ σ_sp`.
    pub fn sigma_candidates(&self) -> Result<Vec<Extension>> {
        enumerate_extensions(self.sp.triple(), &self.entries(&self.y))
    }

    /// Checks that `sigma` is one of [`Setting::sigma_candidates`].
    pub fn check_sigma(&self, sigma: &AdmissibleTriple) -> Result<()> {
        if self.sigma_candidates()?.iter().any(|e| &e.triple == sigma) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{sigma} is not an extension of the strongly positive triple by Y"
            )))
        }
    }
}

/// `Lang(∏ δ(Δ) ⋊ σ')` with the segments in `e`-descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanglandsLabel {
    pub x_segments: Multisegment,
    pub sigma_prime: AdmissibleTriple,
}

impl LanglandsLabel {
    pub fn new(
        segments: impl IntoIterator<Item = Segment>,
        sigma_prime: AdmissibleTriple,
    ) -> Result<Self> {
        let x_segments = Multisegment::from_segments(segments);
        if let Some(s) = x_segments
            .segments()
            .iter()
            .find(|s| !s.e_value().is_positive())
        {
            return Err(Error::domain(format!("segment {s} has e ≤ 0")));
        }
        Ok(LanglandsLabel {
            x_segments,
            sigma_prime,
        })
    }
}

impl fmt::Display for LanglandsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x_segments.is_empty() {
            return write!(f, "{}", self.sigma_prime);
        }
        f.write_str("L(")?;
        for s in self.x_segments.standard_order() {
            write!(f, "δ({s}) × ")?;
        }
        write!(f, "{})", self.sigma_prime)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constituent {
    /// Family indices whose segments appear in the Langlands data.
    pub x: Vec<usize>,
    pub extension: Extension,
    pub label: LanglandsLabel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub subreps: usize,
    pub total_length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub constituents: Vec<Constituent>,
    /// `layers[l]` lists indices into `constituents` with `l` = layer number.
    pub layers: Vec<Vec<usize>>,
    pub counts: Counts,
}

impl DecompositionResult {
    fn build(
        constituents: Vec<Constituent>,
        layer_of: Vec<usize>,
        n_layers: usize,
    ) -> Result<Self> {
        let mut layers = vec![Vec::new(); n_layers];
        for (c, &l) in layer_of.iter().enumerate() {
            layers[l].push(c);
        }
        let distinct: BTreeSet<&LanglandsLabel> = constituents.iter().map(|c| &c.label).collect();
        if distinct.len() != constituents.len() {
            return Err(Error::InvariantViolation(
                "two constituents share a Langlands label".into(),
            ));
        }
        let counts = Counts {
            subreps: layers.first().map_or(0, Vec::len),
            total_length: constituents.len(),
        };
        Ok(DecompositionResult {
            constituents,
            layers,
            counts,
        })
    }

    pub fn layer(&self, l: usize) -> impl Iterator<Item = &Constituent> {
        self.layers
            .get(l)
            .into_iter()
            .flatten()
            .map(|&c| &self.constituents[c])
    }
}

fn subset(indices: &[usize], mask: u64) -> (Vec<usize>, Vec<usize>) {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (p, &i) in indices.iter().enumerate() {
        if mask >> p & 1 == 1 {
            inside.push(i);
        } else {
            outside.push(i);
        }
    }
    (inside, outside)
}

fn constituents_for(
    setting: &Setting,
    sigma: &AdmissibleTriple,
    x: Vec<usize>,
    rest: &[usize],
) -> Result<Vec<Constituent>> {
    let mut out = Vec::new();
    for ext in enumerate_extensions(sigma, &setting.entries(rest))? {
        let label = LanglandsLabel::new(x.iter().map(|&i| setting.segment(i)), ext.triple.clone())?;
        out.push(Constituent {
            x: x.clone(),
            extension: ext,
            label,
        });
    }
    Ok(out)
}

/// All irreducible subquotients of `∏_{i∈S} δ(Δ_i) ⋊ σ`, grouped by `|X|`.
///
/// Subsets `X ⊆ S` are visited in colex order and for each the extensions of
/// `σ` by `S ∖ X` in sign-label order.
pub fn decompose(setting: &Setting, sigma: &AdmissibleTriple) -> Result<DecompositionResult> {
    setting.check_sigma(sigma)?;
    let k = setting.s.len();
    let mut constituents = Vec::new();
    let mut layer_of = Vec::new();
    for mask in 0..1u64 << k {
        let (x, rest) = subset(&setting.s, mask);
        let l = x.len();
        for c in constituents_for(setting, sigma, x, &rest)? {
            constituents.push(c);
            layer_of.push(l);
        }
    }
    DecompositionResult::build(constituents, layer_of, k + 1)
}

/// Subquotients of `∏_{i∈S_1} δ(Δ_i) ⋊ Lang(∏_{i∈S_2} δ(Δ_i) ⋊ σ)`: the
/// constituents `Lang(∏_{X∪S_2} δ(Δ_i) ⋊ σ')` with `X ⊆ S_1`, grouped by `|X|`.
pub fn decompose_from_langlands(
    setting: &Setting,
    s1: &[usize],
    s2: &[usize],
    sigma: &AdmissibleTriple,
) -> Result<DecompositionResult> {
    setting.check_sigma(sigma)?;
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::domain(
            "both parts of the partition must be nonempty",
        ));
    }
    let mut union: Vec<usize> = s1.iter().chain(s2).copied().collect();
    union.sort_unstable();
    let mut expected = setting.s.clone();
    expected.sort_unstable();
    if union != expected || union.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("S_1 and S_2 must partition S"));
    }
    let mut constituents = Vec::new();
    let mut layer_of = Vec::new();
    for mask in 0..1u64 << s1.len() {
        let (mut x, rest) = subset(s1, mask);
        let l = x.len();
        x.extend_from_slice(s2);
        for c in constituents_for(setting, sigma, x, &rest)? {
            constituents.push(c);
            layer_of.push(l);
        }
    }
    DecompositionResult::build(constituents, layer_of, s1.len() + 1)
}

/// `Σ_{X⊆S} 2^{l'(S∖X)}` together with `2^{l'(S)}`.
pub fn expected_counts(setting: &Setting) -> Counts {
    let k = setting.s.len();
    let total = (0..1u64 << k)
        .map(|mask| 1usize << setting.l_prime(&subset(&setting.s, mask).1))
        .sum();
    Counts {
        subreps: 1 << setting.l_prime(&setting.s),
        total_length: total,
    }
}

/// Segments `Δ'_i` (`Δ_i~` for `i ∈ X`, `Δ_i` otherwise) in the order of `S`
/// such that the constituent embeds into `∏ δ(Δ'_i) ⋊ σ`.
pub fn subquotient_embedding_witness(setting: &Setting, constituent: &Constituent) -> Vec<Segment> {
    setting
        .s
        .iter()
        .map(|&i| {
            let s = setting.segment(i);
            if constituent.x.contains(&i) {
                s.contragredient()
            } else {
                s
            }
        })
        .collect()
}

/// One replacement made by [`normalize_family`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationStep {
    pub i: usize,
    pub j: usize,
    /// The pair linked after taking the contragredient of `Δ_i`.
    pub contragredient: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub segments: Vec<Segment>,
    pub steps: Vec<NormalizationStep>,
}

fn orient(s: Segment) -> Segment {
    if (s.x() + s.y()).is_negative() {
        s.contragredient()
    } else {
        s
    }
}

/// Replaces linked pairs `Δ_i, Δ_j` (or `Δ_i~, Δ_j`) by their union and
/// intersection until no pair is linked.
pub fn normalize_family(raw: &[Segment]) -> Result<Normalized> {
    if let Some(s) = raw.iter().find(|s| !s.rho().is_self_dual()) {
        return Err(Error::domain(format!("{s} is not over a self-dual symbol")));
    }
    let mut segments: Vec<Segment> = raw.iter().cloned().map(orient).collect();
    let mut steps = Vec::new();
    'outer: loop {
        for i in 0..segments.len() {
            for j in i + 1..segments.len() {
                let a = &segments[i];
                let b = &segments[j];
                let (left, contragredient) = if linked(a, b) {
                    (a.clone(), false)
                } else if linked(&a.contragredient(), b) {
                    (a.contragredient(), true)
                } else {
                    continue;
                };
                let (u, n) = union_intersection(&left, b)?;
                let n = n.ok_or_else(|| {
                    Error::domain(format!("{left} and {b} have empty intersection"))
                })?;
                segments[i] = orient(u);
                segments[j] = orient(n);
                steps.push(NormalizationStep {
                    i,
                    j,
                    contragredient,
                });
                continue 'outer;
            }
        }
        return Ok(Normalized { segments, steps });
    }
}

/// The multiset `{-x, y}` over all segments, which is unchanged by
/// contragredients and by union/intersection of linked pairs.
pub fn edge_multiset(segments: &[Segment]) -> Vec<(String, crate::halfint::HalfInt)> {
    let mut out: Vec<_> = segments
        .iter()
        .flat_map(|s| {
            [
                (s.rho().name().to_string(), -s.x()),
                (s.rho().name().to_string(), s.y()),
            ]
        })
        .collect();
    out.sort();
    out
}
