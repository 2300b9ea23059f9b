//! Serializable reports and their text renderings.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::config::{RawHalfInt, RawTriple};
use crate::decompose::{
    expected_counts, subquotient_embedding_witness, DecompositionResult, Setting,
};
use crate::error::{Error, Result};
use crate::grothendieck::JacquetTerm;
use crate::mu_star::{FilterMode, MuStarExpansion};
use crate::oracle::BatteryOutcome;
use crate::segment::Segment;
use crate::symbols::SymbolTable;
use crate::triples::{
    AdmissibleTriple, CuspContext, Extension, FamilyReport, Sign, StronglyPositiveDescriptor,
};

/// Integers of any size, written as decimal strings.
mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleDto {
    pub display: String,
    #[serde(flatten)]
    pub data: RawTriple,
}

impl TripleDto {
    pub fn from_triple(t: &AdmissibleTriple) -> Self {
        TripleDto {
            display: t.to_string(),
            data: RawTriple::from_triple(t),
        }
    }

    pub fn to_triple(
        &self,
        symbols: &SymbolTable,
        context: std::sync::Arc<CuspContext>,
    ) -> Result<AdmissibleTriple> {
        self.data.to_triple(symbols, context)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDto {
    pub entry: usize,
    /// `None` for half-edge entries.
    pub sign: Option<Sign>,
}

fn labels(e: &Extension) -> Vec<LabelDto> {
    e.labels
        .iter()
        .map(|&(entry, sign)| LabelDto { entry, sign })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDto {
    pub labels: Vec<LabelDto>,
    pub triple: TripleDto,
}

impl ExtensionDto {
    pub fn from_extension(e: &Extension) -> Self {
        ExtensionDto {
            labels: labels(e),
            triple: TripleDto::from_triple(&e.triple),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituentDto {
    pub x: Vec<usize>,
    pub layer: usize,
    /// `e`-descending.
    pub x_segments: Vec<String>,
    pub labels: Vec<LabelDto>,
    pub sigma_prime: TripleDto,
    pub embedding_witness: Vec<String>,
    pub display: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsDto {
    pub subreps: usize,
    pub total_length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub s: Vec<usize>,
    pub y: Vec<usize>,
    pub sigma: TripleDto,
    pub constituents: Vec<ConstituentDto>,
    pub layers: Vec<Vec<usize>>,
    pub counts: CountsDto,
    pub expected_counts: CountsDto,
}

impl DecompositionReport {
    pub fn new(setting: &Setting, sigma: &AdmissibleTriple, r: &DecompositionResult) -> Self {
        let mut layer_of = vec![0; r.constituents.len()];
        for (l, layer) in r.layers.iter().enumerate() {
            for &c in layer {
                layer_of[c] = l;
            }
        }
        let constituents = r
            .constituents
            .iter()
            .zip(layer_of)
            .map(|(c, layer)| ConstituentDto {
                x: c.x.clone(),
                layer,
                x_segments: c
                    .label
                    .x_segments
                    .standard_order()
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                labels: labels(&c.extension),
                sigma_prime: TripleDto::from_triple(&c.label.sigma_prime),
                embedding_witness: subquotient_embedding_witness(setting, c)
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                display: c.label.to_string(),
            })
            .collect();
        let e = expected_counts(setting);
        DecompositionReport {
            s: setting.s().to_vec(),
            y: setting.y().to_vec(),
            sigma: TripleDto::from_triple(sigma),
            constituents,
            layers: r.layers.clone(),
            counts: CountsDto {
                subreps: r.counts.subreps,
                total_length: r.counts.total_length,
            },
            expected_counts: CountsDto {
                subreps: e.subreps,
                total_length: e.total_length,
            },
        }
    }

    /// Checks that every segment and triple in the report parses back.
    pub fn reparse(
        &self,
        symbols: &SymbolTable,
        context: std::sync::Arc<CuspContext>,
    ) -> Result<()> {
        self.sigma.to_triple(symbols, context.clone())?;
        for c in &self.constituents {
            let t = c.sigma_prime.to_triple(symbols, context.clone())?;
            if t.to_string() != c.sigma_prime.display {
                return Err(Error::Parse(format!(
                    "triple `{}` does not round-trip",
                    c.sigma_prime.display
                )));
            }
            for s in c.x_segments.iter().chain(&c.embedding_witness) {
                Segment::parse(s, symbols)?;
            }
        }
        Ok(())
    }

    /// The length as `Σ_l |layer l|`, then each layer.
    pub fn to_text(&self, show_layers: bool) -> String {
        let mut out = String::new();
        let sizes: Vec<String> = self.layers.iter().map(|l| l.len().to_string()).collect();
        let _ = writeln!(out, "σ = {}", self.sigma.display);
        let _ = writeln!(
            out,
            "length {} = {}",
            self.counts.total_length,
            sizes.join(" + ")
        );
        let _ = writeln!(
            out,
            "irreducible subrepresentations: {}",
            self.counts.subreps
        );
        if show_layers {
            for (l, layer) in self.layers.iter().enumerate() {
                let _ = writeln!(out, "layer {l} ({}):", layer.len());
                for &c in layer {
                    let _ = writeln!(out, "  {}", self.constituents[c].display);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDto {
    pub term: String,
    #[serde(with = "decimal")]
    pub coefficient: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuStarReport {
    pub source: String,
    pub mode: FilterMode,
    pub terms: Vec<TermDto>,
}

impl MuStarReport {
    pub fn new(e: &MuStarExpansion, mode: FilterMode) -> Self {
        MuStarReport {
            source: e.source.to_string(),
            mode,
            terms: e
                .sum
                .iter()
                .map(|(t, c)| TermDto {
                    term: t.to_string(),
                    coefficient: c.clone(),
                })
                .collect(),
        }
    }

    pub fn parse_terms(&self, symbols: &SymbolTable) -> Result<Vec<(JacquetTerm, BigInt)>> {
        self.terms
            .iter()
            .map(|t| Ok((JacquetTerm::parse(&t.term, symbols)?, t.coefficient.clone())))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "μ*({}) [{}], {} terms\n",
            self.source,
            self.mode.as_str(),
            self.terms.len()
        );
        for t in &self.terms {
            let _ = writeln!(out, "  {:>4}  {}", t.coefficient, t.term);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubrepsReport {
    pub s: Vec<usize>,
    pub sigma: TripleDto,
    pub extensions: Vec<ExtensionDto>,
    pub expected: usize,
}

impl SubrepsReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} irreducible subrepresentations of ∏_S δ(Δ) ⋊ {}\n",
            self.extensions.len(),
            self.sigma.display
        );
        for e in &self.extensions {
            let _ = writeln!(out, "  {}", e.triple.display);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryDto {
    pub name: String,
    #[serde(with = "decimal")]
    pub expected: BigInt,
    #[serde(with = "decimal")]
    pub computed: BigInt,
    pub propagated: usize,
    pub tuples: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub queries: Vec<QueryDto>,
}

impl VerifyReport {
    pub fn new(outcomes: &[BatteryOutcome]) -> Self {
        VerifyReport {
            queries: outcomes
                .iter()
                .map(|o| QueryDto {
                    name: o.name.clone(),
                    expected: o.expected.clone(),
                    computed: o.computed.clone(),
                    propagated: o.propagated,
                    tuples: o.tuples.to_string(),
                    passed: o.passed(),
                })
                .collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.queries.iter().all(|q| q.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<36} {:>8} {:>8} {:>10} {:>10}\n",
            "query", "claimed", "computed", "propagated", "tuples"
        );
        for q in &self.queries {
            let _ = writeln!(
                out,
                "{:<36} {:>8} {:>8} {:>10} {:>10}  {}",
                q.name,
                q.expected,
                q.computed,
                q.propagated,
                q.tuples,
                if q.passed { "ok" } else { "MISMATCH" }
            );
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiDto {
    pub rho: String,
    pub a: u32,
    pub phi: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDto {
    pub segment: String,
    pub b: RawHalfInt,
    pub c: RawHalfInt,
    pub half_edge: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub sp: TripleDto,
    pub phi: Vec<PhiDto>,
    pub embedding: Vec<String>,
    pub family: Vec<EntryDto>,
    pub family_report: FamilyReport,
}

impl ValidateReport {
    pub fn new(
        sp: &StronglyPositiveDescriptor,
        setting_family: &[crate::triples::FamilyEntry],
        report: FamilyReport,
    ) -> Self {
        let (segments, _) = crate::triples::sp_embedding(sp);
        ValidateReport {
            sp: TripleDto::from_triple(sp.triple()),
            phi: sp
                .phi_map()
                .iter()
                .flat_map(|(rho, pairs)| {
                    pairs.iter().map(move |&(a, phi)| PhiDto {
                        rho: rho.name().to_string(),
                        a,
                        phi,
                    })
                })
                .collect(),
            embedding: segments.iter().map(ToString::to_string).collect(),
            family: setting_family
                .iter()
                .map(|e| EntryDto {
                    segment: e.to_string(),
                    b: e.b().into(),
                    c: e.c().into(),
                    half_edge: e.is_half_edge(),
                })
                .collect(),
            family_report: report,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("σ_sp = {}\n", self.sp.display);
        let _ = writeln!(
            out,
            "embedding: {} ⋊ σ_cusp",
            if self.embedding.is_empty() {
                "1".to_string()
            } else {
                self.embedding.join(" × ")
            }
        );
        for (k, e) in self.family.iter().enumerate() {
            let _ = writeln!(
                out,
                "Δ_{k} = {}{}",
                e.segment,
                if e.half_edge { " (half-edge)" } else { "" }
            );
        }
        if self.family_report.is_valid() {
            out.push_str("family: ok\n");
        } else {
            for v in &self.family_report.violations {
                let _ = writeln!(out, "violation: {v}");
            }
        }
        out
    }
}
