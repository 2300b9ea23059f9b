//! TOML instance files.
//!
//! ```toml
//! [cuspidal]
//! label = "sigma"
//!
//! [[symbols]]
//! name = "rho"
//! gl_size = 1
//! parity = "integer"        # or "half-integer"
//! cusp_jord = [1]
//!
//! [sp]
//! jord = [{ rho = "rho", a = 5 }]
//! singletons = []           # { rho, a, sign = "+" | "-" }
//! pairs = []                # { rho, a, b, sign }
//!
//! [[family]]
//! rho = "rho"
//! b = 3                     # integer or "p/2"
//! c = 4
//! role = "S"                # or "Y"
//!
//! [sigma]
//! choices = ["+"]           # one label per Y entry with -b ≠ 1/2
//!
//! [options]
//! max_tuples = 10000000
//! seed = 0
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decompose::Setting;
use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Parity};
use crate::oracle::DEFAULT_TUPLE_CAP;
use crate::symbols::{CuspidalLabel, CuspidalSymbol, SymbolTable};
use crate::triples::{
    is_alternated, validate_family, AdmissibleTriple, CuspContext, FamilyEntry, FamilyReport,
    JordanBlock, PairEntry, Sign, SingletonEntry, StronglyPositiveDescriptor,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub cuspidal: RawCuspidal,
    #[serde(default)]
    pub symbols: Vec<RawSymbol>,
    #[serde(default)]
    pub sp: RawTriple,
    #[serde(default)]
    pub family: Vec<RawEntry>,
    #[serde(default)]
    pub sigma: RawSigma,
    #[serde(default)]
    pub options: RawOptions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCuspidal {
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSymbol {
    pub name: String,
    pub gl_size: u32,
    #[serde(default)]
    pub parity: Option<String>,
    #[serde(default)]
    pub cusp_jord: Vec<u32>,
    /// Name of the contragredient, for symbols that are not self-dual.
    #[serde(default)]
    pub contragredient: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTriple {
    #[serde(default)]
    pub jord: Vec<RawBlock>,
    #[serde(default)]
    pub singletons: Vec<RawSingleton>,
    #[serde(default)]
    pub pairs: Vec<RawPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBlock {
    pub rho: String,
    pub a: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSingleton {
    pub rho: String,
    pub a: u32,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPair {
    pub rho: String,
    pub a: u32,
    pub b: u32,
    pub sign: Sign,
}

/// An integer or a string `"p/2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawHalfInt {
    Int(i64),
    Text(String),
}

impl RawHalfInt {
    fn value(&self, path: &str) -> Result<HalfInt> {
        match self {
            RawHalfInt::Int(n) => n
                .checked_mul(2)
                .map(HalfInt::from_doubled)
                .ok_or_else(|| Error::config(path, "value out of range")),
            RawHalfInt::Text(s) => s
                .parse()
                .map_err(|e: Error| Error::config(path, e.to_string())),
        }
    }
}

impl From<HalfInt> for RawHalfInt {
    fn from(h: HalfInt) -> Self {
        match h.to_int() {
            Some(n) => RawHalfInt::Int(n),
            None => RawHalfInt::Text(h.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryRole {
    S,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEntry {
    pub rho: String,
    pub b: RawHalfInt,
    pub c: RawHalfInt,
    pub role: EntryRole,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSigma {
    #[serde(default)]
    pub choices: Option<Vec<Sign>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOptions {
    #[serde(default)]
    pub max_tuples: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub max_tuples: u128,
    pub seed: u64,
}

/// A parsed and type-checked instance. Family conditions are not enforced
/// here so that they can be reported.
#[derive(Clone, Debug)]
pub struct Config {
    pub symbols: SymbolTable,
    pub context: Arc<CuspContext>,
    pub sp_triple: AdmissibleTriple,
    pub family: Vec<FamilyEntry>,
    pub roles: Vec<EntryRole>,
    pub sigma_choices: Option<Vec<Sign>>,
    pub options: Options,
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let path = e
                .span()
                .map(|s| {
                    let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
                    format!("line {line}")
                })
                .unwrap_or_else(|| "<document>".into());
            Error::config(path, e.message().to_string())
        })?;
        Self::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let cusp = CuspidalLabel::new(&raw.cuspidal.label)
            .map_err(|e| Error::config("cuspidal.label", e.to_string()))?;

        let mut symbols = SymbolTable::new();
        let mut cusp_jord = BTreeMap::new();
        for (k, s) in raw.symbols.iter().enumerate() {
            let path = format!("symbols[{k}]");
            let symbol = match (&s.contragredient, &s.parity) {
                (Some(_), Some(_)) => {
                    return Err(Error::config(
                        &path,
                        "a symbol with a distinct contragredient has no parity",
                    ))
                }
                (Some(dual), None) => CuspidalSymbol::with_contragredient(&s.name, dual, s.gl_size),
                (None, Some(p)) => {
                    let parity: Parity = p.parse().map_err(|e: Error| {
                        Error::config(format!("{path}.parity"), e.to_string())
                    })?;
                    CuspidalSymbol::self_dual(&s.name, s.gl_size, parity)
                }
                (None, None) => {
                    return Err(Error::config(&path, "self-dual symbols need a parity"))
                }
            }
            .map_err(|e| Error::config(&path, e.to_string()))?;
            if !s.cusp_jord.is_empty() {
                if !symbol.is_self_dual() {
                    return Err(Error::config(
                        format!("{path}.cusp_jord"),
                        "only self-dual symbols carry Jordan blocks",
                    ));
                }
                let set: BTreeSet<u32> = s.cusp_jord.iter().copied().collect();
                if set.len() != s.cusp_jord.len() {
                    return Err(Error::config(format!("{path}.cusp_jord"), "repeated block"));
                }
                cusp_jord.insert(symbol.clone(), set);
            }
            symbols
                .insert(symbol)
                .map_err(|e| Error::config(&path, e.to_string()))?;
        }
        let context = CuspContext::new(cusp, cusp_jord)
            .map_err(|e| Error::config("symbols", e.to_string()))?;

        let sp_triple = raw
            .sp
            .to_triple(&symbols, context.clone())
            .map_err(|e| match e {
                Error::Config { .. } => e,
                other => Error::config("sp", other.to_string()),
            })?;

        let mut family = Vec::new();
        let mut roles = Vec::new();
        for (k, e) in raw.family.iter().enumerate() {
            let path = format!("family[{k}]");
            let rho = symbols
                .get(&e.rho)
                .map_err(|err| Error::config(format!("{path}.rho"), err.to_string()))?
                .clone();
            let b = e.b.value(&format!("{path}.b"))?;
            let c = e.c.value(&format!("{path}.c"))?;
            family.push(
                FamilyEntry::new(rho, b, c).map_err(|err| Error::config(&path, err.to_string()))?,
            );
            roles.push(e.role);
        }

        let max_tuples = raw.options.max_tuples.map_or(DEFAULT_TUPLE_CAP, u128::from);
        Ok(Config {
            symbols,
            context,
            sp_triple,
            family,
            roles,
            sigma_choices: raw.sigma.choices.clone(),
            options: Options {
                max_tuples,
                seed: raw.options.seed.unwrap_or(0),
            },
        })
    }

    pub fn indices(&self, role: EntryRole) -> Vec<usize> {
        (0..self.family.len())
            .filter(|&i| self.roles[i] == role)
            .collect()
    }

    pub fn sp(&self) -> Result<StronglyPositiveDescriptor> {
        is_alternated(&self.sp_triple).into_result()
    }

    pub fn family_report(&self) -> Result<FamilyReport> {
        Ok(validate_family(&self.family, &self.sp()?))
    }

    pub fn setting(&self) -> Result<Setting> {
        Setting::new(
            self.sp()?,
            self.family.clone(),
            self.indices(EntryRole::S),
            self.indices(EntryRole::Y),
        )
    }

    /// The extension of `σ_sp` by the `Y` entries selected by `[sigma] choices`
    /// (all `+` when absent).
    pub fn sigma(&self, setting: &Setting) -> Result<AdmissibleTriple> {
        let candidates = setting.sigma_candidates()?;
        let needed = setting.l_prime(setting.y()) as usize;
        let choices = match &self.sigma_choices {
            Some(c) => c.clone(),
            None => vec![Sign::Plus; needed],
        };
        if choices.len() != needed {
            return Err(Error::config(
                "sigma.choices",
                format!("expected {needed} labels, found {}", choices.len()),
            ));
        }
        candidates
            .into_iter()
            .find(|e| {
                e.labels
                    .iter()
                    .filter_map(|(_, l)| *l)
                    .eq(choices.iter().copied())
            })
            .map(|e| e.triple)
            .ok_or_else(|| Error::config("sigma.choices", "no extension carries these labels"))
    }
}

impl RawTriple {
    pub fn to_triple(
        &self,
        symbols: &SymbolTable,
        context: Arc<CuspContext>,
    ) -> Result<AdmissibleTriple> {
        let sym = |path: String, name: &str| -> Result<CuspidalSymbol> {
            symbols
                .get(name)
                .cloned()
                .map_err(|e| Error::config(path, e.to_string()))
        };
        let mut jord = Vec::new();
        for (k, b) in self.jord.iter().enumerate() {
            let path = format!("sp.jord[{k}]");
            let block = JordanBlock::new(sym(format!("{path}.rho"), &b.rho)?, b.a)
                .map_err(|e| Error::config(&path, e.to_string()))?;
            jord.push(block);
        }
        let mut singletons = Vec::new();
        for (k, s) in self.singletons.iter().enumerate() {
            singletons.push(SingletonEntry {
                rho: sym(format!("sp.singletons[{k}].rho"), &s.rho)?,
                a: s.a,
                sign: s.sign,
            });
        }
        let mut pairs = Vec::new();
        for (k, p) in self.pairs.iter().enumerate() {
            pairs.push(PairEntry {
                rho: sym(format!("sp.pairs[{k}].rho"), &p.rho)?,
                a: p.a,
                b: p.b,
                sign: p.sign,
            });
        }
        let set: BTreeSet<&JordanBlock> = jord.iter().collect();
        if set.len() != jord.len() {
            return Err(Error::config("sp.jord", "repeated Jordan block"));
        }
        AdmissibleTriple::from_entries(context, jord, &singletons, &pairs)
    }

    pub fn from_triple(t: &AdmissibleTriple) -> Self {
        RawTriple {
            jord: t
                .jord()
                .iter()
                .map(|b| RawBlock {
                    rho: b.rho.name().to_string(),
                    a: b.a,
                })
                .collect(),
            singletons: t
                .eps()
                .singleton_entries()
                .into_iter()
                .map(|e| RawSingleton {
                    rho: e.rho.name().to_string(),
                    a: e.a,
                    sign: e.sign,
                })
                .collect(),
            pairs: t
                .eps()
                .consecutive_pair_entries()
                .into_iter()
                .map(|e| RawPair {
                    rho: e.rho.name().to_string(),
                    a: e.a,
                    b: e.b,
                    sign: e.sign,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
[cuspidal]
label = "sigma"

[[symbols]]
name = "rho"
gl_size = 1
parity = "integer"
cusp_jord = [1]

[[symbols]]
name = "tau"
gl_size = 2
parity = "half-integer"

[sp]
jord = [{ rho = "rho", a = 5 }]

[[family]]
rho = "rho"
b = 3
c = 4
role = "S"

[[family]]
rho = "tau"
b = "1/2"
c = "5/2"
role = "Y"

[sigma]
choices = ["-"]
"#;

    #[test]
    fn parses_and_builds() {
        let cfg = Config::from_toml_str(BASIC).unwrap();
        assert_eq!(cfg.family.len(), 2);
        assert_eq!(cfg.indices(EntryRole::S), vec![0]);
        assert!(cfg.family_report().unwrap().is_valid());
        let setting = cfg.setting().unwrap();
        let sigma = cfg.sigma(&setting).unwrap();
        let tau = cfg.symbols.get("tau").unwrap();
        assert_eq!(sigma.eps().singleton(tau, 2), Some(Sign::Minus));
        assert_eq!(cfg.options.max_tuples, DEFAULT_TUPLE_CAP);
    }

    #[test]
    fn errors_carry_paths() {
        let bad = BASIC.replace("b = \"1/2\"", "b = \"2/2\"");
        match Config::from_toml_str(&bad) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "family[1].b"),
            other => panic!("{other:?}"),
        }
        let bad = BASIC.replace("rho = \"tau\"", "rho = \"nope\"");
        match Config::from_toml_str(&bad) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "family[1].rho"),
            other => panic!("{other:?}"),
        }
        let bad = BASIC.replace("gl_size = 2", "gl_size = 2\nextra = 1");
        assert!(matches!(
            Config::from_toml_str(&bad),
            Err(Error::Config { .. })
        ));
        let bad = BASIC.replace("a = 5", "a = 4");
        match Config::from_toml_str(&bad) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "sp.jord[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_label_count() {
        let bad = BASIC.replace("choices = [\"-\"]", "choices = []");
        let cfg = Config::from_toml_str(&bad).unwrap();
        let setting = cfg.setting().unwrap();
        assert!(cfg.sigma(&setting).is_err());
    }

    #[test]
    fn triple_round_trip() {
        let cfg = Config::from_toml_str(BASIC).unwrap();
        let setting = cfg.setting().unwrap();
        for ext in setting.sigma_candidates().unwrap() {
            let raw = RawTriple::from_triple(&ext.triple);
            let back = raw.to_triple(&cfg.symbols, cfg.context.clone()).unwrap();
            assert_eq!(back, ext.triple);
        }
    }
}
