//! Formal cuspidal symbols: `ρ` on the GL side and the label of `σ_cusp`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::halfint::Parity;

/// An abstract unitary cuspidal representation `ρ` of `GL(m_ρ)`.
///
/// Identity is the name. A non-self-dual symbol carries the name of its
/// contragredient; for self-dual symbols the two names coincide.
#[derive(Clone)]
pub struct CuspidalSymbol {
    name: Arc<str>,
    dual_name: Arc<str>,
    gl_size: u32,
    /// Parity class of `(a - 1)/2` for Jordan blocks `a`; only meaningful for self-dual symbols.
    parity: Option<Parity>,
}

impl CuspidalSymbol {
    pub fn self_dual(name: &str, gl_size: u32, parity: Parity) -> Result<Self> {
        Self::check(name, gl_size)?;
        let name: Arc<str> = Arc::from(name);
        Ok(CuspidalSymbol {
            dual_name: name.clone(),
            name,
            gl_size,
            parity: Some(parity),
        })
    }

    /// A symbol whose contragredient is the distinct symbol `dual_name`.
    pub fn with_contragredient(name: &str, dual_name: &str, gl_size: u32) -> Result<Self> {
        Self::check(name, gl_size)?;
        Self::check(dual_name, gl_size)?;
        if name == dual_name {
            return Err(Error::domain(format!(
                "symbol `{name}` cannot be its own distinct contragredient"
            )));
        }
        Ok(CuspidalSymbol {
            name: Arc::from(name),
            dual_name: Arc::from(dual_name),
            gl_size,
            parity: None,
        })
    }

    fn check(name: &str, gl_size: u32) -> Result<()> {
        if gl_size == 0 {
            return Err(Error::domain(format!("symbol `{name}` has gl_size 0")));
        }
        if name.is_empty() || !name.chars().all(is_symbol_char) {
            return Err(Error::domain(format!("invalid symbol name `{name}`")));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gl_size(&self) -> u32 {
        self.gl_size
    }

    pub fn is_self_dual(&self) -> bool {
        self.name == self.dual_name
    }

    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    /// The name of the contragredient symbol, if it differs.
    pub fn contragredient_of(&self) -> Option<&str> {
        (!self.is_self_dual()).then_some(&*self.dual_name)
    }

    pub fn contragredient(&self) -> CuspidalSymbol {
        if self.is_self_dual() {
            return self.clone();
        }
        CuspidalSymbol {
            name: self.dual_name.clone(),
            dual_name: self.name.clone(),
            gl_size: self.gl_size,
            parity: self.parity,
        }
    }
}

pub(crate) fn is_symbol_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '~' | '-' | '.')
}

pub fn same_rho(a: &CuspidalSymbol, b: &CuspidalSymbol) -> bool {
    a.name == b.name
}

impl PartialEq for CuspidalSymbol {
    fn eq(&self, other: &Self) -> bool {
        same_rho(self, other)
    }
}

impl Eq for CuspidalSymbol {}

impl Hash for CuspidalSymbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
    }
}

impl Ord for CuspidalSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

impl PartialOrd for CuspidalSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CuspidalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for CuspidalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Name of a cuspidal representation of a classical group (the partial cuspidal support).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspidalLabel(Arc<str>);

impl CuspidalLabel {
    pub fn new(name: &str) -> Result<Self> {
        if name.is_empty() || !name.chars().all(is_symbol_char) {
            return Err(Error::domain(format!("invalid cuspidal label `{name}`")));
        }
        Ok(CuspidalLabel(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CuspidalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CuspidalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Registry of declared symbols, used to resolve names found in text.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    symbols: BTreeMap<String, CuspidalSymbol>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a symbol and, for non-self-dual ones, its contragredient.
    pub fn insert(&mut self, symbol: CuspidalSymbol) -> Result<()> {
        let mut to_add = vec![symbol.clone()];
        if !symbol.is_self_dual() {
            to_add.push(symbol.contragredient());
        }
        for s in &to_add {
            if let Some(existing) = self.symbols.get(s.name()) {
                let same = existing.dual_name == s.dual_name
                    && existing.gl_size == s.gl_size
                    && existing.parity == s.parity;
                if !same {
                    return Err(Error::domain(format!(
                        "symbol `{}` declared twice",
                        s.name()
                    )));
                }
            }
        }
        for s in to_add {
            self.symbols.insert(s.name().to_string(), s);
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&CuspidalSymbol> {
        self.symbols
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &CuspidalSymbol> {
        self.symbols.values()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}
