use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{Alphabet, Subgroup, Word};
use crate::resolution::add_coeff;

/// The coefficient module `Z[G/K1] ⊗ … ⊗ Z[G/Kr]` with the diagonal action.
/// The empty product is the trivial module `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetModule {
    pub factors: Vec<Subgroup>,
}

impl CosetModule {
    pub fn cosets(k: Subgroup) -> Self {
        CosetModule { factors: vec![k] }
    }

    pub fn tensor(&self, other: &CosetModule) -> Self {
        CosetModule { factors: self.factors.iter().chain(&other.factors).cloned().collect() }
    }
}

/// Canonical representatives, one per tensor factor, of a basis element `γ1K1 ⊗ … ⊗ γrKr`.
pub type CosetKey = Vec<Word>;

/// Finitely supported integer values indexed by (resolution cell, coset key).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellTerms {
    #[serde(with = "crate::pairs")]
    terms: BTreeMap<(usize, CosetKey), i64>,
}

impl CellTerms {
    pub fn add(&mut self, cell: usize, key: CosetKey, coeff: i64) -> Result<()> {
        if coeff == 0 {
            return Ok(());
        }
        let k = (cell, key);
        match self.terms.get_mut(&k) {
            Some(c) => {
                *c = add_coeff(*c, coeff)?;
                if *c == 0 {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, coeff);
            }
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &CosetKey, i64)> {
        self.terms.iter().map(|((b, k), &c)| (*b, k, c))
    }

    /// Entries for one cell.
    pub fn cell(&self, cell: usize) -> impl Iterator<Item = (&CosetKey, i64)> {
        self.terms.range((cell, Vec::new())..).take_while(move |((b, _), _)| *b == cell).map(|((_, k), &c)| (k, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Longest representative word in the support.
    pub fn max_rep_length(&self) -> usize {
        self.terms.keys().flat_map(|(_, k)| k.iter().map(Word::len)).max().unwrap_or(0)
    }
}

/// A chain of `R ⊗_G M`: terms `b ⊗ (γ1K1 ⊗ …)`, with `g·b ⊗ m = b ⊗ g⁻¹m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleChain {
    pub degree: usize,
    pub module: CosetModule,
    pub terms: CellTerms,
}

/// An equivariant cochain `R_q → M`, stored by its values on basis cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleCochain {
    pub degree: usize,
    pub module: CosetModule,
    pub values: CellTerms,
}

impl ModuleChain {
    pub fn zero(degree: usize, module: CosetModule) -> Self {
        ModuleChain { degree, module, terms: CellTerms::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        describe_terms(&self.terms, alphabet)
    }
}

impl ModuleCochain {
    pub fn zero(degree: usize, module: CosetModule) -> Self {
        ModuleCochain { degree, module, values: CellTerms::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

fn describe_terms(t: &CellTerms, alphabet: &Alphabet) -> String {
    let parts: Vec<String> = t
        .iter()
        .map(|(b, k, c)| {
            let cosets: Vec<String> = k.iter().map(|w| alphabet.format(w)).collect();
            format!("{c:+}·b{b}⊗({})", cosets.join(","))
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}
