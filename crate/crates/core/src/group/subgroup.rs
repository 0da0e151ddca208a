use serde::{Deserialize, Serialize};

use super::{Alphabet, Word};

/// A subgroup of a builtin group, in one of the shapes the engine resolves.
///
/// `Cyclic` and `FreeAbelian` carry an ordered basis; its orientation fixes the
/// sign of homology coordinates. The derived order is only used for map keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subgroup {
    Whole,
    Trivial,
    Cyclic(Word),
    FreeAbelian(Vec<Word>),
}

impl Subgroup {
    /// Basis of an abelian-type subgroup; empty for `Whole` and `Trivial`.
    pub fn basis(&self) -> &[Word] {
        match self {
            Subgroup::Whole | Subgroup::Trivial => &[],
            Subgroup::Cyclic(r) => std::slice::from_ref(r),
            Subgroup::FreeAbelian(b) => b,
        }
    }

    pub fn is_whole(&self) -> bool {
        matches!(self, Subgroup::Whole)
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Subgroup::Trivial)
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        match self {
            Subgroup::Whole => "whole group".to_string(),
            Subgroup::Trivial => "trivial subgroup".to_string(),
            Subgroup::Cyclic(r) => format!("<{}>", alphabet.format(r)),
            Subgroup::FreeAbelian(b) => {
                let names: Vec<String> = b.iter().map(|w| alphabet.format(w)).collect();
                format!("<{}>", names.join(", "))
            }
        }
    }
}
