//! Words, group oracles, subgroups and canonical labels.

mod abelian;
mod ring;
mod subgroup;
mod surface;
mod word;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use abelian::FreeAbelianGroup;
pub use ring::GroupRingElement;
pub use subgroup::Subgroup;
pub use surface::SurfaceGroup;
pub use word::{Alphabet, Letter, Word};

use crate::error::Result;

/// Limits for the bounded searches in conjugacy and coset problems.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Longest conjugator explored by the conjugacy search; `None` means `2·|g| + 4`.
    pub conjugacy_radius: Option<usize>,
    /// Extra exponents scanned beyond the length-derived bound in cyclic
    /// membership, coset and double-coset searches.
    pub coset_slack: usize,
    /// Cap on the number of conjugates visited by one conjugacy search.
    pub max_conjugacy_states: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { conjugacy_radius: None, coset_slack: 2, max_conjugacy_states: 200_000 }
    }
}

/// Canonical representative of a conjugacy class, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConjugacyLabel {
    pub label: Word,
    /// `conjugator · g · conjugator⁻¹ = label`.
    pub conjugator: Word,
}

/// Canonical representative `rep = g·k` of the left coset `gS`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetRep {
    pub rep: Word,
    /// The element `k ∈ S`.
    pub k: Word,
    /// Coordinates of `k` in the subgroup's basis (empty for whole/trivial).
    pub k_coords: Vec<i64>,
}

/// Canonical representative `rep = k·g·h` of the double coset `KgH`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DoubleCosetRep {
    pub rep: Word,
    pub k: Word,
    pub h: Word,
}

/// Decision procedures for a finitely presented Poincaré duality group.
///
/// Elements are exchanged as [`Word`]s; every returned word is in normal form.
pub trait GroupOracle: Send + Sync + fmt::Debug {
    fn alphabet(&self) -> Alphabet;

    fn duality_dimension(&self) -> usize;

    fn is_abelian(&self) -> bool;

    fn bounds(&self) -> &SearchBounds;

    /// ShortLex-minimal representative. Letters must be valid for [`Self::alphabet`].
    fn normal_form(&self, w: &Word) -> Word;

    fn multiply(&self, a: &Word, b: &Word) -> Word {
        self.normal_form(&a.concat(b))
    }

    fn invert(&self, a: &Word) -> Word {
        self.normal_form(&a.inverse())
    }

    fn is_identity(&self, w: &Word) -> bool {
        self.normal_form(w).is_empty()
    }

    /// `a · b · a⁻¹`
    fn conjugate(&self, a: &Word, b: &Word) -> Word {
        self.normal_form(&a.concat(b).concat(&a.inverse()))
    }

    fn generator_count(&self) -> usize {
        self.alphabet().generator_count()
    }

    fn conjugacy_label(&self, g: &Word) -> Result<ConjugacyLabel>;

    /// A witness `w` with `w·g·w⁻¹ = h`, or `None` when not conjugate.
    fn are_conjugate(&self, g: &Word, h: &Word) -> Result<Option<Word>> {
        let lg = self.conjugacy_label(g)?;
        let lh = self.conjugacy_label(h)?;
        if lg.label != lh.label {
            return Ok(None);
        }
        let w = self.normal_form(&lh.conjugator.inverse().concat(&lg.conjugator));
        Ok(Some(w))
    }

    /// The primitive root `r` and exponent `k > 0` with `g = r^k`; `g` must be nontrivial.
    fn root(&self, g: &Word) -> Result<(Word, i64)>;

    fn centralizer(&self, g: &Word) -> Result<Subgroup>;

    /// Coordinates of `g` in the subgroup's basis, or `None` when `g ∉ S`.
    ///
    /// The whole group has no coordinate system and yields an empty vector.
    fn subgroup_coordinates(&self, s: &Subgroup, g: &Word) -> Result<Option<Vec<i64>>>;

    fn coset_canonical(&self, g: &Word, s: &Subgroup) -> Result<CosetRep>;

    fn double_coset(&self, g: &Word, k: &Subgroup, h: &Subgroup) -> Result<DoubleCosetRep>;

    fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup>;

    /// All elements of word length at most `radius`, in ShortLex order.
    fn enumerate_ball(&self, radius: usize) -> Vec<Word>;

    /// Element `Π basis[i]^coords[i]` of an abelian-type subgroup.
    fn subgroup_element(&self, s: &Subgroup, coords: &[i64]) -> Word {
        let mut w = Word::identity();
        for (b, &c) in s.basis().iter().zip(coords) {
            w = w.concat(&b.pow(c));
        }
        self.normal_form(&w)
    }
}
