use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{Alphabet, Word};
use crate::resolution::{add_coeff, mul_coeff};

/// A homogeneous class of `(L_G)_p`: coordinates in the chosen basis of
/// `H_{p+n}(C_α)`, where `α` is the canonical conjugacy label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LGClass {
    pub label: Word,
    pub degree: i64,
    pub coords: Vec<i64>,
}

impl LGClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The `i`-th basis class of a summand.
    pub fn basis(label: Word, degree: i64, rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        LGClass { label, degree, coords }
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        let coords: Vec<String> = self.coords.iter().map(i64::to_string).collect();
        format!("{{{}, {}, [{}]}}", alphabet.format(&self.label), self.degree, coords.join(","))
    }
}

/// Summands are ordered by label in ShortLex order, then by degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SummandKey {
    label: Word,
    degree: i64,
}

/// A finite sum of classes with distinct `(label, degree)`; zero classes are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LGElement {
    terms: BTreeMap<SummandKey, Vec<i64>>,
}

impl LGElement {
    pub fn zero() -> Self {
        LGElement::default()
    }

    pub fn from_class(x: LGClass) -> Self {
        let mut out = LGElement::zero();
        out.add_class(&x, 1).expect("scaling by one cannot overflow");
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ShortLex label order, then degree.
    pub fn classes(&self) -> impl Iterator<Item = LGClass> + '_ {
        self.terms.iter().map(|(k, v)| LGClass { label: k.label.clone(), degree: k.degree, coords: v.clone() })
    }

    /// Adds `scale·x`. Coordinate vectors of one summand must have equal length.
    pub fn add_class(&mut self, x: &LGClass, scale: i64) -> Result<()> {
        if scale == 0 || x.is_zero() {
            return Ok(());
        }
        let key = SummandKey { label: x.label.clone(), degree: x.degree };
        let entry = self.terms.entry(key.clone()).or_insert_with(|| vec![0; x.coords.len()]);
        if entry.len() != x.coords.len() {
            return Err(crate::error::Error::invariant("summand coordinates of different lengths"));
        }
        for (e, &c) in entry.iter_mut().zip(&x.coords) {
            *e = add_coeff(*e, mul_coeff(c, scale)?)?;
        }
        if entry.iter().all(|&c| c == 0) {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &LGElement, scale: i64) -> Result<()> {
        for x in other.classes() {
            self.add_class(&x, scale)?;
        }
        Ok(())
    }

    pub fn scaled(&self, scale: i64) -> Result<LGElement> {
        let mut out = LGElement::zero();
        out.add_scaled(self, scale)?;
        Ok(out)
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.classes().map(|x| x.describe(alphabet)).collect();
        parts.join(" + ")
    }
}

impl fmt::Display for LGClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}:{:?}", self.label, self.degree, self.coords)
    }
}

impl Serialize for LGElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.classes())
    }
}

impl<'de> Deserialize<'de> for LGElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let classes = Vec::<LGClass>::deserialize(d)?;
        let mut out = LGElement::zero();
        for x in &classes {
            out.add_class(x, 1).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}
