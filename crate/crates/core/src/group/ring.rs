use std::collections::BTreeMap;

use super::{GroupOracle, Word};

/// A finitely supported integer combination of group elements.
///
/// Keys are normal-form words and no zero coefficient is stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::identity(), 1)
    }

    /// `coeff · g`; `g` must already be in normal form.
    pub fn monomial(g: Word, coeff: i64) -> Self {
        let mut e = Self::zero();
        e.add_term(g, coeff);
        e
    }

    pub fn add_term(&mut self, g: Word, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(e) => {
                *e += coeff;
                if *e == 0 {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, coeff);
            }
        }
    }

    pub fn add(&mut self, other: &GroupRingElement) {
        for (g, &c) in &other.terms {
            self.add_term(g.clone(), c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(g, &c)| (g, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn mul(&self, other: &GroupRingElement, group: &dyn GroupOracle) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(group.multiply(a, b), x * y);
            }
        }
        out
    }

    /// `g · self`
    pub fn left_translate(&self, g: &Word, group: &dyn GroupOracle) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (a, &x) in &self.terms {
            out.add_term(group.multiply(g, a), x);
        }
        out
    }
}
