use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Group elements carried by chains: words in the ambient group, or exponent
/// vectors in an abstract free abelian subgroup.
pub trait Elem: Clone + Ord + Eq + Hash + Debug + Send + Sync + 'static {}

impl<T: Clone + Ord + Eq + Hash + Debug + Send + Sync + 'static> Elem for T {}

pub fn add_coeff(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub fn mul_coeff(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// A finite integer combination of translates `g·b` of basis cells of one degree.
///
/// No zero coefficient is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: Deserialize<'de> + Ord"))]
pub struct Chain<E: Ord> {
    degree: usize,
    #[serde(with = "crate::pairs")]
    terms: BTreeMap<(usize, E), i64>,
}

impl<E: Elem> Chain<E> {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn cell(degree: usize, index: usize, g: E, coeff: i64) -> Self {
        let mut c = Self::zero(degree);
        if coeff != 0 {
            c.terms.insert((index, g), coeff);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
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

    /// Terms `(cell, element, coefficient)` in increasing key order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &E, i64)> {
        self.terms.iter().map(|((b, g), &c)| (*b, g, c))
    }

    pub fn add_term(&mut self, index: usize, g: E, coeff: i64) -> Result<()> {
        if coeff == 0 {
            return Ok(());
        }
        let key = (index, g);
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = add_coeff(*c, coeff)?;
                if *c == 0 {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
        Ok(())
    }

    /// `self += scale · other`
    pub fn add_scaled(&mut self, other: &Chain<E>, scale: i64) -> Result<()> {
        if other.degree != self.degree && !other.is_zero() {
            return Err(Error::invariant("adding chains of different degrees"));
        }
        for (b, g, c) in other.terms() {
            self.add_term(b, g.clone(), mul_coeff(c, scale)?)?;
        }
        Ok(())
    }

    /// `g·self`, with `mul` the group multiplication.
    pub fn translated(&self, g: &E, mul: impl Fn(&E, &E) -> E) -> Result<Chain<E>> {
        let mut out = Chain::zero(self.degree);
        for (b, h, c) in self.terms() {
            out.add_term(b, mul(g, h), c)?;
        }
        Ok(out)
    }

    /// Image in `R ⊗_G Z`: coefficient sums per cell.
    pub fn augmented(&self, rank: usize) -> Result<Vec<i64>> {
        let mut out = vec![0i64; rank];
        for (b, _, c) in self.terms() {
            out[b] = add_coeff(out[b], c)?;
        }
        Ok(out)
    }

    /// The augmentation `ε`, defined on degree-0 chains.
    pub fn augmentation(&self) -> Result<i64> {
        self.terms().try_fold(0i64, |acc, (_, _, c)| add_coeff(acc, c))
    }
}

/// One term `g1·b1 ⊗ g2·b2` of a tensor chain; `left_degree` is `|b1|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TensorKey<E> {
    pub left_degree: usize,
    pub left: usize,
    pub left_elem: E,
    pub right: usize,
    pub right_elem: E,
}

/// A homogeneous chain of `R ⊗ R` with the diagonal group action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(serialize = "E: Serialize", deserialize = "E: Deserialize<'de> + Ord"))]
pub struct TensorChain<E: Ord> {
    degree: usize,
    #[serde(with = "crate::pairs")]
    terms: BTreeMap<TensorKey<E>, i64>,
}

impl<E: Elem> TensorChain<E> {
    pub fn zero(degree: usize) -> Self {
        TensorChain { degree, terms: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
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

    pub fn terms(&self) -> impl Iterator<Item = (&TensorKey<E>, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn add_term(&mut self, key: TensorKey<E>, coeff: i64) -> Result<()> {
        if coeff == 0 {
            return Ok(());
        }
        if key.left_degree > self.degree {
            return Err(Error::invariant("tensor term exceeds the total degree"));
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = add_coeff(*c, coeff)?;
                if *c == 0 {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
        Ok(())
    }

    /// Adds `coeff · x ⊗ y`.
    pub fn add_product(&mut self, x: &Chain<E>, y: &Chain<E>, coeff: i64) -> Result<()> {
        for (b1, g1, c1) in x.terms() {
            for (b2, g2, c2) in y.terms() {
                let key = TensorKey {
                    left_degree: x.degree(),
                    left: b1,
                    left_elem: g1.clone(),
                    right: b2,
                    right_elem: g2.clone(),
                };
                self.add_term(key, mul_coeff(mul_coeff(c1, c2)?, coeff)?)?;
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &TensorChain<E>, scale: i64) -> Result<()> {
        for (k, c) in other.terms() {
            self.add_term(k.clone(), mul_coeff(c, scale)?)?;
        }
        Ok(())
    }

    /// `g·self` under the diagonal action.
    pub fn translated(&self, g: &E, mul: impl Fn(&E, &E) -> E) -> Result<TensorChain<E>> {
        let mut out = TensorChain::zero(self.degree);
        for (k, c) in self.terms() {
            let key = TensorKey {
                left_degree: k.left_degree,
                left: k.left,
                left_elem: mul(g, &k.left_elem),
                right: k.right,
                right_elem: mul(g, &k.right_elem),
            };
            out.add_term(key, c)?;
        }
        Ok(out)
    }
}
