use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;

use super::{homology, homotopy, mul_coeff, Chain, Koszul, Resolution};
use crate::error::{Error, Result};
use crate::group::{GroupOracle, Subgroup, Word};
use crate::linalg::FGAbelianGroup;

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn from_big(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| i64::try_from(x).map_err(|_| Error::Overflow)).collect()
}

/// (degree, cell, coset representative) of a restricted translate.
type RestrictionKey = (usize, usize, Word);

/// A subgroup `J ≤ G` with its own resolution `S` and the chain maps
/// `S → R` (lift along the inclusion) and `R → S` (restriction), both lifting
/// the identity of `Z`.
///
/// Abelian-type subgroups are resolved by the Koszul complex on their basis;
/// the whole group uses the ambient resolution and both maps are identities.
/// `R` is a free `J`-complex on the translates `γ⁻¹·b`, `γ` running over the
/// canonical representatives of `G/J`.
#[derive(Debug)]
pub struct SubgroupComplex {
    subgroup: Subgroup,
    group: Arc<dyn GroupOracle>,
    ambient: Arc<dyn Resolution<Elem = Word>>,
    koszul: Option<Koszul>,
    homology: Vec<FGAbelianGroup>,
    lifts: DashMap<(usize, usize), Arc<Chain<Word>>>,
    restrictions: DashMap<RestrictionKey, Arc<Chain<Vec<i64>>>>,
}

impl SubgroupComplex {
    pub fn new(
        subgroup: Subgroup,
        group: Arc<dyn GroupOracle>,
        ambient: Arc<dyn Resolution<Elem = Word>>,
    ) -> Result<Self> {
        let koszul = match &subgroup {
            Subgroup::Whole => None,
            s => {
                let alphabet = group.alphabet();
                Some(Koszul::new(s.basis().iter().map(|w| format!("[{}]", alphabet.format(w))).collect())?)
            }
        };
        let homology = match &koszul {
            None => (0..=ambient.length()).map(|d| homology(ambient.as_ref(), d)).collect::<Result<_>>()?,
            Some(k) => (0..=k.length()).map(|d| homology(k, d)).collect::<Result<_>>()?,
        };
        Ok(SubgroupComplex {
            subgroup,
            group,
            ambient,
            koszul,
            homology,
            lifts: DashMap::new(),
            restrictions: DashMap::new(),
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Length of the subgroup's resolution, its cohomological dimension.
    pub fn length(&self) -> usize {
        self.koszul.as_ref().map_or(self.ambient.length(), Koszul::length)
    }

    pub fn rank(&self, degree: usize) -> usize {
        match &self.koszul {
            None => self.ambient.rank(degree),
            Some(k) => k.rank(degree),
        }
    }

    pub fn cell_name(&self, degree: usize, index: usize) -> String {
        match &self.koszul {
            None => self.ambient.cell_name(degree, index),
            Some(k) => k.cell_name(degree, index),
        }
    }

    /// `H_k(J; Z)`, or `None` above the resolution length (where it vanishes).
    pub fn homology(&self, degree: usize) -> Option<&FGAbelianGroup> {
        self.homology.get(degree)
    }

    /// Number of homology coordinates in degree `k` (zero above the length).
    pub fn homology_rank(&self, degree: usize) -> usize {
        self.homology(degree).map_or(0, FGAbelianGroup::rank)
    }

    /// `f(b)` for an untranslated cell of `S`.
    pub fn lift_cell(&self, degree: usize, index: usize) -> Result<Arc<Chain<Word>>> {
        let Some(k) = &self.koszul else {
            return Ok(Arc::new(Chain::cell(degree, index, Word::identity(), 1)));
        };
        if let Some(hit) = self.lifts.get(&(degree, index)) {
            return Ok(hit.clone());
        }
        let image = if degree == 0 {
            Chain::cell(0, 0, Word::identity(), 1)
        } else {
            let lifted = self.lift(&k.boundary_cell(degree, index))?;
            homotopy(self.ambient.as_ref(), &lifted)?
        };
        let image = Arc::new(image);
        self.lifts.insert((degree, index), image.clone());
        Ok(image)
    }

    /// `f(c)` for a chain of `S`, extended `J`-equivariantly.
    pub fn lift(&self, c: &Chain<Vec<i64>>) -> Result<Chain<Word>> {
        let mut out = Chain::zero(c.degree());
        for (b, v, coeff) in c.terms() {
            let g = self.group.subgroup_element(&self.subgroup, v);
            let image = self.lift_cell(c.degree(), b)?;
            for (b2, h, c2) in image.terms() {
                out.add_term(b2, self.group.multiply(&g, h), mul_coeff(coeff, c2)?)?;
            }
        }
        Ok(out)
    }

    /// A cycle of `R` representing the image of a homology class of `J`.
    pub fn lift_class(&self, degree: usize, coords: &[i64]) -> Result<Chain<Word>> {
        let Some(h) = self.homology(degree) else {
            return Ok(Chain::zero(degree));
        };
        if coords.len() != h.rank() {
            return Err(Error::Spec(format!("expected {} coordinates, got {}", h.rank(), coords.len())));
        }
        let cycle = from_big(&h.cycle_of(&to_big(coords)))?;
        match &self.koszul {
            None => {
                let mut out = Chain::zero(degree);
                for (i, &c) in cycle.iter().enumerate() {
                    out.add_term(i, Word::identity(), c)?;
                }
                Ok(out)
            }
            Some(k) => {
                let mut src = Chain::zero(degree);
                for (i, &c) in cycle.iter().enumerate() {
                    src.add_term(i, k.identity(), c)?;
                }
                self.lift(&src)
            }
        }
    }

    /// `ρ(γ⁻¹·b)` for a canonical representative `γ` of `γJ`.
    fn restrict_base(&self, k: &Koszul, degree: usize, index: usize, gamma: &Word) -> Result<Arc<Chain<Vec<i64>>>> {
        let key = (degree, index, gamma.clone());
        if let Some(hit) = self.restrictions.get(&key) {
            return Ok(hit.clone());
        }
        let image = if degree == 0 {
            Chain::cell(0, 0, k.identity(), 1)
        } else if degree > k.length() {
            Chain::zero(degree)
        } else {
            let gamma_inv = self.group.invert(gamma);
            let mut below = Chain::zero(degree - 1);
            for (b, h, c) in self.ambient.boundary_cell(degree, index).terms() {
                let g = self.group.multiply(&gamma_inv, h);
                below.add_scaled(&self.restrict_term(k, degree - 1, b, &g)?, c)?;
            }
            homotopy(k, &below)?
        };
        let image = Arc::new(image);
        self.restrictions.insert(key, image.clone());
        Ok(image)
    }

    /// `ρ(g·b) = k·ρ(γ⁻¹·b)` where `g = k·γ⁻¹` with `γ` canonical.
    fn restrict_term(&self, k: &Koszul, degree: usize, index: usize, g: &Word) -> Result<Chain<Vec<i64>>> {
        let c = self.group.coset_canonical(&self.group.invert(g), &self.subgroup)?;
        let base = self.restrict_base(k, degree, index, &c.rep)?;
        let shift = if c.k_coords.is_empty() { k.identity() } else { c.k_coords.clone() };
        base.translated(&shift, |a, b| k.mul(a, b))
    }

    /// `ρ(c) ⊗_J Z` as a coefficient vector over the cells of `S`.
    pub fn restrict_augmented(&self, c: &Chain<Word>) -> Result<Vec<i64>> {
        let Some(k) = &self.koszul else {
            return c.augmented(self.ambient.rank(c.degree()));
        };
        let mut out = vec![0i64; k.rank(c.degree())];
        if c.degree() > k.length() {
            return Ok(out);
        }
        for (b, g, coeff) in c.terms() {
            let gamma = self.group.coset_canonical(&self.group.invert(g), &self.subgroup)?.rep;
            let image = self.restrict_base(k, c.degree(), b, &gamma)?;
            for (i, v) in image.augmented(out.len())?.into_iter().enumerate() {
                out[i] = super::add_coeff(out[i], mul_coeff(v, coeff)?)?;
            }
        }
        Ok(out)
    }

    /// `ρ(γ⁻¹·b) ⊗_J Z` for a canonical coset representative `γ`.
    pub fn restrict_coset_augmented(&self, degree: usize, index: usize, gamma: &Word) -> Result<Vec<i64>> {
        let Some(k) = &self.koszul else {
            let mut out = vec![0i64; self.ambient.rank(degree)];
            out[index] = 1;
            return Ok(out);
        };
        if degree > k.length() {
            return Ok(vec![0; k.rank(degree)]);
        }
        self.restrict_base(k, degree, index, gamma)?.augmented(k.rank(degree))
    }

    /// Homology coordinates of a cycle of `R` viewed in `H_*(J)`.
    pub fn reduce(&self, c: &Chain<Word>) -> Result<Vec<i64>> {
        let Some(h) = self.homology(c.degree()) else {
            return Ok(Vec::new());
        };
        let v = self.restrict_augmented(c)?;
        from_big(&h.reduce(&to_big(&v))?)
    }

    /// Pushforward `H_k(J) → H_k(C)` along an inclusion `J ≤ C`.
    pub fn push_class(&self, degree: usize, coords: &[i64], target: &SubgroupComplex) -> Result<Vec<i64>> {
        for g in self.subgroup.basis() {
            if target.group.subgroup_coordinates(&target.subgroup, g)?.is_none() {
                return Err(Error::invariant("pushforward along a non-inclusion"));
            }
        }
        if self.subgroup == target.subgroup {
            return Ok(coords.to_vec());
        }
        target.reduce(&self.lift_class(degree, coords)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{SearchBounds, SurfaceGroup};
    use crate::resolution::{boundary, SurfaceResolution};

    fn setup() -> (Arc<SurfaceGroup>, Arc<SurfaceResolution>) {
        let g = Arc::new(SurfaceGroup::new(2, SearchBounds::default()).unwrap());
        let r = Arc::new(SurfaceResolution::new(g.clone()).unwrap());
        (g, r)
    }

    #[test]
    fn cyclic_lift_is_a_chain_map_and_round_trips() {
        let (g, r) = setup();
        for w in ["a1", "a1*b1", "b2^-1*a1*a2"] {
            let root = g.normal_form(&g.alphabet().parse(w).unwrap());
            let s = SubgroupComplex::new(Subgroup::Cyclic(root.clone()), g.clone(), r.clone()).unwrap();
            let f1 = s.lift_cell(1, 0).unwrap();
            let mut expected = Chain::zero(0);
            expected.add_term(0, root.clone(), 1).unwrap();
            expected.add_term(0, Word::identity(), -1).unwrap();
            assert_eq!(boundary(r.as_ref(), &f1).unwrap(), expected);
            assert_eq!(s.reduce(&s.lift_class(1, &[1]).unwrap()).unwrap(), vec![1]);
            assert_eq!(s.reduce(&s.lift_class(0, &[3]).unwrap()).unwrap(), vec![3]);
        }
    }

    #[test]
    fn trivial_subgroup_counts_points() {
        let (g, r) = setup();
        let s = SubgroupComplex::new(Subgroup::Trivial, g.clone(), r).unwrap();
        let mut c = Chain::zero(0);
        c.add_term(0, g.alphabet().parse("a1").unwrap(), 2).unwrap();
        c.add_term(0, g.alphabet().parse("b2").unwrap(), 3).unwrap();
        assert_eq!(s.reduce(&c).unwrap(), vec![5]);
    }

    #[test]
    fn cyclic_class_pushes_into_whole_group() {
        let (g, r) = setup();
        let whole = SubgroupComplex::new(Subgroup::Whole, g.clone(), r.clone()).unwrap();
        let a1 =
            SubgroupComplex::new(Subgroup::Cyclic(g.alphabet().parse("a1").unwrap()), g.clone(), r.clone()).unwrap();
        assert_eq!(a1.push_class(1, &[1], &whole).unwrap(), vec![1, 0, 0, 0]);
        let sq = SubgroupComplex::new(Subgroup::Cyclic(g.alphabet().parse("a1^2").unwrap()), g.clone(), r).unwrap();
        assert_eq!(sq.push_class(1, &[1], &a1).unwrap(), vec![2]);
    }
}
