use std::sync::Arc;

use dashmap::DashMap;

use super::{boundary, inductive_diagonal, Chain, Resolution, TensorChain};
use crate::error::{Error, Result};
use crate::group::{GroupOracle, Letter, SurfaceGroup, Word};

/// The one-relator resolution `Z[G]σ → ⊕_x Z[G]e_x → Z[G]e0` of a surface group.
///
/// `∂e_x = (x − 1)e0` and `∂σ` is the Fox-derivative path chain of the relator.
/// The homotopy sends `g·e0` to the path chain of the ShortLex spelling of `g`
/// and fills the resulting loops in degree one by Dehn reduction; every filling
/// is checked against the homotopy identity.
#[derive(Debug)]
pub struct SurfaceResolution {
    group: Arc<SurfaceGroup>,
    sides: [Vec<Letter>; 2],
    positions: [Vec<usize>; 2],
    boundaries: [Vec<Arc<Chain<Word>>>; 3],
    fillings: DashMap<(Word, usize), Arc<Chain<Word>>>,
    diagonals: DashMap<(usize, usize), Arc<TensorChain<Word>>>,
}

fn free_reduce(w: &mut Vec<Letter>) {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

impl SurfaceResolution {
    pub fn new(group: Arc<SurfaceGroup>) -> Result<Self> {
        let rel = group.relator().into_letters();
        let inv: Vec<Letter> = rel.iter().rev().map(|l| l.inverse()).collect();
        let positions = [&rel, &inv].map(|side| {
            let mut pos = vec![usize::MAX; side.len()];
            for (i, l) in side.iter().enumerate() {
                pos[l.index() as usize] = i;
            }
            pos
        });
        let mut res = SurfaceResolution {
            group,
            sides: [rel, inv],
            positions,
            boundaries: [Vec::new(), Vec::new(), Vec::new()],
            fillings: DashMap::new(),
            diagonals: DashMap::new(),
        };
        let gens = 2 * res.group.genus();
        res.boundaries[0] = vec![Arc::new(Chain::zero(0))];
        res.boundaries[1] = (0..gens)
            .map(|x| {
                let mut c = Chain::zero(0);
                c.add_term(0, Word::letter(Letter::new(x, false)), 1)?;
                c.add_term(0, Word::identity(), -1)?;
                Ok(Arc::new(c))
            })
            .collect::<Result<_>>()?;
        res.boundaries[2] = vec![Arc::new(res.path(&res.sides[0].clone())?)];
        Ok(res)
    }

    pub fn group(&self) -> &Arc<SurfaceGroup> {
        &self.group
    }

    /// Fox path chain of a word: `∂path(w) = (w − 1)e0`.
    pub fn path(&self, w: &[Letter]) -> Result<Chain<Word>> {
        let mut out = Chain::zero(1);
        let mut prefix = Word::identity();
        for &l in w {
            let next = self.group.multiply(&prefix, &Word::letter(l));
            if l.is_inverse() {
                out.add_term(l.generator(), next.clone(), -1)?;
            } else {
                out.add_term(l.generator(), prefix.clone(), 1)?;
            }
            prefix = next;
        }
        Ok(out)
    }

    /// A 2-chain `F` with `∂F = path(w)` for a word `w` trivial in the group.
    fn fill(&self, w: &[Letter]) -> Result<Chain<Word>> {
        let m = self.sides[0].len();
        let mut cur = w.to_vec();
        free_reduce(&mut cur);
        let mut faces = Chain::zero(2);
        while !cur.is_empty() {
            let mut found = None;
            'search: for s in 0..cur.len() {
                for side in 0..2 {
                    let rel = &self.sides[side];
                    let p = self.positions[side][cur[s].index() as usize];
                    let mut len = 0;
                    while s + len < cur.len() && len < m && cur[s + len] == rel[(p + len) % m] {
                        len += 1;
                    }
                    if 2 * len > m {
                        found = Some((s, side, p, len));
                        break 'search;
                    }
                }
            }
            let Some((s, side, p, len)) = found else {
                return Err(Error::invariant("Dehn filling found no long relator piece in a trivial word"));
            };
            let rel = &self.sides[side];
            // cur[s..s+len]·v⁻¹ is the relator read from position p, a conjugate q⁻¹R^±q
            let q_inv = Word::from_letters(rel[..p].iter().rev().map(|l| l.inverse()).collect());
            let prefix = Word::from_letters(cur[..s].to_vec());
            let at = self.group.multiply(&prefix, &q_inv);
            faces.add_term(0, at, if side == 0 { 1 } else { -1 })?;
            let v: Vec<Letter> = (len..m).rev().map(|t| rel[(p + t) % m].inverse()).collect();
            let mut next = cur[..s].to_vec();
            next.extend(v);
            next.extend_from_slice(&cur[s + len..]);
            free_reduce(&mut next);
            cur = next;
        }
        Ok(faces)
    }

    fn degree_one_homotopy(&self, x: usize, g: &Word) -> Result<Arc<Chain<Word>>> {
        let key = (g.clone(), x);
        if let Some(hit) = self.fillings.get(&key) {
            return Ok(hit.clone());
        }
        let letter = Letter::new(x, false);
        let gx = self.group.multiply(g, &Word::letter(letter));
        // ∂h(g·e_x) must equal g·e_x − h(∂(g·e_x)) = path(g) + g·e_x − path(gx)
        let mut target = self.path(g.letters())?;
        target.add_term(x, g.clone(), 1)?;
        target.add_scaled(&self.path(gx.letters())?, -1)?;
        let filling = if target.is_zero() {
            Chain::zero(2)
        } else {
            let mut loop_word = g.letters().to_vec();
            loop_word.push(letter);
            loop_word.extend(gx.inverse().into_letters());
            let f = self.fill(&loop_word)?;
            if boundary(self, &f)? != target {
                return Err(Error::invariant(format!("Dehn filling of {g:?}·{x} fails the homotopy identity")));
            }
            f
        };
        let filling = Arc::new(filling);
        self.fillings.insert(key, filling.clone());
        Ok(filling)
    }
}

impl Resolution for SurfaceResolution {
    type Elem = Word;

    fn length(&self) -> usize {
        2
    }

    fn rank(&self, degree: usize) -> usize {
        match degree {
            0 | 2 => 1,
            1 => 2 * self.group.genus(),
            _ => 0,
        }
    }

    fn cell_name(&self, degree: usize, index: usize) -> String {
        match degree {
            0 => "pt".to_string(),
            1 => self.group.alphabet().name(index),
            _ => "sigma".to_string(),
        }
    }

    fn identity(&self) -> Word {
        Word::identity()
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        self.group.multiply(a, b)
    }

    fn boundary_cell(&self, degree: usize, index: usize) -> Arc<Chain<Word>> {
        self.boundaries[degree][index].clone()
    }

    fn homotopy_term(&self, degree: usize, index: usize, g: &Word) -> Result<Chain<Word>> {
        match degree {
            0 => self.path(g.letters()),
            1 => Ok((*self.degree_one_homotopy(index, g)?).clone()),
            _ => Ok(Chain::zero(degree + 1)),
        }
    }

    fn diagonal_cell(&self, degree: usize, index: usize) -> Result<Arc<TensorChain<Word>>> {
        if let Some(hit) = self.diagonals.get(&(degree, index)) {
            return Ok(hit.clone());
        }
        let d = Arc::new(inductive_diagonal(self, degree, index)?);
        self.diagonals.insert((degree, index), d.clone());
        Ok(d)
    }

    fn derives_diagonals(&self) -> bool {
        true
    }

    fn install_diagonal(&self, degree: usize, index: usize, d: TensorChain<Word>) -> Result<()> {
        self.diagonals.insert((degree, index), Arc::new(d));
        if let Err(e) = super::check_diagonal(self, degree, index) {
            self.diagonals.remove(&(degree, index));
            return Err(e);
        }
        Ok(())
    }

    fn fundamental_cycle(&self) -> Option<Chain<Word>> {
        Some(Chain::cell(2, 0, Word::identity(), 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SearchBounds;
    use crate::resolution::{check_all, check_homotopy, homology, homotopy};

    fn res(genus: usize) -> SurfaceResolution {
        SurfaceResolution::new(Arc::new(SurfaceGroup::new(genus, SearchBounds::default()).unwrap())).unwrap()
    }

    #[test]
    fn fox_coefficient_of_a1() {
        // coefficient of e_a1 in ∂σ is 1 − a1·b1·a1⁻¹
        let r = res(2);
        let g = r.group().clone();
        let d = r.boundary_cell(2, 0);
        let coeff: Vec<(Word, i64)> = d.terms().filter(|(b, _, _)| *b == 0).map(|(_, w, c)| (w.clone(), c)).collect();
        let conj = g.alphabet().parse("a1*b1*a1^-1").unwrap();
        let mut expected = vec![(Word::identity(), 1), (g.normal_form(&conj), -1)];
        expected.sort();
        assert_eq!(coeff, expected);
    }

    #[test]
    fn invariants_on_all_cells() {
        for genus in [2, 3] {
            let r = res(genus);
            let g = r.group().clone();
            let samples: Vec<Chain<Word>> = g
                .enumerate_ball(2)
                .into_iter()
                .enumerate()
                .flat_map(|(i, w)| {
                    [
                        Chain::cell(0, 0, w.clone(), 1),
                        Chain::cell(1, i % (2 * genus), w.clone(), -2),
                        Chain::cell(2, 0, w, 1),
                    ]
                })
                .collect();
            check_all(&r, &samples).unwrap();
        }
    }

    #[test]
    fn homotopy_inverts_boundary_on_augmentation_free_chains() {
        let r = res(2);
        let g = r.group().clone();
        let p = |t: &str| g.normal_form(&g.alphabet().parse(t).unwrap());
        let mut c = Chain::zero(0);
        c.add_term(0, p("a1*b2^-1*a2"), 2).unwrap();
        c.add_term(0, p("b1^2"), -1).unwrap();
        c.add_term(0, Word::identity(), -1).unwrap();
        let b = homotopy(&r, &c).unwrap();
        assert_eq!(boundary(&r, &b).unwrap(), c);
        check_homotopy(&r, &Chain::cell(1, 2, p("b1*a2*b2^-1*a1"), 1)).unwrap();
    }

    #[test]
    fn homology_of_genus_two() {
        let r = res(2);
        let ranks: Vec<usize> = (0..=2).map(|d| homology(&r, d).unwrap().free_rank).collect();
        assert_eq!(ranks, vec![1, 4, 1]);
    }
}
