use std::sync::Arc;

use super::{Chain, Koszul, Resolution, TensorChain, TensorKey};
use crate::error::Result;
use crate::group::{FreeAbelianGroup, GroupOracle, Word};

/// The Koszul resolution of `Z^n` on the standard basis, with elements as words.
#[derive(Debug)]
pub struct TorusResolution {
    group: Arc<FreeAbelianGroup>,
    koszul: Koszul,
    boundaries: Vec<Vec<Arc<Chain<Word>>>>,
    diagonals: Vec<Vec<Arc<TensorChain<Word>>>>,
}

impl TorusResolution {
    pub fn new(group: Arc<FreeAbelianGroup>) -> Result<Self> {
        let alphabet = group.alphabet();
        let koszul = Koszul::new((0..group.rank()).map(|i| alphabet.name(i)).collect())?;
        let mut t = TorusResolution { group, koszul, boundaries: Vec::new(), diagonals: Vec::new() };
        let n = t.koszul.length();
        t.boundaries = (0..=n)
            .map(|d| {
                (0..t.koszul.rank(d))
                    .map(|i| t.to_words(&t.koszul.boundary_cell(d, i)).map(Arc::new))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        t.diagonals = (0..=n)
            .map(|d| {
                (0..t.koszul.rank(d))
                    .map(|i| {
                        let src = t.koszul.diagonal_cell(d, i)?;
                        let mut out = TensorChain::zero(d);
                        for (k, c) in src.terms() {
                            let key = TensorKey {
                                left_degree: k.left_degree,
                                left: k.left,
                                left_elem: t.group.from_vector(&k.left_elem),
                                right: k.right,
                                right_elem: t.group.from_vector(&k.right_elem),
                            };
                            out.add_term(key, c)?;
                        }
                        Ok(Arc::new(out))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(t)
    }

    pub fn group(&self) -> &Arc<FreeAbelianGroup> {
        &self.group
    }

    fn to_words(&self, c: &Chain<Vec<i64>>) -> Result<Chain<Word>> {
        let mut out = Chain::zero(c.degree());
        for (b, v, coeff) in c.terms() {
            out.add_term(b, self.group.from_vector(v), coeff)?;
        }
        Ok(out)
    }
}

impl Resolution for TorusResolution {
    type Elem = Word;

    fn length(&self) -> usize {
        self.koszul.length()
    }

    fn rank(&self, degree: usize) -> usize {
        self.koszul.rank(degree)
    }

    fn cell_name(&self, degree: usize, index: usize) -> String {
        self.koszul.cell_name(degree, index)
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
        let h = self.koszul.homotopy_term(degree, index, &self.group.to_vector(g))?;
        self.to_words(&h)
    }

    fn diagonal_cell(&self, degree: usize, index: usize) -> Result<Arc<TensorChain<Word>>> {
        Ok(self.diagonals[degree][index].clone())
    }

    fn fundamental_cycle(&self) -> Option<Chain<Word>> {
        let n = self.length();
        Some(Chain::cell(n, 0, Word::identity(), 1))
    }
}
