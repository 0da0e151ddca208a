use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Alphabet, ConjugacyLabel, CosetRep, DoubleCosetRep, GroupOracle, Letter, SearchBounds, Subgroup, Word};
use crate::error::{Error, Result};
use crate::linalg::{hermite_basis, smith_normal_form, solve_integer_linear, IntegerMatrix};

/// The free abelian group `Zⁿ`, elements written `e1^x1*e2^x2*…`.
#[derive(Clone, Debug)]
pub struct FreeAbelianGroup {
    rank: usize,
    alphabet: Alphabet,
    bounds: SearchBounds,
}

impl FreeAbelianGroup {
    pub fn new(rank: usize, bounds: SearchBounds) -> Self {
        Self::with_alphabet(rank, Alphabet::FreeAbelian { rank }, bounds)
    }

    /// `Zⁿ` under another naming scheme (the torus uses `a1, b1`).
    pub fn with_alphabet(rank: usize, alphabet: Alphabet, bounds: SearchBounds) -> Self {
        assert_eq!(alphabet.generator_count(), rank);
        FreeAbelianGroup { rank, alphabet, bounds }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn to_vector(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        for l in w.letters() {
            v[l.generator()] += l.sign();
        }
        v
    }

    pub fn from_vector(&self, v: &[i64]) -> Word {
        let mut letters = Vec::new();
        for (i, &x) in v.iter().enumerate() {
            for _ in 0..x.unsigned_abs() {
                letters.push(Letter::new(i, x < 0));
            }
        }
        Word::from_letters(letters)
    }

    fn big(&self, w: &Word) -> Vec<BigInt> {
        self.to_vector(w).into_iter().map(BigInt::from).collect()
    }

    fn basis_matrix(&self, basis: &[Word]) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rank, basis.len());
        for (j, b) in basis.iter().enumerate() {
            for (i, x) in self.to_vector(b).into_iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    /// Canonical descriptor of the lattice spanned by `gens`.
    pub fn lattice(&self, gens: &[Word]) -> Subgroup {
        let rows: Vec<Vec<BigInt>> = gens.iter().map(|g| self.big(g)).collect();
        let basis = hermite_basis(&rows, self.rank);
        let words: Vec<Word> = basis
            .iter()
            .map(|r| self.from_vector(&r.iter().map(|x| x.to_i64().expect("small lattice")).collect::<Vec<_>>()))
            .collect();
        match words.len() {
            0 => Subgroup::Trivial,
            1 => Subgroup::Cyclic(words.into_iter().next().unwrap()),
            n if n == self.rank && basis.iter().enumerate().all(|(i, r)| r[i] == BigInt::from(1)) => Subgroup::Whole,
            _ => Subgroup::FreeAbelian(words),
        }
    }

    fn lattice_basis(&self, s: &Subgroup) -> Vec<Word> {
        match s {
            Subgroup::Whole => (0..self.rank).map(|i| Word::power_of(i, 1)).collect(),
            other => other.basis().to_vec(),
        }
    }

    /// ShortLex-minimal point of `g + span(basis)` by exhaustive search in a certified box.
    fn lattice_coset_min(&self, g: &[i64], basis: &[Word]) -> (Vec<i64>, Vec<i64>) {
        let k = basis.len();
        if k == 0 {
            return (g.to_vec(), Vec::new());
        }
        let vecs: Vec<Vec<i64>> = basis.iter().map(|b| self.to_vector(b)).collect();
        let norm: i64 = g.iter().map(|x| x.abs()).sum();
        // Any better point y has |y|₁ ≤ |g|₁, so |B·v| ≤ 2|g|₁ coordinatewise;
        // bound v through a nonsingular k×k minor of B.
        let rows = nonsingular_rows(&vecs, self.rank).expect("basis is independent");
        let mut minor = IntegerMatrix::zeros(k, k);
        for (i, &r) in rows.iter().enumerate() {
            for (j, v) in vecs.iter().enumerate() {
                minor[(i, j)] = BigInt::from(v[r]);
            }
        }
        let det = minor.determinant().abs();
        let adj_bound = adjugate_row_sums(&minor);
        let reach = BigInt::from(2 * norm);
        let radius: Vec<i64> =
            adj_bound.iter().map(|s| ((s * &reach) / &det).to_i64().expect("box radius fits") + 1).collect();
        let mut best: Option<(Word, Vec<i64>)> = None;
        let mut v: Vec<i64> = radius.iter().map(|r| -r).collect();
        loop {
            let mut y = g.to_vec();
            for (c, b) in v.iter().zip(&vecs) {
                for (yi, bi) in y.iter_mut().zip(b) {
                    *yi += c * bi;
                }
            }
            if y.iter().map(|x| x.abs()).sum::<i64>() <= norm {
                let w = self.from_vector(&y);
                if best.as_ref().is_none_or(|(b, _)| w < *b) {
                    best = Some((w, v.clone()));
                }
            }
            // odometer increment over the box
            let mut i = 0;
            loop {
                if i == k {
                    let (w, v) = best.expect("the start point lies in the box");
                    return (self.to_vector(&w), v);
                }
                v[i] += 1;
                if v[i] <= radius[i] {
                    break;
                }
                v[i] = -radius[i];
                i += 1;
            }
        }
    }

    fn combine(&self, basis: &[Word], coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for (b, &c) in basis.iter().zip(coords) {
            for (o, x) in out.iter_mut().zip(self.to_vector(b)) {
                *o += c * x;
            }
        }
        out
    }
}

fn nonsingular_rows(vecs: &[Vec<i64>], dim: usize) -> Option<Vec<usize>> {
    let k = vecs.len();
    let mut chosen = Vec::new();
    fn go(start: usize, dim: usize, k: usize, vecs: &[Vec<i64>], chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            let mut m = IntegerMatrix::zeros(k, k);
            for (i, &r) in chosen.iter().enumerate() {
                for (j, v) in vecs.iter().enumerate() {
                    m[(i, j)] = BigInt::from(v[r]);
                }
            }
            return !m.determinant().is_zero();
        }
        for r in start..dim {
            chosen.push(r);
            if go(r + 1, dim, k, vecs, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(0, dim, k, vecs, &mut chosen).then_some(chosen)
}

/// Row sums of |adj(M)|, bounding |M⁻¹·x|ᵢ·|det M| for |x|∞ ≤ 1.
fn adjugate_row_sums(m: &IntegerMatrix) -> Vec<BigInt> {
    let k = m.rows();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    // adj(M)[i][j] = (−1)^{i+j} det(M without row j, col i)
                    let mut sub = IntegerMatrix::zeros(k - 1, k - 1);
                    for (ri, r) in (0..k).filter(|&r| r != j).enumerate() {
                        for (ci, c) in (0..k).filter(|&c| c != i).enumerate() {
                            sub[(ri, ci)] = m[(r, c)].clone();
                        }
                    }
                    sub.determinant().abs()
                })
                .sum()
        })
        .collect()
}

impl GroupOracle for FreeAbelianGroup {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn duality_dimension(&self) -> usize {
        self.rank
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    fn normal_form(&self, w: &Word) -> Word {
        self.from_vector(&self.to_vector(w))
    }

    fn conjugacy_label(&self, g: &Word) -> Result<ConjugacyLabel> {
        Ok(ConjugacyLabel { label: self.normal_form(g), conjugator: Word::identity() })
    }

    fn root(&self, g: &Word) -> Result<(Word, i64)> {
        let v = self.to_vector(g);
        let k = v.iter().fold(0i64, |a, &b| a.gcd(&b));
        if k == 0 {
            return Err(Error::Spec("the identity has no root".into()));
        }
        let r: Vec<i64> = v.iter().map(|x| x / k).collect();
        Ok((self.from_vector(&r), k))
    }

    fn centralizer(&self, _g: &Word) -> Result<Subgroup> {
        Ok(Subgroup::Whole)
    }

    fn subgroup_coordinates(&self, s: &Subgroup, g: &Word) -> Result<Option<Vec<i64>>> {
        match s {
            Subgroup::Whole => Ok(Some(Vec::new())),
            Subgroup::Trivial => Ok(self.to_vector(g).iter().all(|&x| x == 0).then(Vec::new)),
            _ => {
                let m = self.basis_matrix(s.basis());
                Ok(solve_integer_linear(&m, &self.big(g))
                    .map(|x| x.iter().map(|v| v.to_i64().expect("coordinate fits")).collect()))
            }
        }
    }

    fn coset_canonical(&self, g: &Word, s: &Subgroup) -> Result<CosetRep> {
        let v = self.to_vector(g);
        Ok(match s {
            Subgroup::Whole => CosetRep { rep: Word::identity(), k: self.invert(g), k_coords: Vec::new() },
            Subgroup::Trivial => CosetRep { rep: self.normal_form(g), k: Word::identity(), k_coords: Vec::new() },
            _ => {
                let (y, coords) = self.lattice_coset_min(&v, s.basis());
                let k = self.from_vector(&self.combine(s.basis(), &coords));
                CosetRep { rep: self.from_vector(&y), k, k_coords: coords }
            }
        })
    }

    fn double_coset(&self, g: &Word, k: &Subgroup, h: &Subgroup) -> Result<DoubleCosetRep> {
        let g = self.normal_form(g);
        if k.is_whole() {
            return Ok(DoubleCosetRep { rep: Word::identity(), k: self.invert(&g), h: Word::identity() });
        }
        if h.is_whole() {
            return Ok(DoubleCosetRep { rep: Word::identity(), k: Word::identity(), h: self.invert(&g) });
        }
        let kb = self.lattice_basis(k);
        let hb = self.lattice_basis(h);
        let gens: Vec<Word> = kb.iter().chain(&hb).cloned().collect();
        let sum = self.lattice(&gens);
        let rep = self.coset_canonical(&g, &sum)?.rep;
        // split rep − g between K and H
        let diff: Vec<BigInt> =
            self.to_vector(&rep).iter().zip(self.to_vector(&g)).map(|(a, b)| BigInt::from(a - b)).collect();
        let m = self.basis_matrix(&gens);
        let x = solve_integer_linear(&m, &diff).ok_or_else(|| Error::invariant("double coset split failed"))?;
        let x: Vec<i64> = x.iter().map(|v| v.to_i64().expect("fits")).collect();
        let kw = self.from_vector(&self.combine(&kb, &x[..kb.len()]));
        let hw = self.from_vector(&self.combine(&hb, &x[kb.len()..]));
        Ok(DoubleCosetRep { rep, k: kw, h: hw })
    }

    fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        match (a, b) {
            (Subgroup::Whole, x) | (x, Subgroup::Whole) => return Ok(x.clone()),
            (Subgroup::Trivial, _) | (_, Subgroup::Trivial) => return Ok(Subgroup::Trivial),
            _ => {}
        }
        let ab = a.basis();
        let bb = b.basis();
        // kernel of [A | −B] gives the common lattice points A·x = B·y
        let mut m = IntegerMatrix::zeros(self.rank, ab.len() + bb.len());
        for (j, w) in ab.iter().enumerate() {
            for (i, x) in self.to_vector(w).into_iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        for (j, w) in bb.iter().enumerate() {
            for (i, x) in self.to_vector(w).into_iter().enumerate() {
                m[(i, ab.len() + j)] = BigInt::from(-x);
            }
        }
        let snf = smith_normal_form(&m);
        let mut gens = Vec::new();
        for col in snf.rank..m.cols() {
            let x = snf.v.column(col);
            let coords: Vec<i64> = x[..ab.len()].iter().map(|v| v.to_i64().expect("fits")).collect();
            gens.push(self.from_vector(&self.combine(ab, &coords)));
        }
        Ok(self.lattice(&gens))
    }

    fn enumerate_ball(&self, radius: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut v = vec![0i64; self.rank];
        let r = radius as i64;
        fn go(i: usize, left: i64, v: &mut Vec<i64>, out: &mut Vec<Word>, me: &FreeAbelianGroup) {
            if i == v.len() {
                out.push(me.from_vector(v));
                return;
            }
            for x in -left..=left {
                v[i] = x;
                go(i + 1, left - x.abs(), v, out, me);
            }
            v[i] = 0;
        }
        go(0, r, &mut v, &mut out, self);
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FreeAbelianGroup {
        FreeAbelianGroup::new(n, SearchBounds::default())
    }

    #[test]
    fn collection() {
        let g = z(2);
        let w = g.alphabet().parse("e1*e2*e1^-1").unwrap();
        assert_eq!(g.normal_form(&w), g.alphabet().parse("e2").unwrap());
    }

    #[test]
    fn coset_kills_subgroup_coordinate() {
        let g = z(2);
        let k = Subgroup::Cyclic(g.from_vector(&[1, 0]));
        let c = g.coset_canonical(&g.from_vector(&[3, 5]), &k).unwrap();
        assert_eq!(g.to_vector(&c.rep), vec![0, 5]);
        assert_eq!(c.k_coords, vec![-3]);
    }

    #[test]
    fn double_cosets() {
        let g = z(2);
        let k = Subgroup::Cyclic(g.from_vector(&[1, 0]));
        let key = |v: &[i64]| g.double_coset(&g.from_vector(v), &k, &k).unwrap().rep;
        assert_eq!(key(&[0, 1]), key(&[1, 1]));
        assert_ne!(key(&[0, 1]), key(&[0, 2]));
        let d = g.double_coset(&g.from_vector(&[4, 3]), &k, &k).unwrap();
        let back = g.multiply(&g.multiply(&d.k, &g.from_vector(&[4, 3])), &d.h);
        assert_eq!(back, d.rep);
    }

    #[test]
    fn lattice_intersection() {
        let g = z(3);
        let a = g.lattice(&[g.from_vector(&[1, 0, 0]), g.from_vector(&[0, 1, 0])]);
        let b = g.lattice(&[g.from_vector(&[0, 1, 0]), g.from_vector(&[0, 0, 1])]);
        assert_eq!(g.intersect(&a, &b).unwrap(), Subgroup::Cyclic(g.from_vector(&[0, 1, 0])));
        assert_eq!(g.intersect(&Subgroup::Whole, &b).unwrap(), b);
    }

    #[test]
    fn roots() {
        let g = z(3);
        let (r, k) = g.root(&g.from_vector(&[2, 0, 4])).unwrap();
        assert_eq!((g.to_vector(&r), k), (vec![1, 0, 2], 2));
    }

    #[test]
    fn ball_sizes() {
        // |{v ∈ Z² : |v|₁ ≤ r}| = 2r² + 2r + 1
        let g = z(2);
        for r in 0..4 {
            assert_eq!(g.enumerate_ball(r).len(), 2 * r * r + 2 * r + 1);
        }
    }
}
