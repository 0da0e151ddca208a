//! Poincaré duality with trivial coefficients on the finite complex `R ⊗_G Z`,
//! by dense integer linear algebra. Shares only the resolution with the
//! coset-module pipeline.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{LGClass, LGElement};
use crate::error::{Error, Result};
use crate::group::{GroupOracle, Word};
use crate::linalg::{solve_integer_linear, FGAbelianGroup, IntegerMatrix};
use crate::resolution::{augmented_boundary, diagonal, from_big, homology, to_big, Resolution, TensorChain};

/// Cup and cap on `Hom_G(R, Z)` and `R ⊗_G Z`, where group elements act trivially.
#[derive(Debug)]
pub struct TrivialDuality<'a> {
    res: &'a dyn Resolution<Elem = Word>,
    n: usize,
    homology: Vec<FGAbelianGroup>,
    dz: TensorChain<Word>,
}

impl<'a> TrivialDuality<'a> {
    pub fn new(res: &'a dyn Resolution<Elem = Word>) -> Result<Self> {
        let n = res.length();
        let z = res.fundamental_cycle().ok_or_else(|| Error::Spec("resolution has no fundamental cycle".into()))?;
        let homology = (0..=n).map(|d| homology(res, d)).collect::<Result<_>>()?;
        let dz = diagonal(res, &z)?;
        Ok(TrivialDuality { res, n, homology, dz })
    }

    pub fn homology(&self, degree: usize) -> &FGAbelianGroup {
        &self.homology[degree]
    }

    /// Matrix of `φ ↦ z ∩ φ` from degree-`q` cochains to degree-`(n−q)` chains.
    fn cap_matrix(&self, q: usize) -> IntegerMatrix {
        let p = self.n - q;
        let mut m = IntegerMatrix::zeros(self.res.rank(p), self.res.rank(q));
        for (key, c) in self.dz.terms() {
            if key.left_degree == p {
                m[(key.left, key.right)] += c;
            }
        }
        m
    }

    pub fn cap(&self, q: usize, phi: &[i64]) -> Result<Vec<i64>> {
        from_big(&self.cap_matrix(q).mul_vec(&to_big(phi)))
    }

    /// `(φ∪ψ)(b) = Σ c·(−1)^{|φ||ψ|} φ(b1)ψ(b2)` over the terms of `Δb`.
    pub fn cup(&self, q1: usize, phi: &[i64], q2: usize, psi: &[i64]) -> Result<Vec<i64>> {
        let q = q1 + q2;
        if q > self.n {
            return Ok(Vec::new());
        }
        let sign = if (q1 * q2).is_multiple_of(2) { 1 } else { -1 };
        let mut out = vec![BigInt::zero(); self.res.rank(q)];
        for (b, o) in out.iter_mut().enumerate() {
            for (key, c) in self.res.diagonal_cell(q, b)?.terms() {
                if key.left_degree == q1 {
                    *o += BigInt::from(c * sign) * phi[key.left] * psi[key.right];
                }
            }
        }
        from_big(&out)
    }

    /// A cocycle `φ` of degree `n − p` with `[z ∩ φ]` the given class of `H_p(G)`.
    pub fn inverse(&self, p: usize, coords: &[i64]) -> Result<Vec<i64>> {
        let q = self.n - p;
        let h = &self.homology[p];
        let cells = self.res.rank(q);
        // δφ = 0 on every cell above, then the class condition.
        let d = augmented_boundary(self.res, q + 1)?;
        let class = h.reduce_matrix() * &self.cap_matrix(q);
        let mut a = IntegerMatrix::zeros(d.cols() + class.rows(), cells);
        for r in 0..d.cols() {
            for c in 0..cells {
                a[(r, c)] = d[(c, r)].clone();
            }
        }
        for r in 0..class.rows() {
            for c in 0..cells {
                a[(d.cols() + r, c)] = class[(r, c)].clone();
            }
        }
        let mut rhs = vec![BigInt::zero(); d.cols()];
        rhs.extend(coords.iter().map(|&c| BigInt::from(c)));
        let x = solve_integer_linear(&a, &rhs).ok_or_else(|| Error::invariant("trivial duality is not onto"))?;
        from_big(&x)
    }

    /// `D(D⁻¹x ∪ D⁻¹y)` for `x ∈ H_i(G)`, `y ∈ H_j(G)`, as coordinates in `H_{i+j−n}(G)`.
    /// Empty when `i + j < n`.
    pub fn intersect(&self, i: usize, x: &[i64], j: usize, y: &[i64]) -> Result<Vec<i64>> {
        if i + j < self.n {
            return Ok(Vec::new());
        }
        let (q1, q2) = (self.n - i, self.n - j);
        let theta = self.cup(q1, &self.inverse(i, x)?, q2, &self.inverse(j, y)?)?;
        let chain = self.cap(q1 + q2, &theta)?;
        from_big(&self.homology[i + j - self.n].reduce(&to_big(&chain))?)
    }
}

/// The intersection product on `H_*(G)` dual to the cup product.
pub fn global_intersection_oracle(
    res: &dyn Resolution<Elem = Word>,
    i: usize,
    x: &[i64],
    j: usize,
    y: &[i64],
) -> Result<Vec<i64>> {
    TrivialDuality::new(res)?.intersect(i, x, j, y)
}

/// The string product of an abelian group in closed form: every centralizer is
/// the whole group, there is one double coset, and labels multiply.
pub fn abelian_oracle(
    group: &dyn GroupOracle,
    res: &dyn Resolution<Elem = Word>,
    x: &LGClass,
    y: &LGClass,
) -> Result<LGElement> {
    if !group.is_abelian() {
        return Err(Error::Spec("the abelian oracle needs an abelian group".into()));
    }
    let n = res.length() as i64;
    let degree = x.degree + y.degree;
    if degree < -n {
        return Ok(LGElement::zero());
    }
    let (i, j) = ((x.degree + n) as usize, (y.degree + n) as usize);
    let coords = global_intersection_oracle(res, i, &x.coords, j, &y.coords)?;
    let label = group.normal_form(&x.label.concat(&y.label));
    Ok(LGElement::from_class(LGClass { label, degree, coords }))
}
