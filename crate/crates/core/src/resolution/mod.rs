//! Free resolutions of the trivial module, with contracting homotopies,
//! diagonal approximations and chain maps along subgroup inclusions.

mod chain;
mod koszul;
mod subgroup;
mod surface;
mod torus;

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;

pub use chain::{add_coeff, mul_coeff, Chain, Elem, TensorChain, TensorKey};
pub use koszul::Koszul;
pub use subgroup::{from_big, to_big, SubgroupComplex};
pub use surface::SurfaceResolution;
pub use torus::TorusResolution;

use crate::error::{Error, Result};
use crate::linalg::{homology_of_pair, FGAbelianGroup, IntegerMatrix};

/// A finite free resolution `0 → R_len → … → R_0 → Z` over a group ring.
///
/// Chains are combinations of translates `g·b` of basis cells; boundaries are
/// equivariant, the homotopy is only `Z`-linear.
pub trait Resolution: Send + Sync + Debug {
    type Elem: Elem;

    fn length(&self) -> usize;

    fn rank(&self, degree: usize) -> usize;

    fn cell_name(&self, degree: usize, index: usize) -> String;

    fn identity(&self) -> Self::Elem;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Boundary of the untranslated basis cell.
    fn boundary_cell(&self, degree: usize, index: usize) -> Arc<Chain<Self::Elem>>;

    /// Contracting homotopy `h` on the single translate `g·b` of cell `index`.
    fn homotopy_term(&self, degree: usize, index: usize, g: &Self::Elem) -> Result<Chain<Self::Elem>>;

    /// Diagonal approximation of the untranslated basis cell.
    fn diagonal_cell(&self, degree: usize, index: usize) -> Result<Arc<TensorChain<Self::Elem>>>;

    /// Whether diagonals are derived by the inductive lift (and so worth persisting).
    fn derives_diagonals(&self) -> bool {
        false
    }

    /// Accepts a diagonal computed earlier after checking the diagonal laws on it.
    fn install_diagonal(&self, degree: usize, index: usize, d: TensorChain<Self::Elem>) -> Result<()> {
        if *self.diagonal_cell(degree, index)? != d {
            return Err(Error::invariant("installed diagonal differs from the closed form"));
        }
        Ok(())
    }

    /// The fundamental cycle, present only for the duality group itself.
    fn fundamental_cycle(&self) -> Option<Chain<Self::Elem>>;
}

fn check_degree<R: Resolution + ?Sized>(res: &R, degree: usize) -> Result<()> {
    if degree > res.length() {
        return Err(Error::Spec(format!("degree {degree} exceeds resolution length {}", res.length())));
    }
    Ok(())
}

pub fn boundary<R: Resolution + ?Sized>(res: &R, c: &Chain<R::Elem>) -> Result<Chain<R::Elem>> {
    check_degree(res, c.degree())?;
    if c.degree() == 0 {
        return Ok(Chain::zero(0));
    }
    let mut out = Chain::zero(c.degree() - 1);
    for (b, g, coeff) in c.terms() {
        let db = res.boundary_cell(c.degree(), b);
        for (b2, h, c2) in db.terms() {
            out.add_term(b2, res.mul(g, h), mul_coeff(coeff, c2)?)?;
        }
    }
    Ok(out)
}

pub fn homotopy<R: Resolution + ?Sized>(res: &R, c: &Chain<R::Elem>) -> Result<Chain<R::Elem>> {
    check_degree(res, c.degree())?;
    let mut out = Chain::zero(c.degree() + 1);
    if c.degree() == res.length() {
        return Ok(out);
    }
    for (b, g, coeff) in c.terms() {
        out.add_scaled(&res.homotopy_term(c.degree(), b, g)?, coeff)?;
    }
    Ok(out)
}

/// `η(ε(c))`: the augmentation of a degree-0 chain placed on the untranslated cell.
pub fn eta_epsilon<R: Resolution + ?Sized>(res: &R, c: &Chain<R::Elem>) -> Result<Chain<R::Elem>> {
    if c.degree() != 0 {
        return Ok(Chain::zero(c.degree()));
    }
    Ok(Chain::cell(0, 0, res.identity(), c.augmentation()?))
}

/// Equivariant extension of the cellwise diagonal.
pub fn diagonal<R: Resolution + ?Sized>(res: &R, c: &Chain<R::Elem>) -> Result<TensorChain<R::Elem>> {
    let mut out = TensorChain::zero(c.degree());
    for (b, g, coeff) in c.terms() {
        let d = res.diagonal_cell(c.degree(), b)?;
        out.add_scaled(&d.translated(g, |x, y| res.mul(x, y))?, coeff)?;
    }
    Ok(out)
}

fn split<E: Elem>(key: &TensorKey<E>, total: usize) -> (Chain<E>, Chain<E>) {
    (
        Chain::cell(key.left_degree, key.left, key.left_elem.clone(), 1),
        Chain::cell(total - key.left_degree, key.right, key.right_elem.clone(), 1),
    )
}

/// `∂(x⊗y) = ∂x⊗y + (−1)^{|x|} x⊗∂y`
pub fn tensor_boundary<R: Resolution + ?Sized>(res: &R, t: &TensorChain<R::Elem>) -> Result<TensorChain<R::Elem>> {
    if t.degree() == 0 {
        return Ok(TensorChain::zero(0));
    }
    let mut out = TensorChain::zero(t.degree() - 1);
    for (key, c) in t.terms() {
        let (x, y) = split(key, t.degree());
        if x.degree() > 0 {
            out.add_product(&boundary(res, &x)?, &y, c)?;
        }
        if y.degree() > 0 {
            let sign = if x.degree() % 2 == 0 { 1 } else { -1 };
            out.add_product(&x, &boundary(res, &y)?, mul_coeff(c, sign)?)?;
        }
    }
    Ok(out)
}

/// Contracting homotopy `h⊗1 + ηε⊗h` of `R ⊗ R`.
pub fn tensor_homotopy<R: Resolution + ?Sized>(res: &R, t: &TensorChain<R::Elem>) -> Result<TensorChain<R::Elem>> {
    let mut out = TensorChain::zero(t.degree() + 1);
    for (key, c) in t.terms() {
        let (x, y) = split(key, t.degree());
        if x.degree() < res.length() {
            out.add_product(&homotopy(res, &x)?, &y, c)?;
        }
        if x.degree() == 0 && y.degree() < res.length() {
            out.add_product(&eta_epsilon(res, &x)?, &homotopy(res, &y)?, c)?;
        }
    }
    Ok(out)
}

/// Diagonal of a basis cell by the inductive lift `Δ(b) = H(Δ(∂b))`.
pub fn inductive_diagonal<R: Resolution + ?Sized>(
    res: &R,
    degree: usize,
    index: usize,
) -> Result<TensorChain<R::Elem>> {
    if degree == 0 {
        let e = Chain::cell(0, 0, res.identity(), 1);
        let mut t = TensorChain::zero(0);
        t.add_product(&e, &e, 1)?;
        return Ok(t);
    }
    let db = boundary(res, &Chain::cell(degree, index, res.identity(), 1))?;
    tensor_homotopy(res, &diagonal(res, &db)?)
}

/// Matrix of `∂_k ⊗_G Z : R_k ⊗ Z → R_{k−1} ⊗ Z`.
pub fn augmented_boundary<R: Resolution + ?Sized>(res: &R, degree: usize) -> Result<IntegerMatrix> {
    if degree == 0 || degree > res.length() {
        let rows = if degree == 0 { 0 } else { res.rank(degree - 1) };
        let cols = if degree > res.length() { 0 } else { res.rank(degree) };
        return Ok(IntegerMatrix::zeros(rows, cols));
    }
    let mut m = IntegerMatrix::zeros(res.rank(degree - 1), res.rank(degree));
    for j in 0..res.rank(degree) {
        let col = res.boundary_cell(degree, j).augmented(res.rank(degree - 1))?;
        for (i, v) in col.into_iter().enumerate() {
            m[(i, j)] = BigInt::from(v);
        }
    }
    Ok(m)
}

/// `H_k(G; Z)` computed from `R ⊗_G Z`.
pub fn homology<R: Resolution + ?Sized>(res: &R, degree: usize) -> Result<FGAbelianGroup> {
    check_degree(res, degree)?;
    let d_out = augmented_boundary(res, degree)?;
    let d_in = augmented_boundary(res, degree + 1)?;
    homology_of_pair(&d_in, &d_out)
}

/// `∂∂ = 0` on every basis cell and `ε∂ = 0`.
pub fn check_boundary_squared<R: Resolution + ?Sized>(res: &R) -> Result<()> {
    for k in 1..=res.length() {
        for i in 0..res.rank(k) {
            let db = boundary(res, &Chain::cell(k, i, res.identity(), 1))?;
            if k >= 2 && !boundary(res, &db)?.is_zero() {
                return Err(Error::invariant(format!("∂∂ ≠ 0 on {}", res.cell_name(k, i))));
            }
            if k == 1 && db.augmentation()? != 0 {
                return Err(Error::invariant(format!("ε∂ ≠ 0 on {}", res.cell_name(k, i))));
            }
        }
    }
    Ok(())
}

/// `∂h(c) + h(∂c) = c − ηε(c)` for one chain.
pub fn check_homotopy<R: Resolution + ?Sized>(res: &R, c: &Chain<R::Elem>) -> Result<()> {
    let mut lhs = if c.degree() < res.length() { boundary(res, &homotopy(res, c)?)? } else { Chain::zero(c.degree()) };
    if c.degree() > 0 {
        lhs.add_scaled(&homotopy(res, &boundary(res, c)?)?, 1)?;
    }
    let mut rhs = c.clone();
    rhs.add_scaled(&eta_epsilon(res, c)?, -1)?;
    if lhs != rhs {
        return Err(Error::invariant("contracting homotopy identity fails"));
    }
    Ok(())
}

/// Counit image `(ε⊗1)Δ` or `(1⊗ε)Δ` as a chain.
fn counit<E: Elem>(t: &TensorChain<E>, left: bool) -> Result<Chain<E>> {
    let mut out = Chain::zero(t.degree());
    for (k, c) in t.terms() {
        if left && k.left_degree == 0 {
            out.add_term(k.right, k.right_elem.clone(), c)?;
        }
        if !left && k.left_degree == t.degree() {
            out.add_term(k.left, k.left_elem.clone(), c)?;
        }
    }
    Ok(out)
}

/// `∂Δ = Δ∂` and both counit laws on one basis cell.
pub fn check_diagonal<R: Resolution + ?Sized>(res: &R, degree: usize, index: usize) -> Result<()> {
    let b = Chain::cell(degree, index, res.identity(), 1);
    let d = res.diagonal_cell(degree, index)?;
    let name = res.cell_name(degree, index);
    if degree > 0 && tensor_boundary(res, &d)? != diagonal(res, &boundary(res, &b)?)? {
        return Err(Error::invariant(format!("diagonal does not commute with ∂ on {name}")));
    }
    if counit(&d, true)? != b || counit(&d, false)? != b {
        return Err(Error::invariant(format!("counit law fails on {name}")));
    }
    Ok(())
}

/// All chain-level invariants on every basis cell, with homotopy checks on the given chains.
pub fn check_all<R: Resolution + ?Sized>(res: &R, samples: &[Chain<R::Elem>]) -> Result<()> {
    check_boundary_squared(res)?;
    for k in 0..=res.length() {
        for i in 0..res.rank(k) {
            check_diagonal(res, k, i)?;
            check_homotopy(res, &Chain::cell(k, i, res.identity(), 1))?;
        }
    }
    for c in samples {
        check_homotopy(res, c)?;
    }
    if let Some(z) = res.fundamental_cycle() {
        let n = res.length();
        if boundary(res, &z)?.augmented(res.rank(n - 1))?.iter().any(|&c| c != 0) {
            return Err(Error::invariant("fundamental cycle is not a cycle of R ⊗ Z"));
        }
        let h = homology(res, res.length())?;
        if h.free_rank != 1 || !h.torsion.is_empty() {
            return Err(Error::invariant("top homology is not infinite cyclic"));
        }
        let zc = z.augmented(res.rank(res.length()))?;
        let coords = h.reduce(&zc.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>())?;
        if coords.iter().map(|c| c.magnitude().clone()).max() != Some(1u8.into()) {
            return Err(Error::invariant("fundamental cycle does not generate top homology"));
        }
    }
    Ok(())
}
