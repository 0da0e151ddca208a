//! Equivariant (co)chains with coset-module coefficients, cup and cap
//! products, the Shapiro isomorphisms and the duality isomorphism.

mod inverse;
mod module;

use std::collections::HashMap;
use std::sync::Arc;

use dashmap::DashMap;

pub use module::{CellTerms, CosetKey, CosetModule, ModuleChain, ModuleCochain};

use crate::error::{Error, Result};
use crate::group::{GroupOracle, Subgroup, Word};
use crate::resolution::{diagonal, mul_coeff, Resolution, SubgroupComplex, TensorChain};

/// `(b', h, c)`: the boundary of cell `b'` contains `c·h·b`.
type CoboundaryEntry = (usize, Word, i64);

/// `(b1, g1⁻¹g2, c)` for a term `c·g1b1 ⊗ g2b2` of `Δz`.
type CapEntry = (usize, Word, i64);

/// Chain-level duality machinery over a group with a fundamental cycle `z`.
#[derive(Debug)]
pub struct Duality {
    group: Arc<dyn GroupOracle>,
    res: Arc<dyn Resolution<Elem = Word>>,
    n: usize,
    /// `coboundary[q][b]` lists the cells of degree `q+1` whose boundary meets `b`.
    coboundary: Vec<Vec<Vec<CoboundaryEntry>>>,
    /// `cap[q][b2]` lists the terms of `Δz` whose right factor is the cell `b2` of degree `q`.
    cap: Vec<Vec<Vec<CapEntry>>>,
    balls: DashMap<usize, Arc<Vec<Word>>>,
    windows: DashMap<(Subgroup, usize), Arc<Vec<Word>>>,
}

impl Duality {
    pub fn new(group: Arc<dyn GroupOracle>, res: Arc<dyn Resolution<Elem = Word>>) -> Result<Self> {
        let n = res.length();
        let z = res.fundamental_cycle().ok_or_else(|| Error::Spec("resolution has no fundamental cycle".into()))?;
        let mut coboundary: Vec<Vec<Vec<CoboundaryEntry>>> = (0..=n).map(|q| vec![Vec::new(); res.rank(q)]).collect();
        for q in 1..=n {
            for b in 0..res.rank(q) {
                for (b2, h, c) in res.boundary_cell(q, b).terms() {
                    coboundary[q - 1][b2].push((b, h.clone(), c));
                }
            }
        }
        let dz: TensorChain<Word> = diagonal(res.as_ref(), &z)?;
        let mut cap: Vec<Vec<Vec<CapEntry>>> = (0..=n).map(|q| vec![Vec::new(); res.rank(q)]).collect();
        for (key, c) in dz.terms() {
            let q = n - key.left_degree;
            let u = group.multiply(&group.invert(&key.left_elem), &key.right_elem);
            cap[q][key.right].push((key.left, u, c));
        }
        Ok(Duality { group, res, n, coboundary, cap, balls: DashMap::new(), windows: DashMap::new() })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &Arc<dyn GroupOracle> {
        &self.group
    }

    pub fn resolution(&self) -> &Arc<dyn Resolution<Elem = Word>> {
        &self.res
    }

    /// Canonical key of `g1K1 ⊗ … ⊗ grKr`.
    pub fn canonical(&self, module: &CosetModule, elems: &[Word]) -> Result<CosetKey> {
        if elems.len() != module.factors.len() {
            return Err(Error::invariant("coset key length does not match the module"));
        }
        module.factors.iter().zip(elems).map(|(s, g)| Ok(self.group.coset_canonical(g, s)?.rep)).collect()
    }

    /// `g·(γ1K1 ⊗ …)` with the diagonal action.
    pub fn translate(&self, module: &CosetModule, g: &Word, key: &[Word]) -> Result<CosetKey> {
        if g.is_empty() {
            return Ok(key.to_vec());
        }
        let moved: Vec<Word> = key.iter().map(|gamma| self.group.multiply(g, gamma)).collect();
        self.canonical(module, &moved)
    }

    /// `∂(b ⊗ m) = Σ c·b2 ⊗ h⁻¹m` over the terms `c·h·b2` of `∂b`.
    pub fn boundary(&self, c: &ModuleChain) -> Result<ModuleChain> {
        if c.degree == 0 {
            return Ok(ModuleChain::zero(0, c.module.clone()));
        }
        let mut out = ModuleChain::zero(c.degree - 1, c.module.clone());
        for (b, key, coeff) in c.terms.iter() {
            for (b2, h, c2) in self.res.boundary_cell(c.degree, b).terms() {
                let moved = self.translate(&c.module, &self.group.invert(h), key)?;
                out.terms.add(b2, moved, mul_coeff(coeff, c2)?)?;
            }
        }
        Ok(out)
    }

    /// `δφ = (−1)^{q+1} φ∘∂`.
    pub fn coboundary(&self, phi: &ModuleCochain) -> Result<ModuleCochain> {
        let q = phi.degree;
        let mut out = ModuleCochain::zero(q + 1, phi.module.clone());
        if q >= self.n {
            return Ok(out);
        }
        let sign = if q.is_multiple_of(2) { -1 } else { 1 };
        for (b, key, coeff) in phi.values.iter() {
            for (b2, h, c) in &self.coboundary[q][b] {
                let moved = self.translate(&phi.module, h, key)?;
                out.values.add(*b2, moved, mul_coeff(mul_coeff(coeff, *c)?, sign)?)?;
            }
        }
        Ok(out)
    }

    /// `(φ∪ψ)(b) = Σ c·(−1)^{|φ||ψ|} g1φ(b1) ⊗ g2ψ(b2)` over the terms `c·g1b1 ⊗ g2b2` of `Δb`.
    pub fn cup(&self, phi: &ModuleCochain, psi: &ModuleCochain) -> Result<ModuleCochain> {
        let degree = phi.degree + psi.degree;
        let module = phi.module.tensor(&psi.module);
        let mut out = ModuleCochain::zero(degree, module);
        if degree > self.n || phi.is_zero() || psi.is_zero() {
            return Ok(out);
        }
        let sign = if (phi.degree * psi.degree).is_multiple_of(2) { 1 } else { -1 };
        let mut moved_left: HashMap<(usize, Word), Vec<(CosetKey, i64)>> = HashMap::new();
        let mut moved_right: HashMap<(usize, Word), Vec<(CosetKey, i64)>> = HashMap::new();
        for b in 0..self.res.rank(degree) {
            let d = self.res.diagonal_cell(degree, b)?;
            for (key, c) in d.terms() {
                if key.left_degree != phi.degree {
                    continue;
                }
                let left = cached_values(&mut moved_left, self, phi, key.left, &key.left_elem)?;
                if left.is_empty() {
                    continue;
                }
                let right = cached_values(&mut moved_right, self, psi, key.right, &key.right_elem)?;
                let scale = mul_coeff(c, sign)?;
                for (k1, v1) in &left {
                    for (k2, v2) in &right {
                        let joined: CosetKey = k1.iter().chain(k2).cloned().collect();
                        out.values.add(b, joined, mul_coeff(scale, mul_coeff(*v1, *v2)?)?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `z ∩ θ = Σ c·b1 ⊗ (g1⁻¹g2)·θ(b2)` over the terms of `Δz` with `|b2| = |θ|`.
    pub fn cap_with_z(&self, theta: &ModuleCochain) -> Result<ModuleChain> {
        let q = theta.degree;
        if q > self.n {
            return Err(Error::invariant("cap with a cochain above the dimension"));
        }
        let mut out = ModuleChain::zero(self.n - q, theta.module.clone());
        for (b2, key, coeff) in theta.values.iter() {
            for (b1, u, c) in &self.cap[q][b2] {
                let moved = self.translate(&theta.module, u, key)?;
                out.terms.add(*b1, moved, mul_coeff(coeff, *c)?)?;
            }
        }
        Ok(out)
    }

    /// `H_p(J) → H_p(G; Z[G/J])`: lift a class to `R` and send `g·b` to `b ⊗ g⁻¹J`.
    pub fn shapiro_forward(&self, sub: &SubgroupComplex, degree: usize, coords: &[i64]) -> Result<ModuleChain> {
        let module = CosetModule::cosets(sub.subgroup().clone());
        let mut out = ModuleChain::zero(degree, module.clone());
        if degree > self.n {
            return Ok(out);
        }
        let cycle = sub.lift_class(degree, coords)?;
        for (b, g, coeff) in cycle.terms() {
            let key = self.canonical(&module, &[self.group.invert(g)])?;
            out.terms.add(b, key, coeff)?;
        }
        Ok(out)
    }

    /// `H_p(G; Z[G/J]) → H_p(J)`: `b ⊗ γJ ↦ γ⁻¹·b`, restricted to the subgroup's resolution.
    pub fn shapiro_backward(&self, c: &ModuleChain, sub: &SubgroupComplex) -> Result<Vec<i64>> {
        if c.module.factors.as_slice() != std::slice::from_ref(sub.subgroup()) {
            return Err(Error::invariant("Shapiro map applied with the wrong subgroup"));
        }
        let Some(h) = sub.homology(c.degree) else {
            return Ok(Vec::new());
        };
        let mut v = vec![0i64; h.chain_dim()];
        for (b, key, coeff) in c.terms.iter() {
            let image = sub.restrict_coset_augmented(c.degree, b, &key[0])?;
            for (o, x) in v.iter_mut().zip(image) {
                *o = crate::resolution::add_coeff(*o, mul_coeff(x, coeff)?)?;
            }
        }
        let coords = h.reduce(&crate::resolution::to_big(&v))?;
        crate::resolution::from_big(&coords)
    }

    /// The class of the cochain under `D = z ∩ −` followed by Shapiro.
    pub fn duality(&self, phi: &ModuleCochain, sub: &SubgroupComplex) -> Result<Vec<i64>> {
        self.shapiro_backward(&self.cap_with_z(phi)?, sub)
    }

    /// The unit cocycle `R_0 → Z`, `e0 ↦ 1`.
    pub fn unit_cocycle(&self) -> ModuleCochain {
        let mut out = ModuleCochain::zero(0, CosetModule { factors: Vec::new() });
        out.values.add(0, Vec::new(), 1).expect("single term");
        out
    }

    /// Elements of the ball of the given radius, memoized.
    fn ball(&self, radius: usize) -> Arc<Vec<Word>> {
        if let Some(hit) = self.balls.get(&radius) {
            return hit.clone();
        }
        let ball = Arc::new(self.group.enumerate_ball(radius));
        self.balls.insert(radius, ball.clone());
        ball
    }

    /// Sorted canonical representatives of the cosets `gJ` with `|g| ≤ radius`.
    fn window(&self, j: &Subgroup, radius: usize) -> Result<Arc<Vec<Word>>> {
        let key = (j.clone(), radius);
        if let Some(hit) = self.windows.get(&key) {
            return Ok(hit.clone());
        }
        let mut reps: Vec<Word> = Vec::new();
        if j.is_whole() {
            reps.push(Word::identity());
        } else {
            for g in self.ball(radius).iter() {
                reps.push(self.group.coset_canonical(g, j)?.rep);
            }
            reps.sort();
            reps.dedup();
        }
        let reps = Arc::new(reps);
        self.windows.insert(key, reps.clone());
        Ok(reps)
    }
}

/// Values `g·φ(b)` for one translated cell, memoized within a cup computation.
fn cached_values(
    cache: &mut HashMap<(usize, Word), Vec<(CosetKey, i64)>>,
    d: &Duality,
    phi: &ModuleCochain,
    cell: usize,
    g: &Word,
) -> Result<Vec<(CosetKey, i64)>> {
    let key = (cell, g.clone());
    if let Some(hit) = cache.get(&key) {
        return Ok(hit.clone());
    }
    let mut vals = Vec::new();
    for (k, c) in phi.values.cell(cell) {
        vals.push((d.translate(&phi.module, g, k)?, c));
    }
    cache.insert(key, vals.clone());
    Ok(vals)
}
