use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{CosetModule, Duality, ModuleCochain};
use crate::error::{Error, Result};
use crate::group::Word;
use crate::linalg::SparseSystem;
use crate::resolution::{from_big, SubgroupComplex};

impl Duality {
    /// A cocycle `φ ∈ Hom_G(R_q, Z[G/J])`, `q = n − p`, whose image under
    /// `z ∩ −` and Shapiro is the given class of `H_p(J)`.
    ///
    /// Values are searched on the cosets met by a ball whose radius grows from
    /// the longest representative of the Shapiro image up to `max_window`.
    pub fn duality_inverse(
        &self,
        sub: &SubgroupComplex,
        degree: usize,
        coords: &[i64],
        max_window: usize,
    ) -> Result<ModuleCochain> {
        let module = CosetModule::cosets(sub.subgroup().clone());
        if degree > self.n {
            return Err(Error::Spec(format!("degree {degree} exceeds the duality dimension {}", self.n)));
        }
        let q = self.n - degree;
        let Some(h) = sub.homology(degree) else {
            return Ok(ModuleCochain::zero(q, module));
        };
        if coords.len() != h.rank() {
            return Err(Error::Spec(format!("expected {} coordinates, got {}", h.rank(), coords.len())));
        }
        if h.free_rank != h.rank() {
            return Err(Error::Unsupported("duality inverse with torsion in the subgroup homology".into()));
        }
        if coords.iter().all(|&c| c == 0) {
            return Ok(ModuleCochain::zero(q, module));
        }
        let start = self.shapiro_forward(sub, degree, coords)?.terms.max_rep_length();
        let mut last_size = None;
        for radius in start..=max_window.max(start) {
            let window = self.window(sub.subgroup(), radius)?;
            if last_size == Some(window.len()) {
                continue;
            }
            last_size = Some(window.len());
            if let Some(phi) = self.solve_window(sub, &module, q, degree, coords, &window)? {
                if !self.coboundary(&phi)?.is_zero() {
                    return Err(Error::invariant("duality inverse is not a cocycle"));
                }
                if self.duality(&phi, sub)? != coords {
                    return Err(Error::invariant("duality inverse misses the target class"));
                }
                return Ok(phi);
            }
        }
        Err(Error::Window { radius: max_window.max(start) })
    }

    fn solve_window(
        &self,
        sub: &SubgroupComplex,
        module: &CosetModule,
        q: usize,
        p: usize,
        coords: &[i64],
        window: &[Word],
    ) -> Result<Option<ModuleCochain>> {
        let h = sub.homology(p).expect("checked by caller");
        let reduce = h.reduce_matrix();
        let cells = self.res.rank(q);
        let cols = cells * window.len();
        let col = |b: usize, w: usize| b * window.len() + w;

        // Cocycle rows, keyed by (cell of degree q+1, canonical coset).
        let mut cocycle: HashMap<(usize, Word), Vec<(usize, BigInt)>> = HashMap::new();
        let sign: i64 = if q.is_multiple_of(2) { -1 } else { 1 };
        // Class rows, one per homology coordinate.
        let mut class: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); h.rank()];
        for b in 0..cells {
            for (w, gamma) in window.iter().enumerate() {
                let x = col(b, w);
                if q < self.n {
                    for (b2, hh, c) in &self.coboundary[q][b] {
                        let key = self.translate(module, hh, std::slice::from_ref(gamma))?;
                        cocycle
                            .entry((*b2, key.into_iter().next().expect("one factor")))
                            .or_default()
                            .push((x, BigInt::from(sign * c)));
                    }
                }
                let mut v = vec![0i64; h.chain_dim()];
                for (b1, u, c) in &self.cap[q][b] {
                    let key = self.translate(module, u, std::slice::from_ref(gamma))?;
                    let image = sub.restrict_coset_augmented(p, *b1, &key[0])?;
                    for (o, y) in v.iter_mut().zip(image) {
                        *o = crate::resolution::add_coeff(*o, crate::resolution::mul_coeff(y, *c)?)?;
                    }
                }
                if v.iter().all(|&y| y == 0) {
                    continue;
                }
                for (r, row) in class.iter_mut().enumerate() {
                    let mut acc = BigInt::zero();
                    for (i, &y) in v.iter().enumerate() {
                        if y != 0 {
                            acc += &reduce[(r, i)] * y;
                        }
                    }
                    if !acc.is_zero() {
                        row.push((x, acc));
                    }
                }
            }
        }

        let mut system = SparseSystem::new(cols);
        let mut keys: Vec<_> = cocycle.into_iter().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, row) in keys {
            system.push_row(row, BigInt::zero());
        }
        for (row, &target) in class.into_iter().zip(coords) {
            system.push_row(row, BigInt::from(target));
        }
        let Some(solution) = system.solve() else {
            return Ok(None);
        };
        let values = from_big(&solution)?;
        let mut phi = ModuleCochain::zero(q, module.clone());
        for b in 0..cells {
            for (w, gamma) in window.iter().enumerate() {
                phi.values.add(b, vec![gamma.clone()], values[col(b, w)])?;
            }
        }
        Ok(Some(phi))
    }
}
