use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{smith_normal_form, IntegerMatrix};
use crate::error::{Error, Result};

/// A finitely generated abelian group presented as `ker(d_out) / im(d_in)`.
///
/// Coordinates list the free generators first, then one coordinate per
/// torsion summand, normalized to `[0, dᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FGAbelianGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
    /// Representative cycles, free generators first.
    pub basis: Vec<Vec<BigInt>>,
    /// Linear map (rows) from chains to raw coordinates, same order as `basis`.
    reduce_rows: IntegerMatrix,
    d_out: IntegerMatrix,
}

impl FGAbelianGroup {
    /// Number of coordinates (free rank plus torsion summands).
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn chain_dim(&self) -> usize {
        self.reduce_rows.cols()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of a cycle. Rejects chains that are not cycles.
    pub fn reduce(&self, cycle: &[BigInt]) -> Result<Vec<BigInt>> {
        if cycle.len() != self.chain_dim() {
            return Err(Error::invariant(format!(
                "chain of length {} reduced in a complex of dimension {}",
                cycle.len(),
                self.chain_dim()
            )));
        }
        if self.d_out.mul_vec(cycle).iter().any(|v| !v.is_zero()) {
            return Err(Error::invariant("reduce called on a non-cycle"));
        }
        Ok(self.reduce_unchecked(cycle))
    }

    /// The linear extension of `reduce` to arbitrary chains (meaningful on cycles).
    pub fn reduce_unchecked(&self, chain: &[BigInt]) -> Vec<BigInt> {
        let mut raw = self.reduce_rows.mul_vec(chain);
        self.normalize(&mut raw);
        raw
    }

    /// Raw linear coordinates without torsion normalization.
    pub fn reduce_linear(&self, chain: &[BigInt]) -> Vec<BigInt> {
        self.reduce_rows.mul_vec(chain)
    }

    /// The linear map used by `reduce_linear`, one row per coordinate.
    pub fn reduce_matrix(&self) -> &IntegerMatrix {
        &self.reduce_rows
    }

    pub fn normalize(&self, coords: &mut [BigInt]) {
        for (k, d) in self.torsion.iter().enumerate() {
            let c = &mut coords[self.free_rank + k];
            *c = c.mod_floor(d);
        }
    }

    /// Representative cycle of an arbitrary coordinate vector.
    pub fn cycle_of(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.chain_dim()];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }
}

/// Homology at the middle of `C_{k+1} --d_in--> C_k --d_out--> C_{k-1}`.
///
/// `d_in` is `dim × l` and `d_out` is `m × dim`; pass zero-width or zero-height
/// matrices for absent maps.
pub fn homology_of_pair(d_in: &IntegerMatrix, d_out: &IntegerMatrix) -> Result<FGAbelianGroup> {
    let dim = d_out.cols();
    if d_in.rows() != dim {
        return Err(Error::Spec(format!(
            "incompatible differentials: d_in has {} rows, d_out has {} columns",
            d_in.rows(),
            dim
        )));
    }
    if !(d_out * d_in).is_zero() {
        return Err(Error::Spec("d_out · d_in ≠ 0".into()));
    }

    // Cycles: the last dim - r columns of V span ker d_out, and the matching
    // rows of V⁻¹ give coordinates in that basis.
    let outer = smith_normal_form(d_out);
    let r1 = outer.rank;
    let kernel = outer.v.col_slice(r1..dim);
    let to_kernel = outer.v_inv.row_slice(r1..dim);

    // Boundaries expressed in kernel coordinates.
    let b = &to_kernel * d_in;
    let inner = smith_normal_form(&b);
    let r2 = inner.rank;
    let kdim = dim - r1;

    let mut free_idx = Vec::new();
    let mut tors_idx = Vec::new();
    for i in 0..kdim {
        if i < r2 {
            let d = &inner.d[(i, i)];
            if !d.is_one() {
                tors_idx.push(i);
            }
        } else {
            free_idx.push(i);
        }
    }
    let order: Vec<usize> = free_idx.iter().chain(&tors_idx).copied().collect();

    let coords = &inner.u * &to_kernel;
    let gens = &kernel * &inner.u_inv;
    let mut rows = IntegerMatrix::zeros(order.len(), dim);
    let mut basis = Vec::with_capacity(order.len());
    for (k, &i) in order.iter().enumerate() {
        for j in 0..dim {
            rows[(k, j)] = coords[(i, j)].clone();
        }
        basis.push(gens.column(i));
    }
    let torsion = tors_idx.iter().map(|&i| inner.d[(i, i)].clone()).collect();
    Ok(FGAbelianGroup { free_rank: free_idx.len(), torsion, basis, reduce_rows: rows, d_out: d_out.clone() })
}
