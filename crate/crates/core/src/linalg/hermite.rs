use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form of the lattice spanned by `gens`.
///
/// Returns a basis in echelon form: each row's leading entry is positive,
/// entries above a pivot lie in `[0, pivot)`, and zero rows are dropped.
/// Equal lattices give equal outputs.
pub fn hermite_basis(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|v| !v.is_zero())).cloned().collect();
    for g in &rows {
        assert_eq!(g.len(), dim, "generator of wrong length");
    }
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..dim {
        // gcd-combine every remaining row into a single pivot row for this column
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for row in rows.drain(..) {
            if row[col].is_zero() {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (a, b) = (&p[col], &row[col]);
                    let e = a.extended_gcd(b);
                    let (ua, ub) = (a / &e.gcd, b / &e.gcd);
                    let new_p: Vec<BigInt> = p.iter().zip(&row).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let kill: Vec<BigInt> = p.iter().zip(&row).map(|(x, y)| &ua * y - &ub * x).collect();
                    debug_assert!(kill[col].is_zero());
                    if kill.iter().any(|v| !v.is_zero()) {
                        rest.push(kill);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = pivot {
            if p[col].is_negative() {
                for v in p.iter_mut() {
                    *v = -std::mem::take(v);
                }
            }
            out.push(p);
        }
    }
    // reduce entries above each pivot
    for i in 0..out.len() {
        let col = out[i].iter().position(|v| !v.is_zero()).expect("nonzero row");
        let pv = out[i][col].clone();
        for j in 0..i {
            let q = out[j][col].div_floor(&pv);
            if !q.is_zero() {
                let row_i = out[i].clone();
                for (x, y) in out[j].iter_mut().zip(&row_i) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn same_lattice_same_basis() {
        let a = hermite_basis(&rows(&[&[2, 0], &[0, 3]]), 2);
        let b = hermite_basis(&rows(&[&[2, 3], &[2, 0], &[4, 6]]), 2);
        assert_eq!(a, b);
        assert_eq!(a, rows(&[&[2, 0], &[0, 3]]));
    }

    #[test]
    fn drops_dependent_rows() {
        let a = hermite_basis(&rows(&[&[1, 1, 0], &[2, 2, 0], &[0, 0, 0]]), 3);
        assert_eq!(a, rows(&[&[1, 1, 0]]));
    }
}
