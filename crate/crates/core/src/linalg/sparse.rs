use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{solve_integer_linear, IntegerMatrix};

/// A sparse integer linear system `A·x = b`, assembled row by row.
///
/// Solving eliminates on unit pivots first (which keeps every step integral
/// and sparse) and hands whatever is left to a dense Smith-form solve.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    cols: usize,
    rows: Vec<BTreeMap<usize, BigInt>>,
    rhs: Vec<BigInt>,
}

impl SparseSystem {
    pub fn new(cols: usize) -> Self {
        SparseSystem { cols, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends the equation `Σ coeff·x[col] = rhs`. Repeated columns are summed.
    pub fn push_row<I>(&mut self, entries: I, rhs: BigInt)
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut row = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            add_entry(&mut row, c, v);
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    /// Some integer solution, or `None` when the system has none.
    pub fn solve(&self) -> Option<Vec<BigInt>> {
        let mut rows = self.rows.clone();
        let mut rhs = self.rhs.clone();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cols];
        for (r, row) in rows.iter().enumerate() {
            for &c in row.keys() {
                col_rows[c].insert(r);
            }
        }
        let mut active: BTreeSet<usize> = (0..rows.len()).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();

        loop {
            // Empty active rows are either consistent (drop) or a contradiction.
            let mut empties = Vec::new();
            for &r in &active {
                if rows[r].is_empty() {
                    if !rhs[r].is_zero() {
                        return None;
                    }
                    empties.push(r);
                }
            }
            for r in empties {
                active.remove(&r);
            }
            let Some((pr, pc)) = choose_pivot(&rows, &col_rows, &active) else { break };
            let unit = rows[pr][&pc].clone();
            let pivot_row = rows[pr].clone();
            let pivot_rhs = rhs[pr].clone();
            let targets: Vec<usize> = col_rows[pc].iter().copied().filter(|&r| r != pr).collect();
            for r in targets {
                let factor = &rows[r][&pc] * &unit;
                for (&c, v) in &pivot_row {
                    let before = rows[r].contains_key(&c);
                    add_entry(&mut rows[r], c, -(&factor * v));
                    let after = rows[r].contains_key(&c);
                    if before && !after {
                        col_rows[c].remove(&r);
                    } else if !before && after {
                        col_rows[c].insert(r);
                    }
                }
                rhs[r] -= &factor * &pivot_rhs;
            }
            active.remove(&pr);
            pivots.push((pr, pc));
            for &c in pivot_row.keys() {
                col_rows[c].remove(&pr);
            }
        }

        let mut x = vec![BigInt::zero(); self.cols];
        let residual: Vec<usize> = active.iter().copied().collect();
        if !residual.is_empty() {
            let cols: Vec<usize> =
                residual.iter().flat_map(|&r| rows[r].keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
            let index: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let mut dense = IntegerMatrix::zeros(residual.len(), cols.len());
            for (i, &r) in residual.iter().enumerate() {
                for (c, v) in &rows[r] {
                    dense[(i, index[c])] = v.clone();
                }
            }
            let b: Vec<BigInt> = residual.iter().map(|&r| rhs[r].clone()).collect();
            let y = solve_integer_linear(&dense, &b)?;
            for (i, &c) in cols.iter().enumerate() {
                x[c] = y[i].clone();
            }
        }

        // Pivot rows only mention their own pivot and columns resolved later.
        for &(r, c) in pivots.iter().rev() {
            let row = &rows[r];
            let mut acc = rhs[r].clone();
            for (&cc, v) in row {
                if cc != c {
                    acc -= v * &x[cc];
                }
            }
            x[c] = acc * &row[&c];
        }
        Some(x)
    }
}

fn add_entry(row: &mut BTreeMap<usize, BigInt>, c: usize, v: BigInt) {
    if v.is_zero() {
        return;
    }
    match row.get_mut(&c) {
        Some(e) => {
            *e += v;
            if e.is_zero() {
                row.remove(&c);
            }
        }
        None => {
            row.insert(c, v);
        }
    }
}

/// Unit entry minimizing fill-in (Markowitz count), ties broken by position.
fn choose_pivot(
    rows: &[BTreeMap<usize, BigInt>],
    col_rows: &[BTreeSet<usize>],
    active: &BTreeSet<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for &r in active {
        let len = rows[r].len();
        if let Some((cost, _, _)) = best {
            if len.saturating_sub(1) > cost {
                continue;
            }
        }
        for (&c, v) in &rows[r] {
            if !v.abs().is_one() {
                continue;
            }
            let cost = (len - 1) * (col_rows[c].len() - 1);
            if best.is_none_or(|(b, _, _)| cost < b) {
                best = Some((cost, r, c));
                if cost == 0 {
                    return Some((r, c));
                }
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}
