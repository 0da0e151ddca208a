use std::collections::HashMap;
use std::sync::Arc;

use super::{Chain, Resolution, TensorChain, TensorKey};
use crate::error::Result;

/// Koszul resolution of `Z` over `Z[t1^±, …, tm^±]`, elements as exponent vectors.
///
/// The degree-`k` cells are the `k`-subsets `S` of `{0, …, m−1}` in
/// lexicographic order; `∂e_S = Σ_{i∈S} (−1)^{pos(i,S)} (t_i − 1) e_{S∖i}`.
#[derive(Debug)]
pub struct Koszul {
    rank: usize,
    names: Vec<String>,
    cells: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    boundaries: Vec<Vec<Arc<Chain<Vec<i64>>>>>,
    diagonals: Vec<Vec<Arc<TensorChain<Vec<i64>>>>>,
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

impl Koszul {
    /// `names` label the generators `t_i`; their count is the rank.
    pub fn new(names: Vec<String>) -> Result<Self> {
        let rank = names.len();
        let cells: Vec<Vec<Vec<usize>>> = (0..=rank).map(|k| subsets(rank, k)).collect();
        let index = cells.iter().map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        let mut k = Koszul { rank, names, cells, index, boundaries: Vec::new(), diagonals: Vec::new() };
        k.boundaries = (0..=rank)
            .map(|d| (0..k.cells[d].len()).map(|i| k.compute_boundary(d, i).map(Arc::new)).collect())
            .collect::<Result<_>>()?;
        k.diagonals = (0..=rank)
            .map(|d| (0..k.cells[d].len()).map(|i| k.compute_diagonal(d, i).map(Arc::new)).collect())
            .collect::<Result<_>>()?;
        Ok(k)
    }

    pub fn generator_count(&self) -> usize {
        self.rank
    }

    pub fn cell_set(&self, degree: usize, index: usize) -> &[usize] {
        &self.cells[degree][index]
    }

    pub fn cell_index(&self, set: &[usize]) -> usize {
        self.index[set.len()][set]
    }

    fn unit(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        v
    }

    fn compute_boundary(&self, degree: usize, index: usize) -> Result<Chain<Vec<i64>>> {
        let mut out = Chain::zero(degree.saturating_sub(1));
        if degree == 0 {
            return Ok(out);
        }
        let s = &self.cells[degree][index];
        for (pos, &i) in s.iter().enumerate() {
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            let mut rest = s.clone();
            rest.remove(pos);
            let j = self.cell_index(&rest);
            out.add_term(j, self.unit(i), sign)?;
            out.add_term(j, vec![0; self.rank], -sign)?;
        }
        Ok(out)
    }

    /// `Δ(e_S) = Σ_{S = S1 ⊔ S2} (−1)^{#{i<j : i∈S2, j∈S1}} e_{S1} ⊗ t_{S1}·e_{S2}`
    fn compute_diagonal(&self, degree: usize, index: usize) -> Result<TensorChain<Vec<i64>>> {
        let s = &self.cells[degree][index];
        let mut out = TensorChain::zero(degree);
        for mask in 0u32..(1 << s.len()) {
            let s1: Vec<usize> = s.iter().enumerate().filter(|(p, _)| mask >> p & 1 == 1).map(|(_, &i)| i).collect();
            let s2: Vec<usize> = s.iter().enumerate().filter(|(p, _)| mask >> p & 1 == 0).map(|(_, &i)| i).collect();
            let inversions = s2.iter().map(|i| s1.iter().filter(|j| i < j).count()).sum::<usize>();
            let mut shift = vec![0; self.rank];
            for &i in &s1 {
                shift[i] = 1;
            }
            let key = TensorKey {
                left_degree: s1.len(),
                left: self.cell_index(&s1),
                left_elem: vec![0; self.rank],
                right: self.cell_index(&s2),
                right_elem: shift,
            };
            out.add_term(key, if inversions % 2 == 0 { 1 } else { -1 })?;
        }
        Ok(out)
    }
}

impl Resolution for Koszul {
    type Elem = Vec<i64>;

    fn length(&self) -> usize {
        self.rank
    }

    fn rank(&self, degree: usize) -> usize {
        self.cells.get(degree).map_or(0, Vec::len)
    }

    fn cell_name(&self, degree: usize, index: usize) -> String {
        if degree == 0 {
            return "pt".to_string();
        }
        let parts: Vec<&str> = self.cells[degree][index].iter().map(|&i| self.names[i].as_str()).collect();
        parts.join("^")
    }

    fn identity(&self) -> Vec<i64> {
        vec![0; self.rank]
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn boundary_cell(&self, degree: usize, index: usize) -> Arc<Chain<Vec<i64>>> {
        self.boundaries[degree][index].clone()
    }

    /// Tensor power of the circle homotopy `h(t^v e0) = (1 + t + … + t^{v−1}) e1`:
    /// the new factor `i` must precede every index of `S`, and factors before it are augmented.
    fn homotopy_term(&self, degree: usize, index: usize, g: &Vec<i64>) -> Result<Chain<Vec<i64>>> {
        let s = &self.cells[degree][index];
        let mut out = Chain::zero(degree + 1);
        let limit = s.first().copied().unwrap_or(self.rank);
        for i in 0..limit {
            let v = g[i];
            if v == 0 {
                continue;
            }
            let mut set = vec![i];
            set.extend_from_slice(s);
            let target = self.cell_index(&set);
            let (range, sign) = if v > 0 { (0..v, 1) } else { (v..0, -1) };
            for m in range {
                let mut e = g.clone();
                e[..i].iter_mut().for_each(|x| *x = 0);
                e[i] = m;
                out.add_term(target, e, sign)?;
            }
        }
        Ok(out)
    }

    fn diagonal_cell(&self, degree: usize, index: usize) -> Result<Arc<TensorChain<Vec<i64>>>> {
        Ok(self.diagonals[degree][index].clone())
    }

    fn fundamental_cycle(&self) -> Option<Chain<Vec<i64>>> {
        None
    }
}
