use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use dashmap::DashMap;

use super::{Alphabet, ConjugacyLabel, CosetRep, DoubleCosetRep, GroupOracle, Letter, SearchBounds, Subgroup, Word};
use crate::error::{Error, Result};

/// Conjugates up to this much longer than the shortest one seen stay in the search.
const CONJUGACY_LENGTH_SLACK: usize = 2;

const UNKNOWN: u32 = u32::MAX;

/// One orientation of the relator, with each letter's position (every letter occurs once).
#[derive(Debug)]
struct Side {
    rel: Vec<Letter>,
    pos: Vec<usize>,
}

impl Side {
    fn new(rel: Vec<Letter>) -> Self {
        let mut pos = vec![usize::MAX; rel.len()];
        for (i, l) in rel.iter().enumerate() {
            pos[l.index() as usize] = i;
        }
        Side { rel, pos }
    }

    fn succ(&self, y: Letter) -> Letter {
        self.rel[(self.pos[y.index() as usize] + 1) % self.rel.len()]
    }

    /// 1: `z` follows `y` in the cyclic relator; 2: `z` follows the inverse of `y`'s successor.
    fn turn(&self, y: Letter, z: Letter) -> u8 {
        let s = self.succ(y);
        if s == z {
            1
        } else if self.succ(s.inverse()) == z {
            2
        } else {
            0
        }
    }

    /// Inverse of the part of the cyclic relator not covered by `arc`.
    fn complement(&self, arc: &[Letter]) -> Vec<Letter> {
        let n = self.rel.len();
        let start = self.pos[arc[0].index() as usize];
        (0..n - arc.len()).rev().map(|k| self.rel[(start + arc.len() + k) % n].inverse()).collect()
    }
}

fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Cayley-graph fragment discovered so far: interned normal forms and right-multiplication edges.
#[derive(Debug, Default)]
struct Cayley {
    words: Vec<Word>,
    ids: HashMap<Word, u32>,
    right: Vec<Vec<u32>>,
}

impl Cayley {
    fn intern(&mut self, w: Word, letters: usize) -> u32 {
        if let Some(&id) = self.ids.get(&w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(w.clone());
        self.ids.insert(w, id);
        self.right.push(vec![UNKNOWN; letters]);
        id
    }
}

/// The fundamental group of the closed orientable surface of genus `g ≥ 2`,
/// `⟨a1, b1, …, ag, bg | [a1,b1]⋯[ag,bg]⟩`.
#[derive(Debug)]
pub struct SurfaceGroup {
    genus: usize,
    sides: [Side; 2],
    bounds: SearchBounds,
    cayley: Mutex<Cayley>,
    conjugates: DashMap<Word, Arc<Vec<(Word, Word)>>>,
    cosets: DashMap<(Word, Word), CosetRep>,
    double_cosets: DashMap<(Subgroup, Subgroup, Word), DoubleCosetRep>,
}

impl SurfaceGroup {
    pub fn new(genus: usize, bounds: SearchBounds) -> Result<Self> {
        if genus < 2 {
            return Err(Error::Spec("surface groups need genus at least 2 here".into()));
        }
        let rel = Self::relator_letters(genus);
        let inv: Vec<Letter> = rel.iter().rev().map(|l| l.inverse()).collect();
        let mut cayley = Cayley::default();
        cayley.intern(Word::identity(), 4 * genus);
        Ok(SurfaceGroup {
            genus,
            sides: [Side::new(rel), Side::new(inv)],
            bounds,
            cayley: Mutex::new(cayley),
            conjugates: DashMap::new(),
            cosets: DashMap::new(),
            double_cosets: DashMap::new(),
        })
    }

    fn relator_letters(genus: usize) -> Vec<Letter> {
        let mut rel = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            let (a, b) = (2 * i, 2 * i + 1);
            rel.extend([Letter::new(a, false), Letter::new(b, false), Letter::new(a, true), Letter::new(b, true)]);
        }
        rel
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// The defining relator `[a1,b1]⋯[ag,bg]`.
    pub fn relator(&self) -> Word {
        Word::from_letters(self.sides[0].rel.clone())
    }

    fn half(&self) -> usize {
        2 * self.genus
    }

    fn letter_count(&self) -> usize {
        4 * self.genus
    }

    /// One shortening step: a run of more than half a relator, or a chain of
    /// half-relators joined at second-type turns.
    fn shorten(&self, w: &[Letter]) -> Option<Vec<Letter>> {
        let m = self.half();
        for side in &self.sides {
            let turns: Vec<u8> = w.windows(2).map(|p| side.turn(p[0], p[1])).collect();
            let n = turns.len();
            let mut run = 0;
            for i in 0..n {
                run = if turns[i] == 1 { run + 1 } else { 0 };
                if run >= m {
                    let s = i + 1 - m;
                    let mut out = w[..s].to_vec();
                    out.extend(side.complement(&w[s..i + 2]));
                    out.extend_from_slice(&w[i + 2..]);
                    return Some(out);
                }
            }
            for s in 0..n {
                if !(0..m - 1).all(|k| s + k < n && turns[s + k] == 1) {
                    continue;
                }
                let mut j = s + m - 1;
                let mut arcs = vec![(s, j)];
                while j < n && turns[j] == 2 {
                    let mut k = j + 1;
                    let mut count = 0;
                    while k < n && turns[k] == 1 {
                        count += 1;
                        k += 1;
                    }
                    if count >= m - 1 {
                        arcs.push((j + 1, j + m));
                        let end = j + m;
                        let mut middle = Vec::new();
                        for &(a, b) in &arcs {
                            middle.extend(side.complement(&w[a..=b]));
                        }
                        let mut out = w[..s].to_vec();
                        out.extend(free_reduce(&middle));
                        out.extend_from_slice(&w[end + 1..]);
                        return Some(out);
                    } else if count == m - 2 {
                        arcs.push((j + 1, j + m - 1));
                        j += m - 1;
                    } else {
                        break;
                    }
                }
            }
        }
        None
    }

    /// A geodesic word for the element spelled by `w`.
    pub fn geodesic(&self, w: &[Letter]) -> Vec<Letter> {
        let mut cur = free_reduce(w);
        while let Some(next) = self.shorten(&cur) {
            cur = free_reduce(&next);
        }
        cur
    }

    /// ShortLex-minimal spelling of the element with geodesic spelling `geo`.
    fn shortlex_of_geodesic(&self, geo: Vec<Letter>) -> Vec<Letter> {
        let mut out = Vec::with_capacity(geo.len());
        let mut cur = geo;
        while let Some(&first) = cur.first() {
            let target = cur.len() - 1;
            let mut chosen = None;
            for x in 0..first.index() {
                let x = Letter::from_index(x);
                let mut probe = Vec::with_capacity(cur.len() + 1);
                probe.push(x.inverse());
                probe.extend_from_slice(&cur);
                let g = self.geodesic(&probe);
                if g.len() == target {
                    chosen = Some((x, g));
                    break;
                }
            }
            match chosen {
                Some((x, rest)) => {
                    out.push(x);
                    cur = rest;
                }
                None => {
                    out.push(first);
                    cur.remove(0);
                }
            }
        }
        out
    }

    fn right_edge(&self, c: &mut Cayley, id: u32, x: Letter) -> u32 {
        let cached = c.right[id as usize][x.index() as usize];
        if cached != UNKNOWN {
            return cached;
        }
        let w = c.words[id as usize].letters().to_vec();
        let next = if w.last() == Some(&x.inverse()) {
            Word::from_letters(w[..w.len() - 1].to_vec())
        } else {
            let mut probe = w.clone();
            probe.push(x);
            let geo = self.geodesic(&probe);
            Word::from_letters(self.shortlex_of_geodesic(geo))
        };
        let nid = c.intern(next, self.letter_count());
        c.right[id as usize][x.index() as usize] = nid;
        c.right[nid as usize][x.inverse().index() as usize] = id;
        nid
    }

    fn power(&self, r: &Word, m: i64) -> Word {
        self.normal_form(&r.pow(m))
    }

    /// Length of the shortest conjugate.
    fn cyclic_length(&self, g: &Word) -> Result<usize> {
        Ok(self.conjugacy_label(g)?.label.len())
    }

    /// All shortest conjugates `u` of `g`, each with a conjugator `w`, `w·g·w⁻¹ = u`.
    fn minimal_conjugates(&self, g: &Word) -> Result<Arc<Vec<(Word, Word)>>> {
        let g = self.normal_form(g);
        if let Some(hit) = self.conjugates.get(&g) {
            return Ok(hit.clone());
        }
        let radius = self.bounds.conjugacy_radius.unwrap_or(2 * g.len() + 4);
        let mut seen: HashMap<Word, Word> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut shortest = g.len();
        seen.insert(g.clone(), Word::identity());
        queue.push_back((g.clone(), 0usize));
        while let Some((u, depth)) = queue.pop_front() {
            if u.len() > shortest + CONJUGACY_LENGTH_SLACK {
                continue;
            }
            let conj = seen[&u].clone();
            for x in 0..self.letter_count() as u8 {
                let x = Word::letter(Letter::from_index(x));
                let v = self.conjugate(&x, &u);
                if seen.contains_key(&v) || v.len() > shortest + CONJUGACY_LENGTH_SLACK {
                    continue;
                }
                if depth == radius {
                    return Err(Error::bound("conjugacy_search_radius", radius));
                }
                if seen.len() >= self.bounds.max_conjugacy_states {
                    return Err(Error::bound("conjugacy search states", seen.len()));
                }
                shortest = shortest.min(v.len());
                seen.insert(v.clone(), self.multiply(&x, &conj));
                queue.push_back((v, depth + 1));
            }
        }
        let mut out: Vec<(Word, Word)> = seen.into_iter().filter(|(u, _)| u.len() == shortest).collect();
        out.sort();
        let out = Arc::new(out);
        self.conjugates.insert(g, out.clone());
        Ok(out)
    }

    /// Exponent `m` with `r^m = g`, searched over `|m| ≤ ⌈|g|/ℓ(r)⌉ + slack`.
    fn cyclic_exponent(&self, r: &Word, g: &Word) -> Result<Option<i64>> {
        let g = self.normal_form(g);
        if g.is_empty() {
            return Ok(Some(0));
        }
        if self.multiply(r, &g) != self.multiply(&g, r) {
            return Ok(None);
        }
        let ell = self.cyclic_length(r)?.max(1);
        let bound = g.len().div_ceil(ell) + self.bounds.coset_slack;
        let (mut up, mut down) = (Word::identity(), Word::identity());
        let r_inv = r.inverse();
        for m in 1..=bound as i64 {
            up = self.normal_form(&up.concat(r));
            down = self.normal_form(&down.concat(&r_inv));
            if up == g {
                return Ok(Some(m));
            }
            if down == g {
                return Ok(Some(-m));
            }
        }
        // g commutes with r but is not a short power of it: either r is not
        // primitive, or the bound was too small.
        let (root_r, k_r) = self.root(r)?;
        let (root_g, k_g) = self.root(&g)?;
        if root_r == root_g && k_g % k_r == 0 {
            return Err(Error::bound("coset_search_radius (cyclic membership)", bound));
        }
        if self.invert(&root_r) == root_g && k_g % k_r == 0 {
            return Err(Error::bound("coset_search_radius (cyclic membership)", bound));
        }
        Ok(None)
    }

    fn cyclic_coset(&self, g: &Word, r: &Word) -> Result<CosetRep> {
        let key = (g.clone(), r.clone());
        if let Some(hit) = self.cosets.get(&key) {
            return Ok(hit.clone());
        }
        let ell = self.cyclic_length(r)?.max(1);
        let bound = ((2 * g.len() + r.len()) / ell + self.bounds.coset_slack) as i64;
        let mut best = (g.clone(), 0i64);
        let (mut up, mut down) = (g.clone(), g.clone());
        let r_inv = r.inverse();
        for m in 1..=bound {
            up = self.normal_form(&up.concat(r));
            down = self.normal_form(&down.concat(&r_inv));
            if up < best.0 {
                best = (up.clone(), m);
            }
            if down < best.0 {
                best = (down.clone(), -m);
            }
        }
        let rep = CosetRep { rep: best.0, k: self.power(r, best.1), k_coords: vec![best.1] };
        self.cosets.insert(key, rep.clone());
        Ok(rep)
    }

    /// Best `r^a·x` over `|a| ≤ bound`, returned with `a`.
    fn best_left(&self, x: &Word, r: &Word) -> Result<(Word, i64)> {
        let c = self.cyclic_coset(&x.inverse(), r)?;
        // (x⁻¹·r^m)⁻¹ = r^{−m}·x; minimizing over the inverse coset is canonical for Kx
        let cand = self.invert(&c.rep);
        Ok((cand, -c.k_coords[0]))
    }

    fn double_coset_cyclic(&self, g: &Word, r: &Word, s: &Word) -> Result<DoubleCosetRep> {
        let slack = self.bounds.coset_slack as i64;
        let (mut a, mut b) = (0i64, 0i64);
        let mut cur = g.clone();
        let eval = |a: i64, b: i64| -> Word { self.normal_form(&r.pow(a).concat(g).concat(&s.pow(b))) };
        loop {
            let mut improved = false;
            let (left, da) = self.best_left(&cur, r)?;
            if left < cur {
                a += da;
                cur = left;
                improved = true;
            }
            let right = self.cyclic_coset(&cur, s)?;
            if right.rep < cur {
                b += right.k_coords[0];
                cur = right.rep;
                improved = true;
            }
            for da in -slack..=slack {
                for db in -slack..=slack {
                    if da == 0 && db == 0 {
                        continue;
                    }
                    let cand = eval(a + da, b + db);
                    if cand < cur {
                        cur = cand;
                        a += da;
                        b += db;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        Ok(DoubleCosetRep { rep: cur, k: self.power(r, a), h: self.power(s, b) })
    }
}

impl GroupOracle for SurfaceGroup {
    fn alphabet(&self) -> Alphabet {
        Alphabet::Surface { genus: self.genus }
    }

    fn duality_dimension(&self) -> usize {
        2
    }

    fn is_abelian(&self) -> bool {
        false
    }

    fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    fn normal_form(&self, w: &Word) -> Word {
        let mut c = self.cayley.lock().expect("cayley cache poisoned");
        let mut id = 0u32;
        for &l in w.letters() {
            id = self.right_edge(&mut c, id, l);
        }
        c.words[id as usize].clone()
    }

    fn conjugacy_label(&self, g: &Word) -> Result<ConjugacyLabel> {
        let all = self.minimal_conjugates(g)?;
        let (label, conjugator) = all.first().cloned().expect("g is its own conjugate");
        Ok(ConjugacyLabel { label, conjugator })
    }

    fn root(&self, g: &Word) -> Result<(Word, i64)> {
        let g = self.normal_form(g);
        if g.is_empty() {
            return Err(Error::Spec("the identity has no root".into()));
        }
        let mut best: Option<(i64, Word)> = None;
        for (u, w) in self.minimal_conjugates(&g)?.iter() {
            let n = u.len();
            for k in (2..=n).rev() {
                if n % k != 0 || best.as_ref().is_some_and(|(bk, _)| *bk >= k as i64) {
                    continue;
                }
                let v = Word::from_letters(u.letters()[..n / k].to_vec());
                if self.power(&v, k as i64) == *u {
                    // w·g·w⁻¹ = v^k, so g = (w⁻¹·v·w)^k
                    let r = self.normal_form(&w.inverse().concat(&v).concat(w));
                    best = Some((k as i64, r));
                }
            }
        }
        let (k, r) = best.unwrap_or((1, g.clone()));
        if self.power(&r, k) != g {
            return Err(Error::invariant("root extraction produced a wrong power"));
        }
        Ok((r, k))
    }

    fn centralizer(&self, g: &Word) -> Result<Subgroup> {
        let g = self.normal_form(g);
        if g.is_empty() {
            return Ok(Subgroup::Whole);
        }
        Ok(Subgroup::Cyclic(self.root(&g)?.0))
    }

    fn subgroup_coordinates(&self, s: &Subgroup, g: &Word) -> Result<Option<Vec<i64>>> {
        match s {
            Subgroup::Whole => Ok(Some(Vec::new())),
            Subgroup::Trivial => Ok(self.is_identity(g).then(Vec::new)),
            Subgroup::Cyclic(r) => Ok(self.cyclic_exponent(r, g)?.map(|m| vec![m])),
            Subgroup::FreeAbelian(_) => {
                Err(Error::Unsupported("non-cyclic abelian subgroup of a surface group".into()))
            }
        }
    }

    fn coset_canonical(&self, g: &Word, s: &Subgroup) -> Result<CosetRep> {
        let g = self.normal_form(g);
        match s {
            Subgroup::Whole => Ok(CosetRep { rep: Word::identity(), k: self.invert(&g), k_coords: Vec::new() }),
            Subgroup::Trivial => Ok(CosetRep { rep: g, k: Word::identity(), k_coords: Vec::new() }),
            Subgroup::Cyclic(r) => self.cyclic_coset(&g, r),
            Subgroup::FreeAbelian(_) => {
                Err(Error::Unsupported("non-cyclic abelian subgroup of a surface group".into()))
            }
        }
    }

    fn double_coset(&self, g: &Word, k: &Subgroup, h: &Subgroup) -> Result<DoubleCosetRep> {
        let g = self.normal_form(g);
        let key = (k.clone(), h.clone(), g.clone());
        if let Some(hit) = self.double_cosets.get(&key) {
            return Ok(hit.clone());
        }
        let out = match (k, h) {
            (Subgroup::Whole, _) => DoubleCosetRep { rep: Word::identity(), k: self.invert(&g), h: Word::identity() },
            (_, Subgroup::Whole) => DoubleCosetRep { rep: Word::identity(), k: Word::identity(), h: self.invert(&g) },
            (Subgroup::Trivial, Subgroup::Trivial) => {
                DoubleCosetRep { rep: g.clone(), k: Word::identity(), h: Word::identity() }
            }
            (Subgroup::Trivial, _) => {
                let c = self.coset_canonical(&g, h)?;
                DoubleCosetRep { rep: c.rep, k: Word::identity(), h: c.k }
            }
            (_, Subgroup::Trivial) => {
                let Subgroup::Cyclic(r) = k else {
                    return Err(Error::Unsupported("non-cyclic abelian subgroup of a surface group".into()));
                };
                let (rep, a) = self.best_left(&g, r)?;
                DoubleCosetRep { rep, k: self.power(r, a), h: Word::identity() }
            }
            (Subgroup::Cyclic(r), Subgroup::Cyclic(s)) => self.double_coset_cyclic(&g, r, s)?,
            _ => return Err(Error::Unsupported("non-cyclic abelian subgroup of a surface group".into())),
        };
        self.double_cosets.insert(key, out.clone());
        Ok(out)
    }

    fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        match (a, b) {
            (Subgroup::Whole, x) | (x, Subgroup::Whole) => Ok(x.clone()),
            (Subgroup::Trivial, _) | (_, Subgroup::Trivial) => Ok(Subgroup::Trivial),
            (Subgroup::Cyclic(r), Subgroup::Cyclic(s)) => {
                let s_in_r = self.cyclic_exponent(r, s)?;
                let r_in_s = self.cyclic_exponent(s, r)?;
                if s_in_r.is_some() && r_in_s.is_some() {
                    return Ok(Subgroup::Cyclic(r.clone()));
                }
                // Distinct subgroups meet only inside a common maximal cyclic subgroup.
                let (rr, i) = self.root(r)?;
                let (rs, j) = self.root(s)?;
                let j = if rs == rr {
                    j
                } else if self.invert(&rs) == rr {
                    -j
                } else {
                    return Ok(Subgroup::Trivial);
                };
                let lcm = num_integer::lcm(i, j.abs());
                Ok(Subgroup::Cyclic(self.power(r, lcm / i)))
            }
            _ => Err(Error::Unsupported("non-cyclic abelian subgroup of a surface group".into())),
        }
    }

    fn enumerate_ball(&self, radius: usize) -> Vec<Word> {
        let mut all = vec![Word::identity()];
        let mut sphere = vec![Word::identity()];
        let mut seen: std::collections::HashSet<Word> = all.iter().cloned().collect();
        for r in 1..=radius {
            let mut next = Vec::new();
            for u in &sphere {
                for x in 0..self.letter_count() as u8 {
                    let v = self.normal_form(&u.concat(&Word::letter(Letter::from_index(x))));
                    if v.len() == r && seen.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            next.sort();
            all.extend(next.iter().cloned());
            sphere = next;
        }
        all.sort();
        all
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(g: usize) -> SurfaceGroup {
        SurfaceGroup::new(g, SearchBounds::default()).unwrap()
    }

    fn w(g: &SurfaceGroup, t: &str) -> Word {
        g.alphabet().parse(t).unwrap()
    }

    #[test]
    fn relator_is_trivial() {
        let g = sigma(2);
        assert!(g.is_identity(&g.relator()));
        assert!(g.is_identity(&g.relator().inverse()));
    }

    #[test]
    fn free_reduction() {
        let g = sigma(2);
        assert_eq!(g.normal_form(&w(&g, "a1*a1^-1*b2")), w(&g, "b2"));
    }

    #[test]
    fn more_than_half_relator_shortens() {
        let g = sigma(2);
        // a1 b1 a1⁻¹ b1⁻¹ a2 = b2 a2 … is length 5 → 3
        let x = g.normal_form(&w(&g, "a1*b1*a1^-1*b1^-1*a2"));
        assert_eq!(x.len(), 3);
    }

    #[test]
    fn conjugate_witness() {
        let g = sigma(2);
        let x = w(&g, "a1*b1");
        let y = w(&g, "b1*a1");
        let c = g.are_conjugate(&x, &y).unwrap().unwrap();
        assert_eq!(g.conjugate(&c, &x), y);
        assert!(g.are_conjugate(&w(&g, "a1"), &w(&g, "b1")).unwrap().is_none());
    }

    #[test]
    fn roots_and_centralizers() {
        let g = sigma(2);
        assert_eq!(g.root(&w(&g, "a1^2")).unwrap(), (w(&g, "a1"), 2));
        assert_eq!(g.centralizer(&w(&g, "a1^2")).unwrap(), Subgroup::Cyclic(w(&g, "a1")));
        let x = w(&g, "b2*a1*b1*a1*b1*b2^-1");
        let (r, k) = g.root(&x).unwrap();
        assert_eq!(k, 2);
        assert_eq!(g.power(&r, 2), g.normal_form(&x));
        assert_eq!(g.centralizer(&Word::identity()).unwrap(), Subgroup::Whole);
    }

    #[test]
    fn cyclic_coset_example() {
        let g = sigma(2);
        let k = Subgroup::Cyclic(w(&g, "a1"));
        let c = g.coset_canonical(&w(&g, "a1^3*b2"), &k).unwrap();
        assert_eq!(c.rep, g.normal_form(&w(&g, "a1^3*b2")));
        let c = g.coset_canonical(&w(&g, "b2*a1^3"), &k).unwrap();
        assert_eq!(c.rep, w(&g, "b2"));
        assert_eq!(c.k_coords, vec![-3]);
    }

    #[test]
    fn cyclic_intersection() {
        let g = sigma(2);
        let a = Subgroup::Cyclic(w(&g, "a1"));
        let b = Subgroup::Cyclic(w(&g, "b2"));
        assert_eq!(g.intersect(&a, &b).unwrap(), Subgroup::Trivial);
        let a2 = Subgroup::Cyclic(w(&g, "a1^-2"));
        assert_eq!(g.intersect(&a, &a2).unwrap(), Subgroup::Cyclic(w(&g, "a1^2")));
    }

    #[test]
    fn sphere_sizes_genus_two() {
        let g = sigma(2);
        let ball = g.enumerate_ball(3);
        let count = |r: usize| ball.iter().filter(|x| x.len() == r).count();
        assert_eq!((count(0), count(1), count(2), count(3)), (1, 8, 56, 392));
    }
}
