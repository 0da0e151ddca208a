use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{abelian_oracle, LGClass, LGElement, Store};
use crate::builtin::PdGroup;
use crate::duality::{CosetModule, Duality, ModuleChain, ModuleCochain};
use crate::error::{Error, Result};
use crate::group::{Alphabet, GroupOracle, Subgroup, Word};
use crate::resolution::{Resolution, SubgroupComplex, TensorChain};

/// One summand of the double-coset decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSummand {
    /// The representative `g` actually used (canonical unless perturbed).
    pub rep: Word,
    /// `J = K ∩ gHg⁻¹`.
    pub subgroup: Subgroup,
    pub chain: ModuleChain,
}

/// One summand of the intersection pairing: a class of `H_*(K ∩ gHg⁻¹)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTerm {
    pub rep: Word,
    pub subgroup: Subgroup,
    pub degree: usize,
    pub coords: Vec<i64>,
}

/// Random alternative double-coset representatives `g′ = k0·g·h0`, one per key.
#[derive(Debug)]
pub struct Perturbation {
    rng: ChaCha8Rng,
    span: i64,
}

impl Perturbation {
    pub fn new(rng: ChaCha8Rng, span: i64) -> Self {
        Perturbation { rng, span }
    }

    /// A random element of the subgroup with coordinates (or a generator power) in `[−span, span]`.
    fn element(&mut self, group: &dyn GroupOracle, s: &Subgroup) -> Word {
        match s {
            Subgroup::Trivial => Word::identity(),
            Subgroup::Whole => {
                let gen = self.rng.gen_range(0..group.generator_count());
                let e = self.rng.gen_range(-self.span..=self.span);
                group.normal_form(&Word::power_of(gen, e))
            }
            s => {
                let coords: Vec<i64> = s.basis().iter().map(|_| self.rng.gen_range(-self.span..=self.span)).collect();
                group.subgroup_element(s, &coords)
            }
        }
    }
}

/// The string-topology algebra of one builtin group, with memoized stages.
///
/// Classes of `(L_G)_p` live in `H_{p+n}(C_α)`; inputs are canonicalized to the
/// conjugacy label of `α`, transporting coordinates by conjugation.
#[derive(Debug)]
pub struct Engine {
    group: PdGroup,
    duality: Duality,
    max_window: usize,
    store: Option<Arc<dyn Store>>,
    complexes: DashMap<Subgroup, Arc<SubgroupComplex>>,
    inverses: DashMap<(Subgroup, usize, Vec<i64>), Arc<ModuleCochain>>,
    products: DashMap<(LGClass, LGClass), Arc<LGElement>>,
}

fn encode<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable key")
}

impl Engine {
    pub fn new(group: PdGroup) -> Result<Self> {
        Self::with_store(group, None)
    }

    pub fn with_store(group: PdGroup, store: Option<Arc<dyn Store>>) -> Result<Self> {
        let max_window = group.spec.max_window_radius;
        let engine_store = store.clone();
        if let Some(store) = &store {
            Self::warm_diagonals(group.resolution.as_ref(), store.as_ref())?;
        }
        let duality = Duality::new(group.oracle.clone(), group.resolution.clone())?;
        Ok(Engine {
            group,
            duality,
            max_window,
            store: engine_store,
            complexes: DashMap::new(),
            inverses: DashMap::new(),
            products: DashMap::new(),
        })
    }

    /// Loads persisted diagonals, or computes and persists them.
    fn warm_diagonals(res: &dyn Resolution<Elem = Word>, store: &dyn Store) -> Result<()> {
        if !res.derives_diagonals() {
            return Ok(());
        }
        for d in 0..=res.length() {
            for i in 0..res.rank(d) {
                let key = format!("diagonal/{d}/{i}");
                if let Some(bytes) = store.load(&key) {
                    let installed = serde_json::from_slice::<TensorChain<Word>>(&bytes)
                        .ok()
                        .is_some_and(|t| res.install_diagonal(d, i, t).is_ok());
                    if installed {
                        continue;
                    }
                    store.corrupt(&key);
                }
                let t = res.diagonal_cell(d, i)?;
                store.save(&key, encode(t.as_ref()).as_bytes());
            }
        }
        Ok(())
    }

    fn cached<T, F>(&self, key: &str, verify: impl Fn(&T) -> bool, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        let Some(store) = &self.store else {
            return compute();
        };
        if let Some(bytes) = store.load(key) {
            match serde_json::from_slice::<T>(&bytes) {
                Ok(v) if verify(&v) => return Ok(v),
                _ => store.corrupt(key),
            }
        }
        let v = compute()?;
        store.save(key, encode(&v).as_bytes());
        Ok(v)
    }

    pub fn group(&self) -> &PdGroup {
        &self.group
    }

    pub fn oracle(&self) -> &dyn GroupOracle {
        self.group.oracle.as_ref()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.group.alphabet()
    }

    pub fn duality(&self) -> &Duality {
        &self.duality
    }

    pub fn dimension(&self) -> usize {
        self.duality.dimension()
    }

    pub fn max_window(&self) -> usize {
        self.max_window
    }

    pub fn set_max_window(&mut self, radius: usize) {
        self.max_window = radius;
    }

    pub fn complex(&self, s: &Subgroup) -> Result<Arc<SubgroupComplex>> {
        if let Some(hit) = self.complexes.get(s) {
            return Ok(hit.clone());
        }
        let c = Arc::new(SubgroupComplex::new(s.clone(), self.group.oracle.clone(), self.group.resolution.clone())?);
        self.complexes.insert(s.clone(), c.clone());
        Ok(c)
    }

    pub fn centralizer(&self, label: &Word) -> Result<Subgroup> {
        self.oracle().centralizer(label)
    }

    /// Memoized `D⁻¹` of a class of `H_p(J)`.
    pub fn duality_inverse(&self, sub: &SubgroupComplex, degree: usize, coords: &[i64]) -> Result<Arc<ModuleCochain>> {
        let key = (sub.subgroup().clone(), degree, coords.to_vec());
        if let Some(hit) = self.inverses.get(&key) {
            return Ok(hit.clone());
        }
        let store_key = format!("inverse/{}", encode(&key));
        let verify = |phi: &ModuleCochain| {
            phi.degree + degree == self.dimension()
                && phi.module == CosetModule::cosets(sub.subgroup().clone())
                && self.duality.coboundary(phi).is_ok_and(|d| d.is_zero())
                && self.duality.duality(phi, sub).is_ok_and(|c| c == coords)
        };
        let phi =
            self.cached(&store_key, verify, || self.duality.duality_inverse(sub, degree, coords, self.max_window))?;
        let phi = Arc::new(phi);
        self.inverses.insert(key, phi.clone());
        Ok(phi)
    }

    /// The unit `[z] ∈ H_n(G)` at the identity label.
    pub fn unit(&self) -> Result<LGClass> {
        let whole = self.complex(&Subgroup::Whole)?;
        let z = self.group.resolution.fundamental_cycle().ok_or_else(|| Error::invariant("no fundamental cycle"))?;
        Ok(LGClass { label: Word::identity(), degree: 0, coords: whole.reduce(&z)? })
    }

    /// Rank of `H_{p+n}(C_α)`.
    pub fn summand_rank(&self, label: &Word, degree: i64) -> Result<usize> {
        let k = self.homology_degree(degree)?;
        Ok(self.complex(&self.centralizer(label)?)?.homology_rank(k))
    }

    fn homology_degree(&self, degree: i64) -> Result<usize> {
        let n = self.dimension() as i64;
        if degree < -n || degree > 0 {
            return Err(Error::Spec(format!("degree {degree} outside [-{n}, 0]")));
        }
        Ok((degree + n) as usize)
    }

    /// Coordinates of `x ∈ H_k(S)` carried to `H_k(T)` by conjugation with `w`,
    /// where `w·S·w⁻¹ = T`.
    fn transport(&self, coords: &[i64], k: usize, from: &Subgroup, to: &Subgroup, w: &Word) -> Result<Vec<i64>> {
        match (from, to) {
            (Subgroup::Whole, Subgroup::Whole) | (Subgroup::Trivial, Subgroup::Trivial) => Ok(coords.to_vec()),
            _ if k == 0 => Ok(coords.to_vec()),
            (Subgroup::Cyclic(r), Subgroup::Cyclic(_)) if k == 1 => {
                let image = self.oracle().conjugate(w, r);
                match self.oracle().subgroup_coordinates(to, &image)?.as_deref() {
                    Some([1]) => Ok(coords.to_vec()),
                    Some([-1]) => Ok(coords.iter().map(|c| -c).collect()),
                    _ => Err(Error::invariant("conjugation does not identify the centralizers")),
                }
            }
            _ if from == to && self.oracle().is_identity(w) => Ok(coords.to_vec()),
            _ => Err(Error::Unsupported(format!("transport of degree-{k} classes between {from:?} and {to:?}"))),
        }
    }

    /// Relabels a class of `H_k(C_g)` by the canonical conjugacy label of `g`.
    fn relabel(&self, g: &Word, k: usize, coords: &[i64]) -> Result<(Word, Vec<i64>)> {
        let label = self.oracle().conjugacy_label(g)?;
        let from = self.centralizer(g)?;
        let to = self.centralizer(&label.label)?;
        Ok((label.label.clone(), self.transport(coords, k, &from, &to, &label.conjugator)?))
    }

    /// Validates a class and rewrites it at its canonical label.
    pub fn canonical_class(&self, x: &LGClass) -> Result<LGClass> {
        let k = self.homology_degree(x.degree)?;
        let label = self.oracle().normal_form(&x.label);
        let rank = self.complex(&self.centralizer(&label)?)?.homology_rank(k);
        if x.coords.len() != rank {
            return Err(Error::Spec(format!(
                "class at {} in degree {} needs {rank} coordinates, got {}",
                self.alphabet().format(&label),
                x.degree,
                x.coords.len()
            )));
        }
        let (label, coords) = self.relabel(&label, k, &x.coords)?;
        Ok(LGClass { label, degree: x.degree, coords })
    }

    fn conjugate_subgroup(&self, g: &Word, s: &Subgroup) -> Subgroup {
        let o = self.oracle();
        match s {
            Subgroup::Whole | Subgroup::Trivial => s.clone(),
            Subgroup::Cyclic(r) => Subgroup::Cyclic(o.conjugate(g, r)),
            Subgroup::FreeAbelian(b) => Subgroup::FreeAbelian(b.iter().map(|r| o.conjugate(g, r)).collect()),
        }
    }

    /// Splits a chain over `Z[G/K] ⊗ Z[G/H]` along the double cosets `KgH`:
    /// `γ1K ⊗ γ2H = a·(K ⊗ gH) ↦ a·J` with `J = K ∩ gHg⁻¹`.
    ///
    /// Only double cosets met by the support appear. With a perturbation, each
    /// key uses `g′ = k0·g·h0` in place of the canonical representative.
    pub fn psi_decompose(
        &self,
        c: &ModuleChain,
        mut perturb: Option<&mut Perturbation>,
    ) -> Result<BTreeMap<Word, CosetSummand>> {
        let [k_sub, h_sub] = c.module.factors.as_slice() else {
            return Err(Error::invariant("double-coset decomposition needs two coset factors"));
        };
        let o = self.oracle();
        let mut out: BTreeMap<Word, (CosetSummand, Word)> = BTreeMap::new();
        for (b, key, coeff) in c.terms.iter() {
            let (g1, g2) = (&key[0], &key[1]);
            let dc = o.double_coset(&o.multiply(&o.invert(g1), g2), k_sub, h_sub)?;
            // dc.rep = k·g1⁻¹g2·h, so a = g1·k⁻¹ has aK = g1K and a·rep·H = g2H.
            let a = o.multiply(g1, &o.invert(&dc.k));
            if !out.contains_key(&dc.rep) {
                let (k0, h0) = match perturb.as_deref_mut() {
                    Some(p) => (p.element(o, k_sub), p.element(o, h_sub)),
                    None => (Word::identity(), Word::identity()),
                };
                let rep = o.normal_form(&k0.concat(&dc.rep).concat(&h0));
                let j = o.intersect(k_sub, &self.conjugate_subgroup(&rep, h_sub))?;
                let chain = ModuleChain::zero(c.degree, CosetModule::cosets(j.clone()));
                out.insert(dc.rep.clone(), (CosetSummand { rep, subgroup: j, chain }, k0));
            }
            let (summand, k0) = out.get_mut(&dc.rep).expect("inserted above");
            let a = o.multiply(&a, &o.invert(k0));
            let coset = o.coset_canonical(&a, &summand.subgroup)?.rep;
            summand.chain.terms.add(b, vec![coset], coeff)?;
        }
        Ok(out.into_iter().map(|(g, (s, _))| (g, s)).collect())
    }

    /// `H_i(K) × H_j(H) → ⊕_g H_{i+j−n}(K ∩ gHg⁻¹)`, through
    /// Shapiro, `D⁻¹ ⊗ D⁻¹`, cup, `D`, the double-coset splitting and Shapiro back.
    #[allow(clippy::too_many_arguments)]
    pub fn intersection_pair(
        &self,
        k_sub: &Subgroup,
        i: usize,
        x: &[i64],
        h_sub: &Subgroup,
        j: usize,
        y: &[i64],
        perturb: Option<&mut Perturbation>,
    ) -> Result<BTreeMap<Word, PairTerm>> {
        let n = self.dimension();
        let mut out = BTreeMap::new();
        if i + j < n {
            return Ok(out);
        }
        let (kc, hc) = (self.complex(k_sub)?, self.complex(h_sub)?);
        let phi = self.duality_inverse(&kc, i, x)?;
        let psi = self.duality_inverse(&hc, j, y)?;
        let theta = self.duality.cup(&phi, &psi)?;
        let c = self.duality.cap_with_z(&theta)?;
        let degree = i + j - n;
        for (g, summand) in self.psi_decompose(&c, perturb)? {
            let jc = self.complex(&summand.subgroup)?;
            let coords = self.duality.shapiro_backward(&summand.chain, &jc)?;
            if coords.iter().all(|&v| v == 0) {
                continue;
            }
            out.insert(g, PairTerm { rep: summand.rep, subgroup: summand.subgroup, degree, coords });
        }
        Ok(out)
    }

    /// Pushforward `H_k(J) → H_k(T)` along the inclusion `J ≤ T`.
    pub fn j_push(&self, j: &Subgroup, k: usize, coords: &[i64], target: &Subgroup) -> Result<Vec<i64>> {
        self.complex(j)?.push_class(k, coords, self.complex(target)?.as_ref())
    }

    /// The string product of two homogeneous classes, computed directly from
    /// the coordinates (no basis decomposition, no product cache).
    pub fn string_product_with(
        &self,
        x: &LGClass,
        y: &LGClass,
        perturb: Option<&mut Perturbation>,
    ) -> Result<LGElement> {
        let x = self.canonical_class(x)?;
        let y = self.canonical_class(y)?;
        let n = self.dimension();
        let degree = x.degree + y.degree;
        let mut out = LGElement::zero();
        if degree < -(n as i64) || x.is_zero() || y.is_zero() {
            return Ok(out);
        }
        let (i, j) = (self.homology_degree(x.degree)?, self.homology_degree(y.degree)?);
        let k_sub = self.centralizer(&x.label)?;
        let h_sub = self.centralizer(&y.label)?;
        let o = self.oracle();
        let pairs = self.intersection_pair(&k_sub, i, &x.coords, &h_sub, j, &y.coords, perturb)?;
        for term in pairs.values() {
            let target = o.normal_form(&x.label.concat(&o.conjugate(&term.rep, &y.label)));
            let c = self.centralizer(&target)?;
            let pushed = self.j_push(&term.subgroup, term.degree, &term.coords, &c)?;
            let (label, coords) = self.relabel(&target, term.degree, &pushed)?;
            out.add_class(&LGClass { label, degree, coords }, 1)?;
        }
        Ok(out)
    }

    pub fn string_product(&self, x: &LGClass, y: &LGClass) -> Result<LGElement> {
        self.string_product_with(x, y, None)
    }

    /// Memoized product of two canonical basis classes.
    fn basis_product(&self, x: &LGClass, y: &LGClass) -> Result<Arc<LGElement>> {
        let key = (x.clone(), y.clone());
        if let Some(hit) = self.products.get(&key) {
            return Ok(hit.clone());
        }
        let store_key = format!("product/{}", encode(&key));
        let v = Arc::new(self.cached(&store_key, |_| true, || self.string_product(x, y))?);
        self.products.insert(key, v.clone());
        Ok(v)
    }

    /// `μ(x, y)`, extended bilinearly from memoized products of basis classes.
    pub fn product(&self, x: &LGClass, y: &LGClass) -> Result<LGElement> {
        let x = self.canonical_class(x)?;
        let y = self.canonical_class(y)?;
        let mut out = LGElement::zero();
        if x.degree + y.degree < -(self.dimension() as i64) {
            return Ok(out);
        }
        for (a, &xa) in x.coords.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            let ea = LGClass::basis(x.label.clone(), x.degree, x.coords.len(), a);
            for (b, &yb) in y.coords.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                let eb = LGClass::basis(y.label.clone(), y.degree, y.coords.len(), b);
                let p = self.basis_product(&ea, &eb)?;
                out.add_scaled(&p, crate::resolution::mul_coeff(xa, yb)?)?;
            }
        }
        Ok(out)
    }

    /// `μ` extended bilinearly to finite sums.
    pub fn product_elements(&self, x: &LGElement, y: &LGElement) -> Result<LGElement> {
        let mut out = LGElement::zero();
        for a in x.classes() {
            for b in y.classes() {
                out.add_scaled(&self.product(&a, &b)?, 1)?;
            }
        }
        Ok(out)
    }

    /// The closed-form product for abelian groups.
    pub fn abelian_oracle(&self, x: &LGClass, y: &LGClass) -> Result<LGElement> {
        let x = self.canonical_class(x)?;
        let y = self.canonical_class(y)?;
        abelian_oracle(self.oracle(), self.group.resolution.as_ref(), &x, &y)
    }

    /// Canonical conjugacy labels of all words of length at most `max_len`, ShortLex sorted.
    pub fn labels(&self, max_len: usize) -> Result<Vec<Word>> {
        let mut labels: Vec<Word> = Vec::new();
        for w in self.oracle().enumerate_ball(max_len) {
            labels.push(self.oracle().conjugacy_label(&w)?.label);
        }
        labels.sort();
        labels.dedup();
        Ok(labels)
    }

    /// All basis classes at the given labels, in every degree `−n..=0`.
    pub fn basis_classes(&self, labels: &[Word]) -> Result<Vec<LGClass>> {
        let n = self.dimension() as i64;
        let mut out = Vec::new();
        for label in labels {
            for degree in -n..=0 {
                let rank = self.summand_rank(label, degree)?;
                for i in 0..rank {
                    out.push(LGClass::basis(label.clone(), degree, rank, i));
                }
            }
        }
        Ok(out)
    }

    /// Human-readable names of the homology basis of `H_k(S)`, in coordinate order.
    pub fn basis_names(&self, s: &Subgroup, k: usize) -> Result<Vec<String>> {
        let c = self.complex(s)?;
        let Some(h) = c.homology(k) else {
            return Ok(Vec::new());
        };
        Ok(h.basis
            .iter()
            .map(|v| {
                let parts: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
                    .map(|(i, x)| {
                        let name = c.cell_name(k, i);
                        let name = if name.starts_with('[') { name } else { format!("[{name}]") };
                        match x.to_string().as_str() {
                            "1" => name,
                            "-1" => format!("-{name}"),
                            s => format!("{s}{name}"),
                        }
                    })
                    .collect();
                parts.join("+")
            })
            .collect())
    }
}
