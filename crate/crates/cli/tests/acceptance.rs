//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! All comparisons are exact (integer arithmetic, zero tolerance). The only
//! pinned numeric tolerance is the runtime budget of criterion 1.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pdstring::algebra::{
    check_axioms, global_intersection_oracle, AxiomReport, Engine, LGClass, LGElement, Law, Perturbation, SampleSpec,
};
use pdstring::builtin::{make_group, GroupSpec, PdGroup};
use pdstring::duality::Duality;
use pdstring::group::{Subgroup, Word};
use pdstring::resolution::{check_all, Chain, SubgroupComplex};

/// Criterion 1 runtime budget over all five groups.
const UNIT_BUDGET: Duration = Duration::from_secs(300);
/// Criterion 8 sample count and seed.
const REPRESENTATIVE_SAMPLES: usize = 20;
const REPRESENTATIVE_SEED: u64 = 0;
/// Window radius for the chain-level D∘D⁻¹ checks.
const CHECK_WINDOW: usize = 8;

type Criterion<'a> = Box<dyn Fn() -> Verdict + 'a>;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Verdict { passed, detail: detail.into() }
    }
}

fn specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::free_abelian(1),
        GroupSpec::free_abelian(2),
        GroupSpec::free_abelian(3),
        GroupSpec::surface(2),
        GroupSpec::surface(3),
    ]
}

fn engine(spec: &GroupSpec) -> Engine {
    Engine::new(make_group(spec).expect("builtin group")).expect("engine")
}

fn laws(engine: &Engine, laws: &[Law], max_label_length: usize) -> Result<AxiomReport, String> {
    let spec = SampleSpec { max_label_length, laws: laws.to_vec(), ..SampleSpec::default() };
    check_axioms(engine, &spec).map_err(|e| e.to_string())
}

fn summarize(reports: &[(String, Result<AxiomReport, String>)], law: Law) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (group, r) in reports {
        match r.as_ref().map(|r| r.law(law).cloned()) {
            Ok(Some(l)) => {
                ok &= l.failed == 0 && l.inconclusive == 0 && l.passed > 0;
                parts.push(format!("{group}: {}/{}", l.passed, l.checked()));
                if let Some(f) = l.failures.first().or(l.inconclusive_samples.first()) {
                    parts.push(format!("first problem: {f}"));
                }
            }
            Ok(None) => {
                ok = false;
                parts.push(format!("{group}: law not checked"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{group}: error {e}"));
            }
        }
    }
    Verdict::new(ok, parts.join(", "))
}

fn criterion_unit(engines: &[Engine]) -> Verdict {
    let start = Instant::now();
    let reports: Vec<_> = engines.iter().map(|e| (e.group().spec.to_string(), laws(e, &[Law::Unit], 2))).collect();
    let elapsed = start.elapsed();
    let mut v = summarize(&reports, Law::Unit);
    v.passed &= elapsed <= UNIT_BUDGET;
    v.detail = format!("{}; {:.1}s of {}s budget", v.detail, elapsed.as_secs_f64(), UNIT_BUDGET.as_secs());
    v
}

fn criterion_commutativity(engines: &[Engine]) -> Verdict {
    let reports: Vec<_> =
        engines.iter().map(|e| (e.group().spec.to_string(), laws(e, &[Law::Commutativity], 2))).collect();
    summarize(&reports, Law::Commutativity)
}

fn criterion_associativity(engines: &[Engine]) -> Verdict {
    let reports: Vec<_> =
        engines.iter().map(|e| (e.group().spec.to_string(), laws(e, &[Law::Associativity], 1))).collect();
    summarize(&reports, Law::Associativity)
}

/// Λ(a) ⊗ Z[t, t⁻¹]: `t^j` has degree 0, `a·t^j` degree −1, `a² = 0`.
fn loop_ring_oracle(x: (i64, bool), y: (i64, bool)) -> Option<(i64, bool)> {
    let ((j, xa), (k, ya)) = (x, y);
    (!(xa && ya)).then_some((j + k, xa || ya))
}

fn criterion_circle_ring(z: &Engine) -> Verdict {
    let alphabet = z.alphabet();
    let t = alphabet.parse("t").expect("circle generator");
    let power = |j: i64| z.oracle().normal_form(&Word::power_of(t.letters()[0].generator(), j));
    let class = |(j, a): (i64, bool)| LGClass { label: power(j), degree: if a { -1 } else { 0 }, coords: vec![1] };
    let basis: Vec<(i64, bool)> = (-2..=2).flat_map(|j| [(j, false), (j, true)]).collect();
    let mut mismatches = Vec::new();
    for &x in &basis {
        for &y in &basis {
            let want = loop_ring_oracle(x, y).map(class).map(LGElement::from_class).unwrap_or_default();
            match z.string_product(&class(x), &class(y)) {
                Ok(got) if got == want => {}
                Ok(got) => mismatches.push(format!(
                    "{} · {} = {}, expected {}",
                    class(x).describe(&alphabet),
                    class(y).describe(&alphabet),
                    got.describe(&alphabet),
                    want.describe(&alphabet)
                )),
                Err(e) => mismatches.push(format!("{x:?} · {y:?}: {e}")),
            }
        }
    }
    let n = basis.len() * basis.len();
    Verdict::new(
        mismatches.is_empty(),
        match mismatches.first() {
            None => format!("{n}/{n} structure constants match"),
            Some(m) => format!("{} of {n} differ; first: {m}", mismatches.len()),
        },
    )
}

fn criterion_abelian_oracle(engines: &[Engine]) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for e in engines.iter().filter(|e| e.oracle().is_abelian()) {
        let alphabet = e.alphabet();
        let samples = e.labels(2).and_then(|l| e.basis_classes(&l)).expect("basis classes");
        let (mut agree, mut total) = (0usize, 0usize);
        let mut first = None;
        for x in &samples {
            for y in &samples {
                total += 1;
                match (e.string_product(x, y), e.abelian_oracle(x, y)) {
                    (Ok(a), Ok(b)) if a == b => agree += 1,
                    (a, b) => {
                        first.get_or_insert_with(|| {
                            format!("{} · {}: {:?} vs {:?}", x.describe(&alphabet), y.describe(&alphabet), a, b)
                        });
                    }
                }
            }
        }
        ok &= agree == total;
        parts.push(format!("{}: {agree}/{total}", e.group().spec));
        parts.extend(first);
    }

    // The torus intersection form in every label sector, with one sign s.
    let t = engine(&GroupSpec::free_abelian(2));
    let labels = t.labels(1).expect("labels");
    let h1 = |label: &Word, i: usize| {
        let mut coords = vec![0, 0];
        coords[i] = 1;
        LGClass { label: label.clone(), degree: -1, coords }
    };
    let mut signs = Vec::new();
    let mut form_ok = true;
    for a in &labels {
        for b in &labels {
            let ab = t.oracle().multiply(a, b);
            for i in 0..2 {
                for j in 0..2 {
                    let Ok(p) = t.string_product(&h1(a, i), &h1(b, j)) else {
                        form_ok = false;
                        continue;
                    };
                    let terms: Vec<LGClass> = p.classes().collect();
                    if i == j {
                        form_ok &= terms.is_empty();
                        continue;
                    }
                    match terms.as_slice() {
                        [c] if c.label == ab && c.degree == -2 && c.coords.len() == 1 && c.coords[0].abs() == 1 => {
                            signs.push(if i == 0 { c.coords[0] } else { -c.coords[0] });
                        }
                        _ => form_ok = false,
                    }
                }
            }
        }
    }
    signs.dedup();
    let consistent = form_ok && signs.len() == 1;
    ok &= consistent;
    parts.push(match (consistent, signs.first()) {
        (true, Some(s)) => {
            format!("torus form e1·e2 = {s}·pt = −e2·e1, ei·ei = 0 in all {} label pairs", labels.len().pow(2))
        }
        _ => format!("torus form inconsistent (signs {signs:?}, shape ok {form_ok})"),
    });
    Verdict::new(ok, parts.join(", "))
}

fn criterion_whole_group_oracle() -> Verdict {
    let e = engine(&GroupSpec::surface(2));
    let res = e.group().resolution.clone();
    let whole = e.complex(&Subgroup::Whole).expect("whole complex");
    let n = e.dimension();
    let (mut agree, mut total) = (0usize, 0usize);
    let mut first = None;
    for i in 0..=n {
        for j in 0..=n {
            let (ri, rj) = (whole.homology_rank(i), whole.homology_rank(j));
            for a in 0..ri {
                for b in 0..rj {
                    let (mut x, mut y) = (vec![0; ri], vec![0; rj]);
                    x[a] = 1;
                    y[b] = 1;
                    total += 1;
                    let oracle = global_intersection_oracle(res.as_ref(), i, &x, j, &y).map(|o| {
                        let nonzero = o.iter().any(|&v| v != 0);
                        nonzero.then_some(o)
                    });
                    let pair = e
                        .intersection_pair(&Subgroup::Whole, i, &x, &Subgroup::Whole, j, &y, None)
                        .map(|p| p.values().next().map(|t| t.coords.clone()));
                    match (&oracle, &pair) {
                        (Ok(o), Ok(p)) if o == p => agree += 1,
                        _ => {
                            first.get_or_insert(format!("H{i}[{a}] · H{j}[{b}]: oracle {oracle:?}, pipeline {pair:?}"));
                        }
                    }
                }
            }
        }
    }
    // Symplectic shape of the oracle itself: basis a1, b1, a2, b2.
    let mut symplectic = true;
    let mut sign = None;
    for a in 0..4 {
        for b in 0..4 {
            let (mut x, mut y) = (vec![0; 4], vec![0; 4]);
            x[a] = 1;
            y[b] = 1;
            let v = global_intersection_oracle(res.as_ref(), 1, &x, 1, &y).map(|o| o[0]).unwrap_or(i64::MAX);
            let paired = a / 2 == b / 2 && a != b;
            let expected_abs = i64::from(paired);
            symplectic &= v.abs() == expected_abs;
            if paired {
                let oriented = if a % 2 == 0 { v } else { -v };
                symplectic &= *sign.get_or_insert(oriented) == oriented;
            }
        }
    }
    let ok = agree == total && symplectic;
    let mut detail =
        format!("{agree}/{total} basis pairs match; symplectic with ai·bi = {}·pt: {symplectic}", sign.unwrap_or(0));
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    Verdict::new(ok, detail)
}

fn test_subgroups(g: &PdGroup) -> Vec<Subgroup> {
    let mut out = vec![Subgroup::Whole, Subgroup::Trivial];
    for w in g.oracle.enumerate_ball(2) {
        out.push(g.oracle.centralizer(&w).expect("centralizer"));
    }
    out.sort();
    out.dedup();
    let base = out.clone();
    for a in &base {
        for b in &base {
            out.push(g.oracle.intersect(a, b).expect("intersection"));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn chain_level(spec: &GroupSpec) -> Result<(usize, usize), String> {
    let g = make_group(spec).map_err(|e| e.to_string())?;
    let res = g.resolution.as_ref();
    let ball = g.oracle.enumerate_ball(2);
    let mut samples = Vec::new();
    for k in 0..=res.length() {
        for i in 0..res.rank(k) {
            for w in &ball {
                samples.push(Chain::cell(k, i, w.clone(), 1));
            }
        }
    }
    check_all(res, &samples).map_err(|e| format!("{spec}: {e}"))?;
    let d = Duality::new(g.oracle.clone(), g.resolution.clone()).map_err(|e| e.to_string())?;
    let (mut shapiro, mut inverse) = (0usize, 0usize);
    for s in test_subgroups(&g) {
        let sub = SubgroupComplex::new(s.clone(), g.oracle.clone(), g.resolution.clone()).map_err(|e| e.to_string())?;
        for p in 0..=d.dimension() {
            let rank = sub.homology_rank(p);
            for i in 0..rank {
                let mut coords = vec![0; rank];
                coords[i] = 1;
                let fail = |what: &str| format!("{spec}, {s:?}, H{p}[{i}]: {what}");
                let c = d.shapiro_forward(&sub, p, &coords).map_err(|e| fail(&e.to_string()))?;
                if !d.boundary(&c).map_err(|e| fail(&e.to_string()))?.is_zero()
                    || d.shapiro_backward(&c, &sub).map_err(|e| fail(&e.to_string()))? != coords
                {
                    return Err(fail("Shapiro round trip"));
                }
                shapiro += 1;
                let phi = d.duality_inverse(&sub, p, &coords, CHECK_WINDOW).map_err(|e| fail(&e.to_string()))?;
                if !d.coboundary(&phi).map_err(|e| fail(&e.to_string()))?.is_zero()
                    || d.duality(&phi, &sub).map_err(|e| fail(&e.to_string()))? != coords
                {
                    return Err(fail("D∘D⁻¹ ≠ id"));
                }
                inverse += 1;
            }
        }
    }
    Ok((shapiro, inverse))
}

fn criterion_chain_level() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for spec in specs() {
        match chain_level(&spec) {
            Ok((s, i)) => parts.push(format!("{spec}: resolution laws ok, {s} Shapiro, {i} D∘D⁻¹")),
            Err(e) => {
                ok = false;
                parts.push(e);
            }
        }
    }
    Verdict::new(ok, parts.join(", "))
}

fn criterion_representatives() -> Verdict {
    let e = engine(&GroupSpec::surface(2));
    let alphabet = e.alphabet();
    let n = e.dimension() as i64;
    let samples = e.labels(2).and_then(|l| e.basis_classes(&l)).expect("basis classes");
    let eligible: Vec<(&LGClass, &LGClass)> = samples
        .iter()
        .flat_map(|x| samples.iter().map(move |y| (x, y)))
        .filter(|(x, y)| x.degree + y.degree >= -n)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(REPRESENTATIVE_SEED);
    let chosen: Vec<_> = eligible.choose_multiple(&mut rng, REPRESENTATIVE_SAMPLES).copied().collect();
    let (mut identical, mut moved, mut nonzero) = (0usize, 0usize, 0usize);
    let mut first = None;
    for (index, (x, y)) in chosen.iter().enumerate() {
        let perturbation = || Perturbation::new(ChaCha8Rng::seed_from_u64(1000 + index as u64), 2);
        let check = || -> pdstring::Result<(bool, bool, bool)> {
            let reference = e.string_product(x, y)?;
            let perturbed = e.string_product_with(x, y, Some(&mut perturbation()))?;
            let (cx, cy) = (e.canonical_class(x)?, e.canonical_class(y)?);
            let (k, h) = (e.centralizer(&cx.label)?, e.centralizer(&cy.label)?);
            let (i, j) = ((cx.degree + n) as usize, (cy.degree + n) as usize);
            let plain = e.intersection_pair(&k, i, &cx.coords, &h, j, &cy.coords, None)?;
            let shifted = e.intersection_pair(&k, i, &cx.coords, &h, j, &cy.coords, Some(&mut perturbation()))?;
            let reps_moved = plain.iter().zip(&shifted).any(|((_, a), (_, b))| a.rep != b.rep);
            Ok((perturbed == reference, reps_moved, !reference.is_zero()))
        };
        match check() {
            Ok((same, m, nz)) => {
                identical += usize::from(same);
                moved += usize::from(m);
                nonzero += usize::from(nz);
                if !same {
                    first.get_or_insert(format!("{} · {}", x.describe(&alphabet), y.describe(&alphabet)));
                }
            }
            Err(err) => {
                first.get_or_insert(format!("{} · {}: {err}", x.describe(&alphabet), y.describe(&alphabet)));
            }
        }
    }
    let total = chosen.len();
    let ok = total == REPRESENTATIVE_SAMPLES && identical == total && moved > 0;
    let mut detail = format!(
        "{identical}/{total} identical (seed {REPRESENTATIVE_SEED}); representatives moved in {moved}, nonzero products {nonzero}"
    );
    if let Some(f) = first {
        detail.push_str(&format!("; first problem: {f}"));
    }
    Verdict::new(ok, detail)
}

fn group_file(dir: &Path, spec: &GroupSpec) -> std::path::PathBuf {
    use pdstring::builtin::GroupKind;
    let (name, body) = match spec.kind {
        GroupKind::FreeAbelian { rank } => (format!("z{rank}"), format!("kind = free_abelian\nrank = {rank}\n")),
        GroupKind::Surface { genus } => (format!("s{genus}"), format!("kind = surface\ngenus = {genus}\n")),
    };
    let path = dir.join(name);
    std::fs::write(&path, body).expect("write group file");
    path
}

fn criterion_determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache = dir.path().join("cache");
    let run = |group: &Path, jobs: &str, cache: Option<&Path>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pd-string"));
        c.env_remove("PDSTRING_CACHE");
        c.args(["axioms", "--laws", "U", "--max-label-length", "2", "--format", "json", "--jobs", jobs, "--group"]);
        c.arg(group);
        if let Some(d) = cache {
            c.arg("--cache-dir").arg(d);
        }
        c.output().expect("run pd-string")
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in specs() {
        let g = group_file(dir.path(), &spec);
        let plain = run(&g, "1", None);
        let cold = run(&g, "1", Some(&cache));
        let warm = run(&g, "4", Some(&cache));
        let all_ok = [&plain, &cold, &warm].iter().all(|o| o.status.code() == Some(0));
        let same = plain.stdout == cold.stdout && cold.stdout == warm.stdout && !plain.stdout.is_empty();
        let quiet = warm.stderr.is_empty();
        ok &= all_ok && same && quiet;
        parts.push(format!("{spec}: {}", if all_ok && same && quiet { "identical" } else { "DIFFERENT" }));
    }
    Verdict::new(ok, format!("no cache --jobs 1 vs cold cache --jobs 1 vs warm cache --jobs 4: {}", parts.join(", ")))
}

fn main() {
    let engines: Vec<Engine> = specs().iter().map(engine).collect();
    let circle = engine(&GroupSpec::free_abelian(1));
    let criteria: Vec<(&str, Criterion)> = vec![
        ("unit law", Box::new(|| criterion_unit(&engines))),
        ("graded commutativity", Box::new(|| criterion_commutativity(&engines))),
        ("associativity", Box::new(|| criterion_associativity(&engines))),
        ("loop ring of the circle", Box::new(|| criterion_circle_ring(&circle))),
        ("abelian oracle", Box::new(|| criterion_abelian_oracle(&engines))),
        ("whole-group intersection form", Box::new(criterion_whole_group_oracle)),
        ("chain-level invariants", Box::new(criterion_chain_level)),
        ("representative independence", Box::new(criterion_representatives)),
        ("determinism", Box::new(criterion_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        failed += usize::from(!v.passed);
        println!(
            "criterion {} {name}: {} ({}) [{:.1}s]",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
