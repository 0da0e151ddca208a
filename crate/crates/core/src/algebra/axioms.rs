use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Engine, LGClass, LGElement, Perturbation};
use crate::error::Result;

/// The algebra laws checked on samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Law {
    /// `μ(1, x) = x = μ(x, 1)`
    Unit,
    /// `μ(x, y) = (−1)^{pq} μ(y, x)`
    Commutativity,
    /// `μ(μ(x, y), w) = μ(x, μ(y, w))`
    Associativity,
    /// The product agrees with the abelian closed form.
    Oracle,
    /// Other double-coset representatives give the same product.
    Representatives,
}

impl Law {
    pub const ALL: [Law; 5] = [Law::Unit, Law::Commutativity, Law::Associativity, Law::Oracle, Law::Representatives];

    pub fn from_code(c: char) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.code() == c.to_ascii_uppercase())
    }

    pub fn code(self) -> char {
        match self {
            Law::Unit => 'U',
            Law::Commutativity => 'C',
            Law::Associativity => 'A',
            Law::Oracle => 'O',
            Law::Representatives => 'R',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Law::Unit => "unit",
            Law::Commutativity => "graded commutativity",
            Law::Associativity => "associativity",
            Law::Oracle => "abelian oracle",
            Law::Representatives => "representative independence",
        }
    }
}

/// Which samples to draw.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleSpec {
    /// Basis classes at the labels of all words up to this length.
    pub max_label_length: usize,
    /// Triples for associativity use labels up to this length.
    pub associativity_label_length: usize,
    /// Seeds the choice of perturbed products and their representatives.
    pub seed: u64,
    /// Number of perturbed products.
    pub representative_samples: usize,
    /// Laws to check; the abelian oracle is skipped for nonabelian groups.
    pub laws: Vec<Law>,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            max_label_length: 2,
            associativity_label_length: 1,
            seed: 0,
            representative_samples: 20,
            laws: Law::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: Option<Law>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    /// One line per failed sample.
    pub failures: Vec<String>,
    /// One line per inconclusive sample, naming the upstream error.
    pub inconclusive_samples: Vec<String>,
}

impl LawReport {
    pub fn checked(&self) -> usize {
        self.passed + self.failed + self.inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub group: String,
    pub samples: usize,
    pub laws: Vec<LawReport>,
}

impl AxiomReport {
    pub fn any_failed(&self) -> bool {
        self.laws.iter().any(|l| l.failed > 0)
    }

    pub fn any_inconclusive(&self) -> bool {
        self.laws.iter().any(|l| l.inconclusive > 0)
    }

    pub fn law(&self, law: Law) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == Some(law))
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Inconclusive(String),
}

fn outcome(result: Result<Option<String>>, what: impl FnOnce() -> String) -> Outcome {
    match result {
        Ok(None) => Outcome::Pass,
        Ok(Some(detail)) => Outcome::Fail(format!("{}: {detail}", what())),
        Err(e) => Outcome::Inconclusive(format!("{}: {e}", what())),
    }
}

fn tally(law: Law, outcomes: Vec<Outcome>) -> LawReport {
    let mut r = LawReport { law: Some(law), ..LawReport::default() };
    for o in outcomes {
        match o {
            Outcome::Pass => r.passed += 1,
            Outcome::Fail(s) => {
                r.failed += 1;
                r.failures.push(s);
            }
            Outcome::Inconclusive(s) => {
                r.inconclusive += 1;
                r.inconclusive_samples.push(s);
            }
        }
    }
    r
}

fn mismatch(engine: &Engine, lhs: &LGElement, rhs: &LGElement) -> Option<String> {
    (lhs != rhs).then(|| {
        let a = engine.alphabet();
        format!("{} ≠ {}", lhs.describe(&a), rhs.describe(&a))
    })
}

/// Checks the algebra laws on basis classes; every sample passes, fails or is inconclusive.
///
/// Samples run on the current rayon pool; the report does not depend on the schedule.
pub fn check_axioms(engine: &Engine, spec: &SampleSpec) -> Result<AxiomReport> {
    let alphabet = engine.alphabet();
    let show = |x: &LGClass| x.describe(&alphabet);
    let labels = engine.labels(spec.max_label_length)?;
    let samples = engine.basis_classes(&labels)?;
    let unit = engine.unit()?;
    let n = engine.dimension() as i64;
    let mut laws = Vec::new();

    let wants = |l: Law| spec.laws.contains(&l);

    if wants(Law::Unit) {
        let unit_outcomes = samples
            .par_iter()
            .map(|x| {
                let check = || -> Result<Option<String>> {
                    let expected = LGElement::from_class(x.clone());
                    let left = engine.product(&unit, x)?;
                    let right = engine.product(x, &unit)?;
                    Ok(mismatch(engine, &left, &expected).or_else(|| mismatch(engine, &right, &expected)))
                };
                outcome(check(), || format!("unit with {}", show(x)))
            })
            .collect();
        laws.push(tally(Law::Unit, unit_outcomes));
    }

    if wants(Law::Commutativity) {
        let pairs: Vec<(usize, usize)> =
            (0..samples.len()).flat_map(|a| (a..samples.len()).map(move |b| (a, b))).collect();
        let comm_outcomes = pairs
            .par_iter()
            .map(|&(a, b)| {
                let (x, y) = (&samples[a], &samples[b]);
                let check = || -> Result<Option<String>> {
                    let sign = if (x.degree * y.degree) % 2 == 0 { 1 } else { -1 };
                    let xy = engine.product(x, y)?;
                    let yx = engine.product(y, x)?.scaled(sign)?;
                    Ok(mismatch(engine, &xy, &yx))
                };
                outcome(check(), || format!("{} · {}", show(x), show(y)))
            })
            .collect();
        laws.push(tally(Law::Commutativity, comm_outcomes));
    }

    if wants(Law::Associativity) {
        let small_labels = engine.labels(spec.associativity_label_length.min(spec.max_label_length))?;
        let small = engine.basis_classes(&small_labels)?;
        let m = small.len();
        let triples: Vec<(usize, usize, usize)> =
            (0..m).flat_map(|a| (0..m).flat_map(move |b| (0..m).map(move |c| (a, b, c)))).collect();
        let assoc_outcomes = triples
            .par_iter()
            .map(|&(a, b, c)| {
                let (x, y, w) = (&small[a], &small[b], &small[c]);
                let check = || -> Result<Option<String>> {
                    let (ex, ew) = (LGElement::from_class(x.clone()), LGElement::from_class(w.clone()));
                    let left = engine.product_elements(&engine.product(x, y)?, &ew)?;
                    let right = engine.product_elements(&ex, &engine.product(y, w)?)?;
                    Ok(mismatch(engine, &left, &right))
                };
                outcome(check(), || format!("({} · {}) · {}", show(x), show(y), show(w)))
            })
            .collect();
        laws.push(tally(Law::Associativity, assoc_outcomes));
    }

    if wants(Law::Oracle) && engine.oracle().is_abelian() {
        let ordered: Vec<(usize, usize)> =
            (0..samples.len()).flat_map(|a| (0..samples.len()).map(move |b| (a, b))).collect();
        let oracle_outcomes = ordered
            .par_iter()
            .map(|&(a, b)| {
                let (x, y) = (&samples[a], &samples[b]);
                let check = || -> Result<Option<String>> {
                    Ok(mismatch(engine, &engine.product(x, y)?, &engine.abelian_oracle(x, y)?))
                };
                outcome(check(), || format!("oracle {} · {}", show(x), show(y)))
            })
            .collect();
        laws.push(tally(Law::Oracle, oracle_outcomes));
    }

    if wants(Law::Representatives) {
        let eligible: Vec<(usize, usize)> = (0..samples.len())
            .flat_map(|a| (0..samples.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| samples[a].degree + samples[b].degree >= -n)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let chosen: Vec<(usize, (usize, usize))> =
            eligible.choose_multiple(&mut rng, spec.representative_samples).copied().enumerate().collect();
        let rep_outcomes = chosen
            .par_iter()
            .map(|&(index, (a, b))| {
                let (x, y) = (&samples[a], &samples[b]);
                let check = || -> Result<Option<String>> {
                    let stream = spec.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64);
                    let mut p = Perturbation::new(ChaCha8Rng::seed_from_u64(stream), 2);
                    let perturbed = engine.string_product_with(x, y, Some(&mut p))?;
                    Ok(mismatch(engine, &perturbed, &engine.product(x, y)?))
                };
                outcome(check(), || format!("perturbed {} · {}", show(x), show(y)))
            })
            .collect();
        laws.push(tally(Law::Representatives, rep_outcomes));
    }

    Ok(AxiomReport { group: engine.group().spec.to_string(), samples: samples.len(), laws })
}
