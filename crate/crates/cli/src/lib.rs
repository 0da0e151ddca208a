//! Command-line front end for the pd-string engine.

pub mod class_spec;
pub mod config;
pub mod store;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use pdstring::algebra::{check_axioms, Engine, Law, SampleSpec, Store};
use pdstring::builtin::{make_group, GroupSpec};
use pdstring::duality::{CellTerms, CosetModule, ModuleChain};
use pdstring::group::Subgroup;

pub use class_spec::ClassSpec;
pub use config::parse_group_file;
pub use store::FileStore;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_BOUND: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error("{0}")]
    Engine(#[from] pdstring::Error),
}

impl CliError {
    /// Spec and parse errors exit 2, bound and window failures 3, internal failures 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => EXIT_SPEC,
            CliError::Engine(e) if e.is_bound_failure() => EXIT_BOUND,
            CliError::Engine(
                pdstring::Error::Parse(_) | pdstring::Error::Spec(_) | pdstring::Error::Unsupported(_),
            ) => EXIT_SPEC,
            CliError::Engine(_) => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pd-string", version, about = "String-topology products of oriented Poincaré duality groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of a centralizer (or of the whole group) with its named basis.
    Homology(HomologyArgs),
    /// The string product of two classes.
    Product(ProductArgs),
    /// Checks unit, commutativity, associativity, oracle and representative laws.
    Axioms(AxiomsArgs),
    /// Splits a chain over Z[G/K] ⊗ Z[G/H] along double cosets (debugging aid).
    DoubleCosets(DoubleCosetArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Group file (key = value lines).
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Persistent cache directory.
    #[arg(long, env = "PDSTRING_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Overrides the group file's max_window_radius.
    #[arg(long)]
    pub max_window: Option<usize>,
}

#[derive(Debug, Args)]
pub struct HomologyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Use the centralizer of this word.
    #[arg(long, conflicts_with = "whole", required_unless_present = "whole")]
    pub subgroup: Option<String>,
    /// Use the whole group.
    #[arg(long)]
    pub whole: bool,
    #[arg(long)]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[command(flatten)]
    pub common: Common,
    /// First factor, as `{label, degree, [c1,..]}` or JSON.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Second factor.
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2)]
    pub max_label_length: usize,
    /// Label length for associativity triples (capped by --max-label-length).
    #[arg(long, default_value_t = 1)]
    pub associativity_label_length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of products recomputed with perturbed representatives.
    #[arg(long, default_value_t = 20)]
    pub representative_samples: usize,
    /// Laws to check, by code: U C A O R.
    #[arg(long, default_value = "UCAOR")]
    pub laws: String,
}

#[derive(Debug, Args)]
pub struct DoubleCosetArgs {
    #[command(flatten)]
    pub common: Common,
    /// Left subgroup K: `whole`, `trivial`, `centralizer:WORD` or a word generating a cyclic subgroup.
    #[arg(long)]
    pub left: String,
    /// Right subgroup H, same syntax.
    #[arg(long)]
    pub right: String,
    /// Resolution degree of the chain.
    #[arg(long)]
    pub degree: usize,
    /// A term `cell:γ1:γ2:coeff` of the chain Σ c·b ⊗ (γ1K ⊗ γ2H); repeatable.
    #[arg(long = "term", required = true, allow_hyphen_values = true)]
    pub terms: Vec<String>,
}

/// What the process prints on stdout and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub output: String,
    pub code: i32,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Homology(a) => &a.common,
            Command::Product(a) => &a.common,
            Command::Axioms(a) => &a.common,
            Command::DoubleCosets(a) => &a.common,
        }
    }
}

/// Runs a command on a dedicated pool of `--jobs` threads.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let jobs = cli.command.common().jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Spec(format!("cannot start {jobs} worker threads: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Homology(a) => homology(a),
        Command::Product(a) => product(a),
        Command::Axioms(a) => axioms(a),
        Command::DoubleCosets(a) => double_cosets(a),
    })
}

pub fn load_spec(common: &Common) -> Result<GroupSpec, CliError> {
    let text = std::fs::read_to_string(&common.group)
        .map_err(|e| CliError::Spec(format!("cannot read group file {}: {e}", common.group.display())))?;
    let mut spec = parse_group_file(&text)?;
    if let Some(r) = common.max_window {
        spec.max_window_radius = r;
    }
    Ok(spec)
}

pub fn build_engine(common: &Common) -> Result<Engine, CliError> {
    let spec = load_spec(common)?;
    let store = common.cache_dir.as_ref().map(|d| Arc::new(FileStore::new(d, &spec)) as Arc<dyn Store>);
    Ok(Engine::with_store(make_group(&spec)?, store)?)
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize")),
        Format::Text => text(),
    }
}

fn homology(a: &HomologyArgs) -> Result<Report, CliError> {
    let engine = build_engine(&a.common)?;
    let alphabet = engine.alphabet();
    let sub = match &a.subgroup {
        Some(w) => engine.centralizer(&alphabet.parse(w)?)?,
        None => Subgroup::Whole,
    };
    let complex = engine.complex(&sub)?;
    let (free_rank, torsion) = match complex.homology(a.degree) {
        Some(h) => (h.free_rank, h.torsion.iter().map(|t| t.to_string()).collect()),
        None => (0, Vec::new()),
    };
    let basis = engine.basis_names(&sub, a.degree)?;
    let value = json!({
        "group": engine.group().spec.to_string(),
        "subgroup": sub.describe(&alphabet),
        "degree": a.degree,
        "free_rank": free_rank,
        "torsion": torsion,
        "basis": basis,
    });
    let output = render(a.common.format, &value, || {
        let mut s = format!(
            "group: {}\nsubgroup: {}\ndegree: {}\nfree rank: {free_rank}\ntorsion: {}\nbasis:\n",
            engine.group().spec,
            sub.describe(&alphabet),
            a.degree,
            if torsion.is_empty() { "none".to_string() } else { torsion.join(", ") },
        );
        for (i, name) in basis.iter().enumerate() {
            s.push_str(&format!("  {i}: {name}\n"));
        }
        s
    });
    Ok(Report { output, code: EXIT_OK })
}

fn product(a: &ProductArgs) -> Result<Report, CliError> {
    let (xs, ys) = (ClassSpec::parse(&a.x)?, ClassSpec::parse(&a.y)?);
    let engine = build_engine(&a.common)?;
    let alphabet = engine.alphabet();
    let p = engine.product(&xs.to_class(&alphabet)?, &ys.to_class(&alphabet)?)?;
    let terms: Vec<ClassSpec> = p.classes().map(|c| ClassSpec::from_class(&c, &alphabet)).collect();
    let value = json!({ "group": engine.group().spec.to_string(), "x": xs, "y": ys, "product": terms });
    let output = render(a.common.format, &value, || {
        let mut s = format!("group: {}\nx: {}\ny: {}\nproduct:\n", engine.group().spec, xs.describe(), ys.describe());
        if terms.is_empty() {
            s.push_str("  0\n");
        }
        for t in &terms {
            s.push_str(&format!("  {}\n", t.describe()));
        }
        s
    });
    Ok(Report { output, code: EXIT_OK })
}

fn parse_laws(codes: &str) -> Result<Vec<Law>, CliError> {
    let mut laws = Vec::new();
    for c in codes.chars().filter(|c| !c.is_whitespace() && *c != ',') {
        let law = Law::from_code(c).ok_or_else(|| CliError::Spec(format!("unknown law code {c:?} (use U C A O R)")))?;
        if !laws.contains(&law) {
            laws.push(law);
        }
    }
    laws.sort();
    Ok(laws)
}

fn axioms(a: &AxiomsArgs) -> Result<Report, CliError> {
    let spec = SampleSpec {
        max_label_length: a.max_label_length,
        associativity_label_length: a.associativity_label_length,
        seed: a.seed,
        representative_samples: a.representative_samples,
        laws: parse_laws(&a.laws)?,
    };
    let engine = build_engine(&a.common)?;
    let report = check_axioms(&engine, &spec)?;
    let (code, status) = if report.any_failed() {
        (EXIT_FAILURE, "failed")
    } else if report.any_inconclusive() {
        (EXIT_INCONCLUSIVE, "inconclusive")
    } else {
        (EXIT_OK, "ok")
    };
    let laws: Vec<_> = report
        .laws
        .iter()
        .map(|l| {
            let law = l.law.expect("check_axioms names every law");
            json!({
                "law": law.code().to_string(),
                "name": law.name(),
                "passed": l.passed,
                "failed": l.failed,
                "inconclusive": l.inconclusive,
                "failures": l.failures,
                "inconclusive_samples": l.inconclusive_samples,
            })
        })
        .collect();
    let value = json!({
        "group": report.group,
        "max_label_length": spec.max_label_length,
        "seed": spec.seed,
        "samples": report.samples,
        "laws": laws,
        "status": status,
    });
    let output = render(a.common.format, &value, || {
        let mut s = format!(
            "group: {}\nmax label length: {}\nseed: {}\nbasis classes: {}\n",
            report.group, spec.max_label_length, spec.seed, report.samples
        );
        for l in &report.laws {
            let law = l.law.expect("check_axioms names every law");
            s.push_str(&format!(
                "{} {}: {} passed, {} failed, {} inconclusive\n",
                law.code(),
                law.name(),
                l.passed,
                l.failed,
                l.inconclusive
            ));
            for f in &l.failures {
                s.push_str(&format!("  FAIL {f}\n"));
            }
            for f in &l.inconclusive_samples {
                s.push_str(&format!("  INCONCLUSIVE {f}\n"));
            }
        }
        s.push_str(&format!("status: {status}\n"));
        s
    });
    Ok(Report { output, code })
}

fn parse_subgroup(engine: &Engine, text: &str) -> Result<Subgroup, CliError> {
    let alphabet = engine.alphabet();
    let text = text.trim();
    Ok(match text {
        "whole" => Subgroup::Whole,
        "trivial" => Subgroup::Trivial,
        _ => match text.strip_prefix("centralizer:") {
            Some(w) => engine.centralizer(&alphabet.parse(w)?)?,
            None => {
                let w = engine.oracle().normal_form(&alphabet.parse(text)?);
                if w.is_empty() {
                    Subgroup::Trivial
                } else {
                    Subgroup::Cyclic(w)
                }
            }
        },
    })
}

fn double_cosets(a: &DoubleCosetArgs) -> Result<Report, CliError> {
    let engine = build_engine(&a.common)?;
    let alphabet = engine.alphabet();
    let k = parse_subgroup(&engine, &a.left)?;
    let h = parse_subgroup(&engine, &a.right)?;
    let module = CosetModule { factors: vec![k.clone(), h.clone()] };
    let rank = engine.group().resolution.rank(a.degree);
    let mut terms = CellTerms::default();
    for t in &a.terms {
        let bad = || CliError::Spec(format!("term {t:?}: expected cell:γ1:γ2:coeff"));
        let parts: Vec<&str> = t.split(':').collect();
        let [b, g1, g2, c] = parts.as_slice() else {
            return Err(bad());
        };
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if b >= rank {
            return Err(CliError::Spec(format!("term {t:?}: degree {} has {rank} cells", a.degree)));
        }
        let c: i64 = c.trim().parse().map_err(|_| bad())?;
        let key = engine.duality().canonical(&module, &[alphabet.parse(g1)?, alphabet.parse(g2)?])?;
        terms.add(b, key, c)?;
    }
    let chain = ModuleChain { degree: a.degree, module, terms };
    let parts = engine.psi_decompose(&chain, None)?;
    let summands: Vec<_> = parts
        .iter()
        .map(|(g, s)| {
            json!({
                "double_coset": alphabet.format(g),
                "representative": alphabet.format(&s.rep),
                "intersection": s.subgroup.describe(&alphabet),
                "chain": s.chain.describe(&alphabet),
            })
        })
        .collect();
    let value = json!({
        "group": engine.group().spec.to_string(),
        "left": k.describe(&alphabet),
        "right": h.describe(&alphabet),
        "input": chain.describe(&alphabet),
        "summands": summands,
    });
    let output = render(a.common.format, &value, || {
        let mut s = format!(
            "group: {}\nK = {}\nH = {}\ninput: {}\n",
            engine.group().spec,
            k.describe(&alphabet),
            h.describe(&alphabet),
            chain.describe(&alphabet)
        );
        for (g, sm) in &parts {
            s.push_str(&format!(
                "K{}H: J = {}\n  {}\n",
                alphabet.format(g),
                sm.subgroup.describe(&alphabet),
                sm.chain.describe(&alphabet)
            ));
        }
        s
    });
    Ok(Report { output, code: EXIT_OK })
}
