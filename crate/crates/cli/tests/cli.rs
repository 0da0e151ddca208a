use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pdstring_cli::ClassSpec;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pd-string"));
    c.env_remove("PDSTRING_CACHE");
    c
}

fn group_file(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(group: &Path, args: &[&str]) -> Output {
    let (verb, rest) = args.split_first().unwrap();
    bin().arg(verb).arg("--group").arg(group).args(rest).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

struct Groups {
    _dir: tempfile::TempDir,
    z1: PathBuf,
    z2: PathBuf,
    s2: PathBuf,
}

fn groups() -> Groups {
    let dir = tempfile::tempdir().unwrap();
    Groups {
        z1: group_file(dir.path(), "z1", "kind = free_abelian\nrank = 1\n"),
        z2: group_file(dir.path(), "z2", "kind = free_abelian\nrank = 2\n"),
        s2: group_file(dir.path(), "s2", "# genus two\nkind = surface\ngenus = 2\n"),
        _dir: dir,
    }
}

#[test]
fn homology_examples() {
    let g = groups();
    let o = run(&g.s2, &["homology", "--whole", "--degree", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["free_rank"], 4);
    assert_eq!(v["basis"], serde_json::json!(["[a1]", "[b1]", "[a2]", "[b2]"]));
    let v = json(&run(&g.s2, &["homology", "--subgroup", "a1", "--degree", "1", "--format", "json"]));
    assert_eq!(v["free_rank"], 1);
    let v = json(&run(&g.z2, &["homology", "--whole", "--degree", "2", "--format", "json"]));
    assert_eq!(v["free_rank"], 1);
    assert!(stdout(&run(&g.s2, &["homology", "--whole", "--degree", "2"])).contains("free rank: 1"));
}

#[test]
fn product_examples() {
    let g = groups();
    let o = run(&g.z1, &["product", "--x", "{t, 0, [1]}", "--y", "{t, 0, [1]}", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["product"], serde_json::json!([{ "label": "t^2", "degree": 0, "coeffs": [1] }]));

    for (file, y) in [(&g.z1, "{t^-2, -1, [1]}"), (&g.z2, "{e1*e2^-1, -1, [2,-1]}"), (&g.s2, "{a1*b2, -1, [3]}")] {
        let o = run(file, &["product", "--x", "{1, 0, [1]}", "--y", y, "--format", "json"]);
        let terms: Vec<ClassSpec> = serde_json::from_value(json(&o)["product"].clone()).unwrap();
        assert_eq!(terms, vec![ClassSpec::parse(y).unwrap()]);
    }

    let o = run(&g.z2, &["product", "--x", "{e1, -1, [1,0]}", "--y", "{e2, -1, [0,1]}", "--format", "json"]);
    let terms: Vec<ClassSpec> = serde_json::from_value(json(&o)["product"].clone()).unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!((terms[0].label.as_str(), terms[0].degree, terms[0].coeffs[0].abs()), ("e1*e2", -2, 1));
}

/// Product reports feed back in as inputs, so associativity can be scripted.
#[test]
fn json_reports_round_trip_into_products() {
    let g = groups();
    let product = |x: &str, y: &str| -> Vec<ClassSpec> {
        let o = run(&g.z2, &["product", "--x", x, "--y", y, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_value(json(&o)["product"].clone()).unwrap()
    };
    let (x, y, w) = ("{e1, 0, [1]}", "{e2, -1, [1,0]}", "{e1*e2, -1, [0,1]}");
    let left: Vec<ClassSpec> =
        product(x, y).iter().flat_map(|t| product(&serde_json::to_string(t).unwrap(), w)).collect();
    let right: Vec<ClassSpec> =
        product(y, w).iter().flat_map(|t| product(x, &serde_json::to_string(t).unwrap())).collect();
    assert_eq!(left, right);
    assert!(!left.is_empty());
}

#[test]
fn axioms_examples_exit_zero() {
    let g = groups();
    for (file, l) in [(&g.z1, "2"), (&g.z2, "1"), (&g.s2, "1")] {
        let o = run(file, &["axioms", "--max-label-length", l]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).ends_with("status: ok\n"));
    }
    let v = json(&run(&g.z1, &["axioms", "--max-label-length", "2", "--format", "json"]));
    let codes: Vec<&str> = v["laws"].as_array().unwrap().iter().map(|l| l["law"].as_str().unwrap()).collect();
    assert_eq!(codes, ["U", "C", "A", "O", "R"]);
}

#[test]
fn exit_codes_distinguish_spec_bound_and_inconclusive() {
    let g = groups();
    let bad = group_file(g._dir.path(), "bad", "kind = surface\ngenus = 2\ncolour = red\n");
    let o = run(&bad, &["homology", "--whole", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));

    let o = run(&g.s2, &["product", "--x", "{a1, -1, [1,0]}", "--y", "{1, 0, [1]}"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&g.s2, &["product", "--x", "{a1, -1, [1]}", "--y", "{b1, -1, [1]}", "--max-window", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("radius 0"));

    let o = run(&g.s2, &["axioms", "--max-label-length", "1", "--laws", "R", "--max-window", "0"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("INCONCLUSIVE"));
}

#[test]
fn double_cosets_splits_transverse_curves() {
    let g = groups();
    let o = run(
        &g.s2,
        &["double-cosets", "--left", "a1", "--right", "b1", "--degree", "0", "--term", "0:1:1:1", "--format", "json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["summands"].as_array().unwrap().len(), 1);
    assert_eq!(v["summands"][0]["double_coset"], "1");
    assert_eq!(v["summands"][0]["intersection"], "trivial subgroup");
}

#[test]
fn cache_is_transparent_and_survives_poisoning() {
    let g = groups();
    let cache = tempfile::tempdir().unwrap();
    let args = ["product", "--x", "{a1, -1, [1]}", "--y", "{b1*a2, -1, [1]}"];
    let cold = run(&g.s2, &args);
    let with_cache = |g: &Path| {
        bin().arg(args[0]).arg("--group").arg(g).args(&args[1..]).env("PDSTRING_CACHE", cache.path()).output().unwrap()
    };
    let first = with_cache(&g.s2);
    let entries: Vec<PathBuf> = std::fs::read_dir(cache.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!entries.is_empty());
    let warm = with_cache(&g.s2);
    assert_eq!(first.stdout, cold.stdout);
    assert_eq!(warm.stdout, cold.stdout);
    assert!(warm.stderr.is_empty());

    for e in &entries {
        let bytes = std::fs::read(e).unwrap();
        std::fs::write(e, &bytes[..bytes.len() / 2]).unwrap();
    }
    let poisoned = with_cache(&g.s2);
    assert_eq!(poisoned.status.code(), Some(0));
    assert_eq!(poisoned.stdout, cold.stdout);
    assert!(String::from_utf8_lossy(&poisoned.stderr).contains("warning: ignoring corrupt cache entry"));
}

#[test]
fn reports_do_not_depend_on_jobs() {
    let g = groups();
    let a = run(&g.s2, &["axioms", "--max-label-length", "1", "--jobs", "1", "--format", "json"]);
    let b = run(&g.s2, &["axioms", "--max-label-length", "1", "--jobs", "4", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
