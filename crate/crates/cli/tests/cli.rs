use std::path::Path;
use std::process::{Command, Output};

use modcoh::functor::{FunctorExpr, FunctorPresentation, MorphismSquare, SquareSpec};
use modcoh::module::{FPModule, ModuleMap};
use modcoh::witt::WittLaw;
use modcoh::BaseRing;
use serde_json::Value;

fn modcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modcoh")).args(args).env_remove("MODCOH_CACHE_DIR").output().unwrap()
}

fn modcoh_cached(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modcoh")).args(args).env("MODCOH_CACHE_DIR", dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = modcoh(&a);
    (serde_json::from_str(&stdout(&o)).unwrap(), code(&o))
}

fn write_expr(dir: &Path, name: &str, base: &BaseRing, e: &FunctorExpr) -> String {
    let path = dir.join(name);
    std::fs::write(&path, modcoh::io::expr_to_json(base, e).to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn times(c: i64) -> FunctorExpr {
    let z = BaseRing::Integers;
    let one = FPModule::free(&z, 1);
    FunctorExpr::KernelPair(ModuleMap::new(&one, &one, modcoh::module::int_mat(&z, &[&[c]], 1)).unwrap())
}

#[test]
fn cohen_reports_the_computed_mu() {
    let o = modcoh(&["cex", "cohen", "--k", "6", "--p", "2"]);
    assert!(stdout(&o).contains("mu=4 expected=5 FAIL"), "{}", stdout(&o));
    assert_eq!(code(&o), 1);
    let o = modcoh(&["cex", "cohen", "--k", "5", "--p", "3"]);
    assert!(stdout(&o).contains("mu=1 expected=1 PASS"));
    assert_eq!(code(&o), 0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["cex", "cohen", "--k", "6"],
        vec!["cex", "cohen", "--k", "6", "--p", "2", "--bogus"],
        vec!["frobnicate"],
        vec!["pic", "compute", "--ring", "Q[t^2,t^3]"],
        vec!["suite", "quick", "--only", "nonsense"],
        vec!["suite", "medium"],
        vec!["cex", "cohen", "--k", "6", "--p", "4"],
        vec!["functor", "eval", "--expr", "/nonexistent/f.json", "--algebra", "Z/4"],
    ] {
        let o = modcoh(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn pic_table_rows() {
    let o = modcoh(&["pic", "table"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("row ") && l.ends_with(" PASS")).count(), 14);
    assert!(text.contains("Z[5t,t^2,t^3]=F_5 expected=F_5 PASS"));
    assert!(text.contains("Z[t^2,t^3,x]=free abelian of countably infinite rank"));
}

#[test]
fn pic_chain_and_compute() {
    let (v, c) = json(&["pic", "chain", "--ring", "F2[t^3,t^5,t^7]"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["length"], 2);
    let (v, c) = json(&["pic", "compute", "--ring", "Z[4t,t^2,t^3]"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["group"], "Z/4");
}

#[test]
fn functor_eval_kernel_of_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_expr(dir.path(), "f.json", &BaseRing::Integers, &times(2));
    let o = modcoh(&["functor", "eval", "--expr", &f, "--algebra", "Z/4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("invariant factors: (2)"), "{}", stdout(&o));
    // Z/12 is not an algebra over Z/8
    let g = write_expr(dir.path(), "g.json", &BaseRing::integers_mod(8), &FunctorExpr::Strict(FPModule::free(&BaseRing::integers_mod(8), 1)));
    assert_eq!(code(&modcoh(&["functor", "eval", "--expr", &g, "--algebra", "Z/12"])), 2);
}

#[test]
fn functor_normalize_saves_an_equivalent_expression() {
    let dir = tempfile::tempdir().unwrap();
    let e = FunctorExpr::Product(vec![times(2), times(3)]);
    let f = write_expr(dir.path(), "f.json", &BaseRing::Integers, &e);
    let saved = dir.path().join("n.json");
    let o = modcoh(&["functor", "normalize", "--expr", &f, "--save", saved.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    for alg in ["Z/6", "Z/4 x Z/3", "F2[x]/(x^2)"] {
        let a = json(&["functor", "eval", "--expr", &f, "--algebra", alg]).0;
        let b = json(&["functor", "eval", "--expr", saved.to_str().unwrap(), "--algebra", alg]).0;
        assert_eq!(a["results"]["invariant factors"], b["results"]["invariant factors"], "{alg}");
    }
}

#[test]
fn functor_coker_and_hom() {
    let dir = tempfile::tempdir().unwrap();
    let z = BaseRing::Integers;
    let strict = FunctorPresentation::strict(&FPModule::free(&z, 1));
    let sigma = SquareSpec::of(&MorphismSquare::scalar(&strict, &z.from_i64(2)));
    let s = FunctorExpr::Strict(FPModule::free(&z, 1));
    let e = FunctorExpr::CokernelOfMorphism { source: Box::new(s.clone()), target: Box::new(s.clone()), sigma };
    let f = write_expr(dir.path(), "c.json", &z, &e);
    let (v, c) = json(&["functor", "coker", "--expr", &f, "--algebra", "Z/4"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["invariant factors"], "(2)");
    // coker needs a cokernel at the root
    let k = write_expr(dir.path(), "k.json", &z, &times(2));
    assert_eq!(code(&modcoh(&["functor", "coker", "--expr", &k])), 2);
    // Hom(Ker 2, Z) at Z/4: maps from the 2-torsion to B
    let id = write_expr(dir.path(), "id.json", &z, &s);
    let (v, c) = json(&["functor", "hom", "--source", &k, "--target", &id, "--algebra", "Z/4"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["invariant factors"], "(2)");
}

#[test]
fn functor_profile_of_ann_s() {
    let dir = tempfile::tempdir().unwrap();
    let r = modcoh::parse_ring("F2[s,t]").unwrap();
    let e = FunctorExpr::AnnOf { base: r.clone(), gens: vec![r.var("s").unwrap()] };
    let f = write_expr(dir.path(), "a.json", &r, &e);
    let (v, c) = json(&["functor", "profile", "--expr", &f, "--nmax", "6"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["mu"], serde_json::json!(["1", "2", "3", "4", "5", "6"]));
    assert_eq!(v["results"]["flagged"], false);
}

#[test]
fn witt_arithmetic() {
    let (v, c) = json(&["witt", "add", "--p", "2", "--n", "2", "--ring", "F2", "--x", "1,0", "--y", "1,0"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["x+y"], "(0, 1)");
    let (v, _) = json(&["witt", "mul", "--p", "3", "--n", "2", "--ring", "F3[x]", "--x", "x,0", "--y", "x,1"]);
    assert_eq!(v["checks"][0]["passed"], true);
    let (v, c) = json(&["witt", "inv", "--p", "2", "--n", "2", "--ring", "F2[x]/(x^2)", "--x", "1+x,x"]);
    assert_eq!(c, 0);
    assert_eq!(v["checks"][0]["value"], "1");
    let (v, c) = json(&["witt", "inv", "--p", "2", "--n", "2", "--ring", "F2", "--x", "0,1"]);
    assert_eq!(c, 0);
    assert!(v["results"]["inverse"].as_str().unwrap().starts_with("none"));
}

#[test]
fn witt_eta_reports_the_missing_element() {
    let o = modcoh(&["witt", "eta", "--p", "2", "--n", "3", "--k", "1"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("homomorphism=holds PASS"));
    assert!(text.contains("  4t^(3/4)"), "{text}");
    assert_eq!(code(&modcoh(&["witt", "eta", "--p", "3", "--n", "2", "--k", "1"])), 0);
}

#[test]
fn text_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_expr(dir.path(), "f.json", &BaseRing::Integers, &times(6));
    let cases: Vec<Vec<&str>> = vec![
        vec!["pic", "table", "--primes", "2,3"],
        vec!["pic", "chain", "--ring", "Z[t^2,t^3]"],
        vec!["cex", "cohen", "--k", "6", "--p", "3"],
        vec!["cex", "ann", "--k", "2", "--p", "2"],
        vec!["cex", "tensor", "--n", "3", "--p", "2"],
        vec!["cex", "growth", "--source", "cohen", "--nmax", "7"],
        vec!["witt", "laws", "--p", "2", "--n", "2"],
        vec!["functor", "eval", "--expr", &f, "--algebra", "Z/4 x Z/3"],
        vec!["suite", "quick", "--only", "picard,flatness"],
    ];
    for args in cases {
        let text = stdout(&modcoh(&args));
        let (v, _) = json(&args);
        assert_eq!(v["version"], 1);
        assert_eq!(v["kind"], "report");
        assert!(text.starts_with(&format!("command: {}\n", v["command"].as_str().unwrap())));
        for (k, x) in v["inputs"].as_object().unwrap() {
            let s = x.as_str().map(String::from).unwrap_or_else(|| x.to_string());
            assert!(text.contains(&format!("input {k}: {s}\n")), "{args:?} input {k}");
        }
        for (k, x) in v["results"].as_object().unwrap() {
            match x {
                Value::Array(items) if items.iter().all(|i| i.is_string()) && !items.is_empty() => {
                    assert!(text.contains(&format!("{k}:\n")));
                    for i in items {
                        assert!(text.contains(&format!("  {}\n", i.as_str().unwrap())), "{args:?} {k}");
                    }
                }
                Value::String(s) => assert!(text.contains(&format!("{k}: {s}\n")), "{args:?} {k}"),
                other => assert!(text.contains(&format!("{k}: {other}\n")), "{args:?} {k}"),
            }
        }
        for c in v["checks"].as_array().unwrap() {
            let verdict = if c["passed"].as_bool().unwrap() { "PASS" } else { "FAIL" };
            let line = match c.get("expected") {
                Some(e) => format!("{}={} expected={} {verdict}", c["name"].as_str().unwrap(), c["value"].as_str().unwrap(), e.as_str().unwrap()),
                None => format!("{}={} {verdict}", c["name"].as_str().unwrap(), c["value"].as_str().unwrap()),
            };
            assert!(text.lines().any(|l| l == line), "{args:?}: {line}");
        }
        if let Some(s) = v.get("suite") {
            for crit in s["criteria"].as_array().unwrap() {
                for c in crit["checks"].as_array().unwrap() {
                    let verdict = if c["passed"].as_bool().unwrap() { "PASS" } else { "FAIL" };
                    assert!(text.contains(&format!("  {verdict} {}: {}", c["name"].as_str().unwrap(), c["value"].as_str().unwrap())));
                }
            }
        }
        let overall = text.lines().last().unwrap();
        let passed = v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true) && v.get("suite").map_or(true, |s| s["passed"] == true);
        assert_eq!(overall, if passed { "PASS" } else { "FAIL" });
    }
}

#[test]
fn suite_quick_fails_only_where_documented() {
    let (v, c) = json(&["suite", "quick"]);
    assert_eq!(c, 1);
    let failing: Vec<&str> = v["suite"]["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["cohen", "witt"]);
    let witt = v["suite"]["criteria"].as_array().unwrap().iter().find(|c| c["id"] == "witt").unwrap();
    let bad: Vec<&str> = witt["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(bad, vec!["eta p = 2, n = 3, k = 1, window 6", "eta p = 2, n = 2, k = 2, window 6"]);
}

#[test]
fn suite_reports_are_bitwise_reproducible() {
    let a = modcoh(&["suite", "full", "--seed", "7", "--only", "functor,products", "--json"]);
    let b = modcoh(&["suite", "full", "--seed", "7", "--only", "functor,products", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let c = modcoh(&["suite", "full", "--seed", "8", "--only", "functor,products", "--json"]);
    assert_ne!(a.stdout, c.stdout);
    let q1 = modcoh(&["suite", "quick"]);
    let q2 = modcoh(&["suite", "quick"]);
    assert_eq!(q1.stdout, q2.stdout);
}

fn plant_law(dir: &Path, law: &WittLaw) {
    let doc = modcoh::io::envelope("witt-law", serde_json::json!({ "law": serde_json::to_value(law).unwrap() }));
    std::fs::write(dir.join(format!("witt-law-p{}-n{}.json", law.p, law.n)), doc.to_string()).unwrap();
}

#[test]
fn sabotaged_law_in_the_cache_fails_the_ghost_check() {
    let dir = tempfile::tempdir().unwrap();
    plant_law(dir.path(), &WittLaw::compute(2, 2).unwrap().sabotaged());
    let o = modcoh_cached(dir.path(), &["suite", "quick"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("  FAIL ghost identities p = 2, n = 2: fails: sum component 1"), "{text}");
    // the arithmetic picks up the same law
    let o = modcoh_cached(dir.path(), &["witt", "laws", "--p", "2", "--n", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("ghost identities=fails: sum component 1 FAIL"));
}

#[test]
fn laws_are_cached_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let first = modcoh_cached(dir.path(), &["witt", "laws", "--p", "3", "--n", "2", "--json"]);
    assert_eq!(code(&first), 0);
    let file = dir.path().join("witt-law-p3-n2.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["kind"], "witt-law");
    let second = modcoh_cached(dir.path(), &["witt", "laws", "--p", "3", "--n", "2", "--json"]);
    assert_eq!(first.stdout, second.stdout);
    // a file from a newer format is ignored and replaced
    std::fs::write(&file, r#"{"version": 99, "kind": "witt-law"}"#).unwrap();
    let third = modcoh_cached(dir.path(), &["witt", "laws", "--p", "3", "--n", "2", "--json"]);
    assert_eq!(first.stdout, third.stdout);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(doc["version"], 1);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = modcoh(&["cex", "tensor", "--n", "2", "--p", "3", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
}

#[test]
fn timing_is_opt_in() {
    let (v, _) = json(&["pic", "compute", "--ring", "Z[t^2,t^3]"]);
    assert!(v.get("timing_ms").is_none());
    let (v, _) = json(&["pic", "compute", "--ring", "Z[t^2,t^3]", "--timing"]);
    assert!(v["timing_ms"].is_u64());
}
