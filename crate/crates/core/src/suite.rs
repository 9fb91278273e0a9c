//! The acceptance checks, grouped by criterion, at two sizes.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counterexamples::growth::sequence;
use crate::counterexamples::{ann_lemma_check, cohen_h1, growth_report, tensor_mc_mu, GrowthSource};
use crate::error::{Error, Result};
use crate::functor::expr::check_tree;
use crate::functor::growth::{check_finite_products, flatness_equalizer_witness, Flatness, GrowthProfile};
use crate::functor::random::{battery, battery_homs, check_naturality, node_presentations, product_pairs, random_suite};
use crate::functor::{ann_functor, dominate_linear, normalize, FunctorPresentation};
use crate::linalg::Mat;
use crate::module::{FPModule, ModuleMap};
use crate::picard::{conductor_chain, parse_subring, reproduce_table};
use crate::ring::{parse_ring, BaseRing, RingElement};
use crate::witt::algebra::prime_field_is_cyclic;
use crate::witt::{verify_eta, verify_ghost, witt_laws, WittLaw};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Quick => "quick",
            Level::Full => "full",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, value: impl Into<String>) -> Check {
        Check { name: name.into(), passed, value: value.into(), expected: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    fn new(id: &str, checks: Vec<Check>) -> CriterionReport {
        let title = CRITERIA.iter().find(|(i, _)| *i == id).map_or(id, |(_, t)| t).to_string();
        CriterionReport { id: id.into(), title, passed: checks.iter().all(|c| c.passed), checks }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub level: Level,
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

pub const CRITERIA: [(&str, &str); 10] = [
    ("picard", "Picard table"),
    ("cohen", "Cohen counterexample"),
    ("ann", "Annihilator lemma"),
    ("tensor", "Tensor counterexample"),
    ("growth", "Growth profiles"),
    ("witt", "Witt verification"),
    ("functor", "Functor oracle suite"),
    ("products", "Finite products"),
    ("flatness", "Flatness witness"),
    ("chains", "Conductor chains"),
];

/// Where the Witt checks get their laws from.
pub type LawSource<'a> = &'a dyn Fn(u64, u32) -> Result<Arc<WittLaw>>;

pub struct Options<'a> {
    pub level: Level,
    pub seed: u64,
    pub laws: LawSource<'a>,
}

impl Options<'static> {
    pub fn new(level: Level, seed: u64) -> Options<'static> {
        Options { level, seed, laws: &witt_laws }
    }
}

fn full(o: &Options) -> bool {
    o.level == Level::Full
}

pub fn run_criterion(id: &str, o: &Options) -> Result<CriterionReport> {
    let checks = match id {
        "picard" => picard_checks()?,
        "cohen" => cohen_checks(o)?,
        "ann" => ann_checks()?,
        "tensor" => tensor_checks(o)?,
        "growth" => growth_checks(o)?,
        "witt" => witt_checks(o)?,
        "functor" => functor_checks(o)?,
        "products" => product_checks(o)?,
        "flatness" => flatness_checks()?,
        "chains" => chain_checks()?,
        _ => {
            let known: Vec<&str> = CRITERIA.iter().map(|c| c.0).collect();
            return Err(Error::Invalid(format!("unknown criterion '{id}' (known: {})", known.join(", "))));
        }
    };
    Ok(CriterionReport::new(id, checks))
}

/// Runs the listed criteria (all when empty) in the canonical order.
pub fn run_suite(o: &Options, only: &[String]) -> Result<SuiteReport> {
    for id in only {
        if !CRITERIA.iter().any(|c| c.0 == id) {
            return run_criterion(id, o).map(|_| unreachable!());
        }
    }
    let criteria = CRITERIA
        .iter()
        .filter(|(id, _)| only.is_empty() || only.iter().any(|x| x == id))
        .map(|(id, _)| run_criterion(id, o))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { level: o.level, seed: o.seed, passed: criteria.iter().all(|c| c.passed), criteria })
}

fn picard_checks() -> Result<Vec<Check>> {
    Ok(reproduce_table(&[2, 3, 5])?
        .into_iter()
        .map(|r| {
            let name = match r.p {
                Some(p) => format!("row {} {} (p = {p})", r.row, r.ring),
                None => format!("row {} {}", r.row, r.ring),
            };
            Check { name, passed: r.matches, value: r.computed, expected: Some(r.expected) }
        })
        .collect())
}

fn cohen_checks(o: &Options) -> Result<Vec<Check>> {
    let top = if full(o) { 10 } else { 8 };
    let mut out = Vec::new();
    for p in [2, 3] {
        for k in 4..=top {
            let r = cohen_h1(k, p)?;
            out.push(Check {
                name: format!("k = {k}, p = {p}"),
                passed: r.consistent(),
                value: format!("mu={} generators={} dim={}", r.mu_direct, r.mu_generators, r.dim),
                expected: Some(format!("mu={}", r.mu_formula)),
            });
        }
    }
    Ok(out)
}

fn ann_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for p in [2, 3] {
        for k in 1..=4 {
            let r = ann_lemma_check(k, p, 2 * k)?;
            let value = match &r.witness {
                None => format!("{} blocks, equal", r.blocks),
                Some(w) => format!("block u={} v={} degree {}: dim {} vs {}", w.u, w.v, w.degree, w.annihilator_dim, w.generated_dim),
            };
            out.push(Check::new(format!("k = {k}, p = {p}, degrees <= {}", 2 * k), r.passed(), value));
        }
    }
    Ok(out)
}

fn tensor_checks(o: &Options) -> Result<Vec<Check>> {
    let top = if full(o) { 8 } else { 6 };
    let mut out = Vec::new();
    for p in [2, 3] {
        for n in 1..=top {
            let r = tensor_mc_mu(n, p)?;
            out.push(Check {
                name: format!("n = {n}, p = {p}"),
                passed: r.consistent(),
                value: format!("mu={} product={} dense={}", r.mu, r.mu_product, r.mu_dense),
                expected: Some(format!("mu={}", r.expected)),
            });
        }
    }
    Ok(out)
}

/// Level-1 functors over F_p[s,t]: a fixed list plus seeded random maps.
pub fn growth_library(p: u64, seed: u64, random: usize) -> Result<Vec<(String, FunctorPresentation)>> {
    let r = parse_ring(&format!("F{p}[s,t]"))?;
    let (s, t) = (r.var("s")?, r.var("t")?);
    let st = r.mul(&s, &t);
    let free = |n| FPModule::free(&r, n);
    let map = |m: usize, n: usize, rows: Vec<Vec<RingElement>>| -> Result<FunctorPresentation> {
        Ok(FunctorPresentation::new(ModuleMap::new(&free(n), &free(m), Mat::from_rows(rows, n))?))
    };
    let mut out = vec![
        ("A".to_string(), FunctorPresentation::strict(&free(1))),
        ("A/(s)".into(), FunctorPresentation::strict(&FPModule::cyclic(&r, s.clone()))),
        ("A/(s,t)".into(), FunctorPresentation::strict(&FPModule::new(&r, 1, Mat::from_rows(vec![vec![s.clone(), t.clone()]], 2))?)),
        ("Ann(s)".into(), ann_functor(&r, &[s.clone()])?),
        ("Ann(st)".into(), ann_functor(&r, &[st.clone()])?),
        ("Ann(s,t)".into(), ann_functor(&r, &[s.clone(), t.clone()])?),
        ("Ker(s,t: A^2 -> A)".into(), map(1, 2, vec![vec![s.clone(), t.clone()]])?),
        ("Ker(s^2: A -> A)".into(), map(1, 1, vec![vec![r.mul(&s, &s)]])?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let monos = [r.one(), s.clone(), t.clone(), st, r.mul(&s, &s), r.mul(&t, &t)];
    for i in 0..random {
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let rows: Vec<Vec<RingElement>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let (a, b) = (rng.gen_range(0..monos.len()), rng.gen_range(0..monos.len()));
                        let (c, d) = (r.from_i64(rng.gen_range(0..p as i64)), r.from_i64(rng.gen_range(0..p as i64)));
                        r.add(&r.mul(&c, &monos[a]), &r.mul(&d, &monos[b]))
                    })
                    .collect()
            })
            .collect();
        out.push((format!("random {i} ({m}x{n})"), map(m, n, rows)?));
    }
    Ok(out)
}

fn growth_checks(o: &Options) -> Result<Vec<Check>> {
    let (n_lib, k_cohen, n_tensor, random) = if full(o) { (12, 10, 8, 6) } else { (8, 8, 6, 3) };
    let mut out = Vec::new();
    for p in [2, 3] {
        for (name, f) in growth_library(p, o.seed, random)? {
            let g = growth_report(&GrowthSource::Library { name: name.clone(), functor: f }, n_lib, 2)?;
            let c = &g.fits.iter().find(|x| x.exponent == 2).expect("degree-2 fit").c;
            out.push(Check::new(
                format!("F{p}[s,t] {name}: mu_n <= c n^2, n <= {n_lib}"),
                !g.flagged,
                format!("c={c} mu={}", join(&g.mu)),
            ));
        }
    }
    for p in [2, 3] {
        for (src, top) in [(GrowthSource::Cohen { p }, k_cohen), (GrowthSource::Tensor { p }, n_tensor)] {
            let mu = sequence(&src, top)?;
            for d in [2, 3] {
                let g = GrowthProfile::from_sequence(mu.clone(), d);
                out.push(Check::new(format!("{} flagged at d = {d}, n <= {top}", src.name()), g.flagged, format!("mu={}", join(&mu))));
            }
        }
    }
    Ok(out)
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn witt_checks(o: &Options) -> Result<Vec<Check>> {
    let n_top = if full(o) { 4 } else { 3 };
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        for n in 1..=n_top {
            let r = verify_ghost(&*(o.laws)(p, n)?);
            let value = if r.passed() {
                format!("{} identities", r.checked)
            } else {
                let f: Vec<String> = r.failures.iter().map(|f| format!("{} component {}", f.law, f.component)).collect();
                format!("fails: {}", f.join(", "))
            };
            out.push(Check::new(format!("ghost identities p = {p}, n = {n}"), r.passed(), value));
        }
    }
    for p in [2, 3] {
        for n in 1..=3 {
            let ok = prime_field_is_cyclic(p, n)?;
            out.push(Check::new(format!("W_{n}(F_{p}) cyclic of order {}", p.pow(n)), ok, if ok { "cyclic" } else { "not cyclic" }));
        }
    }
    for (p, n, k) in [(2, 2, 1), (2, 3, 1), (3, 2, 1), (2, 2, 2)] {
        let r = verify_eta(p, n, k, 6)?;
        let value = format!(
            "hom={} injective={} generation={}{}",
            r.homomorphism(),
            r.injective,
            r.generation(),
            if r.missing.is_empty() { String::new() } else { format!(" missing {}", r.missing.join(", ")) }
        );
        out.push(Check::new(format!("eta p = {p}, n = {n}, k = {k}, window 6"), r.passed(), value));
    }
    Ok(out)
}

fn tree_count(o: &Options) -> usize {
    if full(o) {
        100
    } else {
        24
    }
}

fn functor_checks(o: &Options) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut kinds: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut homs: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for (i, (base, e)) in random_suite(o.seed, tree_count(o), 3)?.into_iter().enumerate() {
        let n = normalize(&e)?;
        let pres = node_presentations(&n);
        let mut bad = Vec::new();
        let mut nodes = 0;
        for alg in battery(&base) {
            let name = alg.to_string();
            for c in check_tree(&e, &n, &alg)? {
                nodes += 1;
                *kinds.entry(c.kind).or_default() += 1;
                if !c.ok {
                    bad.push(format!("{} at {name}", c.kind));
                }
            }
            for (j, f) in pres.iter().enumerate() {
                if !dominate_linear(f).is_surjective_at(f, &alg)? {
                    bad.push(format!("dominate_linear node {j} at {name}"));
                }
            }
        }
        let us = homs.entry(base.to_string()).or_insert_with(|| battery_homs(&base).unwrap_or_default());
        for u in us.iter() {
            if !check_naturality(&e, &n, u)? {
                bad.push(format!("naturality along {} -> {}", u.source, u.target));
            }
        }
        let value = if bad.is_empty() { format!("{nodes} node evaluations") } else { bad.join("; ") };
        out.push(Check::new(format!("tree {i} over {base} ({})", e.kind()), bad.is_empty(), value));
    }
    for kind in ["KernelOfMorphism", "CokernelOfMorphism", "ImageOfMorphism"] {
        let seen = kinds.get(kind).copied().unwrap_or(0);
        out.push(Check::new(format!("{kind} nodes exercised"), seen > 0, format!("{seen} evaluations")));
    }
    Ok(out)
}

fn product_checks(o: &Options) -> Result<Vec<Check>> {
    let pairs = product_pairs();
    let mut out = Vec::new();
    for (i, (_, e)) in random_suite(o.seed, tree_count(o), 3)?.into_iter().enumerate() {
        let f = normalize(&e)?.presentation;
        let mut bad = Vec::new();
        for (b1, b2) in &pairs {
            if !check_finite_products(&f, b1, b2)?.bijective {
                bad.push(format!("{} x {}", b1, b2));
            }
        }
        let value = if bad.is_empty() { format!("{} pairs bijective", pairs.len()) } else { format!("not bijective at {}", bad.join(", ")) };
        out.push(Check::new(format!("tree {i} over {}", f.base()), bad.is_empty(), value));
    }
    Ok(out)
}

fn flatness_checks() -> Result<Vec<Check>> {
    let z = BaseRing::Integers;
    let m = FPModule::cyclic(&z, z.from_i64(2));
    let check = match flatness_equalizer_witness(&m, &[z.from_i64(2)])? {
        Flatness::FlatOnIdeal => Check::new("M = Z/2, I = (2) over Z", false, "no witness (flat on this ideal)"),
        Flatness::Witness(w) => Check::new(
            "M = Z/2, I = (2) over Z",
            w.valid(),
            format!("maps agree: {}, outside image: {}", w.maps_agree, w.outside_image),
        ),
    };
    Ok(vec![check])
}

pub const CHAIN_RINGS: [&str; 4] = ["F2[t^2,t^3]", "F2[t^3,t^4,t^5]", "F2[t^3,t^5,t^7]", "Z[t^2,t^3]"];

fn chain_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for spec in CHAIN_RINGS {
        let a = parse_subring(spec)?;
        let steps = conductor_chain(&a)?;
        for (i, s) in steps.iter().enumerate() {
            out.push(Check::new(
                format!("{spec} step {} (adjoin {})", i + 1, s.adjoined),
                s.certificate.holds(),
                format!("colon {} quotient {}", s.colon_text, s.quotient),
            ));
        }
        let ends = steps.last().is_some_and(|s| s.ring.is_normal());
        out.push(Check::new(format!("{spec} chain reaches the normalization"), ends, format!("{} steps", steps.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sabotaged_law_names_the_ghost_check() {
        let bad = |p: u64, n: u32| -> Result<Arc<WittLaw>> { Ok(Arc::new(witt_laws(p, n)?.sabotaged())) };
        let o = Options { level: Level::Quick, seed: 7, laws: &bad };
        let r = run_criterion("witt", &o).unwrap();
        assert!(!r.passed);
        let names: Vec<&str> = r.failed().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"ghost identities p = 2, n = 2"), "{names:?}");
        assert!(r.failed().any(|c| c.value.contains("sum component 1")));
    }

    #[test]
    fn small_criteria_pass() {
        let o = Options::new(Level::Quick, 7);
        for id in ["picard", "ann", "flatness", "chains"] {
            let r = run_criterion(id, &o).unwrap();
            assert!(r.passed, "{id}: {:?}", r.failed().collect::<Vec<_>>());
        }
    }

    #[test]
    fn unknown_criterion_is_an_error() {
        let o = Options::new(Level::Quick, 7);
        assert!(run_criterion("nope", &o).is_err());
        assert!(run_suite(&o, &["nope".into()]).is_err());
    }

    #[test]
    fn growth_library_is_seeded() {
        let a = growth_library(2, 7, 3).unwrap();
        let b = growth_library(2, 7, 3).unwrap();
        let c = growth_library(2, 8, 3).unwrap();
        assert_eq!(a.len(), 11);
        assert!(a.iter().zip(&b).all(|(x, y)| x.0 == y.0 && x.1 == y.1));
        assert!(a.iter().zip(&c).any(|(x, y)| x.1 != y.1));
    }
}
