use std::path::Path;

use anyhow::{bail, Context, Result};
use modcoh::counterexamples::{ann_lemma_check, cohen_h1, growth_report, tensor_mc_mu, GrowthSource};
use modcoh::functor::expr::check_tree;
use modcoh::functor::growth::mu_growth_profile;
use modcoh::functor::random::battery;
use modcoh::functor::{cokernel_of_morphism, eval, hom_functor, normalize, FunctorExpr, FunctorPresentation, MorphismSquare};
use modcoh::picard::{conductor_chain, parse_subring, picard, reproduce_table};
use modcoh::suite::{run_suite, Check, Level, Options};
use modcoh::witt::{verify_eta, verify_ghost, witt_laws, Coeff, WittRing};
use modcoh::{parse_algebra, parse_ring, BaseRing};
use serde_json::{json, Value};

use crate::report::Report;
use crate::{CexCmd, Cli, Command, FunctorCmd, PicCmd, WittBinary, WittCmd, WittRingArgs};

pub fn is_usage_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        matches!(
            c.downcast_ref::<modcoh::Error>(),
            Some(modcoh::Error::Parse(_) | modcoh::Error::Invalid(_) | modcoh::Error::Schema { .. } | modcoh::Error::Unsupported(_))
        ) || c.downcast_ref::<std::io::Error>().is_some()
    })
}

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Pic(c) => pic(c),
        Command::Functor(c) => functor(c),
        Command::Witt(c) => witt(c),
        Command::Cex(c) => cex(c),
        Command::Suite(s) => {
            let level = if s.level == "full" { Level::Full } else { Level::Quick };
            let mut echo = format!("suite {} --seed {}", s.level, cli.global.seed);
            if !s.only.is_empty() {
                echo += &format!(" --only {}", s.only.join(","));
            }
            let mut r = Report::new(&echo).input("level", s.level.clone()).input("seed", cli.global.seed);
            r.suite = Some(run_suite(&Options::new(level, cli.global.seed), &s.only)?);
            Ok(r)
        }
    }
}

fn strings<I: IntoIterator<Item = String>>(it: I) -> Value {
    Value::Array(it.into_iter().map(Value::String).collect())
}

fn check(name: &str, passed: bool, value: impl Into<String>) -> Check {
    Check { name: name.into(), passed, value: value.into(), expected: None }
}

fn compare(name: &str, value: impl ToString, expected: impl ToString) -> Check {
    let (value, expected) = (value.to_string(), expected.to_string());
    Check { name: name.into(), passed: value == expected, value, expected: Some(expected) }
}

fn pic(c: &PicCmd) -> Result<Report> {
    match c {
        PicCmd::Table { primes } => {
            let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
            let mut r = Report::new(&format!("pic table --primes {}", ps.join(","))).input("primes", json!(primes));
            let rows = reproduce_table(primes)?;
            let width = rows.iter().map(|x| x.ring.chars().count()).max().unwrap_or(0);
            r.result("table", strings(rows.iter().map(|x| format!("{:<width$}  {}", x.ring, x.computed))));
            for x in &rows {
                r.check(compare(&format!("row {} {}", x.row, x.ring), &x.computed, &x.expected));
            }
            Ok(r)
        }
        PicCmd::Compute { ring } => {
            let mut r = Report::new(&format!("pic compute --ring {ring}")).input("ring", ring.clone());
            let p = picard(ring)?;
            r.result("conductor", p.conductor);
            r.result("bar quotient", p.bar_quotient);
            r.result("units of bar quotient", p.units_bar_quotient.to_string());
            r.result("pic", p.description);
            r.result("group", p.group.to_string());
            r.result("generators", strings(p.generators));
            Ok(r)
        }
        PicCmd::Chain { ring } => {
            let mut r = Report::new(&format!("pic chain --ring {ring}")).input("ring", ring.clone());
            let a = parse_subring(ring)?;
            let steps = conductor_chain(&a)?;
            r.result("length", steps.len());
            r.result(
                "steps",
                strings(steps.iter().enumerate().map(|(i, s)| {
                    format!("{}: adjoin {} -> {}, colon {}, quotient {}", i + 1, s.adjoined, s.ring.render(), s.colon_text, s.quotient)
                })),
            );
            for (i, s) in steps.iter().enumerate() {
                let c = &s.certificate;
                let value = format!("domain={} faithful={} products={}", c.base_domain, c.faithful, c.products_checked);
                r.check(check(&format!("step {} prime", i + 1), c.holds(), value));
            }
            Ok(r)
        }
    }
}

fn load_expr(path: &Path) -> Result<(BaseRing, FunctorExpr)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = modcoh::io::parse_json(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(modcoh::io::expr_from_json(&doc).with_context(|| format!("in {}", path.display()))?)
}

fn algebra(spec: &str, base: &BaseRing) -> Result<modcoh::TestAlgebra> {
    let b = parse_algebra(spec)?;
    b.check_base(base)?;
    Ok(b)
}

fn factors(inv: &[num_bigint::BigInt]) -> String {
    let v: Vec<String> = inv.iter().map(|x| x.to_string()).collect();
    format!("({})", v.join(","))
}

fn shape(f: &FunctorPresentation) -> String {
    format!("Ker({} gens -> {} gens)", f.source().gens, f.target().gens)
}

fn soundness(e: &FunctorExpr, n: &modcoh::functor::Normalized, alg: &modcoh::TestAlgebra) -> Result<Check> {
    let bad: Vec<&str> = check_tree(e, n, alg)?.into_iter().filter(|c| !c.ok).map(|c| c.kind).collect();
    let value = if bad.is_empty() { "agrees".to_string() } else { format!("differs at {}", bad.join(",")) };
    Ok(check(&format!("direct evaluation at {alg}"), bad.is_empty(), value))
}

fn functor(c: &FunctorCmd) -> Result<Report> {
    match c {
        FunctorCmd::Normalize { expr, save } => {
            let (base, e) = load_expr(expr)?;
            let mut r = Report::new(&format!("functor normalize --expr {}", expr.display())).input("expr", expr.display().to_string());
            let n = normalize(&e)?;
            r.result("base", base.to_string());
            r.result("root", e.kind());
            r.result("presentation", shape(&n.presentation));
            let out = modcoh::io::expr_to_json(&base, &FunctorExpr::KernelPair(n.presentation.f.clone()));
            r.result("normalized", out["expr"].clone());
            for alg in battery(&base) {
                r.check(soundness(&e, &n, &alg)?);
            }
            if let Some(path) = save {
                std::fs::write(path, serde_json::to_string_pretty(&out)? + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(r)
        }
        FunctorCmd::Eval { expr, algebra: spec } => {
            let (base, e) = load_expr(expr)?;
            let mut r = Report::new(&format!("functor eval --expr {} --algebra {spec}", expr.display()))
                .input("expr", expr.display().to_string())
                .input("algebra", spec.clone());
            let alg = algebra(spec, &base)?;
            let n = normalize(&e)?;
            let v = eval(&n.presentation, &alg)?;
            r.result("value", v.describe());
            r.result("invariant factors", factors(&v.invariants()));
            if let Some(m) = v.mu {
                r.result("mu", m);
            }
            r.check(soundness(&e, &n, &alg)?);
            Ok(r)
        }
        FunctorCmd::Coker { expr, algebra: spec } => {
            let (base, e) = load_expr(expr)?;
            let mut echo = format!("functor coker --expr {}", expr.display());
            if let Some(s) = spec {
                echo += &format!(" --algebra {s}");
            }
            let mut r = Report::new(&echo).input("expr", expr.display().to_string());
            let FunctorExpr::CokernelOfMorphism { source, target, sigma } = &e else {
                bail!(modcoh::Error::Invalid(format!("the root node is {}, not CokernelOfMorphism", e.kind())));
            };
            let (ns, nt) = (normalize(source)?, normalize(target)?);
            let sq = MorphismSquare::new(&ns.presentation, &nt.presentation, sigma.phi.clone(), sigma.psi.clone())?;
            let ck = cokernel_of_morphism(&sq)?;
            r.result("source", shape(&ns.presentation));
            r.result("target", shape(&nt.presentation));
            r.result("cokernel", shape(&ck.presentation));
            r.result("linear cover", format!("{} variables, {} relations", ck.linear.n, ck.linear.k));
            if let Some(s) = spec {
                r = r.input("algebra", s.clone());
                let alg = algebra(s, &base)?;
                let v = eval(&ck.presentation, &alg)?;
                r.result("value", v.describe());
                r.result("invariant factors", factors(&v.invariants()));
                r.check(soundness(&e, &normalize(&e)?, &alg)?);
            }
            Ok(r)
        }
        FunctorCmd::Hom { source, target, algebra: spec } => {
            let ((b1, f), (b2, g)) = (load_expr(source)?, load_expr(target)?);
            if b1 != b2 {
                bail!(modcoh::Error::Invalid(format!("bases differ: {b1} and {b2}")));
            }
            let mut r = Report::new(&format!("functor hom --source {} --target {} --algebra {spec}", source.display(), target.display()))
                .input("source", source.display().to_string())
                .input("target", target.display().to_string())
                .input("algebra", spec.clone());
            let alg = algebra(spec, &b1)?;
            let h = hom_functor(&normalize(&f)?.presentation, &normalize(&g)?.presentation)?;
            let v = h.eval(&alg)?;
            r.result("value", v.describe());
            r.result("invariant factors", factors(&v.invariants()));
            Ok(r)
        }
        FunctorCmd::Profile { expr, nmax } => {
            let (_, e) = load_expr(expr)?;
            let mut r = Report::new(&format!("functor profile --expr {} --nmax {nmax}", expr.display()))
                .input("expr", expr.display().to_string())
                .input("nmax", *nmax);
            let p = mu_growth_profile(&normalize(&e)?.presentation, *nmax)?;
            r.result("d", p.d);
            r.result("mu", strings(p.mu.iter().map(|m| m.to_string())));
            r.result("c", p.c.to_string());
            r.result("flagged", p.flagged);
            Ok(r)
        }
    }
}

fn ring_echo(a: &WittRingArgs) -> String {
    format!("--p {} --n {} --ring {}", a.p, a.n, a.ring)
}

fn components<C: Coeff>(w: &WittRing<C>, text: &str, parse: &dyn Fn(&str) -> modcoh::Result<C::Elem>) -> Result<modcoh::witt::WittVector<C::Elem>> {
    let comps = text.split(',').map(|s| parse(s.trim())).collect::<modcoh::Result<Vec<_>>>()?;
    Ok(w.vector(comps)?)
}

enum Op<'a> {
    Add(&'a WittBinary),
    Mul(&'a WittBinary),
    Inv(&'a str),
}

fn witt_op<C: Coeff>(coeff: C, a: &WittRingArgs, op: &Op, parse: &dyn Fn(&str) -> modcoh::Result<C::Elem>, r: &mut Report) -> Result<()> {
    let w = WittRing::new(coeff, witt_laws(a.p, a.n)?);
    match op {
        Op::Add(b) | Op::Mul(b) => {
            let (x, y) = (components(&w, &b.x, parse)?, components(&w, &b.y, parse)?);
            let add = matches!(op, Op::Add(_));
            let z = if add { w.add(&x, &y) } else { w.mul(&x, &y) };
            r.result("x", w.render(&x));
            r.result("y", w.render(&y));
            r.result(if add { "x+y" } else { "x*y" }, w.render(&z));
            // ghost components are additive and multiplicative
            let ok = (0..w.n()).all(|i| {
                let (gx, gy, gz) = (w.ghost(&x, i), w.ghost(&y, i), w.ghost(&z, i));
                gz == if add { w.coeff.add(&gx, &gy) } else { w.coeff.mul(&gx, &gy) }
            });
            r.check(check("ghost components", ok, if ok { "agree" } else { "differ" }));
        }
        Op::Inv(text) => {
            let x = components(&w, text, parse)?;
            r.result("x", w.render(&x));
            match w.unit_inverse(&x)? {
                Some(v) => {
                    r.result("inverse", w.render(&v));
                    let ok = w.mul(&x, &v) == w.one();
                    r.check(check("x * inverse", ok, if ok { "1" } else { "not 1" }));
                }
                None => r.result("inverse", "none (x_0 is not a unit)"),
            }
        }
    }
    Ok(())
}

fn witt_arith(a: &WittRingArgs, op: Op, name: &str, args: &str) -> Result<Report> {
    let mut r = Report::new(&format!("witt {name} {} {args}", ring_echo(a))).input("p", a.p).input("n", a.n).input("ring", a.ring.clone());
    match parse_ring(&a.ring) {
        Ok(b) => {
            let parse = |s: &str| b.parse_element(s);
            witt_op(b.clone(), a, &op, &parse, &mut r)?
        }
        Err(_) => {
            let b = parse_algebra(&a.ring)?;
            let parse = |s: &str| b.parse_element(s);
            witt_op(b.clone(), a, &op, &parse, &mut r)?
        }
    }
    Ok(r)
}

fn witt(c: &WittCmd) -> Result<Report> {
    match c {
        WittCmd::Laws { p, n } => {
            let mut r = Report::new(&format!("witt laws --p {p} --n {n}")).input("p", *p).input("n", *n);
            let law = witt_laws(*p, *n)?;
            let names = law.names();
            r.result("S", strings(law.sum.iter().enumerate().map(|(i, q)| format!("S{i} = {}", q.render(&names)))));
            r.result("P", strings(law.product.iter().enumerate().map(|(i, q)| format!("P{i} = {}", q.render(&names)))));
            r.result("N", strings(law.negation.iter().enumerate().map(|(i, q)| format!("N{i} = {}", q.render(&names)))));
            let g = verify_ghost(&law);
            let fails: Vec<String> = g.failures.iter().map(|f| format!("{} component {}", f.law, f.component)).collect();
            let value = if g.passed() { format!("{} identities", g.checked) } else { format!("fails: {}", fails.join(", ")) };
            r.check(check("ghost identities", g.passed(), value));
            Ok(r)
        }
        WittCmd::Add(b) => witt_arith(&b.ring, Op::Add(b), "add", &format!("--x {} --y {}", b.x, b.y)),
        WittCmd::Mul(b) => witt_arith(&b.ring, Op::Mul(b), "mul", &format!("--x {} --y {}", b.x, b.y)),
        WittCmd::Inv(u) => witt_arith(&u.ring, Op::Inv(&u.x), "inv", &format!("--x {}", u.x)),
        WittCmd::Eta { p, n, k, window } => {
            let mut r = Report::new(&format!("witt eta --p {p} --n {n} --k {k} --window {window}"))
                .input("p", *p)
                .input("n", *n)
                .input("k", *k)
                .input("window", *window);
            let e = verify_eta(*p, *n, *k, *window)?;
            r.result("window size", e.window);
            r.result("pairs", e.pairs);
            r.result("generators", strings(e.generators.clone()));
            if !e.missing.is_empty() {
                r.result("missing", strings(e.missing.clone()));
            }
            if !e.excess.is_empty() {
                r.result("excess", strings(e.excess.clone()));
            }
            let hom = if e.hom_failures.is_empty() { "holds".to_string() } else { e.hom_failures.join("; ") };
            r.check(check("homomorphism", e.homomorphism(), hom));
            r.check(check("injective", e.injective, if e.injective { "holds" } else { "fails" }));
            let gen = format!("{} missing, {} excess", e.missing.len(), e.excess.len());
            r.check(check("generation", e.generation(), gen));
            Ok(r)
        }
    }
}

fn cex(c: &CexCmd) -> Result<Report> {
    match c {
        CexCmd::Cohen { k, p } => {
            let mut r = Report::new(&format!("cex cohen --k {k} --p {p}")).input("k", *k).input("p", *p);
            let h = cohen_h1(*k, *p)?;
            r.result("dim", h.dim);
            r.result("listed generators", h.mu_generators);
            r.check(compare("mu", h.mu_direct, &h.mu_formula));
            r.check(compare("listed", h.mu_generators, &h.mu_formula));
            r.check(check("generators annihilate", h.generators_annihilate, h.generators_annihilate.to_string()));
            r.check(check("generators independent", h.generators_independent, h.generators_independent.to_string()));
            Ok(r)
        }
        CexCmd::Ann { k, p, bound } => {
            let bound = bound.unwrap_or(2 * k);
            let mut r = Report::new(&format!("cex ann --k {k} --p {p} --bound {bound}")).input("k", *k).input("p", *p).input("bound", bound);
            let a = ann_lemma_check(*k, *p, bound)?;
            r.result("generators", strings(a.generators.clone()));
            r.result("blocks", a.blocks);
            if let Some(w) = &a.witness {
                r.result("witness", format!("u={} v={} degree {}: annihilator {} vs generated {}", w.u, w.v, w.degree, w.annihilator_dim, w.generated_dim));
            }
            r.check(check("contained", a.contained, a.contained.to_string()));
            r.check(check("equal", a.equal, a.equal.to_string()));
            Ok(r)
        }
        CexCmd::Tensor { n, p } => {
            let mut r = Report::new(&format!("cex tensor --n {n} --p {p}")).input("n", *n).input("p", *p);
            let t = tensor_mc_mu(*n, *p)?;
            r.check(compare("mu", t.mu, &t.expected));
            r.check(compare("mu_product", t.mu_product, &t.expected));
            r.check(compare("mu_dense", t.mu_dense, &t.expected));
            Ok(r)
        }
        CexCmd::Growth { source, p, nmax, d } => {
            let mut r = Report::new(&format!("cex growth --source {source} --p {p} --nmax {nmax} --d {d}"))
                .input("source", source.clone())
                .input("p", *p)
                .input("nmax", *nmax)
                .input("d", *d);
            let src = match source.as_str() {
                "cohen" => GrowthSource::Cohen { p: *p },
                "tensor" => GrowthSource::Tensor { p: *p },
                path => {
                    let (_, e) = load_expr(Path::new(path))?;
                    GrowthSource::Library { name: path.into(), functor: normalize(&e)?.presentation }
                }
            };
            let g = growth_report(&src, *nmax, *d)?;
            r.result("mu", strings(g.mu.iter().map(|m| m.to_string())));
            r.result("fits", strings(g.fits.iter().map(|f| format!("mu_n <= {} n^{}", f.c, f.exponent))));
            r.result("flagged", g.flagged);
            Ok(r)
        }
    }
}
