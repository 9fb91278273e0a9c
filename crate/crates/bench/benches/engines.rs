use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use modcoh::counterexamples::{ann_lemma_check, cohen_h1, tensor_mc_mu};
use modcoh::functor::random::battery;
use modcoh::functor::{eval, normalize};
use modcoh::picard::{conductor_chain, parse_subring, reproduce_table};
use modcoh::witt::{verify_eta, verify_ghost, WittLaw};
use modcoh_bench::trees;

fn picard(c: &mut Criterion) {
    c.bench_function("pic table", |b| b.iter(|| reproduce_table(black_box(&[2, 3, 5])).unwrap()));
    let a = parse_subring("F2[t^3,t^5,t^7]").unwrap();
    c.bench_function("chain F2[t^3,t^5,t^7]", |b| b.iter(|| conductor_chain(black_box(&a)).unwrap()));
}

fn counterexamples(c: &mut Criterion) {
    let mut g = c.benchmark_group("cex");
    g.sample_size(10);
    for k in [6, 8, 10] {
        g.bench_with_input(BenchmarkId::new("cohen", k), &k, |b, &k| b.iter(|| cohen_h1(k, 2).unwrap()));
    }
    for n in [4, 6] {
        g.bench_with_input(BenchmarkId::new("tensor", n), &n, |b, &n| b.iter(|| tensor_mc_mu(n, 3).unwrap()));
    }
    g.bench_function("ann k=4", |b| b.iter(|| ann_lemma_check(4, 3, 8).unwrap()));
    g.finish();
}

fn witt(c: &mut Criterion) {
    let mut g = c.benchmark_group("witt");
    g.sample_size(10);
    for (p, n) in [(2, 3), (3, 3), (5, 2)] {
        g.bench_with_input(BenchmarkId::new("laws", format!("p{p}n{n}")), &(p, n), |b, &(p, n)| b.iter(|| WittLaw::compute(p, n).unwrap()));
    }
    let law = WittLaw::compute(3, 3).unwrap();
    g.bench_function("ghost p3n3", |b| b.iter(|| verify_ghost(black_box(&law))));
    g.bench_function("eta (2,2,1) window 6", |b| b.iter(|| verify_eta(2, 2, 1, 6).unwrap()));
    g.finish();
}

fn functors(c: &mut Criterion) {
    let ts = trees(7, 8);
    let mut g = c.benchmark_group("functor");
    g.sample_size(20);
    g.bench_function("normalize 8 trees", |b| b.iter(|| ts.iter().map(|(_, e)| normalize(e).unwrap()).count()));
    let normal: Vec<_> = ts.iter().map(|(base, e)| (battery(base), normalize(e).unwrap().presentation)).collect();
    g.bench_function("eval 8 trees on the battery", |b| {
        b.iter(|| {
            for (algs, f) in &normal {
                for a in algs {
                    black_box(eval(f, a).unwrap());
                }
            }
        })
    });
    g.finish();
}

criterion_group!(benches, picard, counterexamples, witt, functors);
criterion_main!(benches);
