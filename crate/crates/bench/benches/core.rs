use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use vrpf_bench::{cases, pinch_word, words};
use vrpf_core::fixtures;
use vrpf_core::gog::britton_reduce;
use vrpf_core::pfiltration::{build_lambda_oracle, Caps, QuotientGroup};
use vrpf_core::separator::{rewrite_into_cover, separate, setup, verify_certificate, Outcome, SeparateConfig};

fn oracle(c: &mut Criterion) {
    let caps = Caps::default();
    let mut g = c.benchmark_group("oracle");
    for (p, n) in [(2, 3), (2, 4), (3, 3), (3, 4), (5, 3)] {
        g.bench_with_input(BenchmarkId::new("build", format!("p{p}n{n}")), &(p, n), |b, &(p, n)| {
            b.iter(|| build_lambda_oracle(p, 2, n, &caps).unwrap())
        });
    }
    let o = build_lambda_oracle(2, 2, 4, &caps).unwrap();
    let ws = words(2, 24, 256, 1);
    g.bench_function("member/p2n4", |b| {
        b.iter(|| ws.iter().filter(|w| o.member(w, 4).unwrap()).count())
    });
    g.finish();
}

fn quotient(c: &mut Criterion) {
    let caps = Caps::default();
    let mut g = c.benchmark_group("quotient");
    for (p, n) in [(2, 4), (3, 3)] {
        let o = build_lambda_oracle(p, 2, n, &caps).unwrap();
        g.bench_function(format!("p{p}n{n}"), |b| b.iter(|| QuotientGroup::new(&o, n, &caps).unwrap().order()));
    }
    g.finish();
}

fn britton(c: &mut Criterion) {
    let fib = fixtures::FIBONACCI.presentation().unwrap();
    let mut g = c.benchmark_group("britton");
    for k in [8, 64, 256] {
        let w = fib.parse_word(&pinch_word(k)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(k), &w, |b, w| b.iter(|| britton_reduce(black_box(w), &fib)));
    }
    g.finish();
}

fn separation(c: &mut Criterion) {
    let mut g = c.benchmark_group("separate");
    g.sample_size(10);
    for case in cases() {
        for p in [2, 3] {
            let cfg = SeparateConfig::new(p);
            let w = &case.words[0];
            g.bench_function(format!("{}/p{p}", case.name), |b| b.iter(|| separate(&case.presentation, w, &cfg)));
        }
    }
    g.finish();

    let mut g = c.benchmark_group("verify");
    for case in cases() {
        let s = setup(&case.presentation, 2, &Caps::default()).unwrap();
        let Some((w, cert)) = case.words.iter().find_map(|w| match separate(&case.presentation, w, &SeparateConfig::new(2)) {
            Ok(Outcome::Certificate(cert)) => Some((w, cert)),
            _ => None,
        }) else {
            continue;
        };
        let cw = rewrite_into_cover(w, &s.cover).unwrap();
        g.bench_function(case.name, |b| b.iter(|| verify_certificate(&cert, &s.presentation, &cw).ok));
    }
    g.finish();
}

criterion_group!(benches, oracle, quotient, britton, separation);
criterion_main!(benches);
