use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rug::Float;

use pochzeta_core::coefficients::{binomial_transform, compute_b};
use pochzeta_core::critical::psi2;
use pochzeta_core::data::sieve_primes;
use pochzeta_core::hiprec::{GammaEngine, ZetaEngine};
use pochzeta_core::pochhammer::eval_pochhammer;
use pochzeta_core::{
    CriticalConfig, ExpansionParams, HComplex, PrecisionContext, PrimeLimit,
};

fn zeta(c: &mut Criterion) {
    let ctx = PrecisionContext::new(30, 10).unwrap();
    let engine = ZetaEngine::new(ctx);
    let s = HComplex::from_f64(ctx.bits(), 0.5, 14.134725);
    c.bench_function("eta 1/2+14.13i, 30 digits", |b| b.iter(|| engine.eta(black_box(&s))));
}

fn gamma(c: &mut Criterion) {
    let eng = GammaEngine::new(PrecisionContext::new(30, 10).unwrap().bits());
    let z = HComplex::from_f64(eng.bits(), 1.0, -3.53);
    c.bench_function("ln gamma 1-3.53i, 30 digits", |b| b.iter(|| eng.ln_gamma(black_box(&z))));
}

fn pochhammer(c: &mut Criterion) {
    let ctx = PrecisionContext::new(30, 10).unwrap();
    let s = HComplex::from_f64(ctx.bits(), 0.5, 20.0);
    let mut g = c.benchmark_group("pochhammer");
    for k in [100u64, 10_000, 100_000] {
        g.bench_function(format!("P_{k}(1/2+20i)"), |b| {
            b.iter(|| eval_pochhammer(black_box(&s), k, ctx))
        });
    }
    g.finish();
}

fn transform(c: &mut Criterion) {
    let ctx = PrecisionContext::for_order(30, 200).unwrap();
    let bits = ctx.bits();
    let f: Vec<HComplex> = (0..=200)
        .map(|j| HComplex::from_real(Float::with_val(bits, j + 2).recip()))
        .collect();
    c.bench_function("binomial transform K=200", |b| {
        b.iter(|| binomial_transform(black_box(&f), bits))
    });
    c.bench_function("b_k K=50, alpha=beta=2", |b| {
        b.iter(|| compute_b(&ExpansionParams::riesz(), 50, PrecisionContext::for_order(30, 50).unwrap()))
    });
}

fn critical(c: &mut Criterion) {
    let ctx = PrecisionContext::new(30, 10).unwrap();
    let primes = sieve_primes(PrimeLimit::FirstN(5000)).unwrap();
    let params = ExpansionParams::critical_default();
    let cfg = CriticalConfig::paper();
    let x = Float::with_val(ctx.bits(), 20);
    c.bench_function("psi2 at x=20, 5000 primes", |b| {
        b.iter(|| psi2(black_box(&x), &params, &primes, cfg.q_max, cfg.psi2, ctx))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = zeta, gamma, pochhammer, transform, critical
}
criterion_main!(benches);
