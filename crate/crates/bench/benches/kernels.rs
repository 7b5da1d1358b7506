use criterion::{black_box, criterion_group, criterion_main, Criterion};

use tamesign::chidata::{delta_ii, gauss_sum, ChiVariant};
use tamesign::epschar::{eps_x_with, Mode};
use tamesign::hypercoh::{
    default_positive, eval_direct, eval_formula, from_sigma_set, RandomContext,
};
use tamesign::quadspace::random_graded;
use tamesign::FieldDesc;
use tamesign_bench::preset_points;

fn field(c: &mut Criterion) {
    let k = FieldDesc::new(3, 4).unwrap();
    let xs: Vec<_> = k.units().collect();
    c.bench_function("gf81 mul+sgn", |b| {
        b.iter(|| xs.iter().fold(k.one(), |acc, &x| acc * x).sgn().unwrap())
    });
    let k121 = FieldDesc::new(11, 2).unwrap();
    c.bench_function("gauss sum q=121", |b| {
        b.iter(|| gauss_sum(black_box(&k121)))
    });
}

fn hyper(c: &mut Criterion) {
    let rc = RandomContext::generate(5);
    let hc = from_sigma_set(&rc.sigma, &default_positive(&rc.sigma), &rc.chars, &rc.ctx).unwrap();
    let g = {
        use rand::SeedableRng;
        rc.ctx
            .random_point(&mut rand_chacha::ChaCha8Rng::seed_from_u64(5))
    };
    c.bench_function("hypercocycle direct", |b| {
        b.iter(|| eval_direct(&hc, &rc.ctx, &g).unwrap())
    });
    c.bench_function("hypercocycle formula", |b| {
        b.iter(|| eval_formula(&rc.sigma, &rc.chars, &rc.ctx, &g).unwrap())
    });
}

fn spinor(c: &mut Criterion) {
    let (gq, lambdas) = random_graded(17, 6);
    c.bench_function("graded spinor formula", |b| {
        b.iter(|| gq.spinor_formula(&lambdas).unwrap())
    });
    c.bench_function("graded spinor reflections", |b| {
        b.iter(|| gq.spinor_norm(&lambdas).unwrap())
    });
}

fn characters(c: &mut Criterion) {
    let (sc, pts) = preset_points("pgsp4-siegel-mixed", 8);
    for (mode, name) in [
        (Mode::Formula, "eps_x formula"),
        (Mode::Oracle, "eps_x oracle"),
    ] {
        c.bench_function(name, |b| {
            b.iter(|| {
                pts.iter()
                    .map(|g| eps_x_with(&sc, g, mode).unwrap())
                    .product::<i8>()
            })
        });
    }
    c.bench_function("delta_II doubleprime", |b| {
        b.iter(|| {
            pts.iter()
                .filter_map(|g| delta_ii(&sc, ChiVariant::DoublePrime, g).ok())
                .count()
        })
    });
}

criterion_group!(benches, field, hyper, spinor, characters);
criterion_main!(benches);
