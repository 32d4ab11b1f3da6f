use criterion::{black_box, criterion_group, criterion_main, Criterion};
use kappamu::fading::FadingProfile;
use kappamu::geometry::{build_two_tier_hex, link_budget, place_user};
use kappamu::sir::{interference_cdf, outage_ed, outage_series, rate_shadowed, TermChoice};
use kappamu::SeriesConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn table1_problem(mu: f64) -> kappamu::SirProblem {
    let layout = build_two_tier_hex(1000.0).unwrap();
    let soi = FadingProfile::new(1.5, mu, 10.0, 1.0).unwrap();
    let ints = vec![FadingProfile::new(1.0, 1.0, 10.0, 1.0).unwrap(); 18];
    let link = place_user(&layout, 600.0, 0.0, 3.6).unwrap();
    link_budget(&link, &soi, &ints, 10f64.powf(0.3)).unwrap()
}

fn bench_outage(c: &mut Criterion) {
    let cfg = SeriesConfig::default();
    let problem = table1_problem(1.2);
    c.bench_function("outage_series_n18_p50", |b| {
        b.iter(|| outage_series(black_box(&problem), TermChoice::Fixed(50), &cfg).unwrap())
    });
    c.bench_function("outage_ed_n18_integral", |b| {
        b.iter(|| outage_ed(black_box(&problem), &cfg).unwrap())
    });
    c.bench_function("interference_cdf_n18", |b| {
        b.iter(|| {
            interference_cdf(black_box(&problem.interferers), black_box(3e-11), &cfg).unwrap()
        })
    });
}

fn bench_rate_and_sampling(c: &mut Criterion) {
    let cfg = SeriesConfig::default();
    let problem = table1_problem(2.0);
    c.bench_function("rate_shadowed_n18_p50", |b| {
        b.iter(|| rate_shadowed(black_box(&problem), TermChoice::Fixed(50), &cfg).unwrap())
    });
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    c.bench_function("sample_power_draw", |b| {
        b.iter(|| black_box(problem.soi.sample_power(&mut rng)))
    });
}

criterion_group!(benches, bench_outage, bench_rate_and_sampling);
criterion_main!(benches);
