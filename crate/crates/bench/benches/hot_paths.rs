//! Hot-path benchmarks at rank 2 (16-dimensional double): row reduction,
//! subspace intersection, bracket evaluation, and a full corank report.

use criterion::{criterion_group, criterion_main, Criterion};

use maninlab_core::poisson::{self, PointSpec};
use maninlab_core::sample::{sample_group_element, Sampler};
use maninlab_core::suite::standard_system;
use maninlab_core::{Double, GroupElement, Rat, RootDatum, Subspace, Variant};

fn fixture() -> (Double, Vec<Vec<Rat>>) {
    let dbl = Double::new(RootDatum::type_a(2).expect("rank 2"));
    let mut sampler = Sampler::new(42);
    let rows: Vec<Vec<Rat>> =
        (0..dbl.dim()).map(|_| sampler.small_vector(dbl.dim(), 5)).collect();
    (dbl, rows)
}

fn bench_row_reduction(c: &mut Criterion) {
    let (dbl, rows) = fixture();
    c.bench_function("row_reduce_16x16", |b| {
        b.iter(|| Subspace::from_rows(dbl.dim(), rows.clone()).dim())
    });
}

fn bench_intersection(c: &mut Criterion) {
    let (dbl, rows) = fixture();
    let a = Subspace::from_rows(dbl.dim(), rows[..10].to_vec());
    let bspace = Subspace::from_rows(dbl.dim(), rows[4..14].to_vec());
    c.bench_function("subspace_intersect_16d", |b| b.iter(|| a.intersect(&bspace).dim()));
}

fn bench_bracket(c: &mut Criterion) {
    let (dbl, rows) = fixture();
    let alg = dbl.algebra();
    c.bench_function("bracket_16d", |b| b.iter(|| alg.bracket(&rows[0], &rows[1])));
}

fn bench_corank_report(c: &mut Criterion) {
    let dbl = Double::new(RootDatum::type_a(2).expect("rank 2"));
    let (system, base) = standard_system(&dbl).expect("standard system");
    let split = dbl.build_splitting(&system).expect("splitting");
    let r = poisson::r_matrix(&dbl, &split.u.space, &split.u_prime.space).expect("r-matrix");
    let q = dbl.lagrangian_subalg(&base, Variant::Plain).expect("stabilizer").space;
    let mut sampler = Sampler::new(7);
    let g = GroupElement::pair(
        &sample_group_element(dbl.datum(), &mut sampler, 3),
        &sample_group_element(dbl.datum(), &mut sampler, 3),
    );
    let pt = PointSpec::new(&dbl, q, g, "bench point").expect("point");
    c.bench_function("rank_report_a2", |b| {
        b.iter(|| {
            poisson::rank_report(&dbl, &split.u.space, &split.u_prime.space, &r, &pt)
                .expect("report")
                .agree
        })
    });
}

criterion_group!(
    benches,
    bench_row_reduction,
    bench_intersection,
    bench_bracket,
    bench_corank_report
);
criterion_main!(benches);
