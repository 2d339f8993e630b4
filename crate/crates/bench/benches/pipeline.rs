use std::hint::black_box;

use bianchi_core::arith::make_ring;
use bianchi_core::homology::equivariant::DoubleComplex;
use bianchi_core::homology::matrix::smith_normal_form;
use bianchi_core::homology::IntMatrix;
use bianchi_core::pipeline::{analyse, compute_complex, Settings};
use bianchi_core::polyhedron::floor_decomposition;
use bianchi_core::torsion::{extract, reduce};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn floor(c: &mut Criterion) {
    let mut g = c.benchmark_group("floor");
    g.sample_size(10);
    for m in [1u64, 2, 7, 19] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| b.iter(|| floor_decomposition(make_ring(m).unwrap(), 4000).unwrap()));
    }
    g.finish();
}

fn complex(c: &mut Criterion) {
    let mut g = c.benchmark_group("orbit_complex");
    g.sample_size(10);
    for m in [1u64, 7, 19] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| b.iter(|| compute_complex(m, 4000).unwrap()));
    }
    g.finish();
}

fn homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("homology");
    g.sample_size(10);
    for m in [1u64, 19, 43] {
        let oc = compute_complex(m, 4000).unwrap();
        g.bench_with_input(BenchmarkId::new("total_complex_q10", m), &oc, |b, oc| {
            b.iter(|| {
                let dc = DoubleComplex::new(oc, 11).unwrap();
                (0..=10).map(|q| dc.total_homology(q).unwrap()).collect::<Vec<_>>()
            })
        });
        let s = Settings { q_max: 10, ..Default::default() };
        g.bench_with_input(BenchmarkId::new("analyse", m), &oc, |b, oc| b.iter(|| analyse(oc, &s).unwrap()));
    }
    g.finish();
}

fn torsion(c: &mut Criterion) {
    let oc = compute_complex(39, 4000).unwrap();
    c.bench_function("torsion_graph_39_l3", |b| b.iter(|| reduce(&extract(black_box(&oc), 3))));
}

fn smith(c: &mut Criterion) {
    // deterministic pseudo-random 30 x 30 matrix
    let mut x: u64 = 0x2545_f491_4f6c_dd1d;
    let rows: Vec<Vec<i64>> = (0..30)
        .map(|_| {
            (0..30)
                .map(|_| {
                    x ^= x << 13;
                    x ^= x >> 7;
                    x ^= x << 17;
                    (x % 11) as i64 - 5
                })
                .collect()
        })
        .collect();
    let a = IntMatrix::from_rows(&rows);
    c.bench_function("smith_30x30", |b| b.iter(|| smith_normal_form(black_box(&a))));
}

criterion_group!(benches, floor, complex, homology, torsion, smith);
criterion_main!(benches);
