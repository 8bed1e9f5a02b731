use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pvtopo::{
    boundary_box, build_ql, default_window, flip_oracle, from_holes, model, reduce, state_space,
    HoleSet, IntBox, OpenBox, PVOperation, PVProcess, ResourceId, SimplicialComplex,
};

fn rp2() -> SimplicialComplex {
    let nonfaces = [
        [1, 2, 3],
        [2, 3, 4],
        [3, 4, 5],
        [4, 5, 1],
        [5, 1, 2],
        [1, 3, 6],
        [2, 4, 6],
        [3, 5, 6],
        [4, 1, 6],
        [5, 2, 6],
    ]
    .map(|t| t.to_vec());
    SimplicialComplex::from_minimal_nonfaces(6, &nonfaces).unwrap()
}

fn state_spaces(c: &mut Criterion) {
    let q = build_ql(&rp2()).unwrap();
    let w = default_window(&q).unwrap();
    c.bench_function("state space of Q(RP2)", |b| {
        b.iter(|| state_space(black_box(&q), &w).unwrap())
    });
}

fn models(c: &mut Criterion) {
    let mut group = c.benchmark_group("model");
    for n in [3usize, 5] {
        let k = boundary_box(n).unwrap();
        group.bench_function(format!("boundary box n={n}"), |b| {
            b.iter(|| model(black_box(&k), &vec![0; n], &vec![2; n]).unwrap())
        });
    }
    let holes = HoleSet::new(
        3,
        vec![
            OpenBox::new(vec![0, 2, 1], vec![3, 3, 3]).unwrap(),
            OpenBox::new(vec![2, 2, 0], vec![3, 3, 3]).unwrap(),
            OpenBox::new(vec![1, 1, 2], vec![2, 2, 3]).unwrap(),
        ],
    )
    .unwrap();
    let k = from_holes(&holes, &IntBox::cube(3, 0, 3).unwrap()).unwrap();
    group.bench_function("three holes in [0,3]^3", |b| {
        b.iter(|| model(black_box(&k), &[0, 0, 0], &[3, 3, 3]).unwrap())
    });
    group.bench_function("oracle, three holes in [0,3]^3", |b| {
        b.iter(|| flip_oracle(black_box(&k), &[0, 0, 0], &[3, 3, 3], 1_000_000).unwrap())
    });
    group.finish();
}

fn normal_forms(c: &mut Criterion) {
    let ops: Vec<PVOperation> = (0..8u32)
        .map(|i| {
            PVOperation::empty()
                .with_acquire(ResourceId(i % 3), 1 + i % 2)
                .with_release(ResourceId((i + 1) % 3), 1)
        })
        .collect();
    let p = PVProcess::new(ops);
    c.bench_function("reduce, 8 operations", |b| b.iter(|| reduce(black_box(&p))));
}

criterion_group!(benches, state_spaces, models, normal_forms);
criterion_main!(benches);
