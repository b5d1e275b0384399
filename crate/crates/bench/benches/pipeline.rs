use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use bmwind::measures::occupation_measure;
use bmwind::winding::winding_field;
use bmwind::{sample_bm, ClosedLoop, GridSpec};

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_bm");
    for levels in [12u32, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(levels), &levels, |b, &l| {
            b.iter(|| sample_bm(black_box(7), l).unwrap())
        });
    }
    g.finish();
}

fn winding(c: &mut Criterion) {
    let mut g = c.benchmark_group("winding_field");
    g.sample_size(10);
    for (levels, res) in [(12u32, 256usize), (16, 1024)] {
        let path = sample_bm(7, levels).unwrap();
        let grid = GridSpec::for_path(&path, res).unwrap();
        let lp = ClosedLoop::from_path(&path);
        g.bench_function(format!("L{levels}_{res}"), |b| {
            b.iter(|| winding_field(&lp, &grid, grid.default_eps()).unwrap())
        });
    }
    g.finish();
}

fn occupation(c: &mut Criterion) {
    let path = sample_bm(7, 16).unwrap();
    let grid = GridSpec::for_path(&path, 512).unwrap();
    c.bench_function("occupation_measure/L16_512", |b| {
        b.iter(|| occupation_measure(&path, &grid).unwrap())
    });
}

criterion_group!(benches, sampling, winding, occupation);
criterion_main!(benches);
