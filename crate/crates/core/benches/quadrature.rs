//! Sequential against parallel execution of the quadrature hot paths: one
//! torsion solve at interior targets, a node-operator build and a kernel scan.
//! `exec::sequential` pins the pool to one thread; with the `parallel`
//! feature off both variants run the same sequential code.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use fracsys::exec;
use fracsys::geometry::{build_grid, Domain, GridFunction, QuadratureGrid};
use fracsys::kernel::{ratio_scan, Estimate, GreenKernel, ScanOptions};
use fracsys::poisson::Solver;

fn grid(n: usize) -> Arc<QuadratureGrid> {
    Arc::new(build_grid(Domain::disk(), n, 2 * n, 2.0).unwrap())
}

fn torsion_solve(c: &mut Criterion) {
    let solver = Solver::new(0.75, grid(32)).unwrap();
    let h = GridFunction::constant(solver.grid().clone(), 1.0);
    let targets: Vec<_> = (0..32).map(|i| [0.9 * i as f64 / 32.0, 0.1, 0.0]).collect();
    let mut g = c.benchmark_group("torsion_solve_32x64");
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| exec::sequential(|| solver.solve(&h, &targets).unwrap())));
    g.bench_function("parallel", |b| b.iter(|| solver.solve(&h, &targets).unwrap()));
    g.finish();
}

fn node_operator(c: &mut Criterion) {
    let solver = Solver::new(0.9, grid(8)).unwrap();
    let mut g = c.benchmark_group("node_operator_8x16");
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| exec::sequential(|| solver.node_operator(None))));
    g.bench_function("parallel", |b| b.iter(|| solver.node_operator(None)));
    g.finish();
}

fn kernel_scan(c: &mut Criterion) {
    let kernel = GreenKernel::new(0.75, Domain::disk()).unwrap();
    let opts = ScanOptions { samples: 10_000, ..ScanOptions::default() };
    let mut g = c.benchmark_group("kernel_scan_1e4");
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| exec::sequential(|| ratio_scan(&kernel, Estimate::GradBound, &opts).unwrap())));
    g.bench_function("parallel", |b| b.iter(|| ratio_scan(&kernel, Estimate::GradBound, &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, torsion_solve, node_operator, kernel_scan);
criterion_main!(benches);
