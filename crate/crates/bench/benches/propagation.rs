use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qlangevin_core::ensemble::{run_ensemble, EnsembleSpec, GridSpec, Job, TlsInitial};
use qlangevin_core::grid::{build_grid, gaussian_state, ChebyshevPropagator, LangevinParams, Potential, QuantumLangevin};
use qlangevin_core::two_level::{sse_step, Coupling, TlsParams};
use qlangevin_core::Spinor;

fn chebyshev(c: &mut Criterion) {
    let grid = build_grid(-5.0, 5.0, 56).unwrap();
    let state = gaussian_state(&grid, 1.0, 1.0).unwrap();
    let potential: Vec<f64> = grid.q_values().iter().map(|q| 0.5 * q * q).collect();
    let mut prop = ChebyshevPropagator::new(&grid, 1.0).unwrap();
    c.bench_function("chebyshev_step ng=56 dt=0.01", |b| {
        let mut psi = state.psi.clone();
        b.iter(|| prop.step(black_box(&mut psi), &potential, 0.01).unwrap())
    });
}

fn langevin(c: &mut Criterion) {
    let grid = build_grid(-5.0, 5.0, 56).unwrap();
    let params = LangevinParams::new(1.0, 0.1, 0.1, 0.01, 100.0, Potential::Harmonic { k: 1.0 }).unwrap();
    let mut traj = QuantumLangevin::new(params, gaussian_state(&grid, 1.0, 1.0).unwrap()).unwrap();
    c.bench_function("quantum langevin step with observables", |b| {
        b.iter(|| {
            let obs = traj.observables().unwrap();
            traj.step_with(obs.p, 0.0).unwrap();
            black_box(obs)
        })
    });
}

fn sse(c: &mut Criterion) {
    let params = TlsParams::new(0.2, 0.2, 0.1, Coupling::SigmaZ).unwrap();
    c.bench_function("sse_step", |b| {
        let mut psi = Spinor::upper();
        b.iter(|| psi = sse_step(black_box(psi), &params, 0.01, 0.3))
    });
}

fn ensemble(c: &mut Criterion) {
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(10);
    let params = LangevinParams::new(1.0, 0.1, 0.1, 0.01, 1.0, Potential::Harmonic { k: 1.0 }).unwrap();
    let grid_job = Job::GridLangevin {
        params,
        grid: GridSpec::default(),
        q0: 1.0,
        sigma0: 1.0,
        p0: 0.0,
    };
    group.bench_function("grid 16 trajectories t=1", |b| {
        b.iter(|| run_ensemble(&EnsembleSpec::new(grid_job, 16, 1)).unwrap())
    });
    let tls_job = Job::TlsSse {
        params: TlsParams::new(0.2, 0.2, 0.1, Coupling::SigmaZ).unwrap(),
        initial: TlsInitial::Pure(Spinor::upper()),
        dt: 0.01,
        t_final: 10.0,
    };
    group.bench_function("tls-sse 100 trajectories t=10", |b| {
        b.iter(|| run_ensemble(&EnsembleSpec::new(tls_job, 100, 1)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, chebyshev, langevin, sse, ensemble);
criterion_main!(benches);
