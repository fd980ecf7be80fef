//! Ensembles of independent stochastic trajectories with a deterministic,
//! schedule-independent reduction.
//!
//! Trajectory `i` draws its noise from stream `(base_seed, i)`. Results are
//! combined by a fixed-shape pairwise tree over ascending trajectory indices,
//! merging running means and squared deviations, so the output is
//! bit-identical for any number of worker threads.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::classical::run_classical_langevin_until;
use crate::error::{Error, Result};
use crate::grid::{build_grid, gaussian_state_with_threshold, run_quantum_langevin_until, GridState, LangevinParams};
use crate::noise::NoiseStream;
use crate::series::TimeSeries;
use crate::two_level::{sample_mixed_initial, sse_trajectory, MixedInitial, TlsParams};
use crate::types::{DensityMatrix2, Spinor};

/// Mixed into the base seed for the stream that samples mixed initial states,
/// keeping it apart from the per-trajectory noise streams.
const INITIAL_STATE_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Initial state of a two-level trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TlsInitial {
    Pure(Spinor),
    /// Each trajectory starts in one of the two mixture components, drawn
    /// with the mixture weights.
    Mixed(MixedInitial),
}

/// Grid bounds and size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub qmin: f64,
    pub qmax: f64,
    pub ng: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            qmin: -5.0,
            qmax: 5.0,
            ng: 56,
        }
    }
}

/// What each trajectory of an ensemble runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Job {
    TlsSse {
        params: TlsParams,
        initial: TlsInitial,
        dt: f64,
        t_final: f64,
    },
    /// Gaussian start `ψ ∝ exp(−(q − q0)²/2σ₀²)·e^{i p0 q}`.
    GridLangevin {
        params: LangevinParams,
        grid: GridSpec,
        q0: f64,
        sigma0: f64,
        p0: f64,
    },
    ClassicalLangevin {
        params: LangevinParams,
        r0: f64,
        v0: f64,
    },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::TlsSse { .. } => "tls-sse",
            Job::GridLangevin { .. } => "grid-langevin",
            Job::ClassicalLangevin { .. } => "classical-langevin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub job: Job,
    pub trajectories: usize,
    pub base_seed: u64,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
}

impl EnsembleSpec {
    pub fn new(job: Job, trajectories: usize, base_seed: u64) -> Self {
        EnsembleSpec {
            job,
            trajectories,
            base_seed,
            workers: 0,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// Validated, shared per-run data.
enum Prepared {
    Tls {
        params: TlsParams,
        initial: TlsInitial,
        dt: f64,
        t_final: f64,
    },
    Grid {
        params: LangevinParams,
        psi0: GridState,
    },
    Classical {
        params: LangevinParams,
        r0: f64,
        v0: f64,
    },
}

fn prepare(job: &Job) -> Result<Prepared> {
    Ok(match *job {
        Job::TlsSse {
            params,
            initial,
            dt,
            t_final,
        } => {
            params.validate()?;
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::param("run.dt", format!("must be > 0, got {dt}")));
            }
            if !(t_final >= 0.0 && t_final.is_finite()) {
                return Err(Error::param("run.t_final", format!("must be >= 0, got {t_final}")));
            }
            match initial {
                TlsInitial::Pure(psi) => {
                    if (psi.norm_sqr() - 1.0).abs() > 1e-10 {
                        return Err(Error::param("tls.psi0", "initial spinor must be normalized"));
                    }
                }
                TlsInitial::Mixed(m) => m.validate()?,
            }
            Prepared::Tls {
                params,
                initial,
                dt,
                t_final,
            }
        }
        Job::GridLangevin {
            params,
            grid,
            q0,
            sigma0,
            p0,
        } => {
            params.validate()?;
            let g = build_grid(grid.qmin, grid.qmax, grid.ng)?;
            let psi0 = gaussian_state_with_threshold(&g, q0, sigma0, params.spill_threshold)?.boosted(p0);
            Prepared::Grid { params, psi0 }
        }
        Job::ClassicalLangevin { params, r0, v0 } => {
            params.validate()?;
            if !(r0.is_finite() && v0.is_finite()) {
                return Err(Error::param("langevin.q0/v0", "must be finite"));
            }
            Prepared::Classical { params, r0, v0 }
        }
    })
}

impl Prepared {
    fn run(&self, base_seed: u64, index: u64, limit: &dyn Fn() -> usize) -> Result<TimeSeries> {
        let mut noise = NoiseStream::new(base_seed, index);
        match self {
            Prepared::Tls {
                params,
                initial,
                dt,
                t_final,
            } => {
                let psi0 = initial_spinor(initial, base_seed, index);
                sse_trajectory(psi0, params, *dt, *t_final, &mut noise)
            }
            Prepared::Grid { params, psi0 } => run_quantum_langevin_until(params, psi0, &mut noise, limit),
            Prepared::Classical { params, r0, v0 } => {
                run_classical_langevin_until(params, *r0, *v0, &mut noise, limit)
            }
        }
    }
}

/// Starting spinor of two-level trajectory `index`.
pub fn initial_spinor(initial: &TlsInitial, base_seed: u64, index: u64) -> Spinor {
    match initial {
        TlsInitial::Pure(psi) => *psi,
        TlsInitial::Mixed(m) => {
            let mut pick = NoiseStream::new(base_seed ^ INITIAL_STATE_SALT, index);
            sample_mixed_initial(m, &mut pick)
        }
    }
}

/// Runs trajectory `index` of `spec` on its own, exactly as inside the ensemble.
pub fn run_single(spec: &EnsembleSpec, index: u64) -> Result<TimeSeries> {
    prepare(&spec.job)?.run(spec.base_seed, index, &|| usize::MAX)
}

/// Running count, mean and summed squared deviation per channel.
#[derive(Debug, Clone)]
struct Moments {
    n: u64,
    dt: f64,
    len: usize,
    truncated: bool,
    names: Vec<String>,
    mean: Vec<Vec<f64>>,
    m2: Vec<Vec<f64>>,
}

impl Moments {
    fn leaf(series: TimeSeries) -> Self {
        let len = series.len();
        let dt = series.dt().unwrap_or(0.0);
        let names = series.channels.iter().map(|c| c.name.clone()).collect();
        let m2 = series.channels.iter().map(|_| vec![0.0; len]).collect();
        Moments {
            n: 1,
            dt,
            len,
            truncated: series.truncated,
            names,
            mean: series.channels.into_iter().map(|c| c.values).collect(),
            m2,
        }
    }

    /// Chan et al. pairwise update; the result keeps the shorter length.
    fn merge(mut self, mut other: Moments) -> Moments {
        let len = self.len.min(other.len);
        for v in self.mean.iter_mut().chain(self.m2.iter_mut()) {
            v.truncate(len);
        }
        for v in other.mean.iter_mut().chain(other.m2.iter_mut()) {
            v.truncate(len);
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        for c in 0..self.mean.len() {
            let (ma, m2a) = (&mut self.mean[c], &mut self.m2[c]);
            for i in 0..len {
                let delta = other.mean[c][i] - ma[i];
                ma[i] += delta * nb / n;
                m2a[i] += other.m2[c][i] + delta * delta * na * nb / n;
            }
        }
        self.n += other.n;
        self.len = len;
        self.truncated |= other.truncated;
        self
    }

    fn into_series(self) -> Result<TimeSeries> {
        let mut s = TimeSeries::uniform(self.dt, self.len);
        let n = self.n as f64;
        for ((name, mean), m2) in self.names.into_iter().zip(self.mean).zip(self.m2) {
            let stderr = if self.n > 1 {
                m2.iter().map(|v| (v / (n - 1.0)).sqrt() / n.sqrt()).collect()
            } else {
                vec![0.0; self.len]
            };
            s.push_channel_with_stderr(name, mean, Some(stderr))?;
        }
        s.truncated = self.truncated;
        Ok(s)
    }
}

/// Runs all trajectories and returns per-channel means with standard errors.
///
/// If any trajectory aborts (a grid spill), the result is truncated at the
/// earliest abort and flagged; trajectories still running stop at that point.
pub fn run_ensemble(spec: &EnsembleSpec) -> Result<TimeSeries> {
    if spec.trajectories == 0 {
        return Err(Error::param("run.trajectories", "must be >= 1"));
    }
    let prepared = prepare(&spec.job)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::InvalidState(format!("cannot start worker pool: {e}")))?;
    let horizon = AtomicUsize::new(usize::MAX);
    let ctx = Ctx {
        prepared: &prepared,
        base_seed: spec.base_seed,
        horizon: &horizon,
    };
    let moments = pool.install(|| ctx.reduce(0, spec.trajectories as u64))?;
    moments.into_series()
}

struct Ctx<'a> {
    prepared: &'a Prepared,
    base_seed: u64,
    horizon: &'a AtomicUsize,
}

impl Ctx<'_> {
    fn reduce(&self, lo: u64, hi: u64) -> Result<Moments> {
        if hi - lo == 1 {
            let limit = || self.horizon.load(Ordering::Relaxed);
            let series = self.prepared.run(self.base_seed, lo, &limit)?;
            if series.truncated {
                // Steps completed before the abort; others need not go further.
                self.horizon
                    .fetch_min(series.len().saturating_sub(1), Ordering::Relaxed);
            }
            return Ok(Moments::leaf(series));
        }
        let mid = lo + (hi - lo) / 2;
        let (a, b) = rayon::join(|| self.reduce(lo, mid), || self.reduce(mid, hi));
        Ok(a?.merge(b?))
    }
}

/// Entrywise average of the projectors `|ψ⟩⟨ψ|` of several trajectories.
pub fn average_projectors(trajectories: &[Vec<Spinor>]) -> Result<Vec<DensityMatrix2>> {
    let first = trajectories
        .first()
        .ok_or_else(|| Error::Shape("no trajectories to average".into()))?;
    if let Some(bad) = trajectories.iter().find(|t| t.len() != first.len()) {
        return Err(Error::Shape(format!(
            "trajectory lengths differ: {} vs {}",
            first.len(),
            bad.len()
        )));
    }
    let w = 1.0 / trajectories.len() as f64;
    Ok((0..first.len())
        .map(|i| {
            let sum = trajectories
                .iter()
                .fold(crate::types::Op2::zero(), |acc, t| acc + t[i].projector().op());
            DensityMatrix2(sum.scale_re(w))
        })
        .collect())
}

/// Density matrices from the `rho00`, `rho11`, `re_rho01`, `im_rho01`
/// channels of a (usually averaged) two-level series.
pub fn density_matrices(series: &TimeSeries) -> Result<Vec<DensityMatrix2>> {
    let get = |name: &str| {
        series
            .channel(name)
            .ok_or_else(|| Error::Shape(format!("series has no `{name}` channel")))
    };
    let (r00, r11, re, im) = (get("rho00")?, get("rho11")?, get("re_rho01")?, get("im_rho01")?);
    Ok((0..series.len())
        .map(|i| {
            use num_complex::Complex64 as c64;
            let r01 = c64::new(re[i], im[i]);
            DensityMatrix2::from_entries(c64::new(r00[i], 0.0), r01, r01.conj(), c64::new(r11[i], 0.0))
        })
        .collect())
}
