//! Executes a [`RunConfig`]: ensembles, exact references, sweeps and noise
//! record/replay, producing one merged time series.

use crate::analysis::{equilibration, EquilibrationReport};
use crate::classical::run_classical_langevin;
use crate::config::{Mode, RunConfig};
use crate::ensemble::{initial_spinor, run_ensemble, EnsembleSpec, TlsInitial};
use crate::error::{Error, Result};
use crate::grid::{build_grid, gaussian_state_with_threshold, run_quantum_langevin};
use crate::noise::NoiseDump;
use crate::series::TimeSeries;
use crate::two_level::{propagate_lindblad_strided, sse_trajectory};

/// Result of a run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: TimeSeries,
    /// Equilibration check of every total-energy channel.
    pub equilibration: Vec<(String, EquilibrationReport)>,
}

impl RunOutput {
    /// A trajectory left its grid and the series stops early.
    pub fn truncated(&self) -> bool {
        self.series.truncated
    }
}

/// Runs a configuration, including its sweep if it has one.
pub fn run_config(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    if let Some(path) = &cfg.run.noise_record {
        record_noise(cfg)?.write(path)?;
    }
    let series = match &cfg.sweep {
        None => run_one(cfg)?,
        Some(sweep) => {
            let short = sweep.key.rsplit('.').next().unwrap_or(&sweep.key);
            let mut parts = Vec::with_capacity(sweep.values.len());
            for &v in &sweep.values {
                let sub = cfg.with_value(&sweep.key, v)?;
                parts.push(run_one(&sub)?.prefixed(&format!("{short}{v}_")));
            }
            merge_truncating(parts)?
        }
    };
    let equilibration = series
        .channel_names()
        .filter(|n| *n == "etot" || n.ends_with("_etot"))
        .filter_map(|n| equilibration(&series, n).map(|r| (n.to_string(), r)))
        .collect();
    Ok(RunOutput { series, equilibration })
}

/// Variates consumed by trajectory 0 of a stochastic run.
fn record_noise(cfg: &RunConfig) -> Result<NoiseDump> {
    let steps = (cfg.run.t_final / cfg.run.dt).round() as usize;
    Ok(NoiseDump::record(cfg.run.seed, 0, steps))
}

/// Merges series after cutting them to the shortest one.
fn merge_truncating(parts: Vec<TimeSeries>) -> Result<TimeSeries> {
    let len = parts.iter().map(TimeSeries::len).min().unwrap_or(0);
    let mut iter = parts.into_iter();
    let mut out = iter.next().ok_or_else(|| Error::Shape("nothing to merge".into()))?;
    let shortened = |s: &TimeSeries| s.len() > len;
    out.truncated |= shortened(&out);
    out.truncate(len);
    for mut s in iter {
        s.truncated |= shortened(&s);
        s.truncate(len);
        out.merge(s)?;
    }
    Ok(out)
}

fn run_one(cfg: &RunConfig) -> Result<TimeSeries> {
    match cfg.mode {
        Mode::TlsExact => exact(cfg),
        Mode::TlsSse => sse(cfg),
        Mode::Tls => merge_truncating(vec![exact(cfg)?.prefixed("exact_"), sse(cfg)?.prefixed("sse_")]),
        Mode::Grid => quantum(cfg),
        Mode::Classical => classical(cfg),
        Mode::GridClassical => merge_truncating(vec![
            quantum(cfg)?.prefixed("quantum_"),
            classical(cfg)?.prefixed("classical_"),
        ]),
    }
}

fn ensemble(cfg: &RunConfig, job: crate::ensemble::Job) -> Result<TimeSeries> {
    run_ensemble(&EnsembleSpec::new(job, cfg.run.trajectories, cfg.run.seed).with_workers(cfg.run.workers))
}

/// Single replayed trajectory, with zero standard errors so its layout
/// matches a one-trajectory ensemble.
fn replayed(mut series: TimeSeries) -> TimeSeries {
    for c in &mut series.channels {
        c.stderr = Some(vec![0.0; c.values.len()]);
    }
    series
}

fn exact(cfg: &RunConfig) -> Result<TimeSeries> {
    let params = cfg.tls_params()?;
    let rho0 = match cfg.tls.initial {
        TlsInitial::Pure(psi) => psi.projector(),
        TlsInitial::Mixed(m) => m.density_matrix(),
    };
    let h = cfg.tls.exact_dt.unwrap_or(cfg.run.dt);
    let stride = (cfg.run.dt / h).round().max(1.0) as usize;
    Ok(propagate_lindblad_strided(&rho0, &params, h, cfg.run.t_final, cfg.run.method, stride)?.to_series())
}

fn sse(cfg: &RunConfig) -> Result<TimeSeries> {
    match &cfg.run.noise_replay {
        None => ensemble(cfg, cfg.tls_sse_job()?),
        Some(path) => {
            let dump = NoiseDump::read(path)?;
            let psi0 = initial_spinor(&cfg.tls.initial, dump.seed, dump.stream);
            let s = sse_trajectory(psi0, &cfg.tls_params()?, cfg.run.dt, cfg.run.t_final, &mut dump.replay())?;
            Ok(replayed(s))
        }
    }
}

fn quantum(cfg: &RunConfig) -> Result<TimeSeries> {
    match &cfg.run.noise_replay {
        None => ensemble(cfg, cfg.grid_job()?),
        Some(path) => {
            let dump = NoiseDump::read(path)?;
            let params = cfg.langevin_params()?;
            let g = build_grid(cfg.grid.qmin, cfg.grid.qmax, cfg.grid.ng)?;
            let l = &cfg.langevin;
            let psi0 = gaussian_state_with_threshold(&g, l.q0, l.sigma0, params.spill_threshold)?.boosted(l.p0);
            Ok(replayed(run_quantum_langevin(&params, &psi0, &mut dump.replay())?))
        }
    }
}

fn classical(cfg: &RunConfig) -> Result<TimeSeries> {
    match &cfg.run.noise_replay {
        None => ensemble(cfg, cfg.classical_job()?),
        Some(path) => {
            let dump = NoiseDump::read(path)?;
            let params = cfg.langevin_params()?;
            let s = run_classical_langevin(&params, cfg.langevin.q0, cfg.langevin.v0, &mut dump.replay())?;
            Ok(replayed(s))
        }
    }
}
