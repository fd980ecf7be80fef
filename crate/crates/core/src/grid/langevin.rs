//! Mean-field quantum Langevin dynamics on the grid.
//!
//! Each step propagates with the frozen Hamiltonian
//!
//! ```text
//! H_step = p²/2μ + V(q) + (γ·p_f + σ_F·η/√dt)·q
//! ```
//!
//! where `p_f` is the friction momentum taken from `⟨p⟩` (see [`Friction`])
//! and `η` is one standard-normal draw per step.

use num_complex::Complex64 as c64;

use super::chebyshev::ChebyshevPropagator;
use super::{GridState, Observables, Potential};
use crate::error::{Error, Result};
use crate::noise::NoiseSource;
use crate::series::TimeSeries;

/// Boundary probability above which a trajectory is aborted.
pub const DEFAULT_SPILL_THRESHOLD: f64 = 1e-4;

/// How the friction momentum `p_f` is taken from the `⟨p⟩` history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Friction {
    /// `p_f = ⟨p⟩ₙ`, the value at the start of the step.
    Start,
    /// `p_f = ⟨p⟩ₙ + ½(⟨p⟩ₙ − ⟨p⟩ₙ₋₁)`, extrapolated to the middle of the
    /// step (`⟨p⟩₀` on the first step). Second-order accurate.
    #[default]
    Midpoint,
}

impl Friction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Friction::Start => "start",
            Friction::Midpoint => "midpoint",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "start" => Some(Friction::Start),
            "midpoint" => Some(Friction::Midpoint),
            _ => None,
        }
    }

    /// Friction momentum from the current and previous momentum.
    pub fn momentum(&self, now: f64, previous: Option<f64>) -> f64 {
        match (self, previous) {
            (Friction::Midpoint, Some(prev)) => now + 0.5 * (now - prev),
            _ => now,
        }
    }
}

/// Parameters shared by the quantum and classical Langevin integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangevinParams {
    pub mu: f64,
    pub gamma: f64,
    pub kt: f64,
    /// Replaces the fluctuation-dissipation amplitude when set.
    pub sigma_f_override: Option<f64>,
    pub dt: f64,
    pub t_final: f64,
    pub potential: Potential,
    pub friction: Friction,
    /// Adds the effective bath spring `½·MΩ²·q²` to the potential.
    pub bath_spring: bool,
    pub spill_threshold: f64,
}

impl LangevinParams {
    pub fn new(mu: f64, gamma: f64, kt: f64, dt: f64, t_final: f64, potential: Potential) -> Result<Self> {
        let p = LangevinParams {
            mu,
            gamma,
            kt,
            sigma_f_override: None,
            dt,
            t_final,
            potential,
            friction: Friction::default(),
            bath_spring: false,
            spill_threshold: DEFAULT_SPILL_THRESHOLD,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::param("langevin.mu", format!("must be > 0, got {}", self.mu)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::param("langevin.gamma", format!("must be >= 0, got {}", self.gamma)));
        }
        if !(self.kt >= 0.0 && self.kt.is_finite()) {
            return Err(Error::param("langevin.kT", format!("must be >= 0, got {}", self.kt)));
        }
        if let Some(s) = self.sigma_f_override {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::param("langevin.sigma_F_override", format!("must be >= 0, got {s}")));
            }
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("run.dt", format!("must be > 0, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::param("run.t_final", format!("must be >= 0, got {}", self.t_final)));
        }
        if !(self.spill_threshold > 0.0) {
            return Err(Error::param("langevin.spill_threshold", "must be > 0"));
        }
        self.potential.validate()
    }

    /// Force-fluctuation amplitude σ_F: the override if set, else the
    /// fluctuation-dissipation value.
    pub fn sigma_f(&self) -> f64 {
        self.sigma_f_override
            .unwrap_or_else(|| (2.0 * self.kt * self.mu * self.gamma).sqrt())
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// `MΩ²` of the bath spring when it is switched on, else 0.
    pub fn bath_spring_constant(&self) -> f64 {
        if self.bath_spring {
            self.mu * self.gamma / self.dt
        } else {
            0.0
        }
    }

    /// Potential including the optional bath spring.
    pub fn potential_value(&self, q: f64) -> f64 {
        self.potential.value(q) + 0.5 * self.bath_spring_constant() * q * q
    }

    /// `V'(q)` including the optional bath spring.
    pub fn potential_derivative(&self, q: f64) -> f64 {
        self.potential.derivative(q) + self.bath_spring_constant() * q
    }

    /// Coefficient `c` of the linear step term `c·q`: friction plus noise.
    pub fn linear_coefficient(&self, p_friction: f64, eta: f64) -> f64 {
        self.gamma * p_friction + self.sigma_f() * eta / self.dt.sqrt()
    }
}

/// Fluctuation-dissipation amplitude `σ_F = √(2·kT·μ·γ)`.
///
/// With friction force `−γp` and a white-noise force of variance `σ_F²`, the
/// stationary kinetic energy is `σ_F²/(4μγ)`; equipartition `½kT` fixes the
/// factor of two.
pub fn sigma_f_from_fdt(kt: f64, mu: f64, gamma: f64) -> Result<f64> {
    for (name, v) in [("kT", kt), ("mu", mu), ("gamma", gamma)] {
        if v.is_nan() || v < 0.0 {
            return Err(Error::param(name, format!("must be >= 0, got {v}")));
        }
    }
    Ok((2.0 * kt * mu * gamma).sqrt())
}

/// Effective bath spring constant `MΩ² = μγ/dt`.
pub fn effective_spring_constant(mu: f64, gamma: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::param("dt", format!("must be > 0, got {dt}")));
    }
    Ok(mu * gamma / dt)
}

/// One quantum Langevin trajectory in progress.
#[derive(Debug, Clone)]
pub struct QuantumLangevin {
    params: LangevinParams,
    state: GridState,
    prop: ChebyshevPropagator,
    /// System potential `V(q)` on the grid.
    v_sys: Vec<f64>,
    /// `V(q)` plus the optional bath spring.
    v_base: Vec<f64>,
    v_step: Vec<f64>,
    buf: Vec<c64>,
    scratch: Vec<c64>,
    p_prev: Option<f64>,
    steps_done: usize,
}

impl QuantumLangevin {
    pub fn new(params: LangevinParams, psi0: GridState) -> Result<Self> {
        params.validate()?;
        let prop = ChebyshevPropagator::new(&psi0.grid, params.mu)?;
        let v_base: Vec<f64> = psi0
            .grid
            .q_values()
            .iter()
            .map(|&q| params.potential_value(q))
            .collect();
        let v_sys = psi0
            .grid
            .q_values()
            .iter()
            .map(|&q| params.potential.value(q))
            .collect();
        let n = v_base.len();
        Ok(QuantumLangevin {
            params,
            v_sys,
            state: psi0,
            prop,
            v_step: vec![0.0; n],
            v_base,
            buf: vec![c64::new(0.0, 0.0); n],
            scratch: Vec::new(),
            p_prev: None,
            steps_done: 0,
        })
    }

    pub fn state(&self) -> &GridState {
        &self.state
    }

    pub fn time(&self) -> f64 {
        self.steps_done as f64 * self.params.dt
    }

    pub fn steps_done(&self) -> usize {
        self.steps_done
    }

    /// `⟨q⟩`, `⟨p⟩`, `⟨T⟩`, `⟨V⟩` of the current state, sharing one forward FFT.
    pub fn observables(&mut self) -> Result<Observables> {
        let grid = &self.state.grid;
        let n = grid.ng();
        self.buf.copy_from_slice(&self.state.psi);
        grid.fft(&mut self.buf, &mut self.scratch);
        let weight = grid.dq() / n as f64;
        let mut ekin = 0.0;
        for ((z, &k), &kp) in self.buf.iter_mut().zip(grid.k_values()).zip(grid.p_values()) {
            ekin += k * k * z.norm_sqr();
            *z *= kp / n as f64;
        }
        ekin *= weight / (2.0 * self.params.mu);
        grid.ifft(&mut self.buf, &mut self.scratch);
        let pz: c64 = self
            .state
            .psi
            .iter()
            .zip(&self.buf)
            .map(|(a, b)| a.conj() * b)
            .sum::<c64>()
            * grid.dq();
        let p = super::check_real(pz, "<p>")?;
        let (mut q, mut epot) = (0.0, 0.0);
        for ((z, &x), &v) in self.state.psi.iter().zip(grid.q_values()).zip(&self.v_sys) {
            let w = z.norm_sqr();
            q += x * w;
            epot += v * w;
        }
        let o = Observables {
            q: q * grid.dq(),
            p,
            ekin,
            epot: epot * grid.dq(),
        };
        if !(o.q.is_finite() && o.p.is_finite() && o.ekin.is_finite() && o.epot.is_finite()) {
            return Err(Error::Diverged {
                t: self.time(),
                reason: "non-finite expectation value".into(),
            });
        }
        Ok(o)
    }

    /// Advances one step given the current `⟨p⟩` and the noise draw.
    pub fn step_with(&mut self, p_now: f64, eta: f64) -> Result<()> {
        let p_f = self.params.friction.momentum(p_now, self.p_prev);
        self.p_prev = Some(p_now);
        let c = self.params.linear_coefficient(p_f, eta);
        for ((vs, &vb), &q) in self
            .v_step
            .iter_mut()
            .zip(&self.v_base)
            .zip(self.state.grid.q_values())
        {
            *vs = vb + c * q;
        }
        self.prop.step(&mut self.state.psi, &self.v_step, self.params.dt)?;
        self.steps_done += 1;
        let spill = self.state.boundary_probability();
        if spill > self.params.spill_threshold {
            return Err(Error::Spill {
                t: self.time(),
                probability: spill,
            });
        }
        Ok(())
    }

    /// Advances one step, drawing `η` from `noise`.
    pub fn step(&mut self, noise: &mut impl NoiseSource) -> Result<()> {
        let p_now = self.observables()?.p;
        let eta = noise.next_gaussian()?;
        self.step_with(p_now, eta)
    }
}

/// Single Langevin step with the friction momentum taken from the current
/// state (no history).
pub fn langevin_step(
    state: &GridState,
    params: &LangevinParams,
    noise: &mut impl NoiseSource,
) -> Result<GridState> {
    let mut single = QuantumLangevin::new(
        LangevinParams {
            friction: Friction::Start,
            ..*params
        },
        state.clone(),
    )?;
    single.step(noise)?;
    Ok(single.state)
}

/// Channels recorded by [`run_quantum_langevin`].
pub const QUANTUM_CHANNELS: [&str; 6] = ["q", "p", "v", "ekin", "epot", "etot"];

/// Runs a trajectory to `t_final`, recording the observables every step.
///
/// A spill ends the run early: the series keeps the states before the spill
/// and is marked truncated.
pub fn run_quantum_langevin(
    params: &LangevinParams,
    psi0: &GridState,
    noise: &mut impl NoiseSource,
) -> Result<TimeSeries> {
    run_quantum_langevin_until(params, psi0, noise, &|| usize::MAX)
}

/// [`run_quantum_langevin`] that also stops once `limit()` steps are done
/// (used by ensembles to skip work past an earlier abort).
pub fn run_quantum_langevin_until(
    params: &LangevinParams,
    psi0: &GridState,
    noise: &mut impl NoiseSource,
    limit: &dyn Fn() -> usize,
) -> Result<TimeSeries> {
    let mut traj = QuantumLangevin::new(*params, psi0.clone())?;
    let steps = params.steps();
    let mut rec: [Vec<f64>; 6] = Default::default();
    let mut truncated = false;
    let push = |o: &Observables, rec: &mut [Vec<f64>; 6]| {
        for (r, v) in rec.iter_mut().zip([o.q, o.p, o.p / params.mu, o.ekin, o.epot, o.etot()]) {
            r.push(v);
        }
    };
    let mut obs = traj.observables()?;
    push(&obs, &mut rec);
    for _ in 0..steps {
        if traj.steps_done() >= limit() {
            truncated = true;
            break;
        }
        let eta = noise.next_gaussian()?;
        match traj.step_with(obs.p, eta) {
            Ok(()) => {}
            Err(Error::Spill { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
        obs = traj.observables()?;
        push(&obs, &mut rec);
    }
    let mut series = TimeSeries::uniform(params.dt, rec[0].len());
    for (name, values) in QUANTUM_CHANNELS.iter().zip(rec) {
        series.push_channel(*name, values)?;
    }
    series.truncated = truncated;
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, gaussian_state, Grid};
    use crate::noise::{NoiseStream, Silent};

    fn grid() -> Grid {
        build_grid(-5.0, 5.0, 56).unwrap()
    }

    fn params(gamma: f64, kt: f64, t_final: f64) -> LangevinParams {
        LangevinParams::new(1.0, gamma, kt, 0.01, t_final, Potential::Harmonic { k: 1.0 }).unwrap()
    }

    #[test]
    fn fdt_values() {
        assert_eq!(sigma_f_from_fdt(0.0, 1.0, 0.1).unwrap(), 0.0);
        assert!((sigma_f_from_fdt(1.0, 1.0, 0.1).unwrap() - 0.2f64.sqrt()).abs() < 1e-15);
        // kT = 0.1, γ = 0.1 gives the familiar 0.14.
        assert!((sigma_f_from_fdt(0.1, 1.0, 0.1).unwrap() - 0.1414).abs() < 1e-4);
        assert!(sigma_f_from_fdt(-0.1, 1.0, 0.1).is_err());
        let p = params(0.1, 0.1, 1.0);
        assert_eq!(p.sigma_f(), sigma_f_from_fdt(0.1, 1.0, 0.1).unwrap());
    }

    #[test]
    fn bath_spring_constant_values() {
        assert_eq!(effective_spring_constant(1.0, 0.0, 0.01).unwrap(), 0.0);
        assert!((effective_spring_constant(1.0, 0.1, 0.01).unwrap() - 10.0).abs() < 1e-12);
        assert!(
            (effective_spring_constant(1.0, 0.1, 0.02).unwrap() - 5.0).abs() < 1e-12,
            "doubling dt halves the spring"
        );
        assert!(effective_spring_constant(1.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        let h = Potential::Harmonic { k: 1.0 };
        assert!(LangevinParams::new(0.0, 0.1, 0.1, 0.01, 1.0, h).is_err());
        assert!(LangevinParams::new(1.0, -0.1, 0.1, 0.01, 1.0, h).is_err());
        assert!(LangevinParams::new(1.0, 0.1, -0.1, 0.01, 1.0, h).is_err());
        assert!(LangevinParams::new(1.0, 0.1, 0.1, 0.0, 1.0, h).is_err());
    }

    #[test]
    fn friction_modes() {
        assert_eq!(Friction::Start.momentum(1.0, Some(0.0)), 1.0);
        assert_eq!(Friction::Midpoint.momentum(1.0, Some(0.0)), 1.5);
        assert_eq!(Friction::Midpoint.momentum(1.0, None), 1.0);
        for f in [Friction::Start, Friction::Midpoint] {
            assert_eq!(Friction::parse(f.as_str()), Some(f));
        }
    }

    #[test]
    fn closed_system_conserves_energy() {
        let p = params(0.0, 0.0, 100.0);
        let psi0 = gaussian_state(&grid(), 1.0, 1.0).unwrap();
        let s = run_quantum_langevin(&p, &psi0, &mut Silent).unwrap();
        assert!(!s.truncated);
        assert_eq!(s.len(), 10_001);
        let e = s.channel("etot").unwrap();
        let drift = e.iter().map(|x| (x - e[0]).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-8, "energy drift {drift}");
    }

    #[test]
    fn friction_dissipates_monotonically() {
        let p = params(0.5, 0.0, 20.0);
        let psi0 = gaussian_state(&grid(), 1.0, 1.0).unwrap();
        let s = run_quantum_langevin(&p, &psi0, &mut Silent).unwrap();
        let e = s.channel("etot").unwrap();
        assert!(e.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(e[e.len() - 1] < 0.5 + 1e-3 && e[e.len() - 1] >= 0.5 - 1e-6);
    }

    #[test]
    fn dissipation_rate_is_gamma_over_mu_times_p_squared() {
        // dE/dt = −(γ/μ)⟨p⟩² for H = H₀ + γ⟨p⟩q; fit the proportionality.
        let gamma = 0.3;
        let p = params(gamma, 0.0, 10.0);
        let psi0 = gaussian_state(&grid(), 1.0, 1.0).unwrap();
        let s = run_quantum_langevin(&p, &psi0, &mut Silent).unwrap();
        let (e, pm) = (s.channel("etot").unwrap(), s.channel("p").unwrap());
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for i in 1..e.len() - 1 {
            let de = (e[i + 1] - e[i - 1]) / (2.0 * p.dt);
            let x = -pm[i] * pm[i];
            sxy += x * de;
            sxx += x * x;
        }
        let slope = sxy / sxx;
        assert!((slope - gamma).abs() < 1e-3 * gamma, "fitted {slope}");
    }

    #[test]
    fn zero_temperature_friction_reduces_to_chebyshev() {
        let p = params(0.0, 0.0, 0.01);
        let psi0 = gaussian_state(&grid(), 1.0, 1.0).unwrap();
        let a = langevin_step(&psi0, &p, &mut NoiseStream::new(1, 1)).unwrap();
        let v: Vec<f64> = grid().q_values().iter().map(|q| 0.5 * q * q).collect();
        let b = crate::grid::chebyshev_step(&psi0, &v, 1.0, 0.01).unwrap();
        assert_eq!(a.psi, b.psi);
    }

    #[test]
    fn spill_truncates_the_series() {
        // A large kick drives the packet out of a small box.
        let g = build_grid(-3.0, 3.0, 32).unwrap();
        let mut p = params(0.0, 0.0, 20.0);
        p.sigma_f_override = Some(5.0);
        let psi0 = gaussian_state(&g, 0.0, 0.7).unwrap();
        let s = run_quantum_langevin(&p, &psi0, &mut NoiseStream::new(3, 0)).unwrap();
        assert!(s.truncated);
        assert!(s.len() < p.steps() + 1);
    }

    #[test]
    fn noisy_run_is_reproducible() {
        let p = params(0.1, 0.1, 5.0);
        let psi0 = gaussian_state(&grid(), 1.0, 1.0).unwrap();
        let a = run_quantum_langevin(&p, &psi0, &mut NoiseStream::new(9, 4)).unwrap();
        let b = run_quantum_langevin(&p, &psi0, &mut NoiseStream::new(9, 4)).unwrap();
        assert_eq!(a, b);
    }
}
