//! Classical Langevin reference dynamics integrated with velocity Verlet.
//!
//! The step force is `F(r) + F_c` with the conservative part `F(r) = −V'(r)`
//! and the frozen part `F_c = −γμ·v_f − σ_F·η/√dt`, which uses one noise draw
//! per step and the same friction rule as the quantum integrator:
//!
//! ```text
//! r⁺ = r + v·dt + dt²/(2μ)·(F(r) + F_c)
//! v⁺ = v + dt/(2μ)·(F(r) + F(r⁺) + 2F_c)
//! ```

use crate::error::{Error, Result};
use crate::grid::{Friction, LangevinParams};
use crate::noise::NoiseSource;
use crate::series::TimeSeries;

/// Phase-space point of the classical particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub r: f64,
    pub v: f64,
}

impl ClassicalState {
    pub fn new(r: f64, v: f64) -> Self {
        ClassicalState { r, v }
    }

    pub fn kinetic_energy(&self, mu: f64) -> f64 {
        0.5 * mu * self.v * self.v
    }
}

/// One classical trajectory in progress.
#[derive(Debug, Clone)]
pub struct ClassicalLangevin {
    params: LangevinParams,
    state: ClassicalState,
    v_prev: Option<f64>,
    steps_done: usize,
}

impl ClassicalLangevin {
    pub fn new(params: LangevinParams, state: ClassicalState) -> Result<Self> {
        params.validate()?;
        if !(state.r.is_finite() && state.v.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite classical state {state:?}")));
        }
        Ok(ClassicalLangevin {
            params,
            state,
            v_prev: None,
            steps_done: 0,
        })
    }

    pub fn state(&self) -> ClassicalState {
        self.state
    }

    pub fn time(&self) -> f64 {
        self.steps_done as f64 * self.params.dt
    }

    pub fn steps_done(&self) -> usize {
        self.steps_done
    }

    /// Advances one step with noise variate `eta`.
    pub fn step_with(&mut self, eta: f64) -> Result<()> {
        let p = &self.params;
        let ClassicalState { r, v } = self.state;
        let v_f = p.friction.momentum(v, self.v_prev);
        self.v_prev = Some(v);
        let f_frozen = -p.gamma * p.mu * v_f - p.sigma_f() * eta / p.dt.sqrt();
        let f_now = -p.potential_derivative(r);
        let dt = p.dt;
        let r_next = r + v * dt + dt * dt / (2.0 * p.mu) * (f_now + f_frozen);
        let f_next = -p.potential_derivative(r_next);
        let v_next = v + dt / (2.0 * p.mu) * (f_now + f_next + 2.0 * f_frozen);
        self.steps_done += 1;
        if !(r_next.is_finite() && v_next.is_finite()) {
            return Err(Error::Diverged {
                t: self.time(),
                reason: "classical state is no longer finite".into(),
            });
        }
        self.state = ClassicalState::new(r_next, v_next);
        Ok(())
    }

    pub fn step(&mut self, noise: &mut impl NoiseSource) -> Result<()> {
        let eta = noise.next_gaussian()?;
        self.step_with(eta)
    }
}

/// One Verlet step with friction evaluated at the current velocity.
pub fn verlet_step(
    state: ClassicalState,
    params: &LangevinParams,
    noise: &mut impl NoiseSource,
) -> Result<ClassicalState> {
    let mut single = ClassicalLangevin::new(
        LangevinParams {
            friction: Friction::Start,
            ..*params
        },
        state,
    )?;
    single.step(noise)?;
    Ok(single.state)
}

/// Channels recorded by [`run_classical_langevin`]; the same names as the
/// quantum run so the two can be compared directly.
pub const CLASSICAL_CHANNELS: [&str; 6] = ["q", "p", "v", "ekin", "epot", "etot"];

/// Runs from `(r0, v0)` to `t_final`, recording every step.
pub fn run_classical_langevin(
    params: &LangevinParams,
    r0: f64,
    v0: f64,
    noise: &mut impl NoiseSource,
) -> Result<TimeSeries> {
    run_classical_langevin_until(params, r0, v0, noise, &|| usize::MAX)
}

/// [`run_classical_langevin`] that stops once `limit()` steps are done.
pub fn run_classical_langevin_until(
    params: &LangevinParams,
    r0: f64,
    v0: f64,
    noise: &mut impl NoiseSource,
    limit: &dyn Fn() -> usize,
) -> Result<TimeSeries> {
    let mut traj = ClassicalLangevin::new(*params, ClassicalState::new(r0, v0))?;
    let steps = params.steps();
    let mut rec: [Vec<f64>; 6] = Default::default();
    let push = |s: ClassicalState, rec: &mut [Vec<f64>; 6]| {
        let ekin = s.kinetic_energy(params.mu);
        let epot = params.potential.value(s.r);
        for (c, x) in rec.iter_mut().zip([s.r, params.mu * s.v, s.v, ekin, epot, ekin + epot]) {
            c.push(x);
        }
    };
    push(traj.state(), &mut rec);
    let mut truncated = false;
    for _ in 0..steps {
        if traj.steps_done() >= limit() {
            truncated = true;
            break;
        }
        traj.step(noise)?;
        push(traj.state(), &mut rec);
    }
    let mut series = TimeSeries::uniform(params.dt, rec[0].len());
    for (name, values) in CLASSICAL_CHANNELS.iter().zip(rec) {
        series.push_channel(*name, values)?;
    }
    series.truncated = truncated;
    Ok(series)
}
