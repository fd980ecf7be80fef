use num_complex::Complex64 as c64;

use super::{Coupling, TlsParams};
use crate::error::{Error, Result};
use crate::noise::{NoiseSource, NoiseStream};
use crate::series::TimeSeries;
use crate::types::{DensityMatrix2, Spinor};

/// One Strang step `A·B·A` of `H = H₀ + f·x̂` with the noise `f` frozen.
///
/// Writing `H = a·σz + b·σx`, `A = exp(−i·b·σx·δt/2)` and
/// `B = diag(e^{−i·a·δt}, e^{+i·a·δt})`.
pub fn sse_step(psi: Spinor, params: &TlsParams, delta_t: f64, f_value: f64) -> Spinor {
    let (a, b) = split_coefficients(params, f_value);
    let half = b * delta_t * 0.5;
    let (s, c) = half.sin_cos();
    let ai = c64::new(0.0, -s);
    let cc = c64::new(c, 0.0);
    let half_x = |v: Spinor| Spinor::new(cc * v.c0 + ai * v.c1, ai * v.c0 + cc * v.c1);
    let phase = c64::from_polar(1.0, -a * delta_t);
    let psi = half_x(psi);
    let psi = Spinor::new(psi.c0 * phase, psi.c1 * phase.conj());
    half_x(psi)
}

/// `(a, b)` in `H₀ + f·x̂ = a·σz + b·σx`.
fn split_coefficients(p: &TlsParams, f: f64) -> (f64, f64) {
    let (a0, b0) = (0.5 * p.epsilon, 0.5 * p.delta);
    match p.xhat {
        Coupling::SigmaZ => (a0 + f, b0),
        Coupling::SigmaX => (a0, b0 + f),
        Coupling::H0 => (a0 * (1.0 + f), b0 * (1.0 + f)),
    }
}

/// Preallocated projector channels for one trajectory.
#[derive(Debug, Clone, Default)]
pub struct SseRecorder {
    pub rho00: Vec<f64>,
    pub rho11: Vec<f64>,
    pub re_rho01: Vec<f64>,
    pub im_rho01: Vec<f64>,
}

impl SseRecorder {
    fn with_capacity(n: usize) -> Self {
        SseRecorder {
            rho00: Vec::with_capacity(n),
            rho11: Vec::with_capacity(n),
            re_rho01: Vec::with_capacity(n),
            im_rho01: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, psi: &Spinor) {
        let r01 = psi.c0 * psi.c1.conj();
        self.rho00.push(psi.c0.norm_sqr());
        self.rho11.push(psi.c1.norm_sqr());
        self.re_rho01.push(r01.re);
        self.im_rho01.push(r01.im);
    }

    pub fn into_series(self, dt: f64) -> TimeSeries {
        let mut s = TimeSeries::uniform(dt, self.rho00.len());
        s.push_channel("rho00", self.rho00).unwrap();
        s.push_channel("rho11", self.rho11).unwrap();
        s.push_channel("re_rho01", self.re_rho01).unwrap();
        s.push_channel("im_rho01", self.im_rho01).unwrap();
        s
    }
}

/// Propagates one stochastic trajectory, recording `|ψ⟩⟨ψ|` at every step.
///
/// Each step draws `η`, sets `f = σ_f·η/√δt` and applies [`sse_step`].
pub fn sse_trajectory<N: NoiseSource>(
    psi0: Spinor,
    params: &TlsParams,
    delta_t: f64,
    t_final: f64,
    noise: &mut N,
) -> Result<TimeSeries> {
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(Error::param("dt", "must be positive"));
    }
    params.validate()?;
    if (psi0.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "initial spinor norm² = {}",
            psi0.norm_sqr()
        )));
    }
    let steps = (t_final / delta_t).round() as usize;
    let amplitude = params.sigma_f() / delta_t.sqrt();
    let mut rec = SseRecorder::with_capacity(steps + 1);
    let mut psi = psi0;
    rec.push(&psi);
    for _ in 0..steps {
        let f = if amplitude == 0.0 {
            0.0
        } else {
            amplitude * noise.next_gaussian()?
        };
        psi = sse_step(psi, params, delta_t, f);
        rec.push(&psi);
    }
    Ok(rec.into_series(delta_t))
}

/// Mixture `w₀|ψ₀⟩⟨ψ₀| + w₁|ψ₁⟩⟨ψ₁|` with `ψ₀ = (cos α, sin α)`, `ψ₁ = (−sin α, cos α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedInitial {
    pub w0: f64,
    pub w1: f64,
    pub alpha: f64,
}

impl MixedInitial {
    pub fn new(w0: f64, w1: f64, alpha: f64) -> Result<Self> {
        let m = MixedInitial { w0, w1, alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |w: f64| (0.0..=1.0).contains(&w);
        if !(in_unit(self.w0) && in_unit(self.w1)) || (self.w0 + self.w1 - 1.0).abs() > 1e-12 {
            return Err(Error::param(
                "mixed.w0/w1",
                format!("weights {} + {} must be in [0,1] and sum to 1", self.w0, self.w1),
            ));
        }
        if !self.alpha.is_finite() {
            return Err(Error::param("mixed.alpha", "must be finite"));
        }
        Ok(())
    }

    pub fn psi0(&self) -> Spinor {
        Spinor::from_real(self.alpha.cos(), self.alpha.sin())
    }

    pub fn psi1(&self) -> Spinor {
        Spinor::from_real(-self.alpha.sin(), self.alpha.cos())
    }

    pub fn density_matrix(&self) -> DensityMatrix2 {
        DensityMatrix2(
            self.psi0().projector().op().scale_re(self.w0)
                + self.psi1().projector().op().scale_re(self.w1),
        )
    }
}

/// Draws `ψ₀` with probability `w₀`, otherwise `ψ₁`.
pub fn sample_mixed_initial(m: &MixedInitial, stream: &mut NoiseStream) -> Spinor {
    if stream.uniform() < m.w0 {
        m.psi0()
    } else {
        m.psi1()
    }
}
