//! One-dimensional Fourier-grid wavefunctions, Chebyshev short-time
//! propagation and the mean-field quantum Langevin step.
//!
//! The grid is periodic with `ng` points `qᵢ = qmin + i·dq`, `dq = (qmax − qmin)/ng`;
//! the kinetic operator is diagonal in the discrete Fourier basis with
//! momenta `k ∈ [−π/dq, π/dq)` in standard FFT order.

mod bessel;
mod chebyshev;
mod langevin;
mod potential;

pub use bessel::bessel_j_sequence;
pub use chebyshev::{chebyshev_step, ChebyshevPropagator, ChebyshevStats, MAX_CHEBYSHEV_TERMS};
pub use langevin::{
    effective_spring_constant, langevin_step, run_quantum_langevin, run_quantum_langevin_until,
    sigma_f_from_fdt, Friction, LangevinParams, QuantumLangevin, DEFAULT_SPILL_THRESHOLD,
    QUANTUM_CHANNELS,
};
pub use potential::Potential;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as c64;
use rustfft::{Fft, FftPlanner};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Points on each side of the box that count towards the spill probability.
pub const SPILL_POINTS: usize = 2;
/// Imaginary residue of `⟨p⟩` above which the state is rejected; smaller
/// residues are rounding noise and dropped.
const P_IMAG_LIMIT: f64 = 1e-8;

/// Uniform periodic grid with its FFT plans and momentum values.
#[derive(Clone)]
pub struct Grid {
    qmin: f64,
    qmax: f64,
    ng: usize,
    dq: f64,
    q: Vec<f64>,
    k: Vec<f64>,
    /// `k` with the unpaired Nyquist component zeroed, for odd derivatives.
    k_odd: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("qmin", &self.qmin)
            .field("qmax", &self.qmax)
            .field("ng", &self.ng)
            .field("dq", &self.dq)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.qmin == other.qmin && self.qmax == other.qmax && self.ng == other.ng
    }
}

/// Builds the grid on `[qmin, qmax)` with `ng ≥ 8` points.
pub fn build_grid(qmin: f64, qmax: f64, ng: usize) -> Result<Grid> {
    if !(qmin.is_finite() && qmax.is_finite()) || qmax <= qmin {
        return Err(Error::param(
            "grid",
            format!("need finite qmin < qmax, got [{qmin}, {qmax}]"),
        ));
    }
    if ng < 8 {
        return Err(Error::param("grid.ng", format!("need at least 8 points, got {ng}")));
    }
    let dq = (qmax - qmin) / ng as f64;
    let q = (0..ng).map(|i| qmin + i as f64 * dq).collect();
    let dk = 2.0 * PI / (ng as f64 * dq);
    let k = (0..ng)
        .map(|j| {
            let j = if j < ng.div_ceil(2) { j as f64 } else { j as f64 - ng as f64 };
            j * dk
        })
        .collect::<Vec<f64>>();
    let mut k_odd = k.clone();
    if ng.is_multiple_of(2) {
        k_odd[ng / 2] = 0.0;
    }
    let mut planner = FftPlanner::new();
    Ok(Grid {
        qmin,
        qmax,
        ng,
        dq,
        q,
        k,
        k_odd,
        forward: planner.plan_fft_forward(ng),
        inverse: planner.plan_fft_inverse(ng),
    })
}

impl Grid {
    pub fn qmin(&self) -> f64 {
        self.qmin
    }

    pub fn qmax(&self) -> f64 {
        self.qmax
    }

    pub fn ng(&self) -> usize {
        self.ng
    }

    pub fn dq(&self) -> f64 {
        self.dq
    }

    pub fn q_values(&self) -> &[f64] {
        &self.q
    }

    /// Momentum grid in FFT order.
    pub fn k_values(&self) -> &[f64] {
        &self.k
    }

    /// Momentum multipliers for `p̂` itself: [`k_values`](Self::k_values)
    /// with the Nyquist component removed, so real wavefunctions have
    /// `⟨p⟩ = 0` exactly.
    pub fn p_values(&self) -> &[f64] {
        &self.k_odd
    }

    /// Largest momentum magnitude, `π/dq`.
    pub fn k_max(&self) -> f64 {
        PI / self.dq
    }

    /// Unnormalized forward transform in place.
    pub fn fft(&self, data: &mut [c64], scratch: &mut Vec<c64>) {
        scratch.resize(self.forward.get_inplace_scratch_len(), c64::new(0.0, 0.0));
        self.forward.process_with_scratch(data, scratch);
    }

    /// Unnormalized inverse transform in place (divide by `ng` afterwards).
    pub fn ifft(&self, data: &mut [c64], scratch: &mut Vec<c64>) {
        scratch.resize(self.inverse.get_inplace_scratch_len(), c64::new(0.0, 0.0));
        self.inverse.process_with_scratch(data, scratch);
    }

    /// `IFFT(m·FFT ψ)` for per-component multipliers `m` in FFT order.
    pub fn apply_momentum_multiplier(
        &self,
        psi: &[c64],
        multiplier: impl Iterator<Item = f64>,
        scratch: &mut Vec<c64>,
    ) -> Vec<c64> {
        let mut buf = psi.to_vec();
        self.fft(&mut buf, scratch);
        let inv_n = 1.0 / self.ng as f64;
        for (b, m) in buf.iter_mut().zip(multiplier) {
            *b *= m * inv_n;
        }
        self.ifft(&mut buf, scratch);
        buf
    }

    /// Kinetic operator `p²/2μ` applied to `psi`.
    pub fn apply_kinetic(&self, psi: &[c64], mu: f64) -> Vec<c64> {
        let mut scratch = Vec::new();
        let t = self.k.iter().map(|k| k * k / (2.0 * mu));
        self.apply_momentum_multiplier(psi, t, &mut scratch)
    }
}

/// Wavefunction sampled on a [`Grid`], normalized so that `Σ|ψᵢ|²·dq = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub psi: Vec<c64>,
    pub grid: Grid,
}

/// Normalized Gaussian `ψ(q) ∝ exp(−(q − q0)²/(2σ²))`.
pub fn gaussian_state(grid: &Grid, q0: f64, sigma: f64) -> Result<GridState> {
    gaussian_state_with_threshold(grid, q0, sigma, DEFAULT_SPILL_THRESHOLD)
}

/// [`gaussian_state`] with an explicit bound on the density mass outside the box.
pub fn gaussian_state_with_threshold(
    grid: &Grid,
    q0: f64,
    sigma: f64,
    spill_threshold: f64,
) -> Result<GridState> {
    if !(sigma > 0.0 && sigma.is_finite()) || !q0.is_finite() {
        return Err(Error::param(
            "gaussian",
            format!("need finite q0 and sigma > 0, got q0={q0}, sigma={sigma}"),
        ));
    }
    // |ψ|² is a normal density with standard deviation σ/√2.
    let outside = 0.5 * erfc((grid.qmax - q0) / sigma) + 0.5 * erfc((q0 - grid.qmin) / sigma);
    if outside > spill_threshold {
        return Err(Error::Spill {
            t: 0.0,
            probability: outside,
        });
    }
    let psi: Vec<c64> = grid
        .q
        .iter()
        .map(|&q| c64::new((-(q - q0).powi(2) / (2.0 * sigma * sigma)).exp(), 0.0))
        .collect();
    GridState::normalized(grid, psi)
}

/// Expectation values of a grid state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub q: f64,
    pub p: f64,
    pub ekin: f64,
    pub epot: f64,
}

impl Observables {
    pub fn etot(&self) -> f64 {
        self.ekin + self.epot
    }
}

impl GridState {
    /// Wraps amplitudes without touching them; the norm must already be 1.
    pub fn new(grid: &Grid, psi: Vec<c64>) -> Result<Self> {
        if psi.len() != grid.ng {
            return Err(Error::Shape(format!(
                "{} amplitudes for a {}-point grid",
                psi.len(),
                grid.ng
            )));
        }
        let state = GridState {
            psi,
            grid: grid.clone(),
        };
        let n = state.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("grid state norm {n} != 1")));
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(grid: &Grid, mut psi: Vec<c64>) -> Result<Self> {
        if psi.len() != grid.ng {
            return Err(Error::Shape(format!(
                "{} amplitudes for a {}-point grid",
                psi.len(),
                grid.ng
            )));
        }
        let n = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dq;
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidState("cannot normalize a zero wavefunction".into()));
        }
        let s = 1.0 / n.sqrt();
        psi.iter_mut().for_each(|z| *z *= s);
        Ok(GridState {
            psi,
            grid: grid.clone(),
        })
    }

    /// `Σ|ψᵢ|²·dq`.
    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dq
    }

    /// Multiplies by the plane wave `e^{i p0 q}`.
    pub fn boosted(mut self, p0: f64) -> Self {
        for (z, &q) in self.psi.iter_mut().zip(&self.grid.q) {
            *z *= c64::from_polar(1.0, p0 * q);
        }
        self
    }

    /// Probability held by the outermost [`SPILL_POINTS`] points on each side.
    pub fn boundary_probability(&self) -> f64 {
        let n = self.psi.len();
        let edge = SPILL_POINTS.min(n / 2);
        let lo: f64 = self.psi[..edge].iter().map(|z| z.norm_sqr()).sum();
        let hi: f64 = self.psi[n - edge..].iter().map(|z| z.norm_sqr()).sum();
        (lo + hi) * self.grid.dq
    }

    /// `Σ f(qᵢ)|ψᵢ|²·dq`.
    pub fn position_average(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.psi
            .iter()
            .zip(&self.grid.q)
            .map(|(z, &q)| f(q) * z.norm_sqr())
            .sum::<f64>()
            * self.grid.dq
    }

    /// `⟨p⟩ = ⟨ψ|IFFT(k·FFT ψ)⟩`, checked to be real.
    pub fn momentum(&self, scratch: &mut Vec<c64>) -> Result<f64> {
        let p = self.grid.k_odd.iter().copied();
        let dpsi = self.grid.apply_momentum_multiplier(&self.psi, p, scratch);
        let z: c64 = self
            .psi
            .iter()
            .zip(&dpsi)
            .map(|(a, b)| a.conj() * b)
            .sum::<c64>()
            * self.grid.dq;
        check_real(z, "<p>")
    }

    /// `⟨p²/2μ⟩`, evaluated in momentum space via Parseval.
    pub fn kinetic_energy(&self, mu: f64, scratch: &mut Vec<c64>) -> f64 {
        let mut buf = self.psi.clone();
        self.grid.fft(&mut buf, scratch);
        let weight = self.grid.dq / self.grid.ng as f64 / (2.0 * mu);
        buf.iter()
            .zip(&self.grid.k)
            .map(|(z, &k)| k * k * z.norm_sqr())
            .sum::<f64>()
            * weight
    }
}

fn check_real(z: c64, what: &str) -> Result<f64> {
    if z.im.abs() > P_IMAG_LIMIT {
        return Err(Error::NumericalInconsistency(format!(
            "{what} has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// `⟨q⟩`, `⟨p⟩`, `⟨p²/2μ⟩` and `⟨V(q)⟩` of a state.
pub fn expect_observables(state: &GridState, mu: f64, potential: &Potential) -> Result<Observables> {
    let mut scratch = Vec::new();
    Ok(Observables {
        q: state.position_average(|q| q),
        p: state.momentum(&mut scratch)?,
        ekin: state.kinetic_energy(mu, &mut scratch),
        epot: state.position_average(|q| potential.value(q)),
    })
}
