//! Two-level system: exact Lindblad propagation, its Bloch-vector form, and the
//! Hermitian stochastic Schrödinger unraveling.
//!
//! The system Hamiltonian is `H₀ = (ε/2)σz + (Δ/2)σx` and the master equation
//!
//! ```text
//! dρ/dt = −i[H₀, ρ] − (D/2)[x̂, [x̂, ρ]]
//! ```
//!
//! with `x̂ ∈ {σz, σx, H₀}`. The unraveling propagates `H(t) = H₀ + f(t)x̂`
//! with white noise `f` of amplitude [`sigma_f_from_d`].

mod lindblad;
mod reference;
mod sse;

pub use lindblad::{
    bloch_generator, lindblad_rhs, propagate_bloch, propagate_lindblad,
    propagate_lindblad_strided, relaxation_rate, DmTrajectory, Method,
};
pub use reference::{equilibrium_dm, pure_dephasing_coherence, rabi_populations};
pub use sse::{sample_mixed_initial, sse_step, sse_trajectory, MixedInitial, SseRecorder};

use crate::error::{Error, Result};
use crate::types::Op2;

/// Lindblad coupling operator `x̂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    SigmaZ,
    SigmaX,
    /// The system Hamiltonian itself (pure dephasing in its eigenbasis).
    H0,
}

impl Coupling {
    pub fn as_str(&self) -> &'static str {
        match self {
            Coupling::SigmaZ => "sigma_z",
            Coupling::SigmaX => "sigma_x",
            Coupling::H0 => "h0",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sigma_z" => Some(Coupling::SigmaZ),
            "sigma_x" => Some(Coupling::SigmaX),
            "h0" => Some(Coupling::H0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlsParams {
    /// Level splitting ε.
    pub epsilon: f64,
    /// Tunnelling coupling Δ.
    pub delta: f64,
    /// Lindblad coefficient D ≥ 0.
    pub d: f64,
    pub xhat: Coupling,
}

impl TlsParams {
    pub fn new(epsilon: f64, delta: f64, d: f64, xhat: Coupling) -> Result<Self> {
        let p = TlsParams {
            epsilon,
            delta,
            d,
            xhat,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.delta.is_finite()) {
            return Err(Error::param("epsilon/delta", "must be finite"));
        }
        sigma_f_from_d(self.d).map(|_| ())
    }

    pub fn hamiltonian(&self) -> Op2 {
        tls_hamiltonian(self.epsilon, self.delta)
    }

    pub fn coupling_operator(&self) -> Op2 {
        match self.xhat {
            Coupling::SigmaZ => Op2::sigma_z(),
            Coupling::SigmaX => Op2::sigma_x(),
            Coupling::H0 => self.hamiltonian(),
        }
    }

    /// Noise amplitude for the unraveling of this master equation.
    pub fn sigma_f(&self) -> f64 {
        self.d.max(0.0).sqrt()
    }
}

/// `H₀ = (ε/2)σz + (Δ/2)σx`.
pub fn tls_hamiltonian(epsilon: f64, delta: f64) -> Op2 {
    Op2::from_real([
        [0.5 * epsilon, 0.5 * delta],
        [0.5 * delta, -0.5 * epsilon],
    ])
}

/// Amplitude σ_f of the frozen-per-step noise `f = σ_f·η/√δt` whose ensemble
/// average reproduces the `(D/2)[x̂,[x̂,ρ]]` term.
///
/// Over one step the noise rotates the relative phase by `2σ_f·η·√δt`, which
/// damps coherences by `exp(−2σ_f²δt)`; the master equation damps them by
/// `exp(−2Dδt)`, hence `σ_f² = D`.
pub fn sigma_f_from_d(d: f64) -> Result<f64> {
    if d.is_nan() || d < 0.0 {
        return Err(Error::param("D", format!("must be >= 0, got {d}")));
    }
    Ok(d.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_entries() {
        let h = tls_hamiltonian(0.2, 0.2);
        assert_eq!(h, Op2::from_real([[0.1, 0.1], [0.1, -0.1]]));
        assert_eq!(tls_hamiltonian(0.0, 0.0), Op2::zero());
    }

    #[test]
    fn hamiltonian_eigenvalues() {
        let [lo, hi] = tls_hamiltonian(0.2, 0.2).hermitian_eigenvalues();
        let expected = 0.5 * 0.08f64.sqrt();
        assert!((hi - expected).abs() < 1e-15 && (lo + expected).abs() < 1e-15);
        assert!((hi - 0.1414).abs() < 1e-4);
    }

    #[test]
    fn sigma_f_values() {
        assert_eq!(sigma_f_from_d(0.0).unwrap(), 0.0);
        assert!((sigma_f_from_d(0.1).unwrap() - 0.316_227_766_016_838).abs() < 1e-15);
        assert!((sigma_f_from_d(0.3).unwrap() - 0.547_722_557_505_166).abs() < 1e-15);
        assert!(matches!(
            sigma_f_from_d(-0.1),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn negative_d_rejected() {
        assert!(TlsParams::new(0.2, 0.2, -1.0, Coupling::SigmaZ).is_err());
    }

    #[test]
    fn coupling_names_round_trip() {
        for c in [Coupling::SigmaZ, Coupling::SigmaX, Coupling::H0] {
            assert_eq!(Coupling::parse(c.as_str()), Some(c));
        }
        assert_eq!(Coupling::parse("sigma_y"), None);
    }
}
