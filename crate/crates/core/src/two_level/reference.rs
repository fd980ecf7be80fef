//! Closed-form reference results for the two-level system.

use num_complex::Complex64 as c64;

use crate::types::DensityMatrix2;

/// Populations `(|c₁|², |c₂|²)` of a two-level system driven from state 1,
/// with detuning `ω − ε` and generalized Rabi frequency `Ω_R² = Ω² + (ω − ε)²`.
pub fn rabi_populations(epsilon: f64, omega_drive: f64, rabi_omega: f64, t: f64) -> (f64, f64) {
    let detuning = omega_drive - epsilon;
    let omega_r2 = rabi_omega * rabi_omega + detuning * detuning;
    if omega_r2 == 0.0 {
        return (1.0, 0.0);
    }
    let arg = 0.5 * omega_r2.sqrt() * t;
    let drive = rabi_omega * rabi_omega / omega_r2;
    let p2 = drive * arg.sin().powi(2);
    let p1 = detuning * detuning / omega_r2 + drive * arg.cos().powi(2);
    (p1, p2)
}

/// Coherence under pure dephasing with `x̂ = H₀ = (ε/2)σz`:
/// `ρ01(t) = ρ01(0)·exp(−iεt − (Dε²/2)t)`.
pub fn pure_dephasing_coherence(rho01_0: c64, epsilon: f64, d: f64, t: f64) -> c64 {
    rho01_0 * c64::new(-0.5 * d * epsilon * epsilon * t, -epsilon * t).exp()
}

/// Long-time state whenever only the identity commutes with the generator.
pub fn equilibrium_dm() -> DensityMatrix2 {
    DensityMatrix2::maximally_mixed()
}
