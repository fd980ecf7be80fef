use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as c64;

use super::{Coupling, TlsParams};
use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::types::{BlochVector, DensityMatrix2, Op2, TRACE_TOL};

/// Positivity violation that aborts a propagation.
const DIVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Rk4,
    /// First-order `ρ ← ρ + δt·L(ρ)`.
    Euler,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::Euler => "euler",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rk4" => Some(Method::Rk4),
            "euler" => Some(Method::Euler),
            _ => None,
        }
    }
}

/// `−i[H₀, ρ] − (D/2)[x̂, [x̂, ρ]]`.
pub fn lindblad_rhs(rho: &DensityMatrix2, params: &TlsParams) -> Op2 {
    rhs(rho.op(), &params.hamiltonian(), &params.coupling_operator(), params.d)
}

fn rhs(rho: Op2, h: &Op2, x: &Op2, d: f64) -> Op2 {
    let unitary = h.commutator(rho).scale(c64::new(0.0, -1.0));
    if d == 0.0 {
        return unitary;
    }
    unitary - x.commutator(x.commutator(rho)).scale_re(0.5 * d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DmTrajectory {
    pub t: Vec<f64>,
    pub rho: Vec<DensityMatrix2>,
}

impl DmTrajectory {
    /// Channels `rho00`, `rho11`, `re_rho01`, `im_rho01`.
    pub fn to_series(&self) -> TimeSeries {
        let mut s = TimeSeries::new(self.t.clone());
        let pick = |f: fn(&DensityMatrix2) -> f64| self.rho.iter().map(f).collect::<Vec<_>>();
        s.push_channel("rho00", pick(|r| r.rho00().re)).unwrap();
        s.push_channel("rho11", pick(|r| r.rho11().re)).unwrap();
        s.push_channel("re_rho01", pick(|r| r.rho01().re)).unwrap();
        s.push_channel("im_rho01", pick(|r| r.rho01().im)).unwrap();
        s
    }

    pub fn last(&self) -> &DensityMatrix2 {
        self.rho.last().expect("trajectory holds the initial state")
    }
}

/// Integrates the master equation, recording every step.
pub fn propagate_lindblad(
    rho0: &DensityMatrix2,
    params: &TlsParams,
    dt: f64,
    t_final: f64,
    method: Method,
) -> Result<DmTrajectory> {
    propagate_lindblad_strided(rho0, params, dt, t_final, method, 1)
}

/// Integrates the master equation, recording every `stride`-th step.
pub fn propagate_lindblad_strided(
    rho0: &DensityMatrix2,
    params: &TlsParams,
    dt: f64,
    t_final: f64,
    method: Method,
    stride: usize,
) -> Result<DmTrajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", "must be positive"));
    }
    if !(t_final >= 0.0) {
        return Err(Error::param("t_final", "must be >= 0"));
    }
    if stride == 0 {
        return Err(Error::param("stride", "must be >= 1"));
    }
    params.validate()?;
    rho0.validate()?;

    let h = params.hamiltonian();
    let x = params.coupling_operator();
    let d = params.d;
    let f = |r: Op2| rhs(r, &h, &x, d);

    let steps = (t_final / dt).round() as usize;
    let mut out = DmTrajectory {
        t: Vec::with_capacity(steps / stride + 1),
        rho: Vec::with_capacity(steps / stride + 1),
    };
    out.t.push(0.0);
    out.rho.push(*rho0);

    let mut rho = rho0.op();
    for n in 1..=steps {
        rho = match method {
            Method::Euler => rho + f(rho).scale_re(dt),
            Method::Rk4 => {
                let k1 = f(rho);
                let k2 = f(rho + k1.scale_re(0.5 * dt));
                let k3 = f(rho + k2.scale_re(0.5 * dt));
                let k4 = f(rho + k3.scale_re(dt));
                rho + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(dt / 6.0)
            }
        };
        let state = DensityMatrix2(rho);
        let t = n as f64 * dt;
        check_step(&state, t)?;
        if n % stride == 0 {
            out.t.push(t);
            out.rho.push(state);
        }
    }
    Ok(out)
}

fn check_step(state: &DensityMatrix2, t: f64) -> Result<()> {
    let lmin = state.min_eigenvalue();
    if !lmin.is_finite() || lmin < -DIVERGENCE_TOL {
        return Err(Error::Diverged {
            t,
            reason: format!("density matrix eigenvalue {lmin:e} < 0; reduce dt"),
        });
    }
    let tr = state.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::Diverged {
            t,
            reason: format!("trace drifted to {tr}"),
        });
    }
    Ok(())
}

/// Generator `G` of `ṙ = G·r` for the Bloch vector (only `x̂ = σz`).
///
/// With `ρ = I/2 + r·σ`, the commutator term gives `ṙ = b × r` for
/// `b = (Δ, 0, ε)`, and the σz double commutator damps `rx`, `ry` at rate `2D`.
pub fn bloch_generator(params: &TlsParams) -> Result<Matrix3<f64>> {
    if params.xhat != Coupling::SigmaZ {
        return Err(Error::NotImplemented(format!(
            "Bloch generator for x̂ = {}",
            params.xhat.as_str()
        )));
    }
    let (e, dl, g) = (params.epsilon, params.delta, 2.0 * params.d);
    #[rustfmt::skip]
    let m = Matrix3::new(
        -g,  -e, 0.0,
         e,  -g, -dl,
        0.0, dl, 0.0,
    );
    Ok(m)
}

/// RK4 integration of `ṙ = G·r`, recording every `stride`-th step.
pub fn propagate_bloch(
    r0: &BlochVector,
    generator: &Matrix3<f64>,
    dt: f64,
    t_final: f64,
    stride: usize,
) -> Vec<BlochVector> {
    let steps = (t_final / dt).round() as usize;
    let stride = stride.max(1);
    let mut r = Vector3::new(r0.rx, r0.ry, r0.rz);
    let mut out = vec![*r0];
    for n in 1..=steps {
        let k1 = generator * r;
        let k2 = generator * (r + k1 * (0.5 * dt));
        let k3 = generator * (r + k2 * (0.5 * dt));
        let k4 = generator * (r + k3 * dt);
        r += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        if n % stride == 0 {
            out.push(BlochVector::new(r.x, r.y, r.z));
        }
    }
    out
}

/// Slowest relaxation rate `min(−Re λ)` over the generator's eigenvalues, or
/// `None` when some mode does not decay.
pub fn relaxation_rate(generator: &Matrix3<f64>) -> Option<f64> {
    let rate = generator
        .complex_eigenvalues()
        .iter()
        .map(|l| -l.re)
        .fold(f64::INFINITY, f64::min);
    (rate > 1e-12).then_some(rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{bloch_from_dm, Spinor};

    fn params(e: f64, d: f64, dd: f64, x: Coupling) -> TlsParams {
        TlsParams::new(e, d, dd, x).unwrap()
    }

    #[test]
    fn maximally_mixed_is_stationary() {
        for &(e, dl, d) in &[(0.2, 0.2, 0.1), (0.5, 0.0, 1.0), (0.0, 0.3, 0.0)] {
            let r = lindblad_rhs(&DensityMatrix2::maximally_mixed(), &params(e, dl, d, Coupling::SigmaZ));
            assert!(r.max_abs() < 1e-16);
        }
    }

    #[test]
    fn pure_dephasing_rhs() {
        let (e, d) = (0.2, 0.3);
        let rho = DensityMatrix2::real_symmetric(0.5, 0.2, 0.5);
        let r = lindblad_rhs(&rho, &params(e, 0.0, d, Coupling::H0));
        assert!(r.0[0][0].norm() < 1e-16 && r.0[1][1].norm() < 1e-16);
        let expected = c64::new(-d * e * e / 2.0, -e) * 0.2;
        assert!((r.0[0][1] - expected).norm() < 1e-15);
    }

    #[test]
    fn rhs_is_traceless_and_hermitian() {
        let rho = Spinor::from_real(0.6, 0.8).projector();
        for d in [0.0, 0.1] {
            for x in [Coupling::SigmaZ, Coupling::SigmaX, Coupling::H0] {
                let r = lindblad_rhs(&rho, &params(0.2, 0.3, d, x));
                assert!(r.trace().norm() < 1e-16);
                assert!((r - r.adjoint()).max_abs() < 1e-16);
            }
        }
    }

    #[test]
    fn unitary_populations_match_closed_form() {
        // From |1⟩ under H₀: ρ00(t) = (Δ/Ω)² sin²(Ωt/2), Ω = √(ε² + Δ²).
        let p = params(0.2, 0.2, 0.0, Coupling::SigmaZ);
        let traj = propagate_lindblad(&Spinor::lower().projector(), &p, 1e-3, 50.0, Method::Rk4).unwrap();
        let omega = 0.08f64.sqrt();
        for (t, rho) in traj.t.iter().zip(&traj.rho).step_by(97) {
            let exact = 0.5 * (omega * t / 2.0).sin().powi(2);
            assert!((rho.rho00().re - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn dephasing_drives_to_identity() {
        let p = params(0.2, 0.2, 0.3, Coupling::SigmaZ);
        let traj = propagate_lindblad_strided(&Spinor::lower().projector(), &p, 0.01, 600.0, Method::Rk4, 100).unwrap();
        let last = traj.last();
        assert!(last.max_abs_diff(&DensityMatrix2::maximally_mixed()) < 1e-3);
        for r in &traj.rho {
            r.validate().unwrap();
        }
    }

    #[test]
    fn bloch_precession_about_z() {
        let p = params(0.2, 0.0, 0.0, Coupling::SigmaZ);
        let g = bloch_generator(&p).unwrap();
        let r0 = BlochVector::new(0.3, 0.0, 0.2);
        let path = propagate_bloch(&r0, &g, 1e-3, 10.0, 1000);
        for (k, r) in path.iter().enumerate() {
            let t = k as f64;
            assert!((r.rx - 0.3 * (0.2 * t).cos()).abs() < 1e-12);
            assert!((r.ry - 0.3 * (0.2 * t).sin()).abs() < 1e-12);
            assert!((r.rz - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn bloch_origin_is_fixed() {
        let g = bloch_generator(&params(0.3, 0.7, 0.4, Coupling::SigmaZ)).unwrap();
        assert_eq!(g * Vector3::zeros(), Vector3::zeros());
    }

    #[test]
    fn bloch_generator_requires_sigma_z() {
        let err = bloch_generator(&params(0.2, 0.2, 0.1, Coupling::SigmaX)).unwrap_err();
        assert!(matches!(err, Error::NotImplemented(_)));
    }

    #[test]
    fn bloch_and_density_matrix_routes_agree() {
        for &(e, dl, d) in &[(0.2, 0.2, 0.1), (0.2, 0.4, 0.03), (0.2, 0.1, 0.3)] {
            let p = params(e, dl, d, Coupling::SigmaZ);
            let rho0 = Spinor::lower().projector();
            let dm = propagate_lindblad_strided(&rho0, &p, 1e-4, 50.0, Method::Rk4, 100).unwrap();
            let bl = propagate_bloch(&bloch_from_dm(&rho0), &bloch_generator(&p).unwrap(), 1e-4, 50.0, 100);
            assert_eq!(dm.rho.len(), bl.len());
            for (rho, b) in dm.rho.iter().zip(&bl) {
                let a = bloch_from_dm(rho);
                let diff = (a.rx - b.rx).abs().max((a.ry - b.ry).abs()).max((a.rz - b.rz).abs());
                assert!(diff < 1e-6, "routes differ by {diff}");
            }
        }
    }

    #[test]
    fn relaxation_rate_of_pure_dephasing_generator() {
        // Δ = 0: rx, ry decay at 2D, rz is conserved.
        let g = bloch_generator(&params(0.2, 0.0, 0.1, Coupling::SigmaZ)).unwrap();
        assert_eq!(relaxation_rate(&g), None);
        let g = bloch_generator(&params(0.2, 0.2, 0.1, Coupling::SigmaZ)).unwrap();
        let rate = relaxation_rate(&g).unwrap();
        assert!(rate > 0.0 && rate < 0.2);
    }

    #[test]
    fn euler_converges_at_first_order() {
        let p = params(0.2, 0.2, 0.1, Coupling::SigmaZ);
        // Mixed start: Euler pushes a pure state's small eigenvalue below zero.
        let rho0 = DensityMatrix2::real_symmetric(0.8, 0.1, 0.2);
        let reference = propagate_lindblad_strided(&rho0, &p, 1e-3, 20.0, Method::Rk4, 100).unwrap();
        let err = |dt: f64| {
            let stride = (0.1 / dt).round() as usize;
            let e = propagate_lindblad_strided(&rho0, &p, dt, 20.0, Method::Euler, stride).unwrap();
            e.rho
                .iter()
                .zip(&reference.rho)
                .map(|(a, b)| a.max_abs_diff(b))
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.01), err(0.005));
        let ratio = e1 / e2;
        assert!((ratio - 2.0).abs() < 0.4, "halving dt changed error by {ratio}");
    }

    #[test]
    fn oversized_euler_step_diverges() {
        let p = params(0.2, 0.2, 0.0, Coupling::SigmaZ);
        let err = propagate_lindblad(&Spinor::lower().projector(), &p, 0.5, 100.0, Method::Euler).unwrap_err();
        assert!(matches!(err, Error::Diverged { .. }));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = params(0.2, 0.2, 0.0, Coupling::SigmaZ);
        let rho = DensityMatrix2::maximally_mixed();
        assert!(propagate_lindblad(&rho, &p, 0.0, 1.0, Method::Rk4).is_err());
        let bad = DensityMatrix2::real_symmetric(0.7, 0.0, 0.7);
        assert!(propagate_lindblad(&bad, &p, 0.01, 1.0, Method::Rk4).is_err());
    }
}
