//! Chebyshev expansion of the short-time propagator `e^{−iH·dt}` for
//! `H = p²/2μ + V(q)` with a frozen potential.
//!
//! With the spectrum of `H` inside `[Emin, Emax]`, `ē = (Emax + Emin)/2` and
//! `R = (Emax − Emin)·dt/2`,
//!
//! ```text
//! e^{−iH dt} = e^{−iē dt} Σₙ (2 − δₙ₀)(−i)ⁿ Jₙ(R) Tₙ(X),   X = (H − ē)/((Emax − Emin)/2)
//! ```
//!
//! and `Tₙ(X)ψ` follows from the three-term recurrence.

use num_complex::Complex64 as c64;

use super::bessel::bessel_j_sequence;
use super::{Grid, GridState};
use crate::error::{Error, Result};

/// Coefficients below this magnitude end the expansion.
const COEFF_TOL: f64 = 1e-12;
/// Relative padding of the spectral interval on each side.
const SPECTRAL_PAD: f64 = 0.05;
/// Upper limit on expansion terms; exceeding it means the bounds are unusable.
pub const MAX_CHEBYSHEV_TERMS: usize = 10_000;
/// Norm change per step that exposes an expansion run outside its bounds.
const NORM_CHECK: f64 = 1e-9;

/// Diagnostics of the last step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChebyshevStats {
    /// Expansion argument `R = ΔE·dt/2`.
    pub radius: f64,
    pub terms: usize,
    pub emin: f64,
    pub emax: f64,
}

/// Reusable propagator with its own work buffers.
#[derive(Debug, Clone)]
pub struct ChebyshevPropagator {
    grid: Grid,
    mu: f64,
    /// `k²/2μ` per momentum component.
    kinetic: Vec<f64>,
    kin_scaled: Vec<f64>,
    pot_scaled: Vec<f64>,
    prev: Vec<c64>,
    cur: Vec<c64>,
    next: Vec<c64>,
    acc: Vec<c64>,
    scratch: Vec<c64>,
}

impl ChebyshevPropagator {
    pub fn new(grid: &Grid, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::param("mu", format!("must be > 0, got {mu}")));
        }
        let n = grid.ng();
        let zero = c64::new(0.0, 0.0);
        Ok(ChebyshevPropagator {
            grid: grid.clone(),
            mu,
            kinetic: grid.k_values().iter().map(|k| k * k / (2.0 * mu)).collect(),
            kin_scaled: vec![0.0; n],
            pot_scaled: vec![0.0; n],
            prev: vec![zero; n],
            cur: vec![zero; n],
            next: vec![zero; n],
            acc: vec![zero; n],
            scratch: Vec::new(),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Spectral bounds of `T + V`, padded on both sides.
    pub fn spectral_bounds(&self, potential: &[f64]) -> (f64, f64) {
        let (vmin, vmax) = potential
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let tmax = self.grid.k_max().powi(2) / (2.0 * self.mu);
        let (lo, hi) = (vmin, vmax + tmax);
        let pad = SPECTRAL_PAD * (hi - lo);
        (lo - pad, hi + pad)
    }

    /// Propagates `psi` in place by `e^{−iH·dt}` with `H = T + diag(potential)`.
    pub fn step(&mut self, psi: &mut [c64], potential: &[f64], dt: f64) -> Result<ChebyshevStats> {
        let (emin, emax) = self.spectral_bounds(potential);
        self.step_with_bounds(psi, potential, dt, emin, emax)
    }

    /// As [`step`](Self::step) with caller-supplied spectral bounds.
    pub fn step_with_bounds(
        &mut self,
        psi: &mut [c64],
        potential: &[f64],
        dt: f64,
        emin: f64,
        emax: f64,
    ) -> Result<ChebyshevStats> {
        let n = self.grid.ng();
        if psi.len() != n || potential.len() != n {
            return Err(Error::Shape(format!(
                "grid has {n} points, got {} amplitudes and {} potential values",
                psi.len(),
                potential.len()
            )));
        }
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", format!("must be finite and >= 0, got {dt}")));
        }
        if !(emin.is_finite() && emax.is_finite() && emax > emin) {
            return Err(Error::SpectralBound {
                radius: f64::NAN,
                terms: 0,
            });
        }
        let mut stats = ChebyshevStats {
            radius: 0.0,
            terms: 1,
            emin,
            emax,
        };
        if dt == 0.0 {
            return Ok(stats);
        }
        let half = 0.5 * (emax - emin);
        let center = 0.5 * (emax + emin);
        let radius = half * dt;
        stats.radius = radius;
        let j = bessel_j_sequence(radius, COEFF_TOL);
        if j.len() > MAX_CHEBYSHEV_TERMS {
            return Err(Error::SpectralBound {
                radius,
                terms: j.len(),
            });
        }
        stats.terms = j.len();

        let inv_n = 1.0 / n as f64;
        for (s, &t) in self.kin_scaled.iter_mut().zip(&self.kinetic) {
            *s = t / half * inv_n;
        }
        for (s, &v) in self.pot_scaled.iter_mut().zip(potential) {
            *s = (v - center) / half;
        }
        let norm_before: f64 = psi.iter().map(|z| z.norm_sqr()).sum();

        self.prev.copy_from_slice(psi);
        for (a, &p) in self.acc.iter_mut().zip(psi.iter()) {
            *a = p * j[0];
        }
        if j.len() > 1 {
            let src = std::mem::take(&mut self.prev);
            let mut dst = std::mem::take(&mut self.cur);
            self.apply_x(&src, &mut dst);
            self.prev = src;
            self.cur = dst;
            let c = c64::new(0.0, -2.0 * j[1]);
            for (a, &v) in self.acc.iter_mut().zip(&self.cur) {
                *a += c * v;
            }
        }
        // (−i)ⁿ cycles through 1, −i, −1, i.
        const PHASES: [c64; 4] = [
            c64::new(1.0, 0.0),
            c64::new(0.0, -1.0),
            c64::new(-1.0, 0.0),
            c64::new(0.0, 1.0),
        ];
        for (order, &jn) in j.iter().enumerate().skip(2) {
            let src = std::mem::take(&mut self.cur);
            let mut dst = std::mem::take(&mut self.next);
            self.apply_x(&src, &mut dst);
            self.cur = src;
            self.next = dst;
            let c = PHASES[order % 4] * (2.0 * jn);
            for ((nx, &pv), a) in self.next.iter_mut().zip(&self.prev).zip(self.acc.iter_mut()) {
                *nx = 2.0 * *nx - pv;
                *a += c * *nx;
            }
            std::mem::swap(&mut self.prev, &mut self.cur);
            std::mem::swap(&mut self.cur, &mut self.next);
        }

        let global = c64::from_polar(1.0, -center * dt);
        for (p, &a) in psi.iter_mut().zip(&self.acc) {
            *p = a * global;
        }
        let norm_after: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !norm_after.is_finite() || (norm_after - norm_before).abs() > NORM_CHECK * norm_before {
            return Err(Error::SpectralBound {
                radius,
                terms: j.len(),
            });
        }
        Ok(stats)
    }

    /// `dst = X·src` with `X = (T + V − ē)/half` (scalings precomputed).
    fn apply_x(&mut self, src: &[c64], dst: &mut [c64]) {
        dst.copy_from_slice(src);
        self.grid.fft(dst, &mut self.scratch);
        for (d, &s) in dst.iter_mut().zip(&self.kin_scaled) {
            *d *= s;
        }
        self.grid.ifft(dst, &mut self.scratch);
        for ((d, &s), &v) in dst.iter_mut().zip(src).zip(&self.pot_scaled) {
            *d += s * v;
        }
    }
}

/// One Chebyshev step of `state` under the frozen `potential` (values on the grid).
pub fn chebyshev_step(state: &GridState, potential: &[f64], mu: f64, dt: f64) -> Result<GridState> {
    let mut prop = ChebyshevPropagator::new(&state.grid, mu)?;
    let mut next = state.clone();
    prop.step(&mut next.psi, potential, dt)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, expect_observables, gaussian_state, Potential};
    use nalgebra::{DMatrix, SymmetricEigen};

    fn harmonic(grid: &Grid, k: f64) -> Vec<f64> {
        grid.q_values().iter().map(|q| 0.5 * k * q * q).collect()
    }

    /// `e^{−iH dt}ψ` by full diagonalization of the dense grid Hamiltonian.
    fn dense_propagate(grid: &Grid, v: &[f64], mu: f64, dt: f64, psi: &[c64]) -> Vec<c64> {
        let n = grid.ng();
        let mut h = DMatrix::<f64>::zeros(n, n);
        for col in 0..n {
            let mut e = vec![c64::new(0.0, 0.0); n];
            e[col] = c64::new(1.0, 0.0);
            let t = grid.apply_kinetic(&e, mu);
            for row in 0..n {
                assert!(t[row].im.abs() < 1e-12);
                h[(row, col)] = t[row].re;
            }
            h[(col, col)] += v[col];
        }
        let h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut out = vec![c64::new(0.0, 0.0); n];
        for (m, &lambda) in eig.eigenvalues.iter().enumerate() {
            let vec = eig.eigenvectors.column(m);
            let overlap: c64 = (0..n).map(|i| psi[i] * vec[i]).sum();
            let phase = c64::from_polar(1.0, -lambda * dt) * overlap;
            for i in 0..n {
                out[i] += phase * vec[i];
            }
        }
        out
    }

    fn sup_diff(a: &[c64], b: &[c64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn one_step_matches_dense_diagonalization() {
        let g = build_grid(-5.0, 5.0, 32).unwrap();
        let v = harmonic(&g, 1.0);
        let psi0 = gaussian_state(&g, 1.0, 1.0).unwrap().boosted(0.4);
        for dt in [0.01, 0.1, 1.0] {
            let cheb = chebyshev_step(&psi0, &v, 1.0, dt).unwrap();
            let dense = dense_propagate(&g, &v, 1.0, dt, &psi0.psi);
            let d = sup_diff(&cheb.psi, &dense);
            assert!(d < 1e-9, "dt={dt}: sup diff {d}");
            assert!((cheb.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_step_is_identity() {
        let g = build_grid(-5.0, 5.0, 56).unwrap();
        let psi0 = gaussian_state(&g, 1.0, 1.0).unwrap();
        let out = chebyshev_step(&psi0, &harmonic(&g, 1.0), 1.0, 0.0).unwrap();
        assert!(sup_diff(&out.psi, &psi0.psi) < 1e-14);
    }

    #[test]
    fn one_period_returns_displaced_packet() {
        let g = build_grid(-5.0, 5.0, 56).unwrap();
        let v = harmonic(&g, 1.0);
        let mut state = gaussian_state(&g, 1.0, 1.0).unwrap();
        let mut prop = ChebyshevPropagator::new(&g, 1.0).unwrap();
        for _ in 0..628 {
            prop.step(&mut state.psi, &v, 0.01).unwrap();
        }
        let o = expect_observables(&state, 1.0, &Potential::Harmonic { k: 1.0 }).unwrap();
        assert!((o.q - 1.0).abs() < 1e-3, "<q> = {}", o.q);
    }

    #[test]
    fn norm_drift_over_ten_thousand_steps() {
        let g = build_grid(-5.0, 5.0, 56).unwrap();
        let v = harmonic(&g, 1.0);
        let mut state = gaussian_state(&g, 1.0, 1.0).unwrap().boosted(0.5);
        let mut prop = ChebyshevPropagator::new(&g, 1.0).unwrap();
        let mut worst_step = 0.0f64;
        for _ in 0..10_000 {
            let before = state.norm();
            prop.step(&mut state.psi, &v, 0.01).unwrap();
            worst_step = worst_step.max((state.norm() - before).abs());
        }
        assert!(worst_step <= 1e-12, "per-step drift {worst_step}");
        assert!((state.norm() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn too_tight_bounds_are_detected() {
        let g = build_grid(-5.0, 5.0, 56).unwrap();
        let v = harmonic(&g, 1.0);
        let mut state = gaussian_state(&g, 1.0, 1.0).unwrap().boosted(3.0);
        let mut prop = ChebyshevPropagator::new(&g, 1.0).unwrap();
        let r = prop.step_with_bounds(&mut state.psi, &v, 0.5, 0.0, 1.0);
        assert!(matches!(r, Err(Error::SpectralBound { .. })), "{r:?}");
    }

    #[test]
    fn shape_mismatch_rejected() {
        let g = build_grid(-5.0, 5.0, 56).unwrap();
        let state = gaussian_state(&g, 0.0, 1.0).unwrap();
        assert!(matches!(
            chebyshev_step(&state, &[0.0; 10], 1.0, 0.01),
            Err(Error::Shape(_))
        ));
    }
}
