//! Two-level value types: spinors, 2×2 operators, density matrices and Bloch vectors.

use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64 as c64;

use crate::error::{Error, Result};

const ZERO: c64 = c64::new(0.0, 0.0);
const ONE: c64 = c64::new(1.0, 0.0);
const I: c64 = c64::new(0.0, 1.0);

/// Tolerances that define a valid [`DensityMatrix2`].
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Dense 2×2 complex operator, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Op2(pub [[c64; 2]; 2]);

impl Op2 {
    pub const fn zero() -> Self {
        Op2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Op2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn sigma_x() -> Self {
        Op2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn sigma_y() -> Self {
        Op2([[ZERO, c64::new(0.0, -1.0)], [I, ZERO]])
    }

    pub const fn sigma_z() -> Self {
        Op2([[ONE, ZERO], [ZERO, c64::new(-1.0, 0.0)]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Op2([
            [c64::new(m[0][0], 0.0), c64::new(m[0][1], 0.0)],
            [c64::new(m[1][0], 0.0), c64::new(m[1][1], 0.0)],
        ])
    }

    pub fn scale(self, s: c64) -> Self {
        let m = self.0;
        Op2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_re(self, s: f64) -> Self {
        self.scale(c64::new(s, 0.0))
    }

    pub fn adjoint(self) -> Self {
        let m = self.0;
        Op2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> c64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn commutator(self, other: Op2) -> Op2 {
        self * other - other * self
    }

    pub fn apply(&self, v: [c64; 2]) -> [c64; 2] {
        let m = self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let m = self.0;
        let mean = 0.5 * (m[0][0].re + m[1][1].re);
        let half_gap = 0.5 * (m[0][0].re - m[1][1].re);
        let r = (half_gap * half_gap + m[0][1].norm_sqr()).sqrt();
        [mean - r, mean + r]
    }
}

impl Add for Op2 {
    type Output = Op2;
    fn add(self, rhs: Op2) -> Op2 {
        let (a, b) = (self.0, rhs.0);
        Op2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl AddAssign for Op2 {
    fn add_assign(&mut self, rhs: Op2) {
        *self = *self + rhs;
    }
}

impl Sub for Op2 {
    type Output = Op2;
    fn sub(self, rhs: Op2) -> Op2 {
        self + rhs.scale_re(-1.0)
    }
}

impl Mul for Op2 {
    type Output = Op2;
    fn mul(self, rhs: Op2) -> Op2 {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Op2(out)
    }
}

/// Pure two-level state `c0|0⟩ + c1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub c0: c64,
    pub c1: c64,
}

impl Spinor {
    pub const fn new(c0: c64, c1: c64) -> Self {
        Spinor { c0, c1 }
    }

    pub const fn upper() -> Self {
        Spinor::new(ONE, ZERO)
    }

    pub const fn lower() -> Self {
        Spinor::new(ZERO, ONE)
    }

    pub fn from_real(a: f64, b: f64) -> Self {
        Spinor::new(c64::new(a, 0.0), c64::new(b, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    pub fn normalized(self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState("spinor has zero or non-finite norm".into()));
        }
        Ok(Spinor::new(self.c0 / n, self.c1 / n))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix2 {
        DensityMatrix2(Op2([
            [c64::new(self.c0.norm_sqr(), 0.0), self.c0 * self.c1.conj()],
            [self.c1 * self.c0.conj(), c64::new(self.c1.norm_sqr(), 0.0)],
        ]))
    }

    pub fn apply(self, op: &Op2) -> Spinor {
        let [c0, c1] = op.apply([self.c0, self.c1]);
        Spinor { c0, c1 }
    }
}

/// Reduced density matrix of a two-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2(pub Op2);

impl DensityMatrix2 {
    pub fn from_entries(rho00: c64, rho01: c64, rho10: c64, rho11: c64) -> Self {
        DensityMatrix2(Op2([[rho00, rho01], [rho10, rho11]]))
    }

    /// Real symmetric matrix `[[a, b], [b, d]]`.
    pub fn real_symmetric(a: f64, b: f64, d: f64) -> Self {
        DensityMatrix2(Op2::from_real([[a, b], [b, d]]))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix2(Op2::identity().scale_re(0.5))
    }

    pub fn rho00(&self) -> c64 {
        self.0 .0[0][0]
    }
    pub fn rho01(&self) -> c64 {
        self.0 .0[0][1]
    }
    pub fn rho10(&self) -> c64 {
        self.0 .0[1][0]
    }
    pub fn rho11(&self) -> c64 {
        self.0 .0[1][1]
    }

    pub fn op(&self) -> Op2 {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.0.hermitian_eigenvalues()[0]
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Checks hermiticity, unit trace and positivity at the module tolerances.
    pub fn validate(&self) -> Result<()> {
        let m = self.0 .0;
        let herm = (m[1][0] - m[0][1].conj())
            .norm()
            .max(m[0][0].im.abs())
            .max(m[1][1].im.abs());
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix not Hermitian (residual {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("density matrix trace {tr} != 1")));
        }
        let lmin = self.min_eigenvalue();
        if lmin < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix not positive (eigenvalue {lmin:e})"
            )));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix2) -> f64 {
        (self.0 - other.0).max_abs()
    }
}

/// Half-Pauli expectations `(ρx, ρy, ρz)` with `ρ = I/2 + ρx σx + ρy σy + ρz σz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl BlochVector {
    pub const fn new(rx: f64, ry: f64, rz: f64) -> Self {
        BlochVector { rx, ry, rz }
    }

    pub fn norm(&self) -> f64 {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.rx, self.ry, self.rz]
    }
}

pub fn bloch_from_dm(rho: &DensityMatrix2) -> BlochVector {
    let (r01, r10) = (rho.rho01(), rho.rho10());
    BlochVector {
        rx: 0.5 * (r01 + r10).re,
        ry: (0.5 * I * (r01 - r10)).re,
        rz: 0.5 * (rho.rho00() - rho.rho11()).re,
    }
}

pub fn dm_from_bloch(b: &BlochVector) -> Result<DensityMatrix2> {
    if b.norm() > 0.5 + POSITIVITY_TOL {
        return Err(Error::InvalidState(format!(
            "Bloch vector length {} exceeds 1/2",
            b.norm()
        )));
    }
    let op = Op2::identity().scale_re(0.5)
        + Op2::sigma_x().scale_re(b.rx)
        + Op2::sigma_y().scale_re(b.ry)
        + Op2::sigma_z().scale_re(b.rz);
    Ok(DensityMatrix2(op))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn maximally_mixed_has_zero_bloch_vector() {
        let b = bloch_from_dm(&DensityMatrix2::maximally_mixed());
        assert_eq!(b, BlochVector::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn upper_population_maps_to_half_z() {
        let b = bloch_from_dm(&DensityMatrix2::real_symmetric(1.0, 0.0, 0.0));
        assert_eq!(b.rz, 0.5);
        let rho = dm_from_bloch(&BlochVector::new(0.0, 0.0, 0.5)).unwrap();
        assert_eq!(rho, DensityMatrix2::real_symmetric(1.0, 0.0, 0.0));
    }

    #[test]
    fn real_coherence_maps_to_x() {
        let rho = DensityMatrix2::real_symmetric(0.5, 0.2, 0.5);
        let b = bloch_from_dm(&rho);
        assert!((b.rx - 0.2).abs() < 1e-15 && b.ry == 0.0 && b.rz == 0.0);
        let back = dm_from_bloch(&BlochVector::new(0.2, 0.0, 0.0)).unwrap();
        assert!(back.max_abs_diff(&rho) < 1e-15);
        assert_eq!(
            dm_from_bloch(&BlochVector::new(0.0, 0.0, 0.0)).unwrap(),
            DensityMatrix2::maximally_mixed()
        );
    }

    #[test]
    fn imaginary_coherence_sign() {
        // ρ01 = rx − i·ry
        let rho = dm_from_bloch(&BlochVector::new(0.0, 0.3, 0.0)).unwrap();
        assert!((rho.rho01() - c64::new(0.0, -0.3)).norm() < 1e-15);
    }

    #[test]
    fn overlong_bloch_vector_rejected() {
        let err = dm_from_bloch(&BlochVector::new(0.4, 0.4, 0.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidState(_)));
    }

    #[test]
    fn validate_catches_each_violation() {
        assert!(DensityMatrix2::real_symmetric(0.6, 0.0, 0.6).validate().is_err());
        assert!(DensityMatrix2::real_symmetric(0.5, 0.6, 0.5).validate().is_err());
        let non_herm = DensityMatrix2::from_entries(
            c64::new(0.5, 0.0),
            c64::new(0.1, 0.1),
            c64::new(0.1, 0.1),
            c64::new(0.5, 0.0),
        );
        assert!(non_herm.validate().is_err());
        assert!(Spinor::from_real(0.6, 0.8).projector().validate().is_ok());
    }

    #[test]
    fn projector_is_rank_one() {
        let p = Spinor::new(c64::new(0.6, 0.0), c64::new(0.0, 0.8)).projector();
        let [l0, l1] = p.op().hermitian_eigenvalues();
        assert!(l0.abs() < 1e-15 && (l1 - 1.0).abs() < 1e-15);
        assert!((p.purity() - 1.0).abs() < 1e-15);
    }

    fn valid_dm() -> impl Strategy<Value = DensityMatrix2> {
        // Uniform direction times a radius in [0, 1/2].
        (0.0..1.0f64, 0.0..std::f64::consts::TAU, -1.0..1.0f64).prop_map(|(r, phi, cz)| {
            let s = (1.0 - cz * cz).sqrt();
            let b = BlochVector::new(
                0.5 * r * s * phi.cos(),
                0.5 * r * s * phi.sin(),
                0.5 * r * cz,
            );
            dm_from_bloch(&b).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn bloch_round_trip(rho in valid_dm()) {
            prop_assert!(rho.validate().is_ok());
            let back = dm_from_bloch(&bloch_from_dm(&rho)).unwrap();
            prop_assert!(back.max_abs_diff(&rho) < 1e-14);
            prop_assert!(bloch_from_dm(&rho).norm() <= 0.5 + 1e-10);
        }
    }
}
