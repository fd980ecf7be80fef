use crate::error::{Error, Result};

/// External potential `V(q)` acting on the particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    /// `½k·q²`; `k = 0` is a free particle.
    Harmonic { k: f64 },
    /// `De·(1 − e^{−a(q − q0)})²`.
    Morse { de: f64, a: f64, q0: f64 },
}

impl Potential {
    pub fn morse(de: f64, a: f64, q0: f64) -> Result<Self> {
        let p = Potential::Morse { de, a, q0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Potential::Harmonic { k } if !k.is_finite() => {
                Err(Error::param("langevin.k", "must be finite"))
            }
            Potential::Morse { de, a, q0 } => {
                if !(de > 0.0 && de.is_finite()) {
                    return Err(Error::param("langevin.De", format!("must be > 0, got {de}")));
                }
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::param("langevin.a", format!("must be > 0, got {a}")));
                }
                if !q0.is_finite() {
                    return Err(Error::param("langevin.q0_morse", "must be finite"));
                }
                Ok(())
            }
            Potential::Harmonic { .. } => Ok(()),
        }
    }

    pub fn value(&self, q: f64) -> f64 {
        match *self {
            Potential::Harmonic { k } => 0.5 * k * q * q,
            Potential::Morse { de, a, q0 } => {
                let s = 1.0 - (-a * (q - q0)).exp();
                de * s * s
            }
        }
    }

    /// `V'(q)`.
    pub fn derivative(&self, q: f64) -> f64 {
        match *self {
            Potential::Harmonic { k } => k * q,
            Potential::Morse { de, a, q0 } => {
                let e = (-a * (q - q0)).exp();
                2.0 * de * a * e * (1.0 - e)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Potential::Harmonic { .. } => "harmonic",
            Potential::Morse { .. } => "morse",
        }
    }
}
