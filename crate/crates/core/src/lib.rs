//! Stochastic Schrödinger and quantum Langevin simulations of open quantum
//! systems: a two-level system under Lindblad dephasing, and a particle on a
//! grid coupled to a frictional thermal bath.

pub mod analysis;
pub mod classical;
pub mod config;
pub mod csv_io;
pub mod ensemble;
pub mod error;
pub mod grid;
pub mod noise;
pub mod runner;
pub mod series;
pub mod two_level;
pub mod types;

pub use error::{Error, Result};
pub use noise::{NoiseDump, NoiseSource, NoiseStream};
pub use runner::{run_config, RunOutput};
pub use series::TimeSeries;
pub use types::{BlochVector, DensityMatrix2, Op2, Spinor};
