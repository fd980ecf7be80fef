//! Deterministic Gaussian noise streams and the noise-dump replay format.
//!
//! A stream is identified by `(base_seed, stream_id)` and a step `counter`.
//! The variate at a given counter is a pure function of those three numbers,
//! so trajectories can be replayed individually and run in any order.
//!
//! Noise dumps are plain text:
//!
//! ```text
//! # seed=42 stream=7
//! 0.3312...
//! -1.0471...
//! ```

use std::fmt::Write as _;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// 32-bit ChaCha words consumed per variate (two `u64` draws).
const WORDS_PER_DRAW: u128 = 4;
const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

/// Anything that yields one standard-normal variate per call.
pub trait NoiseSource {
    fn next_gaussian(&mut self) -> Result<f64>;
}

/// Counter-based standard-normal stream.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    base_seed: u64,
    stream_id: u64,
    counter: u64,
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(base_seed: u64, stream_id: u64) -> Self {
        Self::at(base_seed, stream_id, 0)
    }

    /// Stream positioned at `counter`.
    pub fn at(base_seed: u64, stream_id: u64, counter: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
        rng.set_stream(stream_id);
        rng.set_word_pos(WORDS_PER_DRAW * counter as u128);
        NoiseStream {
            base_seed,
            stream_id,
            counter,
            rng,
        }
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    fn words(&mut self) -> (u64, u64) {
        self.counter += 1;
        (self.rng.next_u64(), self.rng.next_u64())
    }

    /// Box–Muller on two fresh 53-bit uniforms; advances the counter by one.
    pub fn gaussian(&mut self) -> f64 {
        let (a, b) = self.words();
        let u1 = ((a >> 11) + 1) as f64 * TWO_POW_M53; // (0, 1]
        let u2 = (b >> 11) as f64 * TWO_POW_M53;
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform on `[0, 1)`; advances the counter by one like [`gaussian`](Self::gaussian).
    pub fn uniform(&mut self) -> f64 {
        let (a, _) = self.words();
        (a >> 11) as f64 * TWO_POW_M53
    }
}

impl NoiseSource for NoiseStream {
    fn next_gaussian(&mut self) -> Result<f64> {
        Ok(self.gaussian())
    }
}

/// A recorded noise realization.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDump {
    pub seed: u64,
    pub stream: u64,
    pub values: Vec<f64>,
}

impl NoiseDump {
    /// Records the first `n` variates of a stream.
    pub fn record(base_seed: u64, stream_id: u64, n: usize) -> Self {
        let mut s = NoiseStream::new(base_seed, stream_id);
        NoiseDump {
            seed: base_seed,
            stream: stream_id,
            values: (0..n).map(|_| s.gaussian()).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# seed={} stream={}\n", self.seed, self.stream);
        for v in &self.values {
            let _ = writeln!(out, "{v:?}");
        }
        out
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let fmt_err = |message: String| Error::Format {
            path: origin.to_path_buf(),
            message,
        };
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| fmt_err("empty noise file".into()))?;
        let (seed, stream) = parse_header(header)
            .ok_or_else(|| fmt_err(format!("bad header `{header}`")))?;
        let mut values = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line
                .parse()
                .map_err(|_| fmt_err(format!("line {}: `{line}` is not a number", i + 2)))?;
            values.push(v);
        }
        Ok(NoiseDump {
            seed,
            stream,
            values,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn replay(&self) -> Replay<'_> {
        Replay {
            values: &self.values,
            pos: 0,
        }
    }
}

fn parse_header(line: &str) -> Option<(u64, u64)> {
    let rest = line.strip_prefix('#')?.trim();
    let mut seed = None;
    let mut stream = None;
    for field in rest.split_whitespace() {
        let (k, v) = field.split_once('=')?;
        match k {
            "seed" => seed = Some(v.parse().ok()?),
            "stream" => stream = Some(v.parse().ok()?),
            _ => return None,
        }
    }
    Some((seed?, stream?))
}

/// Replays a [`NoiseDump`]; running past its end is an error.
#[derive(Debug, Clone)]
pub struct Replay<'a> {
    values: &'a [f64],
    pos: usize,
}

impl NoiseSource for Replay<'_> {
    fn next_gaussian(&mut self) -> Result<f64> {
        let v = self.values.get(self.pos).copied().ok_or_else(|| {
            Error::InvalidState(format!(
                "noise replay exhausted after {} variates",
                self.values.len()
            ))
        })?;
        self.pos += 1;
        Ok(v)
    }
}

/// Wraps a source and keeps every variate it hands out.
#[derive(Debug)]
pub struct Recorder<S> {
    inner: S,
    pub values: Vec<f64>,
}

impl<S: NoiseSource> Recorder<S> {
    pub fn new(inner: S) -> Self {
        Recorder {
            inner,
            values: Vec::new(),
        }
    }
}

impl<S: NoiseSource> NoiseSource for Recorder<S> {
    fn next_gaussian(&mut self) -> Result<f64> {
        let v = self.inner.next_gaussian()?;
        self.values.push(v);
        Ok(v)
    }
}

/// Source that always yields zero (noise-free runs).
#[derive(Debug, Clone, Copy, Default)]
pub struct Silent;

impl NoiseSource for Silent {
    fn next_gaussian(&mut self) -> Result<f64> {
        Ok(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn same_coordinates_same_variate() {
        let mut a = NoiseStream::at(11, 3, 500);
        let mut b = NoiseStream::at(11, 3, 500);
        assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
    }

    #[test]
    fn seeking_matches_sequential_draws() {
        let mut seq = NoiseStream::new(5, 9);
        let drawn: Vec<f64> = (0..100).map(|_| seq.gaussian()).collect();
        for (k, v) in drawn.iter().enumerate() {
            let mut s = NoiseStream::at(5, 9, k as u64);
            assert_eq!(s.gaussian().to_bits(), v.to_bits());
        }
        assert_eq!(seq.counter(), 100);
    }

    #[test]
    fn uniform_advances_like_gaussian() {
        let mut s = NoiseStream::new(1, 1);
        s.uniform();
        let mut t = NoiseStream::at(1, 1, 1);
        assert_eq!(s.gaussian().to_bits(), t.gaussian().to_bits());
    }

    #[test]
    fn independently_constructed_streams_agree() {
        let mut a = NoiseStream::new(2024, 17);
        let mut b = NoiseStream::new(2024, 17);
        for _ in 0..10_000 {
            assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
        }
    }

    #[test]
    fn moments_of_a_million_draws() {
        let mut s = NoiseStream::new(7, 0);
        let n = 1_000_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let x = s.gaussian();
            sum += x;
            sum2 += x * x;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn kolmogorov_smirnov_against_standard_normal() {
        let mut s = NoiseStream::new(99, 4);
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n).map(|_| s.gaussian()).collect();
        xs.sort_by(f64::total_cmp);
        let normal = Normal::standard();
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = normal.cdf(x);
                (f - i as f64 / n as f64).max((i + 1) as f64 / n as f64 - f)
            })
            .fold(0.0, f64::max);
        // Asymptotic 1% critical value.
        let critical = 1.628 / (n as f64).sqrt();
        assert!(d < critical, "KS statistic {d} >= {critical}");
    }

    #[test]
    fn distinct_streams_are_uncorrelated() {
        let n = 200_000;
        let mut a = NoiseStream::new(3, 0);
        let mut b = NoiseStream::new(3, 1);
        let c: f64 = (0..n).map(|_| a.gaussian() * b.gaussian()).sum::<f64>() / n as f64;
        // 4σ of the sample correlation.
        assert!(c.abs() < 4.0 / (n as f64).sqrt(), "correlation {c}");
    }

    #[test]
    fn dump_round_trip_is_bit_exact() {
        let dump = NoiseDump::record(123, 45, 500);
        let text = dump.to_text();
        assert!(text.starts_with("# seed=123 stream=45\n"));
        let back = NoiseDump::parse(&text, Path::new("mem")).unwrap();
        assert_eq!(back, dump);
        let mut r = back.replay();
        let mut s = NoiseStream::new(123, 45);
        for _ in 0..500 {
            assert_eq!(r.next_gaussian().unwrap().to_bits(), s.gaussian().to_bits());
        }
        assert!(r.next_gaussian().is_err());
    }

    #[test]
    fn dump_rejects_bad_header() {
        assert!(NoiseDump::parse("seed=1\n0.5\n", Path::new("x")).is_err());
        assert!(NoiseDump::parse("# seed=1\n0.5\n", Path::new("x")).is_err());
        assert!(NoiseDump::parse("# seed=1 stream=2\nabc\n", Path::new("x")).is_err());
    }

    #[test]
    fn recorder_keeps_values() {
        let mut rec = Recorder::new(NoiseStream::new(1, 2));
        let drawn: Vec<f64> = (0..10).map(|_| rec.next_gaussian().unwrap()).collect();
        assert_eq!(rec.values, drawn);
    }
}
