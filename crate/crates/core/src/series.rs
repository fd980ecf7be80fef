//! Uniformly sampled observable records.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub name: String,
    pub values: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
}

/// Observables sampled at `t[i] = t0 + i·dt`.
///
/// `truncated` is set when the run that produced the series stopped early
/// (e.g. a wavefunction spilled out of its grid).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub channels: Vec<Channel>,
    pub truncated: bool,
}

impl TimeSeries {
    pub fn new(t: Vec<f64>) -> Self {
        TimeSeries {
            t,
            channels: Vec::new(),
            truncated: false,
        }
    }

    /// `n` samples `0, dt, 2dt, …`.
    pub fn uniform(dt: f64, n: usize) -> Self {
        TimeSeries::new((0..n).map(|i| i as f64 * dt).collect())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn dt(&self) -> Option<f64> {
        (self.t.len() >= 2).then(|| self.t[1] - self.t[0])
    }

    pub fn push_channel(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        self.push_channel_with_stderr(name, values, None)
    }

    pub fn push_channel_with_stderr(
        &mut self,
        name: impl Into<String>,
        values: Vec<f64>,
        stderr: Option<Vec<f64>>,
    ) -> Result<()> {
        let name = name.into();
        if values.len() != self.t.len() || stderr.as_ref().is_some_and(|s| s.len() != self.t.len())
        {
            return Err(Error::Shape(format!(
                "channel `{name}` has {} samples, time axis has {}",
                values.len(),
                self.t.len()
            )));
        }
        if self.channel(&name).is_some() {
            return Err(Error::Shape(format!("duplicate channel `{name}`")));
        }
        self.channels.push(Channel {
            name,
            values,
            stderr,
        });
        Ok(())
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.find(name).map(|c| c.values.as_slice())
    }

    pub fn stderr(&self, name: &str) -> Option<&[f64]> {
        self.find(name).and_then(|c| c.stderr.as_deref())
    }

    fn find(&self, name: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == name)
    }

    pub fn channel_names(&self) -> impl Iterator<Item = &str> {
        self.channels.iter().map(|c| c.name.as_str())
    }

    pub fn has_stderr(&self) -> bool {
        self.channels.iter().any(|c| c.stderr.is_some())
    }

    /// Keeps the first `n` samples.
    pub fn truncate(&mut self, n: usize) {
        if n < self.t.len() {
            self.t.truncate(n);
            for c in &mut self.channels {
                c.values.truncate(n);
                if let Some(s) = &mut c.stderr {
                    s.truncate(n);
                }
            }
        }
    }

    /// Prefixes every channel name, e.g. `rho00` → `exact_rho00`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.channels {
            c.name = format!("{prefix}{}", c.name);
        }
        self
    }

    /// Appends the channels of `other`, which must share the time axis.
    pub fn merge(&mut self, other: TimeSeries) -> Result<()> {
        if other.t.len() != self.t.len()
            || other.t.iter().zip(&self.t).any(|(a, b)| (a - b).abs() > 1e-9 * b.abs().max(1.0))
        {
            return Err(Error::Shape("cannot merge series with different time axes".into()));
        }
        self.truncated |= other.truncated;
        for c in other.channels {
            self.push_channel_with_stderr(c.name, c.values, c.stderr)?;
        }
        Ok(())
    }

    /// Checks the time axis is strictly increasing with constant spacing.
    pub fn validate(&self) -> Result<()> {
        if let Some(dt) = self.dt() {
            if dt <= 0.0 {
                return Err(Error::Shape("time axis not increasing".into()));
            }
            for (i, w) in self.t.windows(2).enumerate() {
                if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.max(w[1].abs() * 1e-6) {
                    return Err(Error::Shape(format!("non-uniform spacing at sample {}", i + 1)));
                }
            }
        }
        for c in &self.channels {
            if c.values.len() != self.t.len() {
                return Err(Error::Shape(format!("channel `{}` length mismatch", c.name)));
            }
        }
        Ok(())
    }

    /// Mean of a channel over its final `fraction` of samples.
    pub fn tail_mean(&self, name: &str, fraction: f64) -> Option<f64> {
        let v = self.channel(name)?;
        let start = tail_start(v.len(), fraction);
        let tail = &v[start..];
        (!tail.is_empty()).then(|| tail.iter().sum::<f64>() / tail.len() as f64)
    }
}

pub(crate) fn tail_start(len: usize, fraction: f64) -> usize {
    let keep = ((len as f64) * fraction).round() as usize;
    len - keep.min(len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_length_checked() {
        let mut s = TimeSeries::uniform(0.1, 3);
        assert!(s.push_channel("a", vec![1.0, 2.0]).is_err());
        s.push_channel("a", vec![1.0, 2.0, 3.0]).unwrap();
        assert!(s.push_channel("a", vec![1.0, 2.0, 3.0]).is_err());
        assert_eq!(s.channel("a"), Some(&[1.0, 2.0, 3.0][..]));
        s.validate().unwrap();
    }

    #[test]
    fn non_uniform_axis_rejected() {
        let s = TimeSeries::new(vec![0.0, 0.1, 0.3]);
        assert!(s.validate().is_err());
        let s = TimeSeries::new(vec![0.0, 0.0]);
        assert!(s.validate().is_err());
    }

    #[test]
    fn tail_mean_uses_final_fraction() {
        let mut s = TimeSeries::uniform(1.0, 8);
        s.push_channel("x", (0..8).map(f64::from).collect()).unwrap();
        assert_eq!(s.tail_mean("x", 0.25), Some(6.5));
        assert_eq!(s.tail_mean("x", 1.0), Some(3.5));
    }

    #[test]
    fn truncate_shortens_everything() {
        let mut s = TimeSeries::uniform(1.0, 4);
        s.push_channel_with_stderr("x", vec![1.0; 4], Some(vec![0.1; 4]))
            .unwrap();
        s.truncate(2);
        assert_eq!(s.len(), 2);
        assert_eq!(s.stderr("x").unwrap().len(), 2);
    }
}
