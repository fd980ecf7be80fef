//! Post-processing of time series: periods, trends, rank correlation and
//! equilibration checks.

use crate::series::{tail_start, TimeSeries};

/// Mean spacing of successive upward zero crossings of `y(t)` (linearly
/// interpolated), or `None` with fewer than two crossings.
pub fn zero_crossing_period(t: &[f64], y: &[f64]) -> Option<f64> {
    let crossings: Vec<f64> = (1..y.len().min(t.len()))
        .filter(|&i| y[i - 1] < 0.0 && y[i] >= 0.0)
        .map(|i| t[i - 1] - y[i - 1] * (t[i] - t[i - 1]) / (y[i] - y[i - 1]))
        .collect();
    (crossings.len() >= 2)
        .then(|| (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}

/// Least-squares slope of `y` against `x`.
pub fn linear_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for i in 0..n {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Average ranks (ties share the mean rank).
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation; `None` for fewer than two points or constant input.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    pearson(&ranks(&x[..n]), &ranks(&y[..n]))
}

/// Whether an (averaged) energy record has settled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibrationReport {
    /// The run stopped early (spill), itself a sign of runaway heating.
    pub truncated: bool,
    /// Time of the last sample.
    pub t_end: f64,
    /// Mean over the final quarter.
    pub tail_mean: f64,
    /// Final-quarter mean minus third-quarter mean.
    pub drift: f64,
    /// Drift above which the record counts as still rising.
    pub drift_threshold: f64,
    pub equilibrated: bool,
}

/// Relative drift tolerated when no standard errors are available.
const RELATIVE_DRIFT: f64 = 0.01;

/// Checks a channel for equilibration: the run must be complete and the
/// mean of its final quarter may not exceed the mean of the third quarter by
/// more than three standard errors (or 1% when the series has none).
pub fn equilibration(series: &TimeSeries, channel: &str) -> Option<EquilibrationReport> {
    let v = series.channel(channel)?;
    let n = v.len();
    if n < 4 {
        return None;
    }
    let q4 = tail_start(n, 0.25);
    let q3 = tail_start(n, 0.5);
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let (third, last) = (mean(&v[q3..q4]), mean(&v[q4..]));
    let se = series
        .stderr(channel)
        .map(|s| mean(&s[q3..]))
        .filter(|&s| s > 0.0);
    let threshold = match se {
        Some(se) => 3.0 * se * std::f64::consts::SQRT_2,
        None => RELATIVE_DRIFT * last.abs(),
    };
    let drift = last - third;
    Some(EquilibrationReport {
        truncated: series.truncated,
        t_end: series.t[n - 1],
        tail_mean: last,
        drift,
        drift_threshold: threshold,
        equilibrated: !series.truncated && drift <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_of_a_cosine() {
        let t: Vec<f64> = (0..20_000).map(|i| i as f64 * 0.01).collect();
        let y: Vec<f64> = t.iter().map(|t| (0.5 * t).sin()).collect();
        let p = zero_crossing_period(&t, &y).unwrap();
        assert!((p - 4.0 * std::f64::consts::PI).abs() < 1e-4);
        assert_eq!(zero_crossing_period(&t[..10], &y[..10]), None);
    }

    #[test]
    fn spearman_extremes() {
        let x: Vec<f64> = (0..50).map(f64::from).collect();
        let up: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        let down: Vec<f64> = x.iter().map(|v| -v.exp()).collect();
        assert!((spearman(&x, &up).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman(&x, &down).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(spearman(&x, &vec![1.0; 50]), None);
    }

    #[test]
    fn ties_share_ranks() {
        assert_eq!(ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn slope_of_a_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        assert!((linear_slope(&x, &y).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rising_series_is_not_equilibrated() {
        let mut s = TimeSeries::uniform(1.0, 100);
        s.push_channel("e", (0..100).map(|i| 1.0 + 0.01 * i as f64).collect()).unwrap();
        assert!(!equilibration(&s, "e").unwrap().equilibrated);
        let mut flat = TimeSeries::uniform(1.0, 100);
        flat.push_channel("e", vec![0.6; 100]).unwrap();
        assert!(equilibration(&flat, "e").unwrap().equilibrated);
        flat.truncated = true;
        assert!(!equilibration(&flat, "e").unwrap().equilibrated);
    }
}
