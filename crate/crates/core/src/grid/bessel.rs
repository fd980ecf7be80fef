//! Bessel functions of the first kind for the Chebyshev expansion coefficients.

/// Magnitude at which the backward recurrence is rescaled.
const RESCALE_ABOVE: f64 = 1e250;

/// `J_0(x), …, J_N(x)` for `x ≥ 0`, truncated after the first index `N > x`
/// with `|J_N(x)| < tol`.
///
/// Uses Miller's backward recurrence `J_{n−1} = (2n/x)·J_n − J_{n+1}` started
/// well beyond the truncation point and normalized with
/// `J_0 + 2·Σ J_{2k} = 1`.
pub fn bessel_j_sequence(x: f64, tol: f64) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "bessel argument must be finite and >= 0");
    if x == 0.0 {
        return vec![1.0];
    }
    let start = miller_start(x, tol);
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-300;
    for n in (1..=start).rev() {
        j[n - 1] = (2.0 * n as f64 / x) * j[n] - j[n + 1];
        if j[n - 1].abs() > RESCALE_ABOVE {
            for v in &mut j[n - 1..] {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    let norm = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
    for v in &mut j {
        *v /= norm;
    }
    let cut = (0..j.len())
        .find(|&n| n as f64 > x && j[n].abs() < tol)
        .unwrap_or(j.len() - 1);
    j.truncate(cut + 1);
    j
}

/// Starting index where the ascending-series estimate `(x/2)^n/n!` has fallen
/// far below `tol`, plus a safety margin for the recurrence to settle.
fn miller_start(x: f64, tol: f64) -> usize {
    let target = tol.min(1e-16).ln() - 30.0;
    let mut n = x.ceil() as usize + 1;
    let mut log_term = n as f64 * (0.5 * x).ln() - ln_factorial(n);
    while log_term > target {
        n += 1;
        log_term += (0.5 * x).ln() - (n as f64).ln();
    }
    n + 20 + (x.cbrt() * 4.0) as usize
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ascending series `Σ (−x²/4)^m / (m!(m+n)!)·(x/2)^n`.
    fn series(n: usize, x: f64) -> f64 {
        let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
        let mut sum = term;
        for m in 1..200 {
            term *= -0.25 * x * x / (m as f64 * (m + n) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        sum
    }

    #[test]
    fn matches_power_series() {
        for &x in &[1e-6, 0.05, 0.9, 2.5, 7.0] {
            let j = bessel_j_sequence(x, 1e-14);
            for (n, &v) in j.iter().enumerate() {
                assert!((v - series(n, x)).abs() < 1e-13, "J_{n}({x}) = {v} vs {}", series(n, x));
            }
        }
    }

    #[test]
    fn known_values() {
        let j = bessel_j_sequence(1.0, 1e-15);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((j[1] - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert_eq!(bessel_j_sequence(0.0, 1e-12), vec![1.0]);
    }

    #[test]
    fn large_argument_is_normalized_and_truncated() {
        let x = 150.0;
        let j = bessel_j_sequence(x, 1e-12);
        let sum = j[0] + 2.0 * j.iter().skip(2).step_by(2).sum::<f64>();
        assert!((sum - 1.0).abs() < 1e-12);
        let last = j.len() - 1;
        assert!(last as f64 > x && j[last].abs() < 1e-12);
        // Parseval-type identity J_0² + 2ΣJ_n² = 1.
        let sq = j[0] * j[0] + 2.0 * j.iter().skip(1).map(|v| v * v).sum::<f64>();
        assert!((sq - 1.0).abs() < 1e-12);
    }
}
