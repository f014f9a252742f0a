use serde::Serialize;

/// Least-squares line through `(log x, log y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for exactly two points.
    pub std_error: f64,
    /// 95% band from Student's t with `n − 2` degrees of freedom.
    pub band: (f64, f64),
    pub points: usize,
}

// two-sided 97.5% quantiles for 1..=10 degrees of freedom
const T975: [f64; 10] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
];

/// Fits `log y = a + b log x`; `None` with fewer than two usable points
/// (both coordinates finite and positive).
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<SlopeFit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (std_error, half) = if n > 2 {
        let rss: f64 = pts
            .iter()
            .map(|p| (p.1 - intercept - slope * p.0).powi(2))
            .sum();
        let se = (rss / (n - 2) as f64 / sxx).sqrt();
        let t = T975.get(n - 3).copied().unwrap_or(1.96);
        (se, t * se)
    } else {
        (0.0, 0.0)
    };
    Some(SlopeFit {
        slope,
        intercept,
        std_error,
        band: (slope - half, slope + half),
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [1e-2, 5e-3, 2.5e-3];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x).collect();
        let f = fit_slope(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-10);
        assert!(f.std_error < 1e-10);
    }

    #[test]
    fn noisy_band_covers() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys = [1.0, 2.1, 3.9, 8.2];
        let f = fit_slope(&xs, &ys).unwrap();
        assert!(f.band.0 < 1.0 && 1.0 < f.band.1);
        assert!(fit_slope(&[1.0], &[1.0]).is_none());
        assert!(fit_slope(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }
}
