//! Ordinary least squares in log–log coordinates.

/// Result of fitting log y = log c + e·log x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

/// Fits `y ≈ c·x^e` over pairs with positive coordinates; `None` if fewer
/// than two such pairs or all abscissae coincide.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Option<LogLogFit> {
    #[allow(unused_imports)]
    use num_traits::Float;
    let pts: alloc::vec::Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let e = sxy / sxx;
    let b = my - e * mx;
    let ss: f64 = pts.iter().map(|p| (p.1 - b - e * p.0).powi(2)).sum();
    Some(LogLogFit {
        exponent: e,
        log_prefactor: b,
        residual: (ss / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [0.5, 0.25, 0.125, 0.0625];
        let ys: alloc::vec::Vec<f64> = xs.iter().map(|x: &f64| 3.0 * num_traits::Float::powf(*x, 0.7)).collect();
        let f = fit_loglog(&xs, &ys).unwrap();
        assert!((f.exponent - 0.7).abs() < 1e-12);
        assert!((num_traits::Float::exp(f.log_prefactor) - 3.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!(fit_loglog(&[1.0], &[1.0]).is_none());
    }
}
