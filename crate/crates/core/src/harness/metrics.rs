use serde::Serialize;

use crate::error::{Error, Result};

pub const HISTOGRAM_BINS: usize = 20;

/// `100 |pred - truth| / |truth|`, or `100 |pred - truth|` when `|truth| ≤ ε`.
pub fn percentage_error(pred: f64, truth: f64, epsilon: f64) -> f64 {
    debug_assert!(epsilon > 0.0);
    let gap = (pred - truth).abs();
    if truth.abs() > epsilon {
        100.0 * gap / truth.abs()
    } else {
        100.0 * gap
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorMetrics {
    pub max_abs: f64,
    pub rmse: f64,
}

/// Maximum absolute deviation and root-mean-square deviation.
pub fn error_metrics(preds: &[f64], truths: &[f64]) -> Result<ErrorMetrics> {
    if preds.is_empty() {
        return Err(Error::invalid("error metrics need at least one point"));
    }
    if preds.len() != truths.len() {
        return Err(Error::invalid(format!(
            "{} predictions against {} reference values",
            preds.len(),
            truths.len()
        )));
    }
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0;
    for (p, t) in preds.iter().zip(truths) {
        let gap = (p - t).abs();
        max_abs = max_abs.max(gap);
        sum_sq += gap * gap;
    }
    Ok(ErrorMetrics {
        max_abs,
        rmse: (sum_sq / preds.len() as f64).sqrt(),
    })
}

/// Equal-width histogram over `[0, max]`.
///
/// `density` integrates to one over the bins; `fraction` sums to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub density: Vec<f64>,
    pub fraction: Vec<f64>,
}

/// Bins non-negative `values` into `bins` equal-width bins over
/// `[0, max(values)]`. The last bin is closed. When every value is zero the
/// range becomes `[0, 1]`.
pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    if values.is_empty() || bins == 0 {
        return Err(Error::invalid("histogram needs values and at least one bin"));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::invalid(format!("histogram values must be finite and >= 0, got {v}")));
    }
    let max = values.iter().copied().fold(0.0, f64::max);
    let upper = if max > 0.0 { max } else { 1.0 };
    let width = upper / bins as f64;
    let edges: Vec<f64> = (0..=bins)
        .map(|i| if i == bins { upper } else { i as f64 * width })
        .collect();
    let mut counts = vec![0usize; bins];
    for &v in values {
        let slot = ((v / width) as usize).min(bins - 1);
        counts[slot] += 1;
    }
    let n = values.len() as f64;
    let fraction: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let density = fraction
        .iter()
        .zip(edges.windows(2))
        .map(|(f, e)| f / (e[1] - e[0]))
        .collect();
    Ok(Histogram {
        edges,
        counts,
        density,
        fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentage_error_branches() {
        assert!((percentage_error(8.0, 10.0, 1e-12) - 20.0).abs() < 1e-12);
        assert_eq!(percentage_error(1.25, 1.25, 1e-12), 0.0);
        assert!((percentage_error(0.3, 0.0, 1e-12) - 30.0).abs() < 1e-12);
        assert!((percentage_error(-12.0, -10.0, 1e-12) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn metrics_examples() {
        let m = error_metrics(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!((m.max_abs, m.rmse), (0.0, 0.0));
        let m = error_metrics(&[3.0, 0.0], &[0.0, 4.0]).unwrap();
        assert_eq!(m.max_abs, 4.0);
        assert!((m.rmse - 12.5f64.sqrt()).abs() < 1e-15);
        let m = error_metrics(&[2.5], &[-1.0]).unwrap();
        assert_eq!(m.max_abs, m.rmse);
        assert!(matches!(error_metrics(&[], &[]), Err(Error::InvalidArgument(_))));
        assert!(error_metrics(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn histogram_bins_and_normalisations() {
        let values = [0.0, 1.0, 2.0, 2.0, 4.0];
        let h = histogram(&values, 4).unwrap();
        assert_eq!(h.edges, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(h.counts, vec![1, 1, 2, 1]);
        assert!((h.fraction.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let area: f64 = h.density.iter().zip(h.edges.windows(2)).map(|(d, e)| d * (e[1] - e[0])).sum();
        assert!((area - 1.0).abs() < 1e-15);
    }

    #[test]
    fn histogram_degenerate_range() {
        let h = histogram(&[0.0, 0.0], HISTOGRAM_BINS).unwrap();
        assert_eq!(h.counts[0], 2);
        assert_eq!(*h.edges.last().unwrap(), 1.0);
        assert!(histogram(&[], 3).is_err());
        assert!(histogram(&[-1.0], 3).is_err());
    }
}
