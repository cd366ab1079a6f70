//! Distribution summaries for violin-style plots: min, mean, max and a
//! Gaussian kernel density estimate sampled over `[min, max]`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of evenly spaced points at which the density is sampled.
pub const DENSITY_POINTS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Distribution {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    /// Scott's-rule bandwidth; absent when all values coincide.
    pub bandwidth: Option<f64>,
    /// True when the sample has zero spread; `density` is then empty and the
    /// whole mass sits at `mean`.
    pub point_mass: bool,
    /// `(x, f̂(x))` pairs, `x` spanning exactly `[min, max]`.
    pub density: Vec<(f64, f64)>,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator); zero for a single value.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// `h = σ̂ · n^(−1/5)`.
pub fn scott_bandwidth(values: &[f64]) -> f64 {
    sample_std(values) * (values.len() as f64).powf(-0.2)
}

/// Gaussian KDE `f̂(x) = 1/(n·h) Σ φ((x − x_i)/h)`.
pub fn kde(values: &[f64], bandwidth: f64, x: f64) -> f64 {
    let norm = 1.0 / ((values.len() as f64) * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    norm * values
        .iter()
        .map(|&v| {
            let z = (x - v) / bandwidth;
            (-0.5 * z * z).exp()
        })
        .sum::<f64>()
}

pub fn summarize(values: &[f64]) -> Result<Distribution> {
    if values.is_empty() {
        return Err(Error::Metric("cannot summarize an empty sample".into()));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Metric(format!("non-finite value {bad} in sample")));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let avg = mean(values).clamp(min, max);
    let h = scott_bandwidth(values);
    if h == 0.0 || min == max {
        return Ok(Distribution {
            count: values.len(),
            min,
            mean: avg,
            max,
            bandwidth: None,
            point_mass: true,
            density: Vec::new(),
        });
    }
    let step = (max - min) / (DENSITY_POINTS - 1) as f64;
    let density = (0..DENSITY_POINTS)
        .map(|i| {
            let x = if i == DENSITY_POINTS - 1 {
                max
            } else {
                min + step * i as f64
            };
            (x, kde(values, h, x))
        })
        .collect();
    Ok(Distribution {
        count: values.len(),
        min,
        mean: avg,
        max,
        bandwidth: Some(h),
        point_mass: false,
        density,
    })
}
