//! Analytic test functions: Ishigami, Sobol' G and an anisotropic
//! oscillatory sum, plus an evaluation counter.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Domain;
use crate::scalar::Scalar;

/// Something that can be sampled at a point.
pub trait Objective<S> {
    fn evaluate(&self, x: &[S]) -> S;
}

impl<S, F: Fn(&[S]) -> S> Objective<S> for F {
    fn evaluate(&self, x: &[S]) -> S {
        self(x)
    }
}

/// Wraps an objective and counts its evaluations. The counter is atomic so
/// the wrapper can be shared across threads.
#[derive(Debug)]
pub struct Counted<O> {
    inner: O,
    calls: AtomicU64,
}

impl<O> Counted<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn call<S>(&self, x: &[S]) -> S
    where
        O: Objective<S>,
    {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.evaluate(x)
    }
}

impl<S, O: Objective<S>> Objective<S> for Counted<O> {
    fn evaluate(&self, x: &[S]) -> S {
        self.call(x)
    }
}

/// `sin(x1) + a sin²(x2) + b x3⁴ sin(x1)`.
pub fn ishigami<S: Scalar>(x: &[S], a: S, b: S) -> S {
    let s1 = x[0].sin();
    let s2 = x[1].sin();
    s1 + a * s2 * s2 + b * x[2].powi(4) * s1
}

/// `∏ (|4 x_i - 2| + a_i) / (1 + a_i)`.
pub fn sobol_g<S: Scalar>(x: &[S], a: &[S]) -> Result<S> {
    if x.len() != a.len() {
        return Err(Error::invalid(format!(
            "sobol_g: {} coordinates but {} coefficients",
            x.len(),
            a.len()
        )));
    }
    let four = S::lit(4.0);
    let two = S::lit(2.0);
    Ok(x.iter()
        .zip(a)
        .fold(S::one(), |acc, (&xi, &ai)| acc * ((four * xi - two).abs() + ai) / (S::one() + ai)))
}

/// `Σ cos(θ_i x_i)`.
pub fn oscillatory<S: Scalar>(x: &[S], theta: &[S]) -> Result<S> {
    if x.len() != theta.len() {
        return Err(Error::invalid(format!(
            "oscillatory: {} coordinates but {} frequencies",
            x.len(),
            theta.len()
        )));
    }
    Ok(x.iter()
        .zip(theta)
        .fold(S::zero(), |acc, (&xi, &ti)| acc + (ti * xi).cos()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkName {
    Ishigami,
    #[serde(alias = "sobol", alias = "sobolg")]
    SobolG,
    Oscillatory,
}

impl BenchmarkName {
    pub const ALL: [BenchmarkName; 3] = [
        BenchmarkName::Ishigami,
        BenchmarkName::SobolG,
        BenchmarkName::Oscillatory,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BenchmarkName::Ishigami => "ishigami",
            BenchmarkName::SobolG => "sobol_g",
            BenchmarkName::Oscillatory => "oscillatory",
        }
    }
}

impl fmt::Display for BenchmarkName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "ishigami" => Ok(BenchmarkName::Ishigami),
            "sobol_g" | "sobolg" | "sobol" => Ok(BenchmarkName::SobolG),
            "oscillatory" => Ok(BenchmarkName::Oscillatory),
            other => Err(Error::invalid(format!(
                "unknown benchmark {other:?} (expected ishigami, sobol_g or oscillatory)"
            ))),
        }
    }
}

/// A benchmark function with its domain and coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkSpec<S> {
    name: BenchmarkName,
    domain: Domain<S>,
    /// `[a, b]` for Ishigami, `a_i` for Sobol' G, `θ_i` for oscillatory.
    coefficients: Vec<S>,
}

impl<S: Scalar> BenchmarkSpec<S> {
    /// Ishigami on `[-π, π]^3` with `a = 7`, `b = 0.1`.
    pub fn ishigami() -> Self {
        Self {
            name: BenchmarkName::Ishigami,
            domain: Domain::cube(-S::PI(), S::PI(), 3).expect("valid domain"),
            coefficients: vec![S::lit(7.0), S::lit(0.1)],
        }
    }

    /// Sobol' G on `[0, 1]^d` with `a_i = (i - 1) / 2`.
    pub fn sobol_g(dimension: usize) -> Result<Self> {
        Ok(Self {
            name: BenchmarkName::SobolG,
            domain: Domain::cube(S::zero(), S::one(), dimension)?,
            coefficients: (0..dimension).map(|i| S::lit(i as f64 / 2.0)).collect(),
        })
    }

    /// Oscillatory sum on `[0, 1]^d`. For `d = 4` the frequencies are
    /// `[1.5π, 3π, 0.5π, 4.5π]`; otherwise `θ_i = (i + 1)π`.
    pub fn oscillatory(dimension: usize) -> Result<Self> {
        let pi = S::PI();
        let coefficients = if dimension == 4 {
            [1.5, 3.0, 0.5, 4.5].iter().map(|&c| S::lit(c) * pi).collect()
        } else {
            (1..=dimension).map(|i| S::lit((i + 1) as f64) * pi).collect()
        };
        Ok(Self {
            name: BenchmarkName::Oscillatory,
            domain: Domain::cube(S::zero(), S::one(), dimension)?,
            coefficients,
        })
    }

    /// Default configuration for `name`. Ishigami is fixed at three
    /// dimensions; the others default to four.
    pub fn by_name(name: BenchmarkName, dimension: Option<usize>) -> Result<Self> {
        match name {
            BenchmarkName::Ishigami => match dimension {
                None | Some(3) => Ok(Self::ishigami()),
                Some(d) => Err(Error::invalid(format!("ishigami is three-dimensional, got {d}"))),
            },
            BenchmarkName::SobolG => Self::sobol_g(dimension.unwrap_or(4)),
            BenchmarkName::Oscillatory => Self::oscillatory(dimension.unwrap_or(4)),
        }
    }

    /// Replaces the coefficients, keeping the expected count.
    pub fn with_coefficients(mut self, coefficients: Vec<S>) -> Result<Self> {
        let expected = self.coefficients.len();
        if coefficients.len() != expected {
            return Err(Error::invalid(format!(
                "{} takes {expected} coefficients, got {}",
                self.name,
                coefficients.len()
            )));
        }
        if self.name == BenchmarkName::SobolG && coefficients.iter().any(|&a| a < S::zero()) {
            return Err(Error::invalid("sobol_g coefficients must be non-negative"));
        }
        self.coefficients = coefficients;
        Ok(self)
    }

    pub fn with_domain(mut self, domain: Domain<S>) -> Result<Self> {
        if domain.dimension() != self.dimension() {
            return Err(Error::invalid("domain dimension does not match the benchmark"));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn name(&self) -> BenchmarkName {
        self.name
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn domain(&self) -> &Domain<S> {
        &self.domain
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coefficients
    }
}

impl<S: Scalar> Objective<S> for BenchmarkSpec<S> {
    fn evaluate(&self, x: &[S]) -> S {
        match self.name {
            BenchmarkName::Ishigami => ishigami(x, self.coefficients[0], self.coefficients[1]),
            BenchmarkName::SobolG => {
                sobol_g(x, &self.coefficients).expect("point dimension matches benchmark")
            }
            BenchmarkName::Oscillatory => {
                oscillatory(x, &self.coefficients).expect("point dimension matches benchmark")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ishigami_values() {
        assert_eq!(ishigami(&[0.0, 0.0, 0.0], 7.0, 0.1), 0.0);
        assert!((ishigami(&[PI / 2.0, PI / 2.0, 0.0], 7.0, 0.1) - 8.0).abs() < 1e-14);
        let expected = 1.0 + 0.1 * PI.powi(4);
        assert!((ishigami(&[PI / 2.0, 0.0, PI], 7.0, 0.1) - expected).abs() < 1e-13);
        assert!((expected - 10.741).abs() < 1e-3);
    }

    #[test]
    fn sobol_g_values() {
        let a = [0.0f64, 0.5, 1.0, 1.5];
        assert_eq!(sobol_g(&[0.5, 0.5, 0.5, 0.5], &a).unwrap(), 0.0);
        // 2 · (2.5/1.5) · (3/2) · (3.5/2.5) = 7
        assert!((sobol_g(&[0.0; 4], &a).unwrap() - 7.0).abs() < 1e-14);
        for x in [[0.25, 0.75, 0.25, 0.75], [0.75; 4]] {
            assert!((sobol_g(&x, &a).unwrap() - 1.0).abs() < 1e-15);
            assert!((sobol_g(&x, &[3.0, 0.0, 9.0, 2.0]).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(sobol_g(&[0.0; 3], &a).is_err());
    }

    #[test]
    fn oscillatory_values() {
        let spec = BenchmarkSpec::<f64>::oscillatory(4).unwrap();
        assert_eq!(spec.evaluate(&[0.0; 4]), 4.0);
        assert!((spec.evaluate(&[1.0; 4]) + 1.0).abs() < 1e-14);
        let spec2 = BenchmarkSpec::<f64>::oscillatory(2).unwrap();
        assert!((spec2.coefficients()[0] - 2.0 * PI).abs() < 1e-15);
        assert!((spec2.evaluate(&[0.5, 0.5]) + 1.0).abs() < 1e-14);
        assert!(oscillatory(&[0.0; 2], &[1.0]).is_err());
    }

    #[test]
    fn default_configurations() {
        let ish = BenchmarkSpec::<f64>::ishigami();
        assert_eq!(ish.dimension(), 3);
        assert_eq!(ish.domain().intervals()[0], (-PI, PI));
        assert_eq!(ish.coefficients(), &[7.0, 0.1]);

        let sob = BenchmarkSpec::<f64>::sobol_g(4).unwrap();
        assert_eq!(sob.coefficients(), &[0.0, 0.5, 1.0, 1.5]);
        assert_eq!(sob.domain().intervals()[3], (0.0, 1.0));

        let osc = BenchmarkSpec::<f64>::oscillatory(4).unwrap();
        let expected = [1.5 * PI, 3.0 * PI, 0.5 * PI, 4.5 * PI];
        for (got, want) in osc.coefficients().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }

        assert!(BenchmarkSpec::<f64>::by_name(BenchmarkName::Ishigami, Some(4)).is_err());
        assert_eq!("sobol-g".parse::<BenchmarkName>().unwrap(), BenchmarkName::SobolG);
        assert!("rosenbrock".parse::<BenchmarkName>().is_err());
    }

    #[test]
    fn coefficient_overrides() {
        let spec = BenchmarkSpec::<f64>::ishigami().with_coefficients(vec![5.0, 0.2]).unwrap();
        assert!((spec.evaluate(&[PI / 2.0, PI / 2.0, 0.0]) - 6.0).abs() < 1e-14);
        assert!(BenchmarkSpec::<f64>::ishigami().with_coefficients(vec![1.0]).is_err());
        assert!(BenchmarkSpec::<f64>::sobol_g(2).unwrap().with_coefficients(vec![-1.0, 0.0]).is_err());
    }

    #[test]
    fn counter_counts() {
        let counted = Counted::new(BenchmarkSpec::<f64>::sobol_g(4).unwrap());
        assert_eq!(counted.calls(), 0);
        let a = counted.evaluate(&[0.1, 0.2, 0.3, 0.4]);
        let b = counted.evaluate(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(a, b);
        assert_eq!(counted.calls(), 2);

        let closure = Counted::new(|x: &[f64]| x[0]);
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    for _ in 0..100 {
                        closure.evaluate(&[1.0]);
                    }
                });
            }
        });
        assert_eq!(closure.calls(), 400);
    }
}
