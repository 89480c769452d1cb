//! Sample sets, run configuration and per-check residual reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ChartDomain;
use crate::par::{self, Exec};

pub const DEFAULT_SAMPLES: usize = 64;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_FD_TOL: f64 = 1e-4;

/// Smallest eigenvalues above `-SEMIDEFINITE_SLACK` count as nonnegative.
pub const SEMIDEFINITE_SLACK: f64 = 1e-9;

/// Seed, sample count and tolerances for a classification run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub fd_tol: f64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            tol: DEFAULT_TOL,
            fd_tol: DEFAULT_FD_TOL,
            exec: Exec::default(),
        }
    }
}

impl CheckConfig {
    pub fn samples_for(&self, chart: &ChartDomain) -> Samples {
        Samples::from_chart(chart, self.samples, self.seed).with_exec(self.exec)
    }
}

/// A fixed list of evaluation points plus the execution mode used to scan
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    points: Vec<Vec<f64>>,
    exec: Exec,
}

impl Samples {
    pub fn new(points: Vec<Vec<f64>>) -> Self {
        Self {
            points,
            exec: Exec::default(),
        }
    }

    pub fn from_chart(chart: &ChartDomain, n: usize, seed: u64) -> Self {
        Self::new(chart.sample(n, seed))
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Project each point onto its first `dim` coordinates.
    pub fn truncated(&self, dim: usize) -> Self {
        Self {
            points: self.points.iter().map(|p| p[..dim].to_vec()).collect(),
            exec: self.exec,
        }
    }

    pub fn map<R: Send>(&self, f: impl Fn(&[f64]) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
        par::try_map(self.exec, &self.points, |p| f(p))
    }
}

/// Outcome of one pointwise check: `passed` iff `max_residual <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    pub worst_point: Vec<f64>,
    pub samples_used: usize,
    pub tolerance: f64,
}

impl StructureReport {
    pub fn from_residuals(
        name: &str,
        samples: &Samples,
        residuals: &[f64],
        tolerance: f64,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::NoSamples);
        }
        let mut worst = 0;
        for (i, r) in residuals.iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::NonFinite {
                    check: name.to_string(),
                    point: samples.points()[i].clone(),
                });
            }
            if *r > residuals[worst] {
                worst = i;
            }
        }
        // adding +0.0 turns a -0.0 residual into 0.0
        let max_residual = residuals[worst] + 0.0;
        Ok(Self {
            name: name.to_string(),
            passed: max_residual <= tolerance,
            max_residual,
            worst_point: samples.points()[worst].clone(),
            samples_used: samples.len(),
            tolerance,
        })
    }
}

/// Evaluate `residual` at every sample and keep the maximum.
pub fn scan(
    name: &str,
    samples: &Samples,
    tolerance: f64,
    residual: impl Fn(&[f64]) -> Result<f64> + Sync + Send,
) -> Result<StructureReport> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    let rs = samples.map(&residual).map_err(|e| e.in_check(name))?;
    StructureReport::from_residuals(name, samples, &rs, tolerance)
}

/// Largest absolute entry of `a - b` for equally sized slices.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}
