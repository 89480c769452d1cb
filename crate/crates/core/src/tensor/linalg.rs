//! Small dense symmetric linear algebra on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::max_abs;

/// Condition-number ceiling for [`inverse_metric`].
pub const DEFAULT_CONDITION_BOUND: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    General,
}

/// Pointwise value of a covariant 2-tensor in coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor02 {
    m: DMatrix<f64>,
    symmetry: Symmetry,
}

impl Tensor02 {
    pub fn general(m: DMatrix<f64>) -> Self {
        assert!(m.is_square());
        Self {
            m,
            symmetry: Symmetry::General,
        }
    }

    /// Build from the upper triangle `f(i, j)`, `i <= j`, mirrored.
    pub fn symmetric_from_fn(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self {
            m,
            symmetry: Symmetry::Symmetric,
        }
    }

    /// Build from the strict upper triangle `f(i, j)`, `i < j`; the lower
    /// triangle is the exact negation and the diagonal is zero.
    pub fn antisymmetric_from_fn(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i + 1..d {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        Self {
            m,
            symmetry: Symmetry::Antisymmetric,
        }
    }

    pub fn from_fn(d: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::general(DMatrix::from_fn(d, d, f))
    }

    pub fn identity(d: usize) -> Self {
        Self::symmetric_from_fn(d, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(self.m.as_slice())
    }

    pub fn max_abs_diff(&self, other: &Tensor02) -> f64 {
        (&self.m - &other.m).amax()
    }

    /// `max |T_ij - T_ji|`, zero exactly for symmetric tensors.
    pub fn asymmetry(&self) -> f64 {
        (&self.m - self.m.transpose()).amax()
    }

    pub fn scaled(&self, s: f64) -> Tensor02 {
        Self {
            m: &self.m * s,
            symmetry: self.symmetry,
        }
    }

    pub fn sub(&self, other: &Tensor02) -> Tensor02 {
        let symmetry = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::General
        };
        Self {
            m: &self.m - &other.m,
            symmetry,
        }
    }

    /// Ascending eigenvalues of the symmetric part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.m)
    }

    /// Row-major entries.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)]).collect())
            .collect()
    }
}

/// Ascending eigenvalues of `(m + mᵀ)/2`.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn inverse_metric(m: &Tensor02) -> Result<Tensor02> {
    inverse_metric_with_bound(m, DEFAULT_CONDITION_BOUND)
}

/// Inverse of a positive-definite symmetric matrix. Fails when the smallest
/// eigenvalue is not positive or the condition number exceeds `bound`.
pub fn inverse_metric_with_bound(m: &Tensor02, bound: f64) -> Result<Tensor02> {
    let ev = m.eigenvalues();
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(lo > 0.0) || !(condition <= bound) {
        return Err(Error::Singular {
            smallest_eigenvalue: lo,
            condition,
        });
    }
    let inv = m
        .matrix()
        .clone()
        .cholesky()
        .ok_or(Error::Singular {
            smallest_eigenvalue: lo,
            condition,
        })?
        .inverse();
    let d = m.dim();
    Ok(Tensor02::symmetric_from_fn(d, |i, j| {
        0.5 * (inv[(i, j)] + inv[(j, i)])
    }))
}
