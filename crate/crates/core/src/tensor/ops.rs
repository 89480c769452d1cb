//! Pointwise coordinate tensor calculus.
//!
//! The `*_jets` kernels work on component jets already evaluated at a point
//! so callers can chain them (a Hessian's derivative feeds an exterior
//! derivative, and so on) without re-evaluating expressions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expr::{Jet, ScalarExpr};
use crate::report::{scan, Samples, StructureReport};

use super::fields::{check_point, ChristoffelJets, Connection, MetricField, OneFormField, VectorField};
use super::linalg::Tensor02;

pub fn metric_at(g: &MetricField, p: &[f64]) -> Result<Tensor02> {
    g.at(p)
}

/// Levi-Civita symbols of `g` at `p`, indexed `[k][i][j]`.
pub fn christoffel(g: &MetricField, p: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
    let gamma = Connection::levi_civita(g.clone()).symbols(p, 0)?;
    Ok(christoffel_values(&gamma))
}

pub fn christoffel_values(gamma: &ChristoffelJets) -> Vec<Vec<Vec<f64>>> {
    let d = gamma.dim();
    (0..d)
        .map(|k| {
            (0..d)
                .map(|i| (0..d).map(|j| gamma.value(k, i, j)).collect())
                .collect()
        })
        .collect()
}

/// `[X, Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k`.
pub fn lie_bracket(x: &VectorField, y: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
    let xj = x.jets(p, 1)?;
    let yj = y.jets(p, 1)?;
    Ok(bracket_jets(&xj, &yj))
}

pub fn bracket_jets(x: &[Jet], y: &[Jet]) -> Vec<f64> {
    let d = x.len();
    (0..d)
        .map(|k| {
            (0..d)
                .map(|i| x[i].value() * y[k].first(i) - y[i].value() * x[k].first(i))
                .sum()
        })
        .collect()
}

/// Entry `[k][i]` is `(∇_i V)^k`.
pub fn covariant_derivative_vector(
    c: &Connection,
    v: &VectorField,
    p: &[f64],
) -> Result<DMatrix<f64>> {
    let gamma = c.symbols(p, 0)?;
    let vj = v.jets(p, 1)?;
    Ok(cov_vector_jets(&gamma, &vj))
}

pub fn cov_vector_jets(gamma: &ChristoffelJets, v: &[Jet]) -> DMatrix<f64> {
    let d = v.len();
    DMatrix::from_fn(d, d, |k, i| {
        v[k].first(i) + (0..d).map(|j| gamma.value(k, i, j) * v[j].value()).sum::<f64>()
    })
}

/// Entry `[i][j]` is `(∇_i ω)_j = ∂_i ω_j − Γ^k_{ij} ω_k`.
pub fn covariant_derivative_oneform(
    c: &Connection,
    w: &OneFormField,
    p: &[f64],
) -> Result<Tensor02> {
    let gamma = c.symbols(p, 0)?;
    let wj = w.jets(p, 1)?;
    Ok(cov_oneform_jets(&gamma, &wj))
}

pub fn cov_oneform_jets(gamma: &ChristoffelJets, w: &[Jet]) -> Tensor02 {
    let d = w.len();
    Tensor02::from_fn(d, |i, j| {
        w[j].first(i) - (0..d).map(|k| gamma.value(k, i, j) * w[k].value()).sum::<f64>()
    })
}

/// `(Lie_X g)_{ij} = X^k ∂_k g_{ij} + g_{kj} ∂_i X^k + g_{ik} ∂_j X^k`.
pub fn lie_derivative_metric(x: &VectorField, g: &MetricField, p: &[f64]) -> Result<Tensor02> {
    let xj = x.jets(p, 1)?;
    let gj = g.jets(p, 1)?;
    Ok(lie_metric_jets(&xj, &gj))
}

/// As [`lie_derivative_metric`] for a symmetric `d×d` row-major jet matrix.
pub fn lie_metric_jets(x: &[Jet], g: &[Jet]) -> Tensor02 {
    let d = x.len();
    let gv = |i: usize, j: usize| g[i * d + j].value();
    Tensor02::symmetric_from_fn(d, |i, j| {
        let mut s = 0.0;
        for k in 0..d {
            s += x[k].value() * g[i * d + j].first(k)
                + gv(k, j) * x[k].first(i)
                + gv(i, k) * x[k].first(j);
        }
        s
    })
}

/// `(dω)_{ij} = ∂_i ω_j − ∂_j ω_i`.
pub fn exterior_derivative_oneform(w: &OneFormField, p: &[f64]) -> Result<Tensor02> {
    Ok(exterior_jets(&w.jets(p, 1)?))
}

pub fn exterior_jets(w: &[Jet]) -> Tensor02 {
    Tensor02::antisymmetric_from_fn(w.len(), |i, j| w[j].first(i) - w[i].first(j))
}

/// `(Hess φ)_{ij} = ∂_i∂_j φ − Γ^k_{ij} ∂_k φ`.
pub fn flat_hessian(c: &Connection, phi: &ScalarExpr, p: &[f64]) -> Result<Tensor02> {
    let h = hessian_jets(c, phi, p, 0)?;
    let d = c.dim();
    let m = DMatrix::from_fn(d, d, |i, j| h[i * d + j].value());
    if c.symmetric_claim() && (&m - m.transpose()).amax() == 0.0 {
        Ok(Tensor02::symmetric_from_fn(d, |i, j| m[(i, j)]))
    } else {
        Ok(Tensor02::general(m))
    }
}

/// Row-major jets of `∇dφ` to `order` (0 or 1); needs `φ` to `order + 2`.
pub fn hessian_jets(c: &Connection, phi: &ScalarExpr, p: &[f64], order: usize) -> Result<Vec<Jet>> {
    check_point(c.chart(), p)?;
    let gamma = c.symbols(p, order)?;
    let pj = phi
        .jet(p, order + 2)
        .map_err(|e| crate::error::Error::eval(p, e))?;
    Ok(hessian_from_jets(&gamma, &pj, order))
}

/// `∇dφ` from Christoffel jets and a jet of `φ` of order at least
/// `order + 2`.
pub fn hessian_from_jets(gamma: &ChristoffelJets, phi: &Jet, order: usize) -> Vec<Jet> {
    let d = gamma.dim();
    let grad: Vec<Jet> = (0..d).map(|k| phi.derivative(k)).collect();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut h = grad[j].derivative(i).truncate(order);
            for (k, gk) in grad.iter().enumerate() {
                h = h.sub(&gamma.get(k, i, j).truncate(order).mul(&gk.truncate(order)));
            }
            out.push(h);
        }
    }
    out
}

/// `θ_j = X^i m_{ij}` for a row-major `d×d` jet matrix.
pub fn contract_jets(x: &[Jet], m: &[Jet]) -> Vec<Jet> {
    let d = x.len();
    (0..d)
        .map(|j| {
            let mut acc = x[0].mul(&m[j]);
            for i in 1..d {
                acc = acc.add(&x[i].mul(&m[i * d + j]));
            }
            acc
        })
        .collect()
}

/// `θ = ι_X g` with `θ_j = g_{ij} X^i`, built from component expressions.
pub fn interior_product(x: &VectorField, g: &MetricField) -> Result<OneFormField> {
    let d = g.dim();
    let comp = (0..d)
        .map(|j| ScalarExpr::sum((0..d).map(|i| g.get(i, j) * x.get(i))))
        .collect();
    OneFormField::new(g.chart().clone(), comp)
}

/// `∂_k g_{ij} − Γ^l_{ki} g_{lj} − Γ^l_{kj} g_{il}`, max-abs over all index
/// triples.
pub fn metric_compatibility_residual(c: &Connection, g: &MetricField, p: &[f64]) -> Result<f64> {
    let d = g.dim();
    let gamma = c.symbols(p, 0)?;
    let gj = g.jets(p, 1)?;
    let gv = |i: usize, j: usize| gj[i * d + j].value();
    let mut worst: f64 = 0.0;
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut r = gj[i * d + j].first(k);
                for l in 0..d {
                    r -= gamma.value(l, k, i) * gv(l, j) + gamma.value(l, k, j) * gv(i, l);
                }
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(worst)
}

/// `max |Γ^k_{ij} − Γ^k_{ji}|` at `p`.
pub fn torsion_residual(c: &Connection, p: &[f64]) -> Result<f64> {
    let d = c.dim();
    let gamma = c.symbols(p, 0)?;
    let mut worst: f64 = 0.0;
    for k in 0..d {
        for i in 0..d {
            for j in i + 1..d {
                worst = worst.max((gamma.value(k, i, j) - gamma.value(k, j, i)).abs());
            }
        }
    }
    Ok(worst)
}

/// `R^l_{kij} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im} Γ^m_{jk} − Γ^l_{jm} Γ^m_{ik}`
/// as a flat `[l][k][i][j]` array.
pub fn curvature(c: &Connection, p: &[f64]) -> Result<Vec<f64>> {
    let d = c.dim();
    let g = c.symbols(p, 1)?;
    let mut out = vec![0.0; d * d * d * d];
    for l in 0..d {
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    let mut r = g.get(l, j, k).first(i) - g.get(l, i, k).first(j);
                    for m in 0..d {
                        r += g.value(l, i, m) * g.value(m, j, k)
                            - g.value(l, j, m) * g.value(m, i, k);
                    }
                    out[((l * d + k) * d + i) * d + j] = r;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub torsion: StructureReport,
    pub curvature: StructureReport,
}

impl FlatnessReport {
    pub fn passed(&self) -> bool {
        self.torsion.passed && self.curvature.passed
    }
}

pub fn check_flat_torsion_free(c: &Connection, samples: &Samples, tol: f64) -> Result<FlatnessReport> {
    Ok(FlatnessReport {
        torsion: scan("torsion_free", samples, tol, |p| torsion_residual(c, p))?,
        curvature: scan("flat", samples, tol, |p| {
            Ok(crate::report::max_abs(&curvature(c, p)?))
        })?,
    })
}
