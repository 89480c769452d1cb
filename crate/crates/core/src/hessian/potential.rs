use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expr::{ChartDomain, ScalarExpr};
use crate::report::{max_abs, scan, Samples, StructureReport};
use crate::tensor::{
    contract_jets, cov_oneform_jets, covariant_derivative_vector, exterior_jets, flat_hessian,
    hessian_from_jets, lie_metric_jets, Chart, Connection, Definiteness, MetricField, VectorField,
};

/// `max |∇ξ − Id|`.
pub fn check_radiant(
    c: &Connection,
    xi: &VectorField,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    let d = c.dim();
    scan("radiant", samples, tol, |p| {
        Ok((covariant_derivative_vector(c, xi, p)? - DMatrix::identity(d, d)).amax())
    })
}

/// `max |∇dφ − g|`.
pub fn check_hessian_potential(
    c: &Connection,
    phi: &ScalarExpr,
    g: &MetricField,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    scan("hessian_potential", samples, tol, |p| {
        Ok(flat_hessian(c, phi, p)?.max_abs_diff(&g.at(p)?))
    })
}

/// `max |d ι_ξ ∇dφ|`, using third derivatives of `φ`.
pub fn check_closed_theta_hessian(
    c: &Connection,
    phi: &ScalarExpr,
    xi: &VectorField,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    scan("closed_theta_hessian", samples, tol, |p| {
        let gamma = c.symbols(p, 1)?;
        let pj = phi.jet(p, 3).map_err(|e| Error::eval(p, e))?;
        let h = hessian_from_jets(&gamma, &pj, 1);
        let theta = contract_jets(&xi.jets(p, 1)?, &h);
        Ok(exterior_jets(&theta).max_abs())
    })
}

/// `max |Lie_ξ g − g − ∇(ι_ξ g)|` for `g = ∇dφ`.
pub fn check_radiant_hessian_identity(
    c: &Connection,
    phi: &ScalarExpr,
    xi: &VectorField,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    let d = c.dim();
    scan("radiant_hessian_identity", samples, tol, |p| {
        let gamma = c.symbols(p, 1)?;
        let pj = phi.jet(p, 3).map_err(|e| Error::eval(p, e))?;
        let h = hessian_from_jets(&gamma, &pj, 1);
        let xj = xi.jets(p, 1)?;
        let lie = lie_metric_jets(&xj, &h);
        let theta = contract_jets(&xj, &h);
        let nabla_theta = cov_oneform_jets(&gamma, &theta);
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let r = lie.get(i, j) - h[i * d + j].value() - nabla_theta.get(i, j);
                worst = worst.max(r.abs());
            }
        }
        Ok(worst)
    })
}

/// The cone metric `t² g_M + dt²` on `chart`, whose last coordinate is `t`
/// and whose leading coordinates are those of `g_M`.
pub fn riemannian_cone(g_m: &MetricField, chart: Chart) -> Result<MetricField> {
    let n = g_m.dim();
    if chart.dim() != n + 1 {
        return Err(Error::Dimension(format!(
            "cone chart has dimension {}, base metric {n}",
            chart.dim()
        )));
    }
    let t2 = last_coord(&chart).powi(2);
    MetricField::from_fn(chart, Definiteness::PositiveDefinite, |i, j| {
        if i < n && j < n {
            &t2 * g_m.get(i, j)
        } else if i == n && j == n {
            ScalarExpr::one()
        } else {
            ScalarExpr::zero()
        }
    })
}

pub(crate) fn last_coord(chart: &ChartDomain) -> ScalarExpr {
    let n = chart.dim() - 1;
    ScalarExpr::coord(n, &chart.coords()[n])
}

/// `t²/2` on a cone chart.
pub fn cone_potential(chart: &ChartDomain) -> ScalarExpr {
    &last_coord(chart).powi(2) / &ScalarExpr::constant(2.0)
}

/// `max |t² g_M + dt² − ∇d(t²/2)|` on the chart of `c`.
pub fn check_cone_potential(
    g_m: &MetricField,
    c: &Connection,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    let g = riemannian_cone(g_m, c.chart().clone())?;
    let phi = cone_potential(c.chart());
    let mut r = check_hessian_potential(c, &phi, &g, samples, tol)?;
    r.name = "cone_potential".into();
    Ok(r)
}

/// `max |ξ(φ) − φ|`.
pub fn check_linear_potential(
    phi: &ScalarExpr,
    xi: &VectorField,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    scan("potential_linear_along_xi", samples, tol, |p| {
        let j = phi.jet(p, 1).map_err(|e| Error::eval(p, e))?;
        let x = xi.at(p)?;
        let dphi: f64 = x.iter().enumerate().map(|(k, xk)| xk * j.first(k)).sum();
        Ok((dphi - j.value()).abs())
    })
}

/// Fails with [`Error::VanishingField`] at the first sample where `ξ = 0`.
pub(crate) fn ensure_nonvanishing(xi: &VectorField, samples: &Samples) -> Result<()> {
    samples.map(|p| {
        if max_abs(&xi.at(p)?) == 0.0 {
            Err(Error::VanishingField { point: p.to_vec() })
        } else {
            Ok(())
        }
    })?;
    Ok(())
}

pub(crate) fn shared_chart(a: &Chart, b: &Chart) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::Dimension("fields live on different charts".into()))
    }
}
