use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::report::{max_abs, scan, Samples, StructureReport, SEMIDEFINITE_SLACK};
use crate::tensor::{interior_product, Connection, Definiteness, MetricField, VectorField};

use super::potential::{
    check_hessian_potential, check_linear_potential, ensure_nonvanishing, last_coord,
    shared_chart,
};

/// A degenerate metric together with the field that should span its kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensiveMetric {
    pub metric: MetricField,
    pub xi: VectorField,
}

/// Sub-checks of an extensive structure. The potential checks are present
/// only when a potential was supplied, the corank check only when asked for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensiveReport {
    /// `max |ι_ξ e|`
    pub kernel: StructureReport,
    /// `−λ_min(e)`, tolerance [`SEMIDEFINITE_SLACK`]
    pub semidefinite: StructureReport,
    /// `−λ_1(e)` (second smallest eigenvalue) against `−SEMIDEFINITE_SLACK`
    pub corank_one: Option<StructureReport>,
    /// `max |e − ∇dφ|`
    pub hessian: Option<StructureReport>,
    /// `max |ξ(φ) − φ|`
    pub potential_linear: Option<StructureReport>,
}

impl ExtensiveReport {
    pub fn reports(&self) -> Vec<&StructureReport> {
        let mut v = vec![&self.kernel, &self.semidefinite];
        v.extend(self.corank_one.iter());
        v.extend(self.hessian.iter());
        v.extend(self.potential_linear.iter());
        v
    }

    pub fn passed(&self) -> bool {
        self.reports().iter().all(|r| r.passed)
    }
}

/// `max |ι_ξ e|` over samples.
pub fn kernel_residual(e: &ExtensiveMetric, samples: &Samples, tol: f64) -> Result<StructureReport> {
    scan("extensive_kernel", samples, tol, |p| {
        let m = e.metric.at(p)?;
        let x = e.xi.at(p)?;
        let d = x.len();
        let v: Vec<f64> = (0..d)
            .map(|j| (0..d).map(|i| x[i] * m.get(i, j)).sum())
            .collect();
        Ok(max_abs(&v))
    })
}

/// Run the defining checks of an extensive structure: `ι_ξ e = 0`, `e ⪰ 0`,
/// and with a potential `φ`, `e = ∇dφ` and `ξ(φ) = φ`.
pub fn check_extensive(
    e: &ExtensiveMetric,
    c: &Connection,
    phi: Option<&ScalarExpr>,
    samples: &Samples,
    tol: f64,
) -> Result<ExtensiveReport> {
    check_extensive_with(e, c, phi, false, samples, tol)
}

pub fn check_extensive_with(
    e: &ExtensiveMetric,
    c: &Connection,
    phi: Option<&ScalarExpr>,
    corank_one: bool,
    samples: &Samples,
    tol: f64,
) -> Result<ExtensiveReport> {
    shared_chart(e.metric.chart(), c.chart())?;
    let kernel = kernel_residual(e, samples, tol)?;
    let semidefinite = scan("extensive_semidefinite", samples, SEMIDEFINITE_SLACK, |p| {
        Ok(-e.metric.at(p)?.eigenvalues()[0])
    })?;
    let corank_one = if corank_one {
        Some(scan("extensive_corank_one", samples, -SEMIDEFINITE_SLACK, |p| {
            let ev = e.metric.at(p)?.eigenvalues();
            Ok(-ev.get(1).copied().unwrap_or(f64::INFINITY))
        })?)
    } else {
        None
    };
    let (hessian, potential_linear) = match phi {
        Some(phi) => {
            let mut h = check_hessian_potential(c, phi, &e.metric, samples, tol)?;
            h.name = "extensive_hessian".into();
            (Some(h), Some(check_linear_potential(phi, &e.xi, samples, tol)?))
        }
        None => (None, None),
    };
    Ok(ExtensiveReport {
        kernel,
        semidefinite,
        corank_one,
        hessian,
        potential_linear,
    })
}

/// `t · g_M` on the base block and zero on the `t` row and column.
pub fn cone_extensive_metric(g_m: &MetricField, c: &Connection) -> Result<ExtensiveMetric> {
    let chart = c.chart().clone();
    let n = g_m.dim();
    if chart.dim() != n + 1 {
        return Err(Error::Dimension(format!(
            "cone chart has dimension {}, base metric {n}",
            chart.dim()
        )));
    }
    let t = last_coord(&chart);
    let metric = MetricField::from_fn(chart.clone(), Definiteness::PositiveSemidefinite, |i, j| {
        if i < n && j < n {
            &t * g_m.get(i, j)
        } else {
            ScalarExpr::zero()
        }
    })?;
    Ok(ExtensiveMetric {
        metric,
        xi: VectorField::radial_last(chart),
    })
}

/// The extensive metric `t g_M` of a Hessian cone, verified to be `∇dt`
/// with kernel spanned by `t ∂_t`. Fails with
/// [`Error::ResidualExceeded`] when a sub-check does not hold.
pub fn extensive_from_cone(
    g_m: &MetricField,
    c: &Connection,
    samples: &Samples,
    tol: f64,
) -> Result<(ExtensiveMetric, ExtensiveReport)> {
    let e = cone_extensive_metric(g_m, c)?;
    let t = last_coord(c.chart());
    let report = check_extensive_with(&e, c, Some(&t), true, samples, tol)?;
    if let Some(bad) = report.reports().into_iter().find(|r| !r.passed) {
        return Err(Error::ResidualExceeded {
            check: bad.name.clone(),
            residual: bad.max_residual,
            tolerance: bad.tolerance,
        });
    }
    Ok((e, report))
}

/// `r = sqrt(g(ξ, ξ))`, the potential of the extensive metric built from a
/// conical Hessian structure.
pub fn radial_potential(g: &MetricField, xi: &VectorField) -> ScalarExpr {
    g.quadratic(xi.components()).sqrt()
}

/// `ĝ = g(ξ, ξ)^{-1/2} (g − θ ⊗ θ / g(ξ, ξ))` with `θ = ι_ξ g`: the
/// component of `g` orthogonal to `ξ`, rescaled.
pub fn extensive_from_conical(
    g: &MetricField,
    xi: &VectorField,
    samples: &Samples,
) -> Result<ExtensiveMetric> {
    shared_chart(g.chart(), xi.chart())?;
    ensure_nonvanishing(xi, samples).map_err(|e| e.in_check("extensive_from_conical"))?;
    let norm_sq = g.quadratic(xi.components());
    let scale = norm_sq.sqrt();
    let theta = interior_product(xi, g)?;
    let metric = MetricField::from_fn(g.chart().clone(), Definiteness::PositiveSemidefinite, |i, j| {
        let proj = &(theta.get(i) * theta.get(j)) / &norm_sq;
        &(g.get(i, j) - &proj) / &scale
    })?;
    Ok(ExtensiveMetric {
        metric,
        xi: xi.clone(),
    })
}
