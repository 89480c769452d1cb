use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{max_abs, scan, Samples, StructureReport};
use crate::tensor::{
    contract_jets, cov_oneform_jets, cov_vector_jets, exterior_jets, lie_derivative_metric,
    Connection, MetricField, Tensor02, VectorField,
};

use super::spec::ConeMetricSpec;

/// `max |Lie_ξ g − 2g|`.
pub fn check_selfsimilar(
    g: &MetricField,
    xi: &VectorField,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    scan("selfsimilar", samples, tol, |p| {
        let lie = lie_derivative_metric(xi, g, p)?;
        Ok(lie.max_abs_diff(&g.at(p)?.scaled(2.0)))
    })
}

/// The four conical conditions for `θ = ι_ξ g` and the Levi-Civita
/// connection `D` of `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicalReport {
    pub selfsimilar: StructureReport,
    /// `Dξ = Id`
    pub d_xi_identity: StructureReport,
    /// `Dθ = g`
    pub d_theta_metric: StructureReport,
    /// `Dθ` symmetric
    pub d_theta_symmetric: StructureReport,
    /// `dθ = 0`
    pub theta_closed: StructureReport,
    /// Whether the four verdicts agree; only judged when `selfsimilar`
    /// passed.
    pub consistent: Option<bool>,
}

impl ConicalReport {
    pub fn conditions(&self) -> [&StructureReport; 4] {
        [
            &self.d_xi_identity,
            &self.d_theta_metric,
            &self.d_theta_symmetric,
            &self.theta_closed,
        ]
    }

    pub fn passed(&self) -> bool {
        self.conditions().iter().all(|r| r.passed)
    }
}

/// Residuals of the four conditions at one point.
pub fn conical_residuals(lc: &Connection, g: &MetricField, xi: &VectorField, p: &[f64]) -> Result<[f64; 4]> {
    let d = g.dim();
    let gamma = lc.symbols(p, 0)?;
    let gj = g.jets(p, 1)?;
    let xj = xi.jets(p, 1)?;
    let dxi = cov_vector_jets(&gamma, &xj);
    let theta = contract_jets(&xj, &gj);
    let dtheta = cov_oneform_jets(&gamma, &theta);
    let gp = Tensor02::symmetric_from_fn(d, |i, j| gj[i * d + j].value());
    Ok([
        (dxi - DMatrix::identity(d, d)).amax(),
        dtheta.max_abs_diff(&gp),
        dtheta.asymmetry(),
        exterior_jets(&theta).max_abs(),
    ])
}

pub fn check_conical(
    g: &MetricField,
    xi: &VectorField,
    samples: &Samples,
    tol: f64,
) -> Result<ConicalReport> {
    let selfsimilar = check_selfsimilar(g, xi, samples, tol)?;
    let lc = Connection::levi_civita(g.clone());
    let rows = samples
        .map(|p| {
            if max_abs(&xi.at(p)?) == 0.0 {
                return Err(Error::VanishingField { point: p.to_vec() });
            }
            conical_residuals(&lc, g, xi, p)
        })
        .map_err(|e| e.in_check("conical"))?;
    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let report = |k: usize, name: &str| StructureReport::from_residuals(name, samples, &col(k), tol);
    let d_xi_identity = report(0, "conical_d_xi_identity")?;
    let d_theta_metric = report(1, "conical_d_theta_metric")?;
    let d_theta_symmetric = report(2, "conical_d_theta_symmetric")?;
    let theta_closed = report(3, "conical_theta_closed")?;
    let verdicts = [
        d_xi_identity.passed,
        d_theta_metric.passed,
        d_theta_symmetric.passed,
        theta_closed.passed,
    ];
    let consistent = selfsimilar
        .passed
        .then(|| verdicts.iter().all(|&v| v == verdicts[0]));
    Ok(ConicalReport {
        selfsimilar,
        d_xi_identity,
        d_theta_metric,
        d_theta_symmetric,
        theta_closed,
        consistent,
    })
}

/// `max |df − 2α|` over base points, with `f` the `dt²` coefficient in
/// normal form. Since `d ι_{t∂_t} g = t dt ∧ (2α − df) + t² dα`, this
/// vanishes exactly for the conical members of the selfsimilar family.
pub fn check_cone_criterion(spec: &ConeMetricSpec, samples: &Samples, tol: f64) -> Result<StructureReport> {
    let base = samples.truncated(spec.base_dim());
    let f = spec.normal_f();
    scan("cone_criterion", &base, tol, |p| {
        let df = f.jet(p, 1).map_err(|e| Error::eval(p, e))?;
        let a = spec.alpha().at(p)?;
        Ok(a.iter()
            .enumerate()
            .map(|(i, ai)| (df.first(i) - 2.0 * ai).abs())
            .fold(0.0, f64::max))
    })
}

/// `max |λ_q* g − q² g|` with `λ_q` scaling the last coordinate by `q`.
pub fn check_dilation_equivariance(
    g: &MetricField,
    q: f64,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    let d = g.dim();
    check_dilation_equivariance_along(g, &[d - 1], q, samples, tol)
}

/// As [`check_dilation_equivariance`] for `λ_q` scaling every coordinate
/// listed in `axes` (the flow of `Σ_{k ∈ axes} x^k ∂_k`).
pub fn check_dilation_equivariance_along(
    g: &MetricField,
    axes: &[usize],
    q: f64,
    samples: &Samples,
    tol: f64,
) -> Result<StructureReport> {
    if !(q > 0.0) {
        return Err(Error::InvalidArgument(format!("dilation factor {q} must be positive")));
    }
    let d = g.dim();
    let s: Vec<f64> = (0..d).map(|k| if axes.contains(&k) { q } else { 1.0 }).collect();
    scan(&format!("dilation_q{q}"), samples, tol, |p| {
        let moved: Vec<f64> = p.iter().zip(&s).map(|(x, sk)| x * sk).collect();
        let gq = g.at(&moved)?;
        let gp = g.at(p)?;
        let pulled = Tensor02::symmetric_from_fn(d, |i, j| gq.get(i, j) * s[i] * s[j]);
        Ok(pulled.max_abs_diff(&gp.scaled(q * q)))
    })
}
