use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Interval, ScalarExpr};
use crate::report::{scan, Samples, StructureReport};
use crate::tensor::{
    inverse_metric, Chart, Definiteness, MetricField, OneFormField, VectorField,
};

/// A metric counts as positive definite when its smallest eigenvalue (and
/// the discriminant gap `f − g_M⁻¹(α, α)`) exceeds this floor.
pub const POSITIVITY_FLOOR: f64 = 1e-12;

pub const DEFAULT_T_NAME: &str = "t";
pub const DEFAULT_T_SAMPLE: (f64, f64) = (0.5, 2.0);

/// Where the scalar `f` enters the assembled metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// `t² g_M + t Sym(dt ⊗ α) + f dt²`
    #[default]
    NormalForm,
    /// `t² f g_M + t Sym(dt ⊗ α) + dt²`
    BaseScale,
}

/// The data `(g_M, α, f)` of a selfsimilar metric on `M × ℝ>0`.
///
/// `Sym(a ⊗ b) = a ⊗ b + b ⊗ a`, so the mixed components are `t α_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeMetricSpec {
    g_m: MetricField,
    alpha: OneFormField,
    f: ScalarExpr,
    placement: Placement,
    cone: Chart,
}

impl ConeMetricSpec {
    pub fn new(g_m: MetricField, alpha: OneFormField, f: ScalarExpr) -> Result<Self> {
        let base = g_m.chart().clone();
        if alpha.dim() != base.dim() {
            return Err(Error::Dimension(format!(
                "alpha has {} components on a {}-dimensional base",
                alpha.dim(),
                base.dim()
            )));
        }
        if let Some(i) = f.max_coord_index() {
            if i >= base.dim() {
                return Err(Error::Dimension(format!(
                    "f = `{f}` references coordinate {i} outside the base chart"
                )));
            }
        }
        let cone = Arc::new(base.extended(DEFAULT_T_NAME, Interval::positive(), DEFAULT_T_SAMPLE)?);
        Ok(Self {
            g_m,
            alpha,
            f,
            placement: Placement::NormalForm,
            cone,
        })
    }

    pub fn with_placement(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    /// Rename or re-bound the cone coordinate. The bounds must stay inside
    /// `(0, ∞)`.
    pub fn with_t(mut self, name: &str, bounds: Interval, sample: (f64, f64)) -> Result<Self> {
        if bounds.lo < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cone coordinate `{name}` must be positive"
            )));
        }
        self.cone = Arc::new(self.base().extended(name, bounds, sample)?);
        Ok(self)
    }

    pub fn base(&self) -> &Chart {
        self.g_m.chart()
    }

    pub fn chart(&self) -> &Chart {
        &self.cone
    }

    pub fn base_dim(&self) -> usize {
        self.g_m.dim()
    }

    pub fn g_m(&self) -> &MetricField {
        &self.g_m
    }

    pub fn alpha(&self) -> &OneFormField {
        &self.alpha
    }

    pub fn f(&self) -> &ScalarExpr {
        &self.f
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn t_name(&self) -> &str {
        &self.cone.coords()[self.base_dim()]
    }

    pub fn t(&self) -> ScalarExpr {
        ScalarExpr::coord(self.base_dim(), self.t_name())
    }

    /// `t ∂_t`.
    pub fn xi(&self) -> VectorField {
        VectorField::radial_last(self.cone.clone())
    }

    /// The `dt²` coefficient once the metric is written in normal form.
    pub fn normal_f(&self) -> ScalarExpr {
        match self.placement {
            Placement::NormalForm => self.f.clone(),
            Placement::BaseScale => ScalarExpr::one(),
        }
    }

    /// The base metric once the metric is written in normal form.
    pub fn normal_base_entry(&self, i: usize, j: usize) -> ScalarExpr {
        match self.placement {
            Placement::NormalForm => self.g_m.get(i, j).clone(),
            Placement::BaseScale => &self.f * self.g_m.get(i, j),
        }
    }

    /// The assembled metric without any positivity check.
    pub fn metric_unchecked(&self) -> MetricField {
        let n = self.base_dim();
        let t = self.t();
        let t2 = t.powi(2);
        let g_tt = self.normal_f();
        MetricField::from_fn(self.cone.clone(), Definiteness::PositiveDefinite, |i, j| {
            match (i < n, j < n) {
                (true, true) => &t2 * &self.normal_base_entry(i, j),
                (true, false) => &t * self.alpha.get(i),
                _ => g_tt.clone(),
            }
        })
        .expect("base expressions were validated against the base chart")
    }

    /// `g_M⁻¹(α, α)` at a base point.
    pub fn dual_norm_sq(&self, base_point: &[f64]) -> Result<f64> {
        let g = self.g_m.at(base_point)?;
        let inv = inverse_metric(&g)?;
        let a = self.alpha.at(base_point)?;
        let n = a.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * inv.get(i, j) * a[j];
            }
        }
        Ok(s)
    }
}

/// The two independent positivity verdicts for an assembled metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    /// Residual `g_M⁻¹(α, α) − f` over base points.
    pub discriminant: StructureReport,
    /// Residual `−λ_min(g)` over cone points.
    pub eigenvalue: StructureReport,
}

impl PositivityReport {
    pub fn agree(&self) -> bool {
        self.discriminant.passed == self.eigenvalue.passed
    }

    pub fn passed(&self) -> bool {
        self.discriminant.passed && self.eigenvalue.passed
    }
}

pub fn check_positivity(spec: &ConeMetricSpec, samples: &Samples) -> Result<PositivityReport> {
    let base_samples = samples.truncated(spec.base_dim());
    let discriminant = scan("positivity_discriminant", &base_samples, -POSITIVITY_FLOOR, |p| {
        Ok(spec.dual_norm_sq(p)? - spec.f.eval(p).map_err(|e| Error::eval(p, e))?)
    })?;
    let g = spec.metric_unchecked();
    let eigenvalue = scan("positivity_eigenvalue", samples, -POSITIVITY_FLOOR, |p| {
        Ok(-g.at(p)?.eigenvalues()[0])
    })?;
    Ok(PositivityReport {
        discriminant,
        eigenvalue,
    })
}

/// Assemble `t² g_M + t Sym(dt ⊗ α) + f dt²` (or the base-scaled variant)
/// after confirming positivity at every sample by both routes.
pub fn assemble_selfsimilar_metric(spec: &ConeMetricSpec, samples: &Samples) -> Result<MetricField> {
    let rep = check_positivity(spec, samples)?;
    if !rep.agree() {
        return Err(Error::Positivity {
            point: rep.eigenvalue.worst_point,
            detail: format!(
                "discriminant gap {:e} and smallest eigenvalue {:e} disagree",
                -rep.discriminant.max_residual, -rep.eigenvalue.max_residual
            ),
        });
    }
    if !rep.passed() {
        return Err(Error::Positivity {
            point: rep.discriminant.worst_point,
            detail: format!(
                "f − g_M⁻¹(α, α) = {:e}",
                -rep.discriminant.max_residual
            ),
        });
    }
    Ok(spec.metric_unchecked())
}

/// Convenience: samples on the cone chart of `spec`.
pub fn cone_samples(spec: &ConeMetricSpec, n: usize, seed: u64) -> Samples {
    Samples::from_chart(spec.chart(), n, seed)
}

