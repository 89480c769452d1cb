//! The manifold declaration format shared by the catalog and spec files.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cone::{ConeMetricSpec, Placement};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, ChartDomain, Interval, ScalarExpr};
use crate::report::StructureReport;
use crate::tensor::{Chart, Connection, Definiteness, MetricField, OneFormField, VectorField};

/// Chart declaration. A `null` bound is infinite; `sample` defaults to the
/// bounds shrunk by 1% on each side and is required when a bound is
/// infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub coords: Vec<String>,
    pub bounds: Vec<[Option<f64>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<Vec<[f64; 2]>>,
}

/// `t² g_M + t Sym(dt ⊗ α) + f dt²` over the chart minus its last
/// coordinate. `f` may be left out of construction inputs that compute it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeBlock {
    pub g_m: Vec<Vec<String>>,
    pub alpha: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default)]
    pub placement: Placement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConnectionSpec {
    /// All Christoffel symbols zero in this chart.
    CartesianFlat,
    /// Explicit `Γ^k_{ij}` as `symbols[k][i][j]`.
    Christoffel {
        symbols: Vec<Vec<Vec<String>>>,
        #[serde(default = "yes")]
        symmetric: bool,
    },
    LeviCivita,
}

fn yes() -> bool {
    true
}

/// `"pass"` or `"fail"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Declared expectations; absent flags are not compared.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedFlags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selfsimilar: Option<Verdict>,
    #[serde(default, alias = "conical", skip_serializing_if = "Option::is_none")]
    pub conical_riemannian: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radiant: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hessian_cone: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conical_hessian: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extensive_exists: Option<Verdict>,
}

/// A full manifold declaration: chart, metric (explicit or assembled from a
/// cone block), `ξ`, and optional connection, potential and expectations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub chart: ChartSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definiteness: Option<Definiteness>,
    pub xi: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedFlags>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Vec<StructureReport>>,
}

/// A declaration compiled to typed fields.
#[derive(Debug, Clone)]
pub struct Manifold {
    pub name: String,
    pub chart: Chart,
    pub metric: MetricField,
    pub cone: Option<ConeMetricSpec>,
    pub xi: VectorField,
    pub connection: Option<Connection>,
    pub potential: Option<ScalarExpr>,
}

fn expr(source: &str, coords: &[String], field: &str) -> Result<ScalarExpr> {
    parse_expr(source, coords).map_err(|e| Error::from(e).in_field(field))
}

fn exprs(sources: &[String], coords: &[String], field: &str) -> Result<Vec<ScalarExpr>> {
    sources
        .iter()
        .enumerate()
        .map(|(i, s)| expr(s, coords, &format!("{field}[{i}]")))
        .collect()
}

fn matrix(rows: &[Vec<String>], coords: &[String], field: &str) -> Result<Vec<Vec<ScalarExpr>>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| exprs(r, coords, &format!("{field}[{i}]")))
        .collect()
}

impl ChartSpec {
    pub fn boxed(coords: &[&str], bounds: &[(Option<f64>, Option<f64>)], sample: Option<&[(f64, f64)]>) -> Self {
        Self {
            dim: Some(coords.len()),
            coords: coords.iter().map(|s| s.to_string()).collect(),
            bounds: bounds.iter().map(|&(lo, hi)| [lo, hi]).collect(),
            sample: sample.map(|s| s.iter().map(|&(lo, hi)| [lo, hi]).collect()),
        }
    }

    pub fn compile(&self) -> Result<ChartDomain> {
        if let Some(d) = self.dim {
            if d != self.coords.len() {
                return Err(Error::Spec(format!(
                    "chart.dim is {d} but {} coordinates are listed",
                    self.coords.len()
                )));
            }
        }
        if self.bounds.len() != self.coords.len() {
            return Err(Error::Spec("chart.bounds needs one [lo, hi] pair per coordinate".into()));
        }
        let bounds: Vec<Interval> = self
            .bounds
            .iter()
            .map(|[lo, hi]| {
                Interval::new(lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))
            })
            .collect();
        let sample = match &self.sample {
            Some(s) => s.iter().map(|&[lo, hi]| (lo, hi)).collect(),
            None => bounds
                .iter()
                .zip(&self.coords)
                .map(|(b, name)| {
                    if b.lo.is_finite() && b.hi.is_finite() {
                        let pad = 0.01 * (b.hi - b.lo);
                        Ok((b.lo + pad, b.hi - pad))
                    } else {
                        Err(Error::Spec(format!(
                            "coordinate `{name}` has an infinite bound; chart.sample is required"
                        )))
                    }
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(ChartDomain::new(self.coords.clone(), bounds, sample)?)
    }
}

impl ManifoldSpec {
    pub fn compile(&self) -> Result<Manifold> {
        let chart = self.compile_chart()?;
        let coords = &self.chart.coords;
        let claim = self.definiteness.unwrap_or_default();
        let (metric, cone) = match (&self.metric, &self.cone) {
            (Some(rows), None) => {
                let m = matrix(rows, coords, "metric")?;
                let g = MetricField::new(chart.clone(), m, claim).map_err(|e| e.in_field("metric"))?;
                (g, None)
            }
            (None, Some(block)) => {
                let spec = self.cone_spec(&chart, block)?;
                (spec.metric_unchecked().with_claim(claim), Some(spec))
            }
            (Some(_), Some(_)) => {
                return Err(Error::Spec("declare either `metric` or `cone`, not both".into()))
            }
            (None, None) => return Err(Error::Spec("one of `metric` or `cone` is required".into())),
        };
        let chart = cone.as_ref().map_or(chart, |s| s.chart().clone());
        let xi = VectorField::new(chart.clone(), exprs(&self.xi, coords, "xi")?)
            .map_err(|e| e.in_field("xi"))?;
        let connection = match &self.connection {
            None => None,
            Some(ConnectionSpec::CartesianFlat) => Some(Connection::flat_cartesian(chart.clone())),
            Some(ConnectionSpec::LeviCivita) => Some(Connection::levi_civita(metric.clone())),
            Some(ConnectionSpec::Christoffel { symbols, symmetric }) => {
                let parsed = symbols
                    .iter()
                    .enumerate()
                    .map(|(k, m)| matrix(m, coords, &format!("connection.symbols[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                Some(
                    Connection::explicit(chart.clone(), parsed, *symmetric)
                        .map_err(|e| e.in_field("connection.symbols"))?,
                )
            }
        };
        let potential = self
            .potential
            .as_deref()
            .map(|s| expr(s, coords, "potential"))
            .transpose()?;
        Ok(Manifold {
            name: self.name.clone().unwrap_or_else(|| "unnamed".into()),
            chart,
            metric,
            cone,
            xi,
            connection,
            potential,
        })
    }

    fn cone_spec(&self, chart: &Chart, block: &ConeBlock) -> Result<ConeMetricSpec> {
        let f = block
            .f
            .as_deref()
            .ok_or_else(|| Error::Spec("cone.f is required".into()))?;
        let (g_m, alpha) = self.cone_base(chart, block)?;
        let f = expr(f, g_m.chart().coords(), "cone.f")?;
        let t = chart.dim() - 1;
        ConeMetricSpec::new(g_m, alpha, f)?
            .with_placement(block.placement)
            .with_t(&chart.coords()[t], chart.bounds()[t], chart.sample_box()[t])
            .map_err(|e| e.in_field("chart"))
    }

    /// Base metric and one-form of the cone block, on the chart minus its
    /// last coordinate.
    pub fn cone_base(&self, chart: &Chart, block: &ConeBlock) -> Result<(MetricField, OneFormField)> {
        let d = chart.dim();
        if d < 2 {
            return Err(Error::Spec("a cone block needs at least one base coordinate plus t".into()));
        }
        let base: Chart = Arc::new(chart.base()?);
        let bc = base.coords();
        let g_m = MetricField::new(base.clone(), matrix(&block.g_m, bc, "cone.g_m")?, Definiteness::PositiveDefinite)
            .map_err(|e| e.in_field("cone.g_m"))?;
        let alpha = OneFormField::new(base.clone(), exprs(&block.alpha, bc, "cone.alpha")?)
            .map_err(|e| e.in_field("cone.alpha"))?;
        Ok((g_m, alpha))
    }

    /// The compiled chart alone.
    pub fn compile_chart(&self) -> Result<Chart> {
        Ok(Arc::new(self.chart.compile().map_err(|e| e.in_field("chart"))?))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // serde_json messages end with "at line L column C"
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec serializes");
        s.push('\n');
        s
    }
}

/// Rebuild a declaration from a cone spec (used by the constructions).
pub fn cone_block_of(spec: &ConeMetricSpec) -> ConeBlock {
    ConeBlock {
        g_m: spec
            .g_m()
            .rows()
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect(),
        alpha: spec.alpha().components().iter().map(|e| e.to_string()).collect(),
        f: Some(spec.f().to_string()),
        placement: spec.placement(),
    }
}

/// Chart declaration reproducing `chart` exactly.
pub fn chart_spec_of(chart: &ChartDomain) -> ChartSpec {
    let fin = |x: f64| x.is_finite().then_some(x);
    ChartSpec {
        dim: Some(chart.dim()),
        coords: chart.coords().to_vec(),
        bounds: chart.bounds().iter().map(|b| [fin(b.lo), fin(b.hi)]).collect(),
        sample: Some(chart.sample_box().iter().map(|&(lo, hi)| [lo, hi]).collect()),
    }
}

pub fn exprs_to_strings(e: &[ScalarExpr]) -> Vec<String> {
    e.iter().map(|x| x.to_string()).collect()
}
