use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{ChartDomain, Jet, ScalarExpr};

use super::linalg::{inverse_metric, Tensor02};

pub type Chart = Arc<ChartDomain>;

pub(crate) fn check_point(chart: &ChartDomain, p: &[f64]) -> Result<()> {
    if chart.contains(p) {
        Ok(())
    } else {
        Err(Error::OutsideDomain { point: p.to_vec() })
    }
}

pub(crate) fn eval_jets(exprs: &[ScalarExpr], p: &[f64], order: usize) -> Result<Vec<Jet>> {
    exprs
        .iter()
        .map(|e| e.jet(p, order).map_err(|err| Error::eval(p, err)))
        .collect()
}

fn check_exprs(chart: &ChartDomain, exprs: &[ScalarExpr], what: &str) -> Result<()> {
    for e in exprs {
        if let Some(i) = e.max_coord_index() {
            if i >= chart.dim() {
                return Err(Error::Dimension(format!(
                    "{what} component `{e}` references coordinate {i} of a {}-dimensional chart",
                    chart.dim()
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    #[default]
    PositiveDefinite,
    PositiveSemidefinite,
}

/// Symmetric covariant 2-tensor field with expression components; only the
/// upper triangle is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    chart: Chart,
    upper: Vec<ScalarExpr>,
    claim: Definiteness,
}

impl MetricField {
    /// Full `d×d` component matrix; must be symmetric expression by
    /// expression.
    pub fn new(chart: Chart, comp: Vec<Vec<ScalarExpr>>, claim: Definiteness) -> Result<Self> {
        let d = chart.dim();
        if comp.len() != d || comp.iter().any(|row| row.len() != d) {
            return Err(Error::Dimension(format!(
                "metric must be {d}x{d} on this chart"
            )));
        }
        for i in 0..d {
            for j in i + 1..d {
                if comp[i][j] != comp[j][i] {
                    return Err(Error::InvalidArgument(format!(
                        "metric component ({i},{j}) `{}` differs from ({j},{i}) `{}`",
                        comp[i][j], comp[j][i]
                    )));
                }
            }
        }
        Self::from_fn(chart, claim, |i, j| comp[i][j].clone())
    }

    /// Build from `f(i, j)` evaluated on the upper triangle only.
    pub fn from_fn(
        chart: Chart,
        claim: Definiteness,
        mut f: impl FnMut(usize, usize) -> ScalarExpr,
    ) -> Result<Self> {
        let d = chart.dim();
        let mut upper = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in i..d {
                upper.push(f(i, j));
            }
        }
        check_exprs(&chart, &upper, "metric")?;
        Ok(Self {
            chart,
            upper,
            claim,
        })
    }

    pub fn diagonal(chart: Chart, diag: Vec<ScalarExpr>) -> Result<Self> {
        if diag.len() != chart.dim() {
            return Err(Error::Dimension("diagonal length".into()));
        }
        Self::from_fn(chart, Definiteness::PositiveDefinite, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                ScalarExpr::zero()
            }
        })
    }

    pub fn euclidean(chart: Chart) -> Self {
        let d = chart.dim();
        Self::diagonal(chart, vec![ScalarExpr::one(); d]).expect("dimension matches")
    }

    pub fn with_claim(mut self, claim: Definiteness) -> Self {
        self.claim = claim;
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn claim(&self) -> Definiteness {
        self.claim
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.upper[upper_index(self.dim(), i, j)]
    }

    /// Component matrix as nested rows (mirrored).
    pub fn rows(&self) -> Vec<Vec<ScalarExpr>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Full row-major `d×d` jets of the components at `p`.
    pub fn jets(&self, p: &[f64], order: usize) -> Result<Vec<Jet>> {
        check_point(&self.chart, p)?;
        let d = self.dim();
        let up = eval_jets(&self.upper, p, order)?;
        Ok((0..d * d)
            .map(|n| up[upper_index(d, n / d, n % d)].clone())
            .collect())
    }

    pub fn at(&self, p: &[f64]) -> Result<Tensor02> {
        check_point(&self.chart, p)?;
        let d = self.dim();
        let vals = eval_jets(&self.upper, p, 0)?;
        Ok(Tensor02::symmetric_from_fn(d, |i, j| {
            vals[upper_index(d, i, j)].value()
        }))
    }

    /// `g(X, X)` as an expression.
    pub fn quadratic(&self, x: &[ScalarExpr]) -> ScalarExpr {
        let d = self.dim();
        let mut terms = Vec::new();
        for i in 0..d {
            for j in 0..d {
                terms.push(&(self.get(i, j) * &x[i]) * &x[j]);
            }
        }
        ScalarExpr::sum(terms)
    }
}

fn upper_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows 0..i hold d + (d-1) + ... + (d-i+1) entries
    i * d - i * i.saturating_sub(1) / 2 + (j - i)
}

macro_rules! component_field {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name {
            chart: Chart,
            comp: Vec<ScalarExpr>,
        }

        impl $name {
            pub fn new(chart: Chart, comp: Vec<ScalarExpr>) -> Result<Self> {
                if comp.len() != chart.dim() {
                    return Err(Error::Dimension(format!(
                        "{} has {} components on a {}-dimensional chart",
                        $what,
                        comp.len(),
                        chart.dim()
                    )));
                }
                check_exprs(&chart, &comp, $what)?;
                Ok(Self { chart, comp })
            }

            pub fn zero(chart: Chart) -> Self {
                let d = chart.dim();
                Self { chart, comp: vec![ScalarExpr::zero(); d] }
            }

            /// The `i`-th coordinate basis element.
            pub fn basis(chart: Chart, i: usize) -> Self {
                let d = chart.dim();
                let comp = (0..d)
                    .map(|k| if k == i { ScalarExpr::one() } else { ScalarExpr::zero() })
                    .collect();
                Self { chart, comp }
            }

            pub fn chart(&self) -> &Chart {
                &self.chart
            }

            pub fn dim(&self) -> usize {
                self.comp.len()
            }

            pub fn components(&self) -> &[ScalarExpr] {
                &self.comp
            }

            pub fn get(&self, i: usize) -> &ScalarExpr {
                &self.comp[i]
            }

            pub fn jets(&self, p: &[f64], order: usize) -> Result<Vec<Jet>> {
                check_point(&self.chart, p)?;
                eval_jets(&self.comp, p, order)
            }

            pub fn at(&self, p: &[f64]) -> Result<Vec<f64>> {
                Ok(self.jets(p, 0)?.iter().map(Jet::value).collect())
            }
        }
    };
}

component_field!(
    /// Contravariant vector field `V = V^k ∂_k`.
    VectorField,
    "vector field"
);
component_field!(
    /// One-form `ω = ω_k dx^k`.
    OneFormField,
    "one-form"
);

impl VectorField {
    /// The Euler field `Σ x^i ∂_i`.
    pub fn euler(chart: Chart) -> Self {
        let comp = chart
            .coords()
            .iter()
            .enumerate()
            .map(|(i, n)| ScalarExpr::coord(i, n))
            .collect();
        Self { chart, comp }
    }

    /// `t ∂_t` with `t` the last coordinate.
    pub fn radial_last(chart: Chart) -> Self {
        let d = chart.dim();
        let t = ScalarExpr::coord(d - 1, &chart.coords()[d - 1]);
        let comp = (0..d)
            .map(|k| if k == d - 1 { t.clone() } else { ScalarExpr::zero() })
            .collect();
        Self { chart, comp }
    }
}

/// How the Christoffel symbols of a [`Connection`] are obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionKind {
    LeviCivita(MetricField),
    /// `Γ^k_{ij}` stored at `(k * d + i) * d + j`.
    Explicit(Vec<ScalarExpr>),
}

/// Affine connection on a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    chart: Chart,
    kind: ConnectionKind,
    symmetric_claim: bool,
}

/// `Γ^k_{ij}` jets at a point, indexed `[k][i][j]`.
#[derive(Debug, Clone)]
pub struct ChristoffelJets {
    d: usize,
    data: Vec<Jet>,
}

impl ChristoffelJets {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &Jet {
        &self.data[(k * self.d + i) * self.d + j]
    }

    /// `Γ^k_{ij}` values.
    pub fn value(&self, k: usize, i: usize, j: usize) -> f64 {
        self.get(k, i, j).value()
    }
}

/// Inverse of a symmetric matrix of order-≤1 jets, using
/// `∂(G⁻¹) = -G⁻¹ (∂G) G⁻¹`.
pub(crate) fn inverse_jets(g: &[Jet], d: usize, order: usize) -> Result<Vec<Jet>> {
    assert!(order <= 1, "inverse jets are only needed to first order");
    let value = Tensor02::symmetric_from_fn(d, |i, j| g[i * d + j].value());
    let inv = inverse_metric(&value)?;
    let inv_m = inv.matrix();
    if order == 0 {
        return Ok((0..d * d)
            .map(|n| Jet::constant(inv_m[(n / d, n % d)], d, 0))
            .collect());
    }
    let dg: Vec<DMatrix<f64>> = (0..d)
        .map(|m| DMatrix::from_fn(d, d, |i, j| g[i * d + j].first(m)))
        .collect();
    let dinv: Vec<DMatrix<f64>> = dg.iter().map(|dgm| -(inv_m * dgm * inv_m)).collect();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            let grad = (0..d).map(|m| dinv[m][(a, b)]).collect();
            out.push(Jet::from_gradient(inv_m[(a, b)], grad));
        }
    }
    Ok(out)
}

impl Connection {
    pub fn levi_civita(g: MetricField) -> Self {
        Self {
            chart: g.chart().clone(),
            kind: ConnectionKind::LeviCivita(g),
            symmetric_claim: true,
        }
    }

    /// Explicit symbols as nested `[k][i][j]` arrays.
    pub fn explicit(
        chart: Chart,
        symbols: Vec<Vec<Vec<ScalarExpr>>>,
        symmetric_claim: bool,
    ) -> Result<Self> {
        let d = chart.dim();
        if symbols.len() != d
            || symbols
                .iter()
                .any(|m| m.len() != d || m.iter().any(|r| r.len() != d))
        {
            return Err(Error::Dimension(format!(
                "Christoffel symbols must be {d}x{d}x{d}"
            )));
        }
        let flat: Vec<ScalarExpr> = symbols.into_iter().flatten().flatten().collect();
        check_exprs(&chart, &flat, "Christoffel symbol")?;
        Ok(Self {
            chart,
            kind: ConnectionKind::Explicit(flat),
            symmetric_claim,
        })
    }

    /// Explicit symbols from `f(k, i, j)`.
    pub fn explicit_from_fn(
        chart: Chart,
        symmetric_claim: bool,
        mut f: impl FnMut(usize, usize, usize) -> ScalarExpr,
    ) -> Result<Self> {
        let d = chart.dim();
        let symbols = (0..d)
            .map(|k| (0..d).map(|i| (0..d).map(|j| f(k, i, j)).collect()).collect())
            .collect();
        Self::explicit(chart, symbols, symmetric_claim)
    }

    /// The connection with all `Γ = 0` in this chart.
    pub fn flat_cartesian(chart: Chart) -> Self {
        let d = chart.dim();
        Self {
            chart,
            kind: ConnectionKind::Explicit(vec![ScalarExpr::zero(); d * d * d]),
            symmetric_claim: true,
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn kind(&self) -> &ConnectionKind {
        &self.kind
    }

    pub fn symmetric_claim(&self) -> bool {
        self.symmetric_claim
    }

    pub fn is_flat_cartesian(&self) -> bool {
        matches!(&self.kind, ConnectionKind::Explicit(s) if s.iter().all(ScalarExpr::is_zero))
    }

    /// Christoffel jets at `p` to order 0 or 1.
    pub fn symbols(&self, p: &[f64], order: usize) -> Result<ChristoffelJets> {
        assert!(order <= 1, "Christoffel jets are only needed to first order");
        check_point(&self.chart, p)?;
        let d = self.dim();
        let data = match &self.kind {
            ConnectionKind::Explicit(s) => eval_jets(s, p, order)?,
            ConnectionKind::LeviCivita(g) => levi_civita_jets(g, p, order)?,
        };
        Ok(ChristoffelJets { d, data })
    }
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})` as jets.
fn levi_civita_jets(g: &MetricField, p: &[f64], order: usize) -> Result<Vec<Jet>> {
    let d = g.dim();
    let gj = g.jets(p, order + 1)?;
    let ginv = inverse_jets(&gj, d, order)?;
    // dg[(l * d + i) * d + j] = ∂_l g_ij
    let mut dg = Vec::with_capacity(d * d * d);
    for l in 0..d {
        for n in 0..d * d {
            dg.push(gj[n].derivative(l));
        }
    }
    let dgf = |l: usize, i: usize, j: usize| &dg[(l * d + i) * d + j];
    let mut first_kind = vec![Jet::constant(0.0, d, order); d * d * d];
    for l in 0..d {
        for i in 0..d {
            for j in i..d {
                let v = dgf(i, j, l).add(dgf(j, i, l)).sub(dgf(l, i, j)).scale(0.5);
                first_kind[(l * d + i) * d + j] = v.clone();
                first_kind[(l * d + j) * d + i] = v;
            }
        }
    }
    let mut out = vec![Jet::constant(0.0, d, order); d * d * d];
    for k in 0..d {
        for i in 0..d {
            for j in i..d {
                let mut acc = Jet::constant(0.0, d, order);
                for l in 0..d {
                    acc = acc.add(&ginv[k * d + l].mul(&first_kind[(l * d + i) * d + j]));
                }
                out[(k * d + i) * d + j] = acc.clone();
                out[(k * d + j) * d + i] = acc;
            }
        }
    }
    Ok(out)
}
