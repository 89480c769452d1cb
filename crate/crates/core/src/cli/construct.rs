//! Construction entry points: each reads a declaration, builds a new object
//! and returns a declaration carrying the checks that confirm it.

use clap::ValueEnum;

use crate::catalog::{
    chart_spec_of, classify, cone_block_of, exprs_to_strings, ConeBlock, ConnectionSpec,
    ExpectedFlags, Manifold, ManifoldSpec, Verdict,
};
use crate::cone::{check_positivity, contact_selfsimilar_example, positivity_potential, ConeMetricSpec};
use crate::error::{Error, Result};
use crate::hessian::{
    check_extensive_with, extensive_from_cone, extensive_from_conical, radial_potential,
    ExtensiveMetric, ExtensiveReport,
};
use crate::report::{CheckConfig, StructureReport};
use crate::tensor::{Connection, Definiteness};

/// Default `margin` when the input declares none.
pub const DEFAULT_MARGIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    /// Contact form on an odd-dimensional base to a selfsimilar,
    /// non-conical metric.
    SelfsimilarFromContact,
    /// Hessian cone to its extensive metric `t g_M = Hess(t)`.
    ExtensiveFromCone,
    /// Conical Hessian metric to its extensive rescaling.
    ExtensiveFromConical,
    /// Fill in `f = g_M⁻¹(α, α) + margin` for a cone block.
    PositivityF,
}

pub fn construct(kind: ConstructKind, input: &ManifoldSpec, config: &CheckConfig) -> Result<ManifoldSpec> {
    match kind {
        ConstructKind::SelfsimilarFromContact => selfsimilar_from_contact(input, config),
        ConstructKind::ExtensiveFromCone => extensive_cone(input, config),
        ConstructKind::ExtensiveFromConical => extensive_conical(input, config),
        ConstructKind::PositivityF => positivity_f(input, config),
    }
}

fn require_cone(input: &ManifoldSpec) -> Result<&ConeBlock> {
    input
        .cone
        .as_ref()
        .ok_or_else(|| Error::Spec("this construction needs a `cone` block".into()))
}

fn margin(input: &ManifoldSpec) -> f64 {
    input.margin.unwrap_or(DEFAULT_MARGIN)
}

fn expected(v: [Verdict; 6]) -> ExpectedFlags {
    ExpectedFlags {
        selfsimilar: Some(v[0]),
        conical_riemannian: Some(v[1]),
        radiant: Some(v[2]),
        hessian_cone: Some(v[3]),
        conical_hessian: Some(v[4]),
        extensive_exists: Some(v[5]),
    }
}

fn name(input: &ManifoldSpec, suffix: &str) -> Option<String> {
    Some(format!("{}_{suffix}", input.name.as_deref().unwrap_or("input")))
}

/// Declaration of a cone spec with the given extras, verified by the
/// classification checks relevant to it.
fn cone_output(input: &ManifoldSpec, spec: &ConeMetricSpec, suffix: &str, note: &str, config: &CheckConfig) -> Result<ManifoldSpec> {
    let t = spec.t_name().to_string();
    let n = spec.base_dim();
    let mut xi = vec!["0".to_string(); n];
    xi.push(t);
    let mut out = ManifoldSpec {
        name: name(input, suffix),
        chart: chart_spec_of(spec.chart()),
        metric: None,
        cone: Some(cone_block_of(spec)),
        definiteness: None,
        xi,
        connection: None,
        potential: None,
        margin: Some(margin(input)),
        expected: None,
        note: Some(note.into()),
        verification: None,
    };
    let report = classify(&out, config)?;
    out.verification = Some(report.checks);
    Ok(out)
}

fn selfsimilar_from_contact(input: &ManifoldSpec, config: &CheckConfig) -> Result<ManifoldSpec> {
    let block = require_cone(input)?;
    let chart = input.compile_chart()?;
    let (g_m, alpha) = input.cone_base(&chart, block)?;
    let base_samples = config.samples_for(g_m.chart());
    let spec = contact_selfsimilar_example(&alpha, &g_m, margin(input), &base_samples)?;
    let t = chart.dim() - 1;
    let spec = spec.with_t(&chart.coords()[t], chart.bounds()[t], chart.sample_box()[t])?;
    let mut out = cone_output(
        input,
        &spec,
        "contact_selfsimilar",
        "t^2 f g_M + t Sym(dt x alpha) + dt^2 with f = g_M^-1(alpha, alpha) + margin and alpha contact: selfsimilar, not a Riemannian cone",
        config,
    )?;
    out.expected = Some(ExpectedFlags {
        selfsimilar: Some(Verdict::Pass),
        conical_riemannian: Some(Verdict::Fail),
        ..Default::default()
    });
    Ok(out)
}

fn positivity_f(input: &ManifoldSpec, config: &CheckConfig) -> Result<ManifoldSpec> {
    let block = require_cone(input)?;
    let chart = input.compile_chart()?;
    let (g_m, alpha) = input.cone_base(&chart, block)?;
    let base_samples = config.samples_for(g_m.chart());
    let f = positivity_potential(&g_m, &alpha, margin(input), &base_samples)?;
    let t = chart.dim() - 1;
    let spec = ConeMetricSpec::new(g_m, alpha, f)?
        .with_placement(block.placement)
        .with_t(&chart.coords()[t], chart.bounds()[t], chart.sample_box()[t])?;
    let pos = check_positivity(&spec, &config.samples_for(spec.chart()))?;
    if !(pos.passed() && pos.agree()) {
        return Err(Error::Positivity {
            point: pos.eigenvalue.worst_point,
            detail: "constructed f does not give a positive metric".into(),
        });
    }
    let mut out = cone_output(input, &spec, "positivity_f", "f = g_M^-1(alpha, alpha) + margin, positive by both routes", config)?;
    out.expected = Some(ExpectedFlags {
        selfsimilar: Some(Verdict::Pass),
        ..Default::default()
    });
    Ok(out)
}

fn fail_on(report: &ExtensiveReport) -> Result<()> {
    match report.reports().into_iter().find(|r| !r.passed) {
        Some(bad) => Err(Error::ResidualExceeded {
            check: format!("{} at {:?}", bad.name, bad.worst_point),
            residual: bad.max_residual,
            tolerance: bad.tolerance,
        }),
        None => Ok(()),
    }
}

fn connection_spec(input: &ManifoldSpec) -> Result<ConnectionSpec> {
    input
        .connection
        .clone()
        .ok_or_else(|| Error::Spec("this construction needs a flat `connection`".into()))
}

/// Declaration of a degenerate extensive metric on the input chart.
fn extensive_output(
    input: &ManifoldSpec,
    m: &Manifold,
    e: &ExtensiveMetric,
    potential: String,
    report: &ExtensiveReport,
    suffix: &str,
    note: &str,
) -> Result<ManifoldSpec> {
    Ok(ManifoldSpec {
        name: name(input, suffix),
        chart: chart_spec_of(&m.chart),
        metric: Some(
            e.metric
                .rows()
                .iter()
                .map(|r| exprs_to_strings(r))
                .collect(),
        ),
        cone: None,
        definiteness: Some(Definiteness::PositiveSemidefinite),
        xi: exprs_to_strings(e.xi.components()),
        connection: Some(connection_spec(input)?),
        potential: Some(potential),
        margin: None,
        expected: Some(expected([
            Verdict::Fail,
            Verdict::Fail,
            Verdict::Pass,
            Verdict::Fail,
            Verdict::Fail,
            Verdict::Pass,
        ])),
        note: Some(note.into()),
        verification: Some(report.reports().into_iter().cloned().collect::<Vec<StructureReport>>()),
    })
}

fn connection_of(m: &Manifold) -> Result<&Connection> {
    m.connection
        .as_ref()
        .ok_or_else(|| Error::Spec("this construction needs a flat `connection`".into()))
}

fn extensive_cone(input: &ManifoldSpec, config: &CheckConfig) -> Result<ManifoldSpec> {
    require_cone(input)?;
    let m = input.compile()?;
    let spec = m.cone.as_ref().expect("cone block compiled");
    let c = connection_of(&m)?;
    let samples = config.samples_for(&m.chart);
    let (e, report) = extensive_from_cone(spec.g_m(), c, &samples, config.tol)?;
    extensive_output(
        input,
        &m,
        &e,
        spec.t_name().to_string(),
        &report,
        "extensive",
        "t g_M = Hess(t), kernel spanned by t d_t",
    )
}

fn extensive_conical(input: &ManifoldSpec, config: &CheckConfig) -> Result<ManifoldSpec> {
    let m = input.compile()?;
    let c = connection_of(&m)?;
    let samples = config.samples_for(&m.chart);
    let e = extensive_from_conical(&m.metric, &m.xi, &samples)?;
    let r = radial_potential(&m.metric, &m.xi);
    let report = check_extensive_with(&e, c, Some(&r), true, &samples, config.tol)?;
    fail_on(&report)?;
    extensive_output(
        input,
        &m,
        &e,
        r.to_string(),
        &report,
        "extensive",
        "(g - theta theta / g(xi, xi)) / sqrt(g(xi, xi)) = Hess(sqrt(g(xi, xi))), kernel spanned by xi",
    )
}
