//! The theorem suite: every structural identity run over the catalog and
//! the random families, one row per (identity, example) pair.

use serde::{Deserialize, Serialize};

use crate::catalog::{
    catalog_entries, classify, engine_version, sorted_json, ConfigEcho, Manifold, NamedExample,
};
use crate::cone::{
    check_cone_criterion, check_conical, check_positivity, check_selfsimilar, positivity_potential,
    ConeMetricSpec,
};
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::families::{contact_family, gradient_family, random_polynomials};
use crate::hessian::{
    check_closed_theta_hessian, check_extensive_with, check_radiant_hessian_identity,
    cone_extensive_metric, extensive_from_cone, extensive_from_conical, kernel_residual,
    radial_potential,
};
use crate::report::{scan, CheckConfig, Samples};
use crate::tensor::{flat_hessian, Connection, OneFormField, Tensor02};

/// Random members per family.
pub const FAMILY_SIZE: usize = 20;
/// Random polynomial potentials per radiant structure.
pub const POLYNOMIALS: usize = 20;
pub const POLYNOMIAL_DEGREE: u32 = 4;
/// Failing conical conditions must exceed this on every condition.
pub const CONDITION_GAP: f64 = 1e-2;
/// Tolerances over which the four conical verdicts must not split.
pub const TOLERANCE_SWEEP: [f64; 3] = [1e-10, 1e-8, 1e-6];
/// `ι_ξ` of a constructed extensive metric must vanish to this level.
pub const KERNEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub theorem: String,
    pub example: String,
    pub passed: bool,
    /// Largest residual of the identity, when the row checks one.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub engine: String,
    pub config: ConfigEcho,
    pub rows: Vec<TheoremRow>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        sorted_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} (samples {}, seed {}, tol {:e})\n",
            self.engine, self.config.samples, self.config.seed, self.config.tol
        );
        for r in &self.rows {
            let res = r.max_residual.map(|v| format!("  max residual {v:.3e}")).unwrap_or_default();
            out.push_str(&format!(
                "{}  {:<26} {:<26}{}  {}\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.theorem,
                r.example,
                res,
                r.detail
            ));
        }
        let n = self.rows.iter().filter(|r| r.passed).count();
        out.push_str(&format!("{n}/{} rows pass\n", self.rows.len()));
        out
    }
}

fn row(theorem: &str, example: &str, passed: bool, max_residual: Option<f64>, tolerance: f64, detail: String) -> TheoremRow {
    TheoremRow {
        theorem: theorem.into(),
        example: example.into(),
        passed,
        max_residual,
        tolerance,
        detail,
    }
}

struct Entry {
    id: String,
    m: Manifold,
    samples: Samples,
    selfsimilar: bool,
    radiant: bool,
    conical_hessian: bool,
}

fn prepare(e: &NamedExample, config: &CheckConfig) -> Result<Entry> {
    let m = e.spec.compile()?;
    let rep = classify(&e.spec, config)?;
    let samples = config.samples_for(&m.chart);
    Ok(Entry {
        id: e.id.clone(),
        samples,
        selfsimilar: rep.flags.selfsimilar.is_pass(),
        radiant: rep.flags.radiant.is_pass(),
        conical_hessian: rep.flags.conical_hessian.is_pass(),
        m,
    })
}

/// The four conical verdicts agree, the residuals split cleanly around the
/// tolerance, and no tolerance in the sweep splits them.
fn conical_equivalence(e: &Entry, tol: f64) -> Result<TheoremRow> {
    let rep = check_conical(&e.m.metric, &e.m.xi, &e.samples, tol)?;
    let res: Vec<f64> = rep.conditions().iter().map(|r| r.max_residual).collect();
    let hi = res.iter().cloned().fold(0.0, f64::max);
    let lo = res.iter().cloned().fold(f64::INFINITY, f64::min);
    let all_pass = hi <= tol;
    let gap = all_pass || lo >= CONDITION_GAP;
    let sweep = TOLERANCE_SWEEP.iter().all(|&t| hi <= t || lo > t);
    let detail = if all_pass {
        "all four conditions hold".to_string()
    } else {
        format!("all four conditions fail, smallest residual {lo:.3e}")
    };
    Ok(row(
        "conical-equivalence",
        &e.id,
        rep.consistent == Some(true) && gap && sweep,
        Some(hi),
        tol,
        detail,
    ))
}

fn cone_samples(spec: &ConeMetricSpec, config: &CheckConfig) -> Samples {
    config.samples_for(spec.chart())
}

/// `df = 2α` and the four conical conditions give the same verdict.
fn criterion_agreement(example: &str, specs: &[ConeMetricSpec], expect: Option<bool>, config: &CheckConfig) -> Result<TheoremRow> {
    let mut agree = 0;
    let mut conical = 0;
    for spec in specs {
        let s = cone_samples(spec, config);
        let crit = check_cone_criterion(spec, &s, config.tol)?;
        let four = check_conical(&spec.metric_unchecked(), &spec.xi(), &s, config.tol)?.passed();
        agree += usize::from(crit.passed == four);
        conical += usize::from(four);
    }
    let n = specs.len();
    let expected_ok = match expect {
        Some(true) => conical == n,
        Some(false) => conical == 0,
        None => true,
    };
    Ok(row(
        "cone-criterion",
        example,
        agree == n && expected_ok,
        None,
        config.tol,
        format!("verdicts agree {agree}/{n}, conical {conical}/{n}"),
    ))
}

/// `f = g_M⁻¹(α, α) + margin` makes the assembled metric positive by both
/// routes.
fn positivity_rows(entries: &[Entry], contact: &[ConeMetricSpec], config: &CheckConfig) -> Result<Vec<TheoremRow>> {
    let mut rows = Vec::new();
    for e in entries {
        let Some(spec) = &e.m.cone else { continue };
        if e.id != "contact_cone" {
            continue;
        }
        let base = e.samples.truncated(spec.base_dim());
        let f = positivity_potential(spec.g_m(), spec.alpha(), 1.0, &base)?;
        let diff = scan("positivity_potential_matches", &base, config.tol, |p| {
            let a = f.eval(p).map_err(|err| Error::eval(p, err))?;
            let b = spec.f().eval(p).map_err(|err| Error::eval(p, err))?;
            Ok((a - b).abs())
        })?;
        let pos = check_positivity(spec, &e.samples)?;
        let smallest = -pos.eigenvalue.max_residual;
        rows.push(row(
            "positivity-lemma",
            &e.id,
            diff.passed && pos.passed() && pos.agree() && smallest > 0.0,
            Some(diff.max_residual),
            config.tol,
            format!("smallest eigenvalue {smallest:.3e}, routes agree"),
        ));
    }
    let mut ok = 0;
    let mut smallest = f64::INFINITY;
    for spec in contact {
        let pos = check_positivity(spec, &cone_samples(spec, config))?;
        ok += usize::from(pos.passed() && pos.agree());
        smallest = smallest.min(-pos.eigenvalue.max_residual);
    }
    rows.push(row(
        "positivity-lemma",
        "contact-family",
        ok == contact.len() && smallest > 0.0,
        None,
        config.tol,
        format!("positive by both routes {ok}/{}, smallest eigenvalue {smallest:.3e}", contact.len()),
    ));

    // α = 0 with margin 1 gives f ≡ 1
    if let Some(e) = entries.iter().find(|e| e.id == "round_cone_polar") {
        let spec = e.m.cone.as_ref().expect("cone entry");
        let zero = OneFormField::zero(spec.base().clone());
        let f = positivity_potential(spec.g_m(), &zero, 1.0, &e.samples.truncated(1))?;
        let exact = f.as_constant() == Some(1.0);
        rows.push(row(
            "positivity-lemma",
            "zero-alpha",
            exact,
            None,
            0.0,
            format!("f = {f}"),
        ));
    }
    Ok(rows)
}

/// Selfsimilar but failing all four conical conditions by a wide margin.
fn contact_rows(entries: &[Entry], contact: &[ConeMetricSpec], config: &CheckConfig) -> Result<Vec<TheoremRow>> {
    let judge = |g: &crate::tensor::MetricField, xi: &crate::tensor::VectorField, s: &Samples| -> Result<(bool, f64)> {
        let ss = check_selfsimilar(g, xi, s, config.tol)?;
        let rep = check_conical(g, xi, s, config.tol)?;
        let lo = rep.conditions().iter().map(|r| r.max_residual).fold(f64::INFINITY, f64::min);
        Ok((ss.passed && lo >= CONDITION_GAP, lo))
    };
    let mut rows = Vec::new();
    if let Some(e) = entries.iter().find(|e| e.id == "contact_cone") {
        let (ok, lo) = judge(&e.m.metric, &e.m.xi, &e.samples)?;
        rows.push(row(
            "contact-selfsimilar",
            &e.id,
            ok,
            None,
            config.tol,
            format!("selfsimilar, smallest conical residual {lo:.3e}"),
        ));
    }
    let mut ok = 0;
    let mut lo = f64::INFINITY;
    for spec in contact {
        let (good, l) = judge(&spec.metric_unchecked(), &spec.xi(), &cone_samples(spec, config))?;
        ok += usize::from(good);
        lo = lo.min(l);
    }
    rows.push(row(
        "contact-selfsimilar",
        "contact-family",
        ok == contact.len(),
        None,
        config.tol,
        format!("selfsimilar and not conical {ok}/{}, smallest conical residual {lo:.3e}", contact.len()),
    ));
    Ok(rows)
}

/// `dι_ξ Hess φ = 0` and `Lie_ξ g − g − ∇ι_ξ g = 0` for random polynomial
/// potentials on a radiant structure.
fn polynomial_rows(e: &Entry, config: &CheckConfig) -> Result<Vec<TheoremRow>> {
    let c = e.m.connection.as_ref().expect("radiant entries carry a connection");
    let polys = random_polynomials(&e.m.chart, POLYNOMIALS, POLYNOMIAL_DEGREE, config.seed);
    let mut closed: f64 = 0.0;
    let mut ident: f64 = 0.0;
    for phi in &polys {
        closed = closed.max(check_closed_theta_hessian(c, phi, &e.m.xi, &e.samples, config.tol)?.max_residual);
        ident = ident.max(check_radiant_hessian_identity(c, phi, &e.m.xi, &e.samples, config.tol)?.max_residual);
    }
    let detail = format!("{} polynomials of degree <= {POLYNOMIAL_DEGREE}", polys.len());
    Ok(vec![
        row("closed-theta-hessian", &e.id, closed <= config.tol, Some(closed), config.tol, detail.clone()),
        row("radiant-hessian-identity", &e.id, ident <= config.tol, Some(ident), config.tol, detail),
    ])
}

fn outer(d: &Tensor02, r: &[f64]) -> Tensor02 {
    Tensor02::symmetric_from_fn(d.dim(), |i, j| r[i] * r[j])
}

/// With `φ = g(ξ, ξ)/2` and `r = sqrt(2φ)`: `Hess φ = g`, and
/// `dr ⊗ dr + r Hess r = g`.
fn cone_potential_row(e: &Entry, c: &Connection, config: &CheckConfig) -> Result<TheoremRow> {
    let g = &e.m.metric;
    let phi = &g.quadratic(e.m.xi.components()) / &ScalarExpr::constant(2.0);
    let r = radial_potential(g, &e.m.xi);
    let rep = scan("cone_potential_chain", &e.samples, config.tol, |p| {
        let gp = g.at(p)?;
        let h_phi = flat_hessian(c, &phi, p)?;
        let h_r = flat_hessian(c, &r, p)?;
        let rj = r.jet(p, 1).map_err(|err| Error::eval(p, err))?;
        let chain = outer(&gp, rj.gradient()).sub(&h_r.scaled(-rj.value()));
        Ok(h_phi.max_abs_diff(&gp).max(chain.max_abs_diff(&gp)))
    })?;
    Ok(row(
        "cone-potential",
        &e.id,
        rep.passed,
        Some(rep.max_residual),
        config.tol,
        "Hess(g(xi,xi)/2) = g and dr dr + r Hess(r) = g".into(),
    ))
}

/// `t g_M = Hess(t)` with kernel spanned by `t ∂_t`.
fn extensive_cone_row(e: &Entry, spec: &ConeMetricSpec, c: &Connection, config: &CheckConfig) -> Result<TheoremRow> {
    let (ext, rep) = extensive_from_cone(spec.g_m(), c, &e.samples, config.tol)?;
    let hess = rep.hessian.as_ref().expect("potential supplied");
    let kernel = kernel_residual(&ext, &e.samples, KERNEL_TOL)?;
    Ok(row(
        "extensive-from-cone",
        &e.id,
        rep.passed() && kernel.passed,
        Some(hess.max_residual),
        config.tol,
        format!("t g_M = Hess(t), kernel residual {:.3e}", kernel.max_residual),
    ))
}

/// The orthogonal rescaling of `g` is extensive with potential
/// `sqrt(g(ξ, ξ))`, and on a cone equals `t g_M`.
fn extensive_conical_row(e: &Entry, c: &Connection, config: &CheckConfig) -> Result<TheoremRow> {
    let g = &e.m.metric;
    let ext = extensive_from_conical(g, &e.m.xi, &e.samples)?;
    let r = radial_potential(g, &e.m.xi);
    let rep = check_extensive_with(&ext, c, Some(&r), true, &e.samples, config.tol)?;
    let kernel = kernel_residual(&ext, &e.samples, KERNEL_TOL)?;
    let mut worst = rep.hessian.as_ref().map_or(0.0, |h| h.max_residual);
    let mut agrees = true;
    let mut detail = format!("extensive with potential sqrt(g(xi,xi)), kernel residual {:.3e}", kernel.max_residual);
    if let Some(spec) = &e.m.cone {
        let cone = cone_extensive_metric(spec.g_m(), c)?;
        let diff = scan("extensive_matches_cone", &e.samples, config.tol, |p| {
            Ok(ext.metric.at(p)?.max_abs_diff(&cone.metric.at(p)?))
        })?;
        worst = worst.max(diff.max_residual);
        agrees = diff.passed;
        detail.push_str(&format!(", |e - t g_M| {:.3e}", diff.max_residual));
    }
    Ok(row(
        "extensive-from-conical",
        &e.id,
        rep.passed() && kernel.passed && agrees,
        Some(worst),
        config.tol,
        detail,
    ))
}

/// Run every identity on the catalog and the seeded random families.
pub fn verify_theorems(config: &CheckConfig) -> Result<SuiteReport> {
    let entries = catalog_entries()
        .iter()
        .map(|e| prepare(e, config))
        .collect::<Result<Vec<_>>>()?;
    let cones = gradient_family(FAMILY_SIZE, config.seed, 1.0)?;
    let twisted = gradient_family(FAMILY_SIZE, config.seed.wrapping_add(1), -1.0)?;
    let contact = contact_family(FAMILY_SIZE, config.seed.wrapping_add(2))?;
    let tol = config.tol;
    let mut rows = Vec::new();

    for e in entries.iter().filter(|e| e.selfsimilar) {
        rows.push(conical_equivalence(e, tol)?);
    }

    for e in entries.iter().filter(|e| e.selfsimilar) {
        if let Some(spec) = &e.m.cone {
            rows.push(criterion_agreement(&e.id, std::slice::from_ref(spec), None, config)?);
        }
    }
    rows.push(criterion_agreement("gradient-family", &cones, Some(true), config)?);
    rows.push(criterion_agreement("twisted-gradient-family", &twisted, Some(false), config)?);
    rows.push(criterion_agreement("contact-family", &contact, Some(false), config)?);

    rows.extend(positivity_rows(&entries, &contact, config)?);
    rows.extend(contact_rows(&entries, &contact, config)?);

    for e in entries.iter().filter(|e| e.radiant) {
        rows.extend(polynomial_rows(e, config)?);
    }

    let hessian: Vec<&Entry> = entries.iter().filter(|e| e.conical_hessian).collect();
    for e in &hessian {
        let c = e.m.connection.as_ref().expect("conical Hessian entries carry a connection");
        rows.push(cone_potential_row(e, c, config)?);
    }
    for e in &hessian {
        if let Some(spec) = &e.m.cone {
            let c = e.m.connection.as_ref().expect("connection");
            rows.push(extensive_cone_row(e, spec, c, config)?);
        }
    }
    for e in &hessian {
        let c = e.m.connection.as_ref().expect("connection");
        rows.push(extensive_conical_row(e, c, config)?);
    }

    let passed = rows.iter().all(|r| r.passed);
    Ok(SuiteReport {
        engine: engine_version(),
        config: config.into(),
        rows,
        passed,
    })
}
