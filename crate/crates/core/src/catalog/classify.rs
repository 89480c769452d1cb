//! The full classification pipeline for one manifold declaration.

use serde::{Deserialize, Serialize};

use crate::cone::{
    check_cone_criterion, check_conical, check_dilation_equivariance_along, check_positivity,
    check_selfsimilar, POSITIVITY_FLOOR,
};
use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::hessian::{
    check_closed_theta_hessian, check_extensive_with, check_hessian_potential, check_radiant,
    check_radiant_hessian_identity, extensive_from_conical, radial_potential, ExtensiveMetric,
};
use crate::report::{scan, CheckConfig, Samples, StructureReport, SEMIDEFINITE_SLACK};
use crate::tensor::{check_flat_torsion_free, Definiteness};

use super::spec::{ExpectedFlags, Manifold, ManifoldSpec, Verdict};

/// Dilation factors for the integrated selfsimilarity check.
pub const DILATION_FACTORS: [f64; 3] = [0.5, 2.0, 7.0];

/// Derived structure flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub selfsimilar: Verdict,
    pub conical_riemannian: Verdict,
    pub radiant: Verdict,
    pub hessian_cone: Verdict,
    pub conical_hessian: Verdict,
    pub extensive_exists: Verdict,
}

impl Flags {
    pub fn named(&self) -> [(&'static str, Verdict); 6] {
        [
            ("selfsimilar", self.selfsimilar),
            ("conical_riemannian", self.conical_riemannian),
            ("radiant", self.radiant),
            ("hessian_cone", self.hessian_cone),
            ("conical_hessian", self.conical_hessian),
            ("extensive_exists", self.extensive_exists),
        ]
    }

    /// Human-readable lines `flag: expected X, got Y` for every declared
    /// flag that differs.
    pub fn mismatches(&self, expected: &ExpectedFlags) -> Vec<String> {
        let declared = [
            expected.selfsimilar,
            expected.conical_riemannian,
            expected.radiant,
            expected.hessian_cone,
            expected.conical_hessian,
            expected.extensive_exists,
        ];
        self.named()
            .iter()
            .zip(declared)
            .filter_map(|(&(name, got), want)| match want {
                Some(w) if w != got => Some(format!("{name}: expected {}, got {}", word(w), word(got))),
                _ => None,
            })
            .collect()
    }

    pub fn as_expected(&self) -> ExpectedFlags {
        ExpectedFlags {
            selfsimilar: Some(self.selfsimilar),
            conical_riemannian: Some(self.conical_riemannian),
            radiant: Some(self.radiant),
            hessian_cone: Some(self.hessian_cone),
            conical_hessian: Some(self.conical_hessian),
            extensive_exists: Some(self.extensive_exists),
        }
    }
}

pub(crate) fn word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

/// Seed, sample count and tolerance echoed into every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub fd_tol: f64,
}

impl From<&CheckConfig> for ConfigEcho {
    fn from(c: &CheckConfig) -> Self {
        Self {
            samples: c.samples,
            seed: c.seed,
            tol: c.tol,
            fd_tol: c.fd_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub engine: String,
    pub name: String,
    pub config: ConfigEcho,
    /// One record per check, in the order they ran.
    pub checks: Vec<StructureReport>,
    /// Whether the four conical conditions agree (only judged when the
    /// metric is selfsimilar).
    pub conical_consistent: Option<bool>,
    /// Whether the `df = 2α` criterion agrees with the four conditions
    /// (only for cone-block declarations).
    pub cone_criterion_agrees: Option<bool>,
    /// Whether every dilation check agrees with the infinitesimal
    /// selfsimilarity check (only when `ξ` generates coordinate dilations).
    pub dilation_agrees: Option<bool>,
    pub flags: Flags,
    pub expected: Option<ExpectedFlags>,
    pub mismatches: Vec<String>,
}

impl ClassificationReport {
    pub fn check(&self, name: &str) -> Option<&StructureReport> {
        self.checks.iter().find(|r| r.name == name)
    }

    pub fn matches_expected(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Pretty JSON with object keys sorted, newline terminated.
    pub fn to_json(&self) -> String {
        sorted_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} ({}; samples {}, seed {}, tol {:e})\n",
            self.name, self.engine, self.config.samples, self.config.seed, self.config.tol
        );
        for r in &self.checks {
            out.push_str(&format!(
                "  {:<34} {}  max residual {:.3e}  (tol {:.1e})\n",
                r.name,
                if r.passed { "pass" } else { "FAIL" },
                r.max_residual,
                r.tolerance
            ));
        }
        for (label, v) in [
            ("conical conditions agree", self.conical_consistent),
            ("cone criterion agrees", self.cone_criterion_agrees),
            ("dilations agree", self.dilation_agrees),
        ] {
            if let Some(v) = v {
                out.push_str(&format!("  {label}: {}\n", if v { "yes" } else { "NO" }));
            }
        }
        out.push_str("flags:\n");
        for (name, v) in self.flags.named() {
            out.push_str(&format!("  {name:<20} {}\n", word(v)));
        }
        for m in &self.mismatches {
            out.push_str(&format!("MISMATCH {m}\n"));
        }
        out
    }
}

/// Serialize through `serde_json::Value`, whose maps keep keys sorted.
pub fn sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn engine_version() -> String {
    format!("conegeom {}", env!("CARGO_PKG_VERSION"))
}

/// Parse, compile and classify.
pub fn classify(spec: &ManifoldSpec, config: &CheckConfig) -> Result<ClassificationReport> {
    let m = spec.compile()?;
    let mut report = classify_manifold(&m, config)?;
    if let Some(expected) = &spec.expected {
        report.mismatches = report.flags.mismatches(expected);
        report.expected = Some(expected.clone());
    }
    Ok(report)
}

/// Coordinates on which `ξ` acts as `x^k ∂_k`, provided every other
/// component vanishes identically.
fn dilation_axes(m: &Manifold) -> Option<Vec<usize>> {
    let mut axes = Vec::new();
    for (k, c) in m.xi.components().iter().enumerate() {
        if *c == ScalarExpr::coord(k, &m.chart.coords()[k]) {
            axes.push(k);
        } else if !c.is_zero() {
            return None;
        }
    }
    (!axes.is_empty()).then_some(axes)
}

fn dilation_stays_inside(m: &Manifold, axes: &[usize], samples: &Samples) -> bool {
    DILATION_FACTORS.iter().all(|&q| {
        samples.points().iter().all(|p| {
            let moved: Vec<f64> = p
                .iter()
                .enumerate()
                .map(|(k, x)| if axes.contains(&k) { x * q } else { *x })
                .collect();
            m.chart.contains(&moved)
        })
    })
}

pub fn classify_manifold(m: &Manifold, config: &CheckConfig) -> Result<ClassificationReport> {
    let samples = config.samples_for(&m.chart);
    let tol = config.tol;
    let g = &m.metric;
    let xi = &m.xi;
    let pd = g.claim() == Definiteness::PositiveDefinite;
    let mut checks = Vec::new();

    // positivity
    match &m.cone {
        Some(spec) => {
            let rep = check_positivity(spec, &samples)?;
            let agree = rep.agree();
            let passed = rep.passed();
            let worst = rep.eigenvalue.worst_point.clone();
            let detail = format!(
                "discriminant residual {:e}, eigenvalue residual {:e}",
                rep.discriminant.max_residual, rep.eigenvalue.max_residual
            );
            checks.push(rep.discriminant);
            checks.push(rep.eigenvalue);
            if !agree || (pd && !passed) {
                return Err(Error::Positivity { point: worst, detail }.in_check("positivity"));
            }
        }
        None => {
            let floor = if pd { -POSITIVITY_FLOOR } else { SEMIDEFINITE_SLACK };
            let rep = scan("positivity_eigenvalue", &samples, floor, |p| Ok(-g.at(p)?.eigenvalues()[0]))?;
            if !rep.passed {
                return Err(Error::Positivity {
                    point: rep.worst_point.clone(),
                    detail: format!("smallest eigenvalue {:e}", -rep.max_residual),
                }
                .in_check("positivity"));
            }
            checks.push(rep);
        }
    }

    let selfsimilar = check_selfsimilar(g, xi, &samples, tol)?;
    let selfsimilar_pass = selfsimilar.passed;
    checks.push(selfsimilar);

    let mut conical_pass = false;
    let mut conical_consistent = None;
    let mut cone_criterion_agrees = None;
    if pd {
        let conical = check_conical(g, xi, &samples, tol)?;
        conical_pass = conical.d_xi_identity.passed;
        conical_consistent = conical.consistent;
        let four = conical.passed();
        checks.extend(conical.conditions().into_iter().cloned());
        if let Some(spec) = &m.cone {
            let criterion = check_cone_criterion(spec, &samples, tol)?;
            cone_criterion_agrees = Some(criterion.passed == four);
            checks.push(criterion);
        }
    }

    let mut dilation_agrees = None;
    if let Some(axes) = dilation_axes(m) {
        if dilation_stays_inside(m, &axes, &samples) {
            let mut all = true;
            for q in DILATION_FACTORS {
                let r = check_dilation_equivariance_along(g, &axes, q, &samples, tol)?;
                all &= r.passed;
                checks.push(r);
            }
            dilation_agrees = Some(all == selfsimilar_pass);
        }
    }

    let mut radiant_pass = false;
    let mut hessian_pass = false;
    let mut cone_potential_pass = false;
    let mut extensive_pass = false;
    if let Some(c) = &m.connection {
        let flat = check_flat_torsion_free(c, &samples, tol)?;
        let flat_pass = flat.passed();
        checks.push(flat.torsion);
        checks.push(flat.curvature);
        let radiant = check_radiant(c, xi, &samples, tol)?;
        radiant_pass = flat_pass && radiant.passed;
        checks.push(radiant);

        // the potential g(ξ, ξ)/2 every Hessian cone carries
        let half_norm = &g.quadratic(xi.components()) / &ScalarExpr::constant(2.0);
        let mut cone_pot = check_hessian_potential(c, &half_norm, g, &samples, tol)?;
        cone_pot.name = "hessian_cone_potential".into();
        cone_potential_pass = cone_pot.passed;

        match &m.potential {
            Some(phi) => {
                let h = check_hessian_potential(c, phi, g, &samples, tol)?;
                hessian_pass = h.passed;
                checks.push(h);
                checks.push(check_closed_theta_hessian(c, phi, xi, &samples, tol)?);
                checks.push(check_radiant_hessian_identity(c, phi, xi, &samples, tol)?);
            }
            None => hessian_pass = cone_potential_pass,
        }
        checks.push(cone_pot);

        if pd {
            if selfsimilar_pass && conical_pass && radiant_pass && hessian_pass {
                let e = extensive_from_conical(g, xi, &samples)?;
                let r = radial_potential(g, xi);
                let rep = check_extensive_with(&e, c, Some(&r), true, &samples, tol)?;
                extensive_pass = rep.passed();
                checks.extend(rep.reports().into_iter().cloned());
            }
        } else {
            let e = ExtensiveMetric {
                metric: g.clone(),
                xi: xi.clone(),
            };
            let rep = check_extensive_with(&e, c, m.potential.as_ref(), false, &samples, tol)?;
            extensive_pass = rep.passed() && radiant_pass;
            checks.extend(rep.reports().into_iter().cloned());
        }
    }

    let conical_hessian = pd && selfsimilar_pass && radiant_pass && hessian_pass;
    let flags = Flags {
        selfsimilar: selfsimilar_pass.into(),
        conical_riemannian: conical_pass.into(),
        radiant: radiant_pass.into(),
        hessian_cone: (conical_hessian && cone_potential_pass).into(),
        conical_hessian: conical_hessian.into(),
        extensive_exists: extensive_pass.into(),
    };
    Ok(ClassificationReport {
        engine: engine_version(),
        name: m.name.clone(),
        config: config.into(),
        checks,
        conical_consistent,
        cone_criterion_agrees,
        dilation_agrees,
        flags,
        expected: None,
        mismatches: Vec::new(),
    })
}
