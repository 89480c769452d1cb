//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use conegeom::catalog::{catalog_entries, catalog_entry, classify, Verdict};
use conegeom::cone::{
    assemble_selfsimilar_metric, check_cone_criterion, check_conical, check_selfsimilar,
    cone_samples, ConeMetricSpec,
};
use conegeom::expr::{finite_diff, parse_expr, ChartDomain};
use conegeom::families::{contact_family, gradient_family, random_polynomials};
use conegeom::hessian::{
    check_closed_theta_hessian, check_cone_potential, check_radiant_hessian_identity,
    cone_extensive_metric, extensive_from_cone, extensive_from_conical, kernel_residual,
};
use conegeom::report::{CheckConfig, DEFAULT_SEED};
use conegeom::tensor::{
    christoffel, metric_compatibility_residual, torsion_residual, Connection, Definiteness,
    MetricField,
};
use conegeom::Result;

use common::{chart, point, rng, smooth_expr};

const TOL: f64 = 1e-8;
const GAP: f64 = 1e-2;

type Outcome = Result<(bool, String)>;

/// For selfsimilar entries the four conical conditions agree, with a
/// clear gap between passing and failing residuals.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let config = CheckConfig::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for e in catalog_entries() {
        let m = e.spec.compile()?;
        let s = config.samples_for(&m.chart);
        if !check_selfsimilar(&m.metric, &m.xi, &s, TOL)?.passed {
            continue;
        }
        let r = check_conical(&m.metric, &m.xi, &s, TOL)?;
        let res: Vec<f64> = r.conditions().iter().map(|c| c.max_residual).collect();
        let agree = r.consistent == Some(true);
        let gap = if r.passed() {
            res.iter().all(|&x| x <= TOL)
        } else {
            res.iter().all(|&x| x >= GAP)
        };
        ok &= agree && gap;
        notes.push(format!("{} {}", e.id, if r.passed() { "pass" } else { "fail" }));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 5.0;
    Ok((ok, format!("{} in {secs:.2}s", notes.join(", "))))
}

fn agreement(specs: &[ConeMetricSpec], seed: u64) -> Result<(usize, usize)> {
    let mut agree = 0;
    let mut conical = 0;
    for spec in specs {
        let s = cone_samples(spec, 64, seed);
        let g = assemble_selfsimilar_metric(spec, &s)?;
        let route_a = check_cone_criterion(spec, &s, TOL)?.passed;
        let route_b = check_conical(&g, &spec.xi(), &s, TOL)?.passed();
        agree += usize::from(route_a == route_b);
        conical += usize::from(route_b);
    }
    Ok((agree, conical))
}

/// The `df = 2α` criterion against the four-condition route, on gradient
/// families of both signs and on contact cones.
fn criterion_2() -> Outcome {
    let seed = DEFAULT_SEED;
    let literal = gradient_family(20, seed, -1.0)?;
    let corrected = gradient_family(20, seed, 1.0)?;
    let contact = contact_family(20, seed)?;
    let (a1, c1) = agreement(&literal, seed)?;
    let (a2, c2) = agreement(&corrected, seed)?;
    let (a3, c3) = agreement(&contact, seed)?;
    let ok = a1 == 20 && a2 == 20 && a3 == 20 && c2 == 20 && c3 == 0;
    Ok((
        ok,
        format!(
            "alpha = -df/2: {a1}/20 agree ({c1} conical); alpha = +df/2: {a2}/20 agree ({c2} conical); contact: {a3}/20 agree ({c3} conical)"
        ),
    ))
}

/// The contact cone is selfsimilar, not conical, and positive definite.
fn criterion_3() -> Outcome {
    let e = catalog_entry("contact_cone").expect("catalog entry");
    let config = CheckConfig::default();
    let report = classify(&e.spec, &config)?;
    let m = e.spec.compile()?;
    let s = config.samples_for(&m.chart);
    let mut min_eig = f64::INFINITY;
    for p in s.points() {
        let eig = m.metric.at(p)?.eigenvalues();
        min_eig = eig.into_iter().fold(min_eig, f64::min);
    }
    let ok = report.flags.selfsimilar == Verdict::Pass
        && report.flags.conical_riemannian == Verdict::Fail
        && min_eig > 0.0
        && s.len() == 64;
    Ok((
        ok,
        format!(
            "selfsimilar {:?}, conical {:?}, smallest eigenvalue {min_eig:.4} over {} samples",
            report.flags.selfsimilar,
            report.flags.conical_riemannian,
            s.len()
        ),
    ))
}

/// Closedness of `ι_ξ Hess φ` and the radiant identity for random
/// polynomial potentials.
fn criterion_4() -> Outcome {
    let config = CheckConfig::default();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut structures = 0;
    for id in ["euclidean_cone_cartesian", "round_cone_polar"] {
        let m = catalog_entry(id).expect("catalog entry").spec.compile()?;
        let c = m.connection.as_ref().expect("radiant entries carry a connection");
        let s = config.samples_for(&m.chart);
        for phi in random_polynomials(&m.chart, 20, 4, config.seed) {
            let a = check_closed_theta_hessian(c, &phi, &m.xi, &s, TOL)?;
            let b = check_radiant_hessian_identity(c, &phi, &m.xi, &s, TOL)?;
            ok &= a.passed && b.passed;
            worst = worst.max(a.max_residual).max(b.max_residual);
        }
        structures += 1;
    }
    Ok((ok, format!("{structures} structures x 20 polynomials, worst residual {worst:.3e}")))
}

/// Cone potential, extensive metric of the cone and extensive metric of the
/// conical structure agree on the polar and angle cones.
fn criterion_5() -> Outcome {
    let config = CheckConfig::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for id in ["round_cone_polar", "angle_cone_0.5", "angle_cone_2"] {
        let m = catalog_entry(id).expect("catalog entry").spec.compile()?;
        let c = m.connection.as_ref().expect("connection");
        let spec = m.cone.as_ref().expect("cone block");
        let s = config.samples_for(&m.chart);
        let pot = check_cone_potential(spec.g_m(), c, &s, TOL)?;
        let (_, rep) = extensive_from_cone(spec.g_m(), c, &s, TOL)?;
        let hess_t = rep.hessian.as_ref().map_or(f64::INFINITY, |h| h.max_residual);
        let ext = extensive_from_conical(&m.metric, &m.xi, &s)?;
        let cone = cone_extensive_metric(spec.g_m(), c)?;
        let mut diff: f64 = 0.0;
        for p in s.points() {
            diff = diff.max(ext.metric.at(p)?.max_abs_diff(&cone.metric.at(p)?));
        }
        let kernel = kernel_residual(&ext, &s, 1e-12)?;
        ok &= pot.max_residual <= TOL && hess_t <= TOL && diff <= TOL && kernel.passed;
        notes.push(format!(
            "{id}: {:.1e}/{hess_t:.1e}/{diff:.1e}/{:.1e}",
            pot.max_residual, kernel.max_residual
        ));
    }
    Ok((ok, format!("potential/Hess t/extensive/kernel: {}", notes.join("; "))))
}

/// Jets against central differences on random smooth expressions.
fn criterion_6() -> Outcome {
    let mut r = rng(DEFAULT_SEED);
    let mut fails = 0;
    let mut worst12: f64 = 0.0;
    let mut worst3: f64 = 0.0;
    for n in 0..100 {
        let d = 1 + n % 3;
        let e = smooth_expr(&mut r, d, 3);
        let p = point(&mut r, d, 1.0);
        let ch = chart(d);
        let jet = e.jet(&p, 3).map_err(|err| conegeom::Error::eval(&p, err))?;
        let mut ok = true;
        let mut indices: Vec<Vec<usize>> = (0..d).map(|i| vec![i]).collect();
        for i in 0..d {
            for j in i..d {
                indices.push(vec![i, j]);
                for k in j..d {
                    indices.push(vec![i, j, k]);
                }
            }
        }
        for multi in indices {
            let h = if multi.len() == 3 { 1e-3 } else { 1e-4 };
            let fd = finite_diff(&e, &p, &multi, h, &ch).expect("stencil inside the box");
            let exact = jet.partial(&multi).expect("order 3 jet");
            let err = (fd - exact).abs() / exact.abs().max(1.0);
            if multi.len() == 3 {
                worst3 = worst3.max(err);
                ok &= err <= 1e-3;
            } else {
                worst12 = worst12.max(err);
                ok &= err <= 1e-5;
            }
        }
        fails += usize::from(!ok);
    }
    Ok((
        fails == 0,
        format!("{} / 100 pairs within tolerance, worst relative error {worst12:.2e} (orders 1-2), {worst3:.2e} (order 3)", 100 - fails),
    ))
}

fn metric_of(c: &Arc<ChartDomain>, rows: &[[&str; 2]; 2]) -> MetricField {
    let comp = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_expr(s, c.coords()).unwrap()).collect())
        .collect();
    MetricField::new(c.clone(), comp, Definiteness::PositiveDefinite).unwrap()
}

/// Levi-Civita soundness on the catalog and the closed forms for the polar
/// and conformally flat metrics.
fn criterion_7() -> Outcome {
    let config = CheckConfig::default();
    let mut compat: f64 = 0.0;
    let mut torsion: f64 = 0.0;
    for e in catalog_entries() {
        let m = e.spec.compile()?;
        let lc = Connection::levi_civita(m.metric.clone());
        for p in config.samples_for(&m.chart).points() {
            compat = compat.max(metric_compatibility_residual(&lc, &m.metric, p)?);
            torsion = torsion.max(torsion_residual(&lc, p)?);
        }
    }

    let polar = Arc::new(ChartDomain::boxed(&["th", "t"], &[(-1.5, 1.5), (0.25, 3.0)]).unwrap());
    let g = metric_of(&polar, &[["t^2", "0"], ["0", "1"]]);
    let mut closed: f64 = 0.0;
    for p in config.samples_for(&polar).points() {
        let t = p[1];
        let gam = christoffel(&g, p)?;
        let want = |k: usize, i: usize, j: usize| match (k, i, j) {
            (1, 0, 0) => -t,
            (0, 0, 1) | (0, 1, 0) => 1.0 / t,
            _ => 0.0,
        };
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    closed = closed.max((gam[k][i][j] - want(k, i, j)).abs());
                }
            }
        }
    }

    // g = e^{2u} δ with u = x y / 2: Γ^k_ij = δ^k_i u_j + δ^k_j u_i − δ_ij u_k
    let plane = chart(2);
    let g = metric_of(&plane, &[["exp(x*y)", "0"], ["0", "exp(x*y)"]]);
    for p in config.samples_for(&plane).points() {
        let du = [p[1] / 2.0, p[0] / 2.0];
        let gam = christoffel(&g, p)?;
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let want = delta(k, i) * du[j] + delta(k, j) * du[i] - delta(i, j) * du[k];
                    closed = closed.max((gam[k][i][j] - want).abs());
                }
            }
        }
    }
    let ok = compat <= 1e-8 && torsion <= 1e-12 && closed <= 1e-10;
    Ok((
        ok,
        format!("compatibility {compat:.2e}, torsion {torsion:.2e}, closed forms {closed:.2e}"),
    ))
}

/// Two runs of the theorem suite print identical bytes.
fn criterion_8() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_conegeom"))
            .args(["verify-theorems", "--json", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    let ok = a.status.code() == Some(0) && a.stdout == b.stdout && !a.stdout.is_empty();
    Ok((
        ok,
        format!("exit {:?}, {} bytes, identical: {}", a.status.code(), a.stdout.len(), a.stdout == b.stdout),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("conical conditions agree with a residual gap", criterion_1),
        ("cone criterion agrees with the conical check", criterion_2),
        ("contact cone selfsimilar, not conical, positive", criterion_3),
        ("radiant Hessian identities for polynomial potentials", criterion_4),
        ("cone potential and extensive constructions", criterion_5),
        ("jets match finite differences", criterion_6),
        ("Levi-Civita soundness", criterion_7),
        ("deterministic theorem report", criterion_8),
    ];
    let mut failed = 0;
    for (n, (title, f)) in criteria.iter().enumerate() {
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} {title}: {detail}",
            n + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
