//! Property tests for the structural invariants of jets, tensors, cone
//! metrics and Hessian structures.

mod common;

use std::sync::Arc;

use conegeom::catalog::{catalog_entries, classify};
use conegeom::cone::{
    assemble_selfsimilar_metric, check_positivity, check_selfsimilar, cone_samples,
    positivity_potential, ConeMetricSpec, Placement,
};
use conegeom::expr::{finite_diff, Jet, ScalarExpr};
use conegeom::hessian::{check_closed_theta_hessian, check_radiant_hessian_identity};
use conegeom::report::{CheckConfig, Samples};
use conegeom::tensor::{
    christoffel, covariant_derivative_oneform, exterior_derivative_oneform, exterior_jets,
    flat_hessian, lie_bracket, lie_derivative_metric, metric_compatibility_residual, Connection,
    Definiteness, MetricField, OneFormField, VectorField,
};
use proptest::prelude::*;

use common::{chart, point, rng, smooth_expr, Poly};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// A metric that is positive definite on the box: a constant diagonal
/// plus small smooth perturbations.
fn random_metric(seed: u64, d: usize) -> MetricField {
    let mut r = rng(seed);
    let ch = chart(d);
    let mut offd = vec![vec![ScalarExpr::zero(); d]; d];
    for (i, row) in offd.iter_mut().enumerate() {
        for e in row.iter_mut().skip(i + 1) {
            *e = &ScalarExpr::constant(0.2) * &smooth_expr(&mut r, d, 2).sin();
        }
    }
    MetricField::from_fn(ch, Definiteness::PositiveDefinite, |i, j| {
        if i == j {
            &ScalarExpr::constant(2.0 + i as f64) + &(&ScalarExpr::constant(0.3) * &smooth_expr(&mut rng(seed + 100 + i as u64), d, 2).cos())
        } else {
            offd[i.min(j)][i.max(j)].clone()
        }
    })
    .unwrap()
}

fn random_vector(seed: u64, d: usize) -> VectorField {
    let mut r = rng(seed);
    VectorField::new(chart(d), (0..d).map(|_| smooth_expr(&mut r, d, 3)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz_rule(seed in any::<u64>(), d in 1usize..4) {
        let mut r = rng(seed);
        let a = smooth_expr(&mut r, d, 3);
        let b = smooth_expr(&mut r, d, 3);
        let p = point(&mut r, d, 1.0);
        let ja = a.jet(&p, 3).unwrap();
        let jb = b.jet(&p, 3).unwrap();
        let jab = (&a * &b).jet(&p, 3).unwrap();
        prop_assert!(close(jab.value(), ja.value() * jb.value(), 1e-12));
        for i in 0..d {
            let want = ja.first(i) * jb.value() + ja.value() * jb.first(i);
            prop_assert!(close(jab.first(i), want, 1e-12));
            for j in 0..d {
                let want = ja.second(i, j) * jb.value() + ja.first(i) * jb.first(j)
                    + ja.first(j) * jb.first(i) + ja.value() * jb.second(i, j);
                prop_assert!(close(jab.second(i, j), want, 1e-11));
                for k in 0..d {
                    let want = ja.third(i, j, k) * jb.value()
                        + ja.second(i, j) * jb.first(k) + ja.second(i, k) * jb.first(j) + ja.second(j, k) * jb.first(i)
                        + ja.first(i) * jb.second(j, k) + ja.first(j) * jb.second(i, k) + ja.first(k) * jb.second(i, j)
                        + ja.value() * jb.third(i, j, k);
                    prop_assert!(close(jab.third(i, j, k), want, 1e-10));
                }
            }
        }
    }

    #[test]
    fn jets_match_finite_differences(seed in any::<u64>(), d in 1usize..4) {
        let mut r = rng(seed);
        let e = smooth_expr(&mut r, d, 3);
        let p = point(&mut r, d, 1.0);
        let ch = chart(d);
        let j = e.jet(&p, 3).unwrap();
        for i in 0..d {
            prop_assert!(close(j.first(i), finite_diff(&e, &p, &[i], 1e-4, &ch).unwrap(), 1e-5));
            for k in 0..d {
                prop_assert!(close(j.second(i, k), finite_diff(&e, &p, &[i, k], 1e-4, &ch).unwrap(), 1e-5));
                for l in 0..d {
                    prop_assert!(close(j.third(i, k, l), finite_diff(&e, &p, &[i, k, l], 1e-3, &ch).unwrap(), 1e-3));
                }
            }
        }
    }

    #[test]
    fn cubic_jets_are_exact(seed in any::<u64>(), d in 1usize..4) {
        let mut r = rng(seed);
        let poly = Poly::random(&mut r, d, 3);
        let p = point(&mut r, d, 1.0);
        let j = poly.expr().jet(&p, 3).unwrap();
        for i in 0..d {
            prop_assert!((j.first(i) - poly.partial(&[i], &p)).abs() <= 1e-12);
            for k in 0..d {
                prop_assert!((j.second(i, k) - poly.partial(&[i, k], &p)).abs() <= 1e-12);
                for l in 0..d {
                    prop_assert!((j.third(i, k, l) - poly.partial(&[i, k, l], &p)).abs() <= 1e-12);
                }
            }
        }
    }

    /// `(Lie_X g)(e_i, e_j) = X(g_ij) − g([X, e_i], e_j) − g(e_i, [X, e_j])`
    /// on the coordinate frame.
    #[test]
    fn lie_derivative_matches_frame_formula(seed in any::<u64>(), d in 1usize..4) {
        let g = random_metric(seed, d);
        let x = random_vector(seed ^ 0xabc, d);
        let p = point(&mut rng(seed + 7), d, 1.0);
        let lie = lie_derivative_metric(&x, &g, &p).unwrap();
        let xv = x.at(&p).unwrap();
        let gp = g.at(&p).unwrap();
        let brackets: Vec<Vec<f64>> = (0..d)
            .map(|i| lie_bracket(&x, &VectorField::basis(g.chart().clone(), i), &p).unwrap())
            .collect();
        for i in 0..d {
            for j in 0..d {
                let gij = g.get(i, j).jet(&p, 1).unwrap();
                let x_gij: f64 = (0..d).map(|k| xv[k] * gij.first(k)).sum();
                let b1: f64 = (0..d).map(|k| brackets[i][k] * gp.get(k, j)).sum();
                let b2: f64 = (0..d).map(|k| gp.get(i, k) * brackets[j][k]).sum();
                prop_assert!((lie.get(i, j) - (x_gij - b1 - b2)).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn alt_of_covariant_derivative_is_exterior_derivative(seed in any::<u64>(), d in 1usize..4) {
        let mut r = rng(seed);
        let ch = chart(d);
        let gammas: Vec<ScalarExpr> = (0..d * d * d).map(|_| smooth_expr(&mut r, d, 2)).collect();
        let conn = Connection::explicit_from_fn(ch.clone(), true, |k, i, j| {
            let (a, b) = (i.min(j), i.max(j));
            gammas[(k * d + a) * d + b].clone()
        }).unwrap();
        let w = OneFormField::new(ch.clone(), (0..d).map(|_| smooth_expr(&mut r, d, 3)).collect()).unwrap();
        let p = point(&mut r, d, 1.0);
        let nabla = covariant_derivative_oneform(&conn, &w, &p).unwrap();
        let dw = exterior_derivative_oneform(&w, &p).unwrap();
        for i in 0..d {
            for j in 0..d {
                prop_assert!(((nabla.get(i, j) - nabla.get(j, i)) - dw.get(i, j)).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn d_of_exact_form_vanishes(seed in any::<u64>(), d in 1usize..4) {
        let mut r = rng(seed);
        let phi = smooth_expr(&mut r, d, 3);
        let p = point(&mut r, d, 1.0);
        let j = phi.jet(&p, 2).unwrap();
        let dphi: Vec<Jet> = (0..d).map(|i| j.derivative(i)).collect();
        prop_assert!(exterior_jets(&dphi).max_abs() <= 1e-8);
    }

    #[test]
    fn levi_civita_is_torsion_free_and_compatible(seed in any::<u64>(), d in 1usize..4) {
        let g = random_metric(seed, d);
        let p = point(&mut rng(seed + 3), d, 1.0);
        let gamma = christoffel(&g, &p).unwrap();
        for k in 0..d {
            for i in 0..d {
                for j in 0..d {
                    prop_assert!((gamma[k][i][j] - gamma[k][j][i]).abs() <= 1e-12);
                }
            }
        }
        let lc = Connection::levi_civita(g.clone());
        prop_assert!(metric_compatibility_residual(&lc, &g, &p).unwrap() <= 1e-8);
    }

    /// Every assembled cone metric is selfsimilar, and the positivity
    /// potential makes it positive definite.
    #[test]
    fn assembled_cone_metrics_are_selfsimilar(seed in any::<u64>(), n in 1usize..4, base_scale in any::<bool>()) {
        let g_m = random_metric(seed, n);
        let mut r = rng(seed + 11);
        let alpha = OneFormField::new(g_m.chart().clone(), (0..n).map(|_| smooth_expr(&mut r, n, 2)).collect()).unwrap();
        let margin = r.random_range(0.1..2.0);
        let base_samples = Samples::from_chart(g_m.chart(), 16, seed);
        let f = positivity_potential(&g_m, &alpha, margin, &base_samples).unwrap();
        let placement = if base_scale { Placement::BaseScale } else { Placement::NormalForm };
        let spec = ConeMetricSpec::new(g_m, alpha, f).unwrap().with_placement(placement);
        let s = cone_samples(&spec, 16, seed);
        let pos = check_positivity(&spec, &s).unwrap();
        prop_assert!(pos.passed() && pos.agree());
        let g = assemble_selfsimilar_metric(&spec, &s).unwrap();
        let rep = check_selfsimilar(&g, &spec.xi(), &s, 1e-10).unwrap();
        prop_assert!(rep.passed, "residual {}", rep.max_residual);
    }

    /// Closedness of `ι_ξ Hess φ` and the radiant Hessian identity for
    /// random polynomial potentials on the catalog's radiant structures.
    #[test]
    fn radiant_identities_for_polynomials(seed in any::<u64>()) {
        for e in catalog_entries().into_iter().filter(|e| e.expected.radiant.is_some_and(|v| v.is_pass())) {
            let m = e.spec.compile().unwrap();
            let c = m.connection.as_ref().unwrap();
            let phi = Poly::random(&mut rng(seed), m.chart.dim(), 4).expr();
            let s = Samples::from_chart(&m.chart, 16, seed);
            prop_assert!(check_closed_theta_hessian(c, &phi, &m.xi, &s, 1e-8).unwrap().passed);
            prop_assert!(check_radiant_hessian_identity(c, &phi, &m.xi, &s, 1e-8).unwrap().passed);
        }
    }
}

use rand::Rng;

#[test]
fn flat_hessian_symmetric_on_flat_catalog_connections() {
    for e in catalog_entries() {
        let m = e.spec.compile().unwrap();
        let Some(c) = &m.connection else { continue };
        let s = CheckConfig::default().samples_for(&m.chart);
        let mut r = rng(5);
        for _ in 0..10 {
            let phi = Poly::random(&mut r, m.chart.dim(), 4).expr();
            for p in s.points() {
                assert!(flat_hessian(c, &phi, p).unwrap().asymmetry() <= 1e-12, "{}", e.id);
            }
        }
    }
}

#[test]
fn levi_civita_compatible_on_every_catalog_metric() {
    for e in catalog_entries() {
        let m = e.spec.compile().unwrap();
        let lc = Connection::levi_civita(m.metric.clone());
        for p in CheckConfig::default().samples_for(&m.chart).points() {
            assert!(metric_compatibility_residual(&lc, &m.metric, p).unwrap() <= 1e-8, "{}", e.id);
        }
    }
}

#[test]
fn dilation_agrees_with_selfsimilarity_on_the_catalog() {
    for e in catalog_entries() {
        let r = classify(&e.spec, &CheckConfig::default()).unwrap();
        assert_eq!(r.dilation_agrees, Some(true), "{}", e.id);
    }
}

#[test]
fn conical_verdicts_independent_of_tolerance() {
    for e in catalog_entries() {
        let m = e.spec.compile().unwrap();
        let s = CheckConfig::default().samples_for(&m.chart);
        if !check_selfsimilar(&m.metric, &m.xi, &s, 1e-8).unwrap().passed {
            continue;
        }
        let first = conegeom::cone::check_conical(&m.metric, &m.xi, &s, 1e-10).unwrap();
        for tol in [1e-10, 1e-9, 1e-8, 1e-7, 1e-6] {
            let rep = conegeom::cone::check_conical(&m.metric, &m.xi, &s, tol).unwrap();
            assert_eq!(rep.consistent, Some(true), "{} at {tol}", e.id);
            assert_eq!(rep.passed(), first.passed(), "{} at {tol}", e.id);
        }
    }
}

#[test]
fn unit_chart_is_shared() {
    // the generators build a fresh chart each call; fields on equal charts
    // must still combine
    let a = chart(2);
    let b = chart(2);
    assert!(!Arc::ptr_eq(&a, &b));
    let g = MetricField::euclidean(a);
    let x = VectorField::euler(b);
    assert!(lie_derivative_metric(&x, &g, &[0.5, 0.5]).is_ok());
}
