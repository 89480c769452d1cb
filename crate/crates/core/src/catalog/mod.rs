//! Manifold declarations, the built-in catalog and the classifier that runs
//! every structure check on a declaration.

mod classify;
mod entries;
mod spec;

pub use classify::{
    classify, classify_manifold, engine_version, sorted_json, ClassificationReport, ConfigEcho,
    Flags, DILATION_FACTORS,
};
pub use entries::{catalog_entries, catalog_entry, NamedExample};
pub use spec::{
    chart_spec_of, cone_block_of, exprs_to_strings, ChartSpec, ConeBlock, ConnectionSpec,
    ExpectedFlags, Manifold, ManifoldSpec, Verdict,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::expr::parse_expr;
    use crate::hessian::{cone_extensive_metric, extensive_from_cone};
    use crate::report::{CheckConfig, Samples};
    use crate::tensor::{christoffel, christoffel_values, MetricField, Tensor02};

    fn classified(id: &str) -> ClassificationReport {
        classify(&catalog_entry(id).unwrap().spec, &CheckConfig::default()).unwrap()
    }

    #[test]
    fn catalog_has_the_required_entries() {
        let ids: Vec<String> = catalog_entries().into_iter().map(|e| e.id).collect();
        assert!(ids.len() >= 7);
        for id in [
            "euclidean_cone_cartesian",
            "round_cone_polar",
            "angle_cone_0.5",
            "angle_cone_2",
            "contact_cone",
            "warped_noncone",
            "exact_alpha_cone",
            "product_nonselfsimilar",
        ] {
            assert!(ids.iter().any(|i| i == id), "{id}");
        }
    }

    #[test]
    fn every_entry_reproduces_its_flags() {
        for e in catalog_entries() {
            let r = classify(&e.spec, &CheckConfig::default()).unwrap();
            assert!(r.matches_expected(), "{}: {:?}", e.id, r.mismatches);
            assert_eq!(r.flags.as_expected(), e.expected, "{}", e.id);
            let again = classify(&e.spec, &CheckConfig::default()).unwrap();
            assert_eq!(r.to_json(), again.to_json());
        }
    }

    #[test]
    fn flag_monotonicity() {
        for e in catalog_entries() {
            let f = classify(&e.spec, &CheckConfig::default()).unwrap().flags;
            if f.conical_riemannian.is_pass() {
                assert!(f.selfsimilar.is_pass(), "{}", e.id);
            }
            if f.conical_hessian.is_pass() {
                assert!(f.conical_riemannian.is_pass(), "{}", e.id);
            }
        }
    }

    #[test]
    fn euclidean_all_pass() {
        let r = classified("euclidean_cone_cartesian");
        assert!(r.checks.iter().all(|c| c.passed), "{}", r.to_text());
        assert_eq!(r.dilation_agrees, Some(true));
    }

    #[test]
    fn contact_is_selfsimilar_not_conical() {
        let r = classified("contact_cone");
        assert_eq!(r.flags.selfsimilar, Verdict::Pass);
        assert_eq!(r.flags.conical_riemannian, Verdict::Fail);
        assert_eq!(r.conical_consistent, Some(true));
        assert_eq!(r.cone_criterion_agrees, Some(true));
        assert!(r.check("positivity_eigenvalue").unwrap().passed);
    }

    #[test]
    fn exact_alpha_conical_by_both_routes() {
        let r = classified("exact_alpha_cone");
        assert!(r.check("cone_criterion").unwrap().passed);
        for c in ["conical_d_xi_identity", "conical_d_theta_metric", "conical_d_theta_symmetric", "conical_theta_closed"] {
            assert!(r.check(c).unwrap().passed, "{c}");
        }
        assert_eq!(r.cone_criterion_agrees, Some(true));
    }

    #[test]
    fn product_fails_selfsimilar() {
        let r = classified("product_nonselfsimilar");
        assert_eq!(r.flags.selfsimilar, Verdict::Fail);
        assert_eq!(r.conical_consistent, None);
        assert_eq!(r.dilation_agrees, Some(true));
    }

    #[test]
    fn round_cone_extensive_is_t_dtheta_squared() {
        let m = catalog_entry("round_cone_polar").unwrap().spec.compile().unwrap();
        let cone = m.cone.as_ref().unwrap();
        let c = m.connection.as_ref().unwrap();
        let s = CheckConfig::default().samples_for(&m.chart);
        let (e, rep) = extensive_from_cone(cone.g_m(), c, &s, 1e-8).unwrap();
        assert!(rep.passed());
        for p in s.points() {
            let want = Tensor02::from_fn(2, |i, j| if i + j == 0 { p[1] } else { 0.0 });
            assert_eq!(e.metric.at(p).unwrap().max_abs_diff(&want), 0.0);
        }
        assert_eq!(cone_extensive_metric(cone.g_m(), c).unwrap(), e);
    }

    /// The hand-entered angle Christoffels against two independent routes:
    /// Levi-Civita of the pulled-back flat metric, and `J⁻¹ ∂_i ∂_j u` for
    /// the chart map `u = (t cos cθ, t sin cθ)`.
    #[test]
    fn angle_christoffels_rederived() {
        for (id, c) in [("round_cone_polar", 1.0), ("angle_cone_0.5", 0.5), ("angle_cone_2", 2.0)] {
            let m = catalog_entry(id).unwrap().spec.compile().unwrap();
            let conn = m.connection.as_ref().unwrap();
            let pulled = MetricField::new(
                m.chart.clone(),
                vec![
                    vec![parse_expr(&format!("{}*t^2", c * c), m.chart.coords()).unwrap(), parse_expr("0", m.chart.coords()).unwrap()],
                    vec![parse_expr("0", m.chart.coords()).unwrap(), parse_expr("1", m.chart.coords()).unwrap()],
                ],
                Default::default(),
            )
            .unwrap();
            let u = [format!("t*cos({c}*th)"), format!("t*sin({c}*th)")]
                .map(|s| parse_expr(&s, m.chart.coords()).unwrap());
            for p in Samples::from_chart(&m.chart, 16, 3).points() {
                let hand = christoffel_values(&conn.symbols(p, 0).unwrap());
                let lc = christoffel(&pulled, p).unwrap();
                let jets = u.each_ref().map(|e| e.jet(p, 2).unwrap());
                let jac = nalgebra::Matrix2::from_fn(|a, i| jets[a].first(i));
                let inv = jac.try_inverse().unwrap();
                for k in 0..2 {
                    for i in 0..2 {
                        for j in 0..2 {
                            let transport: f64 = (0..2).map(|a| inv[(k, a)] * jets[a].second(i, j)).sum();
                            assert!((hand[k][i][j] - lc[k][i][j]).abs() < 1e-12, "{id} lc {k}{i}{j}");
                            assert!((hand[k][i][j] - transport).abs() < 1e-12, "{id} map {k}{i}{j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn specs_round_trip_through_json() {
        for e in catalog_entries() {
            let text = e.spec.to_json();
            assert_eq!(ManifoldSpec::from_json(&text).unwrap(), e.spec);
        }
    }

    #[test]
    fn chart_spec_of_reproduces_the_chart() {
        for e in catalog_entries() {
            let m = e.spec.compile().unwrap();
            assert_eq!(chart_spec_of(&m.chart).compile().unwrap(), *m.chart);
        }
    }

    #[test]
    fn spec_errors_name_the_field() {
        let mut s = catalog_entry("product_nonselfsimilar").unwrap().spec;
        s.metric.as_mut().unwrap()[0][1] = "w".into();
        match s.compile() {
            Err(Error::InField { field, source }) => {
                assert_eq!(field, "metric[0][1]");
                assert!(matches!(*source, Error::Parse(_)));
            }
            other => panic!("{other:?}"),
        }

        let mut both = catalog_entry("round_cone_polar").unwrap().spec;
        both.metric = Some(vec![vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]]);
        assert!(matches!(both.compile(), Err(Error::Spec(_))));

        let mut open = catalog_entry("round_cone_polar").unwrap().spec;
        open.chart.sample = None;
        assert!(matches!(open.compile(), Err(Error::InField { .. })));

        let mut asym = catalog_entry("product_nonselfsimilar").unwrap().spec;
        asym.metric.as_mut().unwrap()[0][1] = "t".into();
        assert!(matches!(asym.compile(), Err(Error::InField { .. })));

        assert!(matches!(ManifoldSpec::from_json("{\"chart\": 3}"), Err(Error::Spec(_))));
    }

    #[test]
    fn non_positive_metric_is_an_error() {
        let mut s = catalog_entry("warped_noncone").unwrap().spec;
        s.cone.as_mut().unwrap().f = Some("sin(x) - 2".into());
        assert!(matches!(
            classify(&s, &CheckConfig::default()),
            Err(Error::InCheck { ref check, .. }) if check == "positivity"
        ));
    }

    #[test]
    fn mismatches_are_reported() {
        let mut s = catalog_entry("contact_cone").unwrap().spec;
        s.expected = Some(ExpectedFlags {
            conical_riemannian: Some(Verdict::Pass),
            ..Default::default()
        });
        let r = classify(&s, &CheckConfig::default()).unwrap();
        assert_eq!(r.mismatches, vec!["conical_riemannian: expected pass, got fail".to_string()]);
    }
}
