//! Radiant structures, Hessian potentials and the degenerate (extensive)
//! metrics obtained from conical Hessian data.

mod extensive;
mod potential;

pub use extensive::{
    check_extensive, check_extensive_with, cone_extensive_metric, extensive_from_cone,
    extensive_from_conical, kernel_residual, radial_potential, ExtensiveMetric, ExtensiveReport,
};
pub use potential::{
    check_closed_theta_hessian, check_cone_potential, check_hessian_potential,
    check_linear_potential, check_radiant, check_radiant_hessian_identity, cone_potential,
    riemannian_cone,
};

use crate::expr::ScalarExpr;
use crate::tensor::{Chart, Connection};

/// The plane's flat connection in polar coordinates `(θ, t)` scaled by
/// `c`, i.e. pulled back along `(u, v) = (t cos cθ, t sin cθ)`:
/// `Γ^t_{θθ} = −c² t`, `Γ^θ_{θt} = Γ^θ_{tθ} = 1/t`.
pub fn angle_flat_connection(chart: Chart, c: f64) -> crate::Result<Connection> {
    if chart.dim() != 2 {
        return Err(crate::Error::Dimension("angle connection needs a (θ, t) chart".into()));
    }
    let t = ScalarExpr::coord(1, &chart.coords()[1]);
    let gtt = -(&ScalarExpr::constant(c * c) * &t);
    let inv = &ScalarExpr::one() / &t;
    Connection::explicit_from_fn(chart, true, |k, i, j| match (k, i, j) {
        (1, 0, 0) => gtt.clone(),
        (0, 0, 1) | (0, 1, 0) => inv.clone(),
        _ => ScalarExpr::zero(),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::error::Error;
    use crate::expr::{parse_expr, ChartDomain, Interval};
    use crate::report::Samples;
    use crate::tensor::{flat_hessian, Definiteness, MetricField, Tensor02, VectorField};

    const TOL: f64 = 1e-8;

    fn ex(c: &ChartDomain, s: &str) -> ScalarExpr {
        parse_expr(s, c.coords()).unwrap()
    }

    fn cartesian() -> Arc<ChartDomain> {
        Arc::new(ChartDomain::boxed(&["x", "y"], &[(0.5, 2.0), (-1.0, 1.0)]).unwrap())
    }

    fn polar() -> Arc<ChartDomain> {
        Arc::new(
            ChartDomain::new(
                vec!["th".into(), "t".into()],
                vec![Interval::new(-1.5, 1.5), Interval::positive()],
                vec![(-1.4, 1.4), (0.5, 2.0)],
            )
            .unwrap(),
        )
    }

    fn samples(c: &ChartDomain) -> Samples {
        Samples::from_chart(c, 32, 4)
    }

    fn base_line(scale: f64) -> MetricField {
        let b = Arc::new(ChartDomain::boxed(&["th"], &[(-1.5, 1.5)]).unwrap());
        MetricField::diagonal(b, vec![ScalarExpr::constant(scale * scale)]).unwrap()
    }

    #[test]
    fn radiant_examples() {
        let c = cartesian();
        let flat = Connection::flat_cartesian(c.clone());
        assert!(check_radiant(&flat, &VectorField::euler(c.clone()), &samples(&c), TOL).unwrap().passed);
        assert!(!check_radiant(&flat, &VectorField::basis(c.clone(), 0), &samples(&c), TOL).unwrap().passed);
        let p = polar();
        let pf = angle_flat_connection(p.clone(), 1.0).unwrap();
        assert!(check_radiant(&pf, &VectorField::radial_last(p.clone()), &samples(&p), TOL).unwrap().passed);
    }

    #[test]
    fn hessian_potential_examples() {
        let c = cartesian();
        let flat = Connection::flat_cartesian(c.clone());
        let e = MetricField::euclidean(c.clone());
        let s = samples(&c);
        assert!(check_hessian_potential(&flat, &ex(&c, "(x^2+y^2)/2"), &e, &s, TOL).unwrap().passed);
        assert!(!check_hessian_potential(&flat, &ex(&c, "x^4"), &e, &s, TOL).unwrap().passed);
        let p = polar();
        let pf = angle_flat_connection(p.clone(), 1.0).unwrap();
        let g = riemannian_cone(&base_line(1.0), p.clone()).unwrap();
        assert!(check_hessian_potential(&pf, &ex(&p, "t^2/2"), &g, &samples(&p), TOL).unwrap().passed);
    }

    #[test]
    fn closed_theta_examples() {
        let c = cartesian();
        let flat = Connection::flat_cartesian(c.clone());
        let s = samples(&c);
        let phi = ex(&c, "x^4 - 3*x^2*y^2 + 2*x*y^3 + y^4/5 + x^3 - y + 7");
        let r = check_closed_theta_hessian(&flat, &phi, &VectorField::euler(c.clone()), &s, TOL).unwrap();
        assert!(r.passed);

        // ξ = y ∂_x is not radiant; ι_ξ Hess(x²y) = 2y² dx + 2xy dy, d of it is −2y dx∧dy
        let xi = VectorField::new(c.clone(), vec![ex(&c, "y"), ScalarExpr::zero()]).unwrap();
        let r = check_closed_theta_hessian(&flat, &ex(&c, "x^2*y"), &xi, &s, TOL).unwrap();
        assert!(!r.passed);
        let expect = s.points().iter().map(|p| (2.0 * p[1]).abs()).fold(0.0, f64::max);
        assert!((r.max_residual - expect).abs() < 1e-12);

        let p = polar();
        let pf = angle_flat_connection(p.clone(), 1.0).unwrap();
        let r = check_closed_theta_hessian(&pf, &ex(&p, "t^2/2"), &VectorField::radial_last(p.clone()), &samples(&p), TOL)
            .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn radiant_identity_examples() {
        let c = cartesian();
        let flat = Connection::flat_cartesian(c.clone());
        let euler = VectorField::euler(c.clone());
        let s = samples(&c);
        for phi in ["x^2*y^2", "(x^2+y^2)/2", "x^3*y - y^4 + 2*x"] {
            let r = check_radiant_hessian_identity(&flat, &ex(&c, phi), &euler, &s, TOL).unwrap();
            assert!(r.passed, "{phi}: {}", r.max_residual);
        }
    }

    #[test]
    fn cone_potentials() {
        let p = polar();
        let s = samples(&p);
        for scale in [1.0, 0.5, 2.0] {
            let conn = angle_flat_connection(p.clone(), scale).unwrap();
            let r = check_cone_potential(&base_line(scale), &conn, &s, TOL).unwrap();
            assert!(r.passed, "scale {scale}: {}", r.max_residual);
        }
        // the angle-2 connection is wrong for the unit base metric
        let conn = angle_flat_connection(p.clone(), 2.0).unwrap();
        assert!(!check_cone_potential(&base_line(1.0), &conn, &s, TOL).unwrap().passed);
    }

    #[test]
    fn extensive_from_polar_cone() {
        let p = polar();
        let conn = angle_flat_connection(p.clone(), 1.0).unwrap();
        let s = samples(&p);
        let (e, rep) = extensive_from_cone(&base_line(1.0), &conn, &s, TOL).unwrap();
        assert!(rep.passed());
        assert!(rep.corank_one.as_ref().unwrap().passed);
        let q = [0.3, 2.0];
        assert_eq!(e.metric.at(&q).unwrap().to_rows(), vec![vec![2.0, 0.0], vec![0.0, 0.0]]);
        let h = flat_hessian(&conn, &ex(&p, "t"), &q).unwrap();
        assert!(h.max_abs_diff(&Tensor02::from_fn(2, |i, j| if i + j == 0 { 2.0 } else { 0.0 })) < 1e-15);
        assert_eq!(e.metric.at(&q).unwrap().eigenvalues(), vec![0.0, 2.0]);
        assert_eq!(kernel_residual(&e, &s, 0.0).unwrap().max_residual, 0.0);
    }

    #[test]
    fn extensive_from_euclidean_plane() {
        let c = Arc::new(ChartDomain::boxed(&["x", "y"], &[(-3.0, 3.0), (-3.0, 3.0)]).unwrap());
        let s = Samples::new(vec![vec![1.0, 0.0], vec![0.0, 2.0]]);
        let e = extensive_from_conical(&MetricField::euclidean(c.clone()), &VectorField::euler(c.clone()), &s).unwrap();
        let dy2 = Tensor02::from_fn(2, |i, j| if i + j == 2 { 1.0 } else { 0.0 });
        assert!(e.metric.at(&[1.0, 0.0]).unwrap().max_abs_diff(&dy2) < 1e-15);
        let half_dx2 = Tensor02::from_fn(2, |i, j| if i + j == 0 { 0.5 } else { 0.0 });
        assert!(e.metric.at(&[0.0, 2.0]).unwrap().max_abs_diff(&half_dx2) < 1e-15);
        let flat = Connection::flat_cartesian(c.clone());
        let r = ex(&c, "sqrt(x^2+y^2)");
        for p in s.points() {
            assert!(flat_hessian(&flat, &r, p).unwrap().max_abs_diff(&e.metric.at(p).unwrap()) < 1e-14);
        }
        let wide = Samples::from_chart(&c, 64, 8);
        assert!(kernel_residual(&e, &wide, 1e-12).unwrap().passed);
        let rep = check_extensive(&e, &flat, Some(&r), &wide, TOL).unwrap();
        assert!(rep.passed());

        let zero = Samples::new(vec![vec![0.0, 0.0]]);
        let c0 = Arc::new(ChartDomain::boxed(&["x", "y"], &[(-1.0, 1.0), (-1.0, 1.0)]).unwrap());
        assert!(matches!(
            extensive_from_conical(&MetricField::euclidean(c0.clone()), &VectorField::euler(c0), &zero),
            Err(Error::InCheck { .. })
        ));
    }

    #[test]
    fn check_extensive_examples() {
        let p = polar();
        let conn = angle_flat_connection(p.clone(), 1.0).unwrap();
        let s = samples(&p);
        let e = cone_extensive_metric(&base_line(1.0), &conn).unwrap();
        assert!(check_extensive(&e, &conn, Some(&ex(&p, "t")), &s, TOL).unwrap().passed());
        let bad = check_extensive(&e, &conn, Some(&ex(&p, "t^2")), &s, TOL).unwrap();
        assert!(bad.kernel.passed && bad.semidefinite.passed);
        assert!(!bad.hessian.unwrap().passed);
        assert!(!bad.potential_linear.unwrap().passed);

        let c = cartesian();
        let euclid = ExtensiveMetric {
            metric: MetricField::euclidean(c.clone()).with_claim(Definiteness::PositiveSemidefinite),
            xi: VectorField::euler(c.clone()),
        };
        let r = check_extensive(&euclid, &Connection::flat_cartesian(c.clone()), None, &samples(&c), TOL).unwrap();
        assert!(!r.kernel.passed);
    }
}
