//! Built-in manifolds whose classification is known in closed form.

use super::spec::{ChartSpec, ConeBlock, ConnectionSpec, ExpectedFlags, ManifoldSpec, Verdict};
use crate::cone::Placement;

/// A catalog manifold with its known classification and the reason for it.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedExample {
    pub id: String,
    pub spec: ManifoldSpec,
    pub expected: ExpectedFlags,
    pub note: String,
}

const P: Verdict = Verdict::Pass;
const F: Verdict = Verdict::Fail;

fn flags(v: [Verdict; 6]) -> ExpectedFlags {
    ExpectedFlags {
        selfsimilar: Some(v[0]),
        conical_riemannian: Some(v[1]),
        radiant: Some(v[2]),
        hessian_cone: Some(v[3]),
        conical_hessian: Some(v[4]),
        extensive_exists: Some(v[5]),
    }
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn rows(v: &[&[&str]]) -> Vec<Vec<String>> {
    v.iter().map(|r| strings(r)).collect()
}

/// Cone chart: the base coordinates with their bounds and sample boxes,
/// then `t` on `(0, ∞)` sampled on `[0.5, 2]`.
fn cone_chart(base: &[(&str, f64, f64, f64, f64)]) -> ChartSpec {
    let mut coords: Vec<&str> = base.iter().map(|b| b.0).collect();
    coords.push("t");
    let mut bounds: Vec<(Option<f64>, Option<f64>)> = base.iter().map(|b| (Some(b.1), Some(b.2))).collect();
    bounds.push((Some(0.0), None));
    let mut sample: Vec<(f64, f64)> = base.iter().map(|b| (b.3, b.4)).collect();
    sample.push((0.5, 2.0));
    ChartSpec::boxed(&coords, &bounds, Some(&sample))
}

fn angle_chart() -> ChartSpec {
    cone_chart(&[("th", -1.5, 1.5, -1.4, 1.4)])
}

fn space_chart() -> ChartSpec {
    cone_chart(&[
        ("x", -2.0, 2.0, -1.5, 1.5),
        ("y", -2.0, 2.0, -1.5, 1.5),
        ("z", -2.0, 2.0, -1.5, 1.5),
    ])
}

fn entry(id: &str, spec: ManifoldSpec, expected: ExpectedFlags, note: &str) -> NamedExample {
    let spec = ManifoldSpec {
        name: Some(id.to_string()),
        expected: Some(expected.clone()),
        note: Some(note.to_string()),
        ..spec
    };
    NamedExample {
        id: id.to_string(),
        spec,
        expected,
        note: note.to_string(),
    }
}

fn bare(chart: ChartSpec, xi: &[&str]) -> ManifoldSpec {
    ManifoldSpec {
        name: None,
        chart,
        metric: None,
        cone: None,
        definiteness: None,
        xi: strings(xi),
        connection: None,
        potential: None,
        margin: None,
        expected: None,
        note: None,
        verification: None,
    }
}

fn cone_block(g_m: &[&[&str]], alpha: &[&str], f: &str, placement: Placement) -> Option<ConeBlock> {
    Some(ConeBlock {
        g_m: rows(g_m),
        alpha: strings(alpha),
        f: Some(f.to_string()),
        placement,
    })
}

/// `Γ^t_{θθ} = −c² t`, `Γ^θ_{θt} = Γ^θ_{tθ} = 1/t`: the plane's flat
/// connection pulled back along `(u, v) = (t cos cθ, t sin cθ)`.
fn angle_connection(c2: &str) -> ConnectionSpec {
    let minus = format!("-{c2}*t");
    ConnectionSpec::Christoffel {
        symbols: vec![
            rows(&[&["0", "1/t"], &["1/t", "0"]]),
            rows(&[&[&minus, "0"], &["0", "0"]]),
        ],
        symmetric: true,
    }
}

fn angle_cone(id: &str, c2: &str, note: &str) -> NamedExample {
    let spec = ManifoldSpec {
        cone: cone_block(&[&[c2]], &["0"], "1", Placement::NormalForm),
        connection: Some(angle_connection(c2)),
        potential: Some("t^2/2".into()),
        ..bare(angle_chart(), &["0", "t"])
    };
    entry(id, spec, flags([P; 6]), note)
}

/// The built-in catalog, in a fixed order.
pub fn catalog_entries() -> Vec<NamedExample> {
    let cartesian = ChartSpec::boxed(
        &["x", "y"],
        &[(Some(0.0), None), (None, None)],
        Some(&[(0.5, 2.0), (-1.0, 1.0)]),
    );
    vec![
        entry(
            "euclidean_cone_cartesian",
            ManifoldSpec {
                metric: Some(rows(&[&["1", "0"], &["0", "1"]])),
                connection: Some(ConnectionSpec::CartesianFlat),
                potential: Some("(x^2 + y^2)/2".into()),
                ..bare(cartesian, &["x", "y"])
            },
            flags([P; 6]),
            "Flat plane off the origin with the Euler field: the cone over an arc of the unit circle. \
             The Euclidean metric is the Hessian of (x^2+y^2)/2 in Cartesian coordinates, the Euler \
             field is radiant for the flat connection, and sqrt(x^2+y^2) is the extensive potential.",
        ),
        entry(
            "round_cone_polar",
            ManifoldSpec {
                cone: cone_block(&[&["1"]], &["0"], "1", Placement::NormalForm),
                connection: Some(angle_connection("1")),
                potential: Some("t^2/2".into()),
                ..bare(angle_chart(), &["0", "t"])
            },
            flags([P; 6]),
            "t^2 dth^2 + dt^2 is a Riemannian cone by definition; polar Christoffels make t d_t \
             radiant and t^2/2 is the Hessian potential; Hess(t) = t dth^2 is the extensive metric.",
        ),
        angle_cone(
            "angle_cone_0.5",
            "0.25",
            "Cone of angle 0.5: c^2 t^2 dth^2 + dt^2 with c = 0.5, the flat connection transported \
             along (u, v) = (t cos(c th), t sin(c th)); every flag holds as for the round cone.",
        ),
        angle_cone(
            "angle_cone_2",
            "4",
            "Cone of angle 2: c^2 t^2 dth^2 + dt^2 with c = 2, the flat connection transported \
             along (u, v) = (t cos(c th), t sin(c th)); every flag holds as for the round cone.",
        ),
        entry(
            "contact_cone",
            ManifoldSpec {
                cone: cone_block(
                    &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
                    &["-y", "0", "1"],
                    "1 + y^2 + 1",
                    Placement::BaseScale,
                ),
                margin: Some(1.0),
                ..bare(space_chart(), &["0", "0", "0", "t"])
            },
            flags([P, F, F, F, F, F]),
            "alpha = dz - y dx is a contact form on R^3 and f = |alpha|^2 + 1 keeps the metric \
             t^2 f g_M + t Sym(dt x alpha) + dt^2 positive. It is selfsimilar, but d(i_xi g) \
             contains t^2 d(alpha) = t^2 dx^dy, which never vanishes, so it is not a Riemannian cone.",
        ),
        entry(
            "warped_noncone",
            ManifoldSpec {
                cone: cone_block(&[&["1"]], &["0"], "2 + sin(x)", Placement::NormalForm),
                ..bare(cone_chart(&[("x", -3.0, 3.0, -2.5, 2.5)]), &["0", "t"])
            },
            flags([P, F, F, F, F, F]),
            "t^2 dx^2 + (2 + sin x) dt^2 is selfsimilar for t d_t, but a cone needs df = 2 alpha = 0 \
             and here df = cos x dx.",
        ),
        entry(
            "exact_alpha_cone",
            ManifoldSpec {
                cone: cone_block(
                    &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
                    &["0", "0", "cos(z)/2"],
                    "2 + sin(z)",
                    Placement::NormalForm,
                ),
                ..bare(space_chart(), &["0", "0", "0", "t"])
            },
            flags([P, P, F, F, F, F]),
            "f = 2 + sin z with alpha = cos(z)/2 dz satisfies df = 2 alpha, so d(i_xi g) = \
             t dt^(2 alpha - df) + t^2 d(alpha) vanishes and the selfsimilar metric is a Riemannian \
             cone. No flat connection is declared, so the Hessian flags fail.",
        ),
        entry(
            "product_nonselfsimilar",
            ManifoldSpec {
                metric: Some(rows(&[&["1", "0"], &["0", "1"]])),
                ..bare(angle_chart(), &["0", "t"])
            },
            flags([F; 6]),
            "dth^2 + dt^2 is a product: Lie_{t d_t} g = 2 dt^2, not 2g.",
        ),
    ]
}

/// Catalog entry by id.
pub fn catalog_entry(id: &str) -> Option<NamedExample> {
    catalog_entries().into_iter().find(|e| e.id == id)
}
