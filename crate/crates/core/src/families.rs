//! Seeded random families of cone metrics and polynomial potentials.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{contact_selfsimilar_example, ConeMetricSpec, Placement};
use crate::error::Result;
use crate::expr::{ChartDomain, ScalarExpr};
use crate::report::Samples;
use crate::tensor::{Chart, MetricField, OneFormField};

fn plane() -> Chart {
    Arc::new(ChartDomain::boxed(&["x", "y"], &[(-3.0, 3.0), (-3.0, 3.0)]).expect("valid chart"))
}

fn space() -> Chart {
    Arc::new(ChartDomain::boxed(&["x", "y", "z"], &[(-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)]).expect("valid chart"))
}

fn c(v: f64) -> ScalarExpr {
    ScalarExpr::constant(v)
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.random_range(lo..hi);
    if rng.random_bool(0.5) {
        m
    } else {
        -m
    }
}

/// `count` cone specs over the Euclidean plane with
/// `f = 3 + a sin(bx + c) + a' cos(b'y + c')` and `α = (sign/2) df`, the
/// components of `df` written out by hand. `sign = 1` gives cones, any
/// other sign a selfsimilar metric whose `θ` is not closed.
pub fn gradient_family(count: usize, seed: u64, sign: f64) -> Result<Vec<ConeMetricSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = plane();
    let x = ScalarExpr::coord(0, "x");
    let y = ScalarExpr::coord(1, "y");
    (0..count)
        .map(|_| {
            let a = signed(&mut rng, 0.2, 0.8);
            let b = signed(&mut rng, 0.5, 1.5);
            let ph = rng.random_range(-1.0..1.0);
            let a2 = signed(&mut rng, 0.2, 0.8);
            let b2 = signed(&mut rng, 0.5, 1.5);
            let ph2 = rng.random_range(-1.0..1.0);
            let u = &(&c(b) * &x) + &c(ph);
            let v = &(&c(b2) * &y) + &c(ph2);
            let f = ScalarExpr::sum([c(3.0), &c(a) * &u.sin(), &c(a2) * &v.cos()]);
            let h = 0.5 * sign;
            let alpha = vec![&c(h * a * b) * &u.cos(), &c(-h * a2 * b2) * &v.sin()];
            let g_m = MetricField::euclidean(base.clone());
            ConeMetricSpec::new(g_m, OneFormField::new(base.clone(), alpha)?, f)
        })
        .collect()
}

/// `count` contact cones over `ℝ³` with `α = dz − (py + q) dx + r dy`
/// (`p ≠ 0`), a constant diagonal base metric and `f = g_M⁻¹(α, α) + 1`.
/// Placements alternate between base-scaled and normal form.
pub fn contact_family(count: usize, seed: u64) -> Result<Vec<ConeMetricSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = space();
    let base_samples = Samples::from_chart(&base, 32, seed);
    let y = ScalarExpr::coord(1, "y");
    (0..count)
        .map(|k| {
            let p = signed(&mut rng, 0.5, 1.5);
            let q = rng.random_range(-1.0..1.0);
            let r = rng.random_range(-1.0..1.0);
            let diag = (0..3).map(|_| c(rng.random_range(0.5..2.0))).collect();
            let g_m = MetricField::diagonal(base.clone(), diag)?;
            let alpha = OneFormField::new(base.clone(), vec![-(&(&c(p) * &y) + &c(q)), c(r), c(1.0)])?;
            let spec = contact_selfsimilar_example(&alpha, &g_m, 1.0, &base_samples)?;
            Ok(if k % 2 == 0 {
                spec
            } else {
                spec.with_placement(Placement::NormalForm)
            })
        })
        .collect()
}

/// A random polynomial of total degree at most `degree` in the chart's
/// coordinates: up to six monomials with coefficients in `[-1, 1]`.
pub fn random_polynomial(chart: &ChartDomain, degree: u32, rng: &mut ChaCha8Rng) -> ScalarExpr {
    let d = chart.dim();
    let terms = rng.random_range(1..=6);
    ScalarExpr::sum((0..terms).map(|_| {
        let mut left = rng.random_range(0..=degree);
        let mut mono = c(rng.random_range(-1.0..1.0));
        for k in 0..d {
            let e = if k + 1 == d { left } else { rng.random_range(0..=left) };
            left -= e;
            if e > 0 {
                mono = &mono * &ScalarExpr::coord(k, &chart.coords()[k]).powi(e as i32);
            }
        }
        mono
    }))
}

pub fn random_polynomials(chart: &ChartDomain, count: usize, degree: u32, seed: u64) -> Vec<ScalarExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_polynomial(chart, degree, &mut rng)).collect()
}
