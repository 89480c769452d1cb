//! Seeded generators shared by the property and acceptance tests.

#![allow(dead_code)]

use std::sync::Arc;

use conegeom::expr::{ChartDomain, ScalarExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn chart(d: usize) -> Arc<ChartDomain> {
    let names = ["x", "y", "z", "w"];
    Arc::new(ChartDomain::boxed(&names[..d], &vec![(-2.0, 2.0); d]).unwrap())
}

fn c(v: f64) -> ScalarExpr {
    ScalarExpr::constant(v)
}

/// A smooth expression defined on all of `ℝ^d`: every `sqrt`, `ln` and
/// division is guarded so its argument stays positive.
pub fn smooth_expr(rng: &mut ChaCha8Rng, d: usize, depth: u32) -> ScalarExpr {
    let names = ["x", "y", "z", "w"];
    if depth == 0 || rng.random_bool(0.25) {
        return if rng.random_bool(0.3) {
            c(rng.random_range(-1.0..1.0))
        } else {
            let k = rng.random_range(0..d);
            ScalarExpr::coord(k, names[k])
        };
    }
    let a = smooth_expr(rng, d, depth - 1);
    match rng.random_range(0..10) {
        0 => &a + &smooth_expr(rng, d, depth - 1),
        1 => &a - &smooth_expr(rng, d, depth - 1),
        2 | 3 => &a * &smooth_expr(rng, d, depth - 1),
        4 => a.sin(),
        5 => a.cos(),
        6 => (&c(0.5) * &a.sin()).exp(),
        7 => (&c(1.0) + &a.powi(2)).sqrt(),
        8 => &smooth_expr(rng, d, depth - 1) / &(&c(2.0) + &a.cos()),
        _ => (&c(2.0) + &a.sin()).ln(),
    }
}

pub fn point(rng: &mut ChaCha8Rng, d: usize, half_width: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-half_width..half_width)).collect()
}

/// A polynomial as explicit monomials `(coefficient, exponents)`, so tests
/// can differentiate it exactly without going through jets.
#[derive(Debug, Clone)]
pub struct Poly {
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl Poly {
    pub fn random(rng: &mut ChaCha8Rng, d: usize, degree: u32) -> Self {
        let n = rng.random_range(1..=6);
        let terms = (0..n)
            .map(|_| {
                let mut left = rng.random_range(0..=degree);
                let exps = (0..d)
                    .map(|k| {
                        let e = if k + 1 == d { left } else { rng.random_range(0..=left) };
                        left -= e;
                        e
                    })
                    .collect();
                (rng.random_range(-1.0..1.0), exps)
            })
            .collect();
        Self { terms }
    }

    pub fn expr(&self) -> ScalarExpr {
        let names = ["x", "y", "z", "w"];
        ScalarExpr::sum(self.terms.iter().map(|(a, exps)| {
            exps.iter().enumerate().fold(c(*a), |acc, (k, &e)| {
                if e == 0 {
                    acc
                } else {
                    &acc * &ScalarExpr::coord(k, names[k]).powi(e as i32)
                }
            })
        }))
    }

    /// Exact partial derivative for the multi-index (one entry per
    /// differentiation) at `p`.
    pub fn partial(&self, multi: &[usize], p: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, exps)| {
                let mut e = exps.clone();
                let mut coef = *a;
                for &k in multi {
                    coef *= e[k] as f64;
                    e[k] = e[k].saturating_sub(1);
                }
                coef * e.iter().zip(p).map(|(&k, x)| x.powi(k as i32)).product::<f64>()
            })
            .sum()
    }
}
