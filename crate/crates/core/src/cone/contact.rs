use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::ScalarExpr;
use crate::report::Samples;
use crate::tensor::{exterior_derivative_oneform, inverse_metric, MetricField, OneFormField};

use super::spec::{ConeMetricSpec, Placement};

/// `|α ∧ (dα)^k|` below this counts as vanishing.
pub const CONTACT_VOLUME_FLOOR: f64 = 1e-10;

/// Constant-coefficient forms on a small coordinate space, keyed by the
/// bitmask of their (sorted) index set.
type Form = BTreeMap<u32, f64>;

/// Sign of `dx^A ∧ dx^B` relative to the sorted monomial, for disjoint `A`,
/// `B`: one transposition per pair `a ∈ A`, `b ∈ B` with `a > b`.
fn merge_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (b & ((1u32 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn wedge(x: &Form, y: &Form) -> Form {
    let mut out = Form::new();
    for (&a, &ca) in x {
        for (&b, &cb) in y {
            if a & b == 0 {
                *out.entry(a | b).or_insert(0.0) += merge_sign(a, b) * ca * cb;
            }
        }
    }
    out
}

/// Coefficient of `dx^0 ∧ … ∧ dx^{2k}` in `α ∧ (dα)^k` at `p`, for a base
/// of odd dimension `2k + 1`.
pub fn contact_volume(alpha: &OneFormField, p: &[f64]) -> Result<f64> {
    let n = alpha.dim();
    if n % 2 == 0 {
        return Err(Error::EvenDimensionalBase(n));
    }
    if n > 31 {
        return Err(Error::Dimension(format!("contact volume needs dimension < 32, got {n}")));
    }
    let a = alpha.at(p)?;
    let da = exterior_derivative_oneform(alpha, p)?;
    let one: Form = a.iter().enumerate().map(|(i, &c)| (1u32 << i, c)).collect();
    let mut two = Form::new();
    for i in 0..n {
        for j in i + 1..n {
            two.insert((1u32 << i) | (1u32 << j), da.get(i, j));
        }
    }
    let mut acc = one;
    for _ in 0..n / 2 {
        acc = wedge(&acc, &two);
    }
    Ok(acc.get(&((1u32 << n) - 1)).copied().unwrap_or(0.0))
}

fn minor(m: &[Vec<ScalarExpr>], row: usize, col: usize) -> Vec<Vec<ScalarExpr>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Laplace expansion along the first row.
fn det(m: &[Vec<ScalarExpr>]) -> ScalarExpr {
    match m.len() {
        0 => ScalarExpr::one(),
        1 => m[0][0].clone(),
        n => ScalarExpr::sum((0..n).map(|j| {
            let term = &m[0][j] * &det(&minor(m, 0, j));
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })),
    }
}

/// `g⁻¹(α, α) = αᵀ adj(g) α / det g` as an expression.
pub fn dual_norm_sq_expr(g: &MetricField, alpha: &OneFormField) -> ScalarExpr {
    let n = g.dim();
    let rows = g.rows();
    let a = alpha.components();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if a[i].is_zero() || a[j].is_zero() {
                continue;
            }
            // adj(g)_{ij} = (−1)^{i+j} det(minor_{ji}); g is symmetric
            let c = det(&minor(&rows, j, i));
            let c = if (i + j) % 2 == 0 { c } else { -c };
            terms.push(&(&a[i] * &c) * &a[j]);
        }
    }
    &ScalarExpr::sum(terms) / &det(&rows)
}

/// `f = g_M⁻¹(α, α) + margin`, which makes the assembled metric positive
/// definite in either placement. `g_M` is checked for invertibility at
/// every base sample.
pub fn positivity_potential(
    g_m: &MetricField,
    alpha: &OneFormField,
    margin: f64,
    base_samples: &Samples,
) -> Result<ScalarExpr> {
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::InvalidArgument(format!("margin {margin} must be positive")));
    }
    base_samples
        .map(|p| inverse_metric(&g_m.at(p)?).map(|_| ()))
        .map_err(|e| e.in_check("positivity_potential"))?;
    Ok(&dual_norm_sq_expr(g_m, alpha) + &ScalarExpr::constant(margin))
}

/// The selfsimilar, non-conical metric `t² f g_M + t Sym(dt ⊗ α) + dt²`
/// built from a contact form `α` on an odd-dimensional base.
pub fn contact_selfsimilar_example(
    alpha: &OneFormField,
    g_m: &MetricField,
    margin: f64,
    base_samples: &Samples,
) -> Result<ConeMetricSpec> {
    let n = alpha.dim();
    if n % 2 == 0 {
        return Err(Error::EvenDimensionalBase(n));
    }
    base_samples.map(|p| {
        let volume = contact_volume(alpha, p)?;
        if volume.abs() <= CONTACT_VOLUME_FLOOR {
            Err(Error::NotContact {
                point: p.to_vec(),
                volume,
            })
        } else {
            Ok(())
        }
    })?;
    let f = positivity_potential(g_m, alpha, margin, base_samples)?;
    Ok(ConeMetricSpec::new(g_m.clone(), alpha.clone(), f)?.with_placement(Placement::BaseScale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_signs() {
        // dx0 ∧ dx1 is sorted; dx1 ∧ dx0 is one swap
        assert_eq!(merge_sign(0b01, 0b10), 1.0);
        assert_eq!(merge_sign(0b10, 0b01), -1.0);
        // dx2 ∧ (dx0 ∧ dx1): two swaps
        assert_eq!(merge_sign(0b100, 0b011), 1.0);
        // dx1 ∧ (dx0 ∧ dx2): one swap
        assert_eq!(merge_sign(0b010, 0b101), -1.0);
    }
}
