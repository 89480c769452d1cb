//! Central finite differences, used as an oracle for [`super::Jet`].

use super::ast::{EvalError, ScalarExpr};
use super::chart::ChartDomain;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FdError {
    #[error("finite-difference stencil leaves the chart domain at {point:?}")]
    StencilOutsideDomain { point: Vec<f64> },
    #[error("unsupported derivative request {0:?} (order must be 1..=3)")]
    BadRequest(Vec<usize>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One-dimensional central stencil (offset in units of `h`, weight) for the
/// `m`-th derivative. Weights still need dividing by `h^m`.
fn stencil(m: usize) -> &'static [(f64, f64)] {
    match m {
        1 => &[(1.0, 0.5), (-1.0, -0.5)],
        2 => &[(1.0, 1.0), (0.0, -2.0), (-1.0, 1.0)],
        3 => &[(2.0, 0.5), (1.0, -1.0), (-1.0, 1.0), (-2.0, -0.5)],
        _ => unreachable!("stencil order"),
    }
}

/// Central-difference approximation of the partial derivative named by
/// `multi_index` (e.g. `[0, 0]` is `∂²/∂x₀²`, `[0, 1]` is `∂²/∂x₀∂x₁`).
///
/// The stencil is the tensor product of the 1-D central stencils for each
/// distinct index, so every node must lie inside `domain`.
pub fn finite_diff(
    e: &ScalarExpr,
    point: &[f64],
    multi_index: &[usize],
    h: f64,
    domain: &ChartDomain,
) -> Result<f64, FdError> {
    let d = point.len();
    if multi_index.is_empty() || multi_index.len() > 3 || multi_index.iter().any(|&i| i >= d) {
        return Err(FdError::BadRequest(multi_index.to_vec()));
    }
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for &i in multi_index {
        match counts.iter_mut().find(|(j, _)| *j == i) {
            Some((_, m)) => *m += 1,
            None => counts.push((i, 1)),
        }
    }

    // Enumerate the product stencil.
    let mut nodes: Vec<(Vec<f64>, f64)> = vec![(point.to_vec(), 1.0)];
    for &(axis, m) in &counts {
        let mut next = Vec::with_capacity(nodes.len() * 4);
        for (p, w) in &nodes {
            for &(off, wt) in stencil(m) {
                let mut q = p.clone();
                q[axis] += off * h;
                next.push((q, w * wt));
            }
        }
        nodes = next;
    }

    let mut acc = 0.0;
    for (q, w) in &nodes {
        if !domain.contains(q) {
            return Err(FdError::StencilOutsideDomain { point: q.clone() });
        }
        if *w != 0.0 {
            acc += w * e.eval(q)?;
        }
    }
    Ok(acc / h.powi(multi_index.len() as i32))
}
