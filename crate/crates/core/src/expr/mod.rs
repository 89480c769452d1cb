//! Scalar expressions over chart coordinates: parsing, jets and finite
//! differences.

mod ast;
mod chart;
mod fd;
mod jet;
mod parse;

pub use ast::{BinOp, EvalError, Func, Node, ScalarExpr};
pub use chart::{ChartDomain, ChartError, Interval};
pub use fd::{finite_diff, FdError};
pub use jet::{Jet, MAX_ORDER};
pub use parse::{parse_expr, ParseError};

/// Value and partial derivatives of `e` at `point` up to `order`.
pub fn eval_jet(e: &ScalarExpr, point: &[f64], order: usize) -> Result<Jet, EvalError> {
    assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
    e.jet(point, order)
}
