use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::jet::Jet;

/// Elementary functions accepted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Coord { index: usize, name: Arc<str> },
    Neg(ScalarExpr),
    Binary(BinOp, ScalarExpr, ScalarExpr),
    Call(Func, ScalarExpr),
}

/// An immutable closed-form scalar expression over chart coordinates.
///
/// Cloning is cheap (the tree is shared). Equality is structural.
#[derive(Clone, PartialEq)]
pub struct ScalarExpr {
    node: Arc<Node>,
}

/// Failure while evaluating an expression at a point.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("{op} is undefined for argument {value} in `{subexpr}`")]
    Domain {
        op: &'static str,
        value: f64,
        subexpr: String,
    },
    #[error("division by zero in `{subexpr}`")]
    DivisionByZero { subexpr: String },
    #[error("point has {found} coordinates but `{subexpr}` needs index {index}")]
    MissingCoordinate {
        index: usize,
        found: usize,
        subexpr: String,
    },
}

impl ScalarExpr {
    pub fn from_node(node: Node) -> Self {
        Self { node: Arc::new(node) }
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn constant(value: f64) -> Self {
        Self::from_node(Node::Const(value))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn coord(index: usize, name: &str) -> Self {
        Self::from_node(Node::Coord {
            index,
            name: Arc::from(name),
        })
    }

    pub fn as_constant(&self) -> Option<f64> {
        match *self.node {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    /// True when no coordinate occurs in the tree.
    pub fn is_closed(&self) -> bool {
        match &*self.node {
            Node::Const(_) => true,
            Node::Coord { .. } => false,
            Node::Neg(a) | Node::Call(_, a) => a.is_closed(),
            Node::Binary(_, a, b) => a.is_closed() && b.is_closed(),
        }
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord_index(&self) -> Option<usize> {
        match &*self.node {
            Node::Const(_) => None,
            Node::Coord { index, .. } => Some(*index),
            Node::Neg(a) | Node::Call(_, a) => a.max_coord_index(),
            Node::Binary(_, a, b) => match (a.max_coord_index(), b.max_coord_index()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    pub fn call(func: Func, arg: ScalarExpr) -> Self {
        if let Some(c) = arg.as_constant() {
            let v = match func {
                Func::Sin => c.sin(),
                Func::Cos => c.cos(),
                Func::Exp => c.exp(),
                Func::Log if c > 0.0 => c.ln(),
                Func::Sqrt if c >= 0.0 => c.sqrt(),
                _ => return Self::from_node(Node::Call(func, arg)),
            };
            return Self::constant(v);
        }
        Self::from_node(Node::Call(func, arg))
    }

    pub fn sqrt(&self) -> Self {
        Self::call(Func::Sqrt, self.clone())
    }

    pub fn sin(&self) -> Self {
        Self::call(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Self {
        Self::call(Func::Cos, self.clone())
    }

    pub fn exp(&self) -> Self {
        Self::call(Func::Exp, self.clone())
    }

    pub fn ln(&self) -> Self {
        Self::call(Func::Log, self.clone())
    }

    pub fn pow(&self, exponent: &ScalarExpr) -> Self {
        match (self.as_constant(), exponent.as_constant()) {
            (_, Some(e)) if e == 0.0 => Self::one(),
            (_, Some(e)) if e == 1.0 => self.clone(),
            (Some(b), Some(e)) if b > 0.0 || e.fract() == 0.0 => Self::constant(b.powf(e)),
            _ => Self::from_node(Node::Binary(BinOp::Pow, self.clone(), exponent.clone())),
        }
    }

    pub fn powi(&self, n: i32) -> Self {
        self.pow(&Self::constant(n as f64))
    }

    /// Sum of an iterator of expressions with zero terms dropped.
    pub fn sum<I: IntoIterator<Item = ScalarExpr>>(terms: I) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, t| &acc + &t)
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        Ok(self.jet(point, 0)?.value())
    }

    /// Value and partial derivatives up to `order` (at most 3) at `point`.
    pub fn jet(&self, point: &[f64], order: usize) -> Result<Jet, EvalError> {
        let d = point.len();
        match &*self.node {
            Node::Const(c) => Ok(Jet::constant(*c, d, order)),
            Node::Coord { index, .. } => {
                if *index >= d {
                    return Err(EvalError::MissingCoordinate {
                        index: *index,
                        found: d,
                        subexpr: self.to_string(),
                    });
                }
                Ok(Jet::variable(*index, point[*index], d, order))
            }
            Node::Neg(a) => Ok(a.jet(point, order)?.neg()),
            Node::Binary(op, a, b) => {
                let ja = a.jet(point, order)?;
                match op {
                    BinOp::Add => Ok(ja.add(&b.jet(point, order)?)),
                    BinOp::Sub => Ok(ja.sub(&b.jet(point, order)?)),
                    BinOp::Mul => Ok(ja.mul(&b.jet(point, order)?)),
                    BinOp::Div => {
                        let jb = b.jet(point, order)?;
                        if jb.value() == 0.0 {
                            return Err(EvalError::DivisionByZero {
                                subexpr: self.to_string(),
                            });
                        }
                        Ok(ja.div(&jb))
                    }
                    BinOp::Pow => self.eval_pow(ja, b, point, order),
                }
            }
            Node::Call(func, a) => {
                let ja = a.jet(point, order)?;
                let x = ja.value();
                let domain_err = |op| EvalError::Domain {
                    op,
                    value: x,
                    subexpr: self.to_string(),
                };
                match func {
                    Func::Sin => Ok(ja.sin()),
                    Func::Cos => Ok(ja.cos()),
                    Func::Exp => Ok(ja.exp()),
                    Func::Log if x > 0.0 => Ok(ja.ln()),
                    Func::Log => Err(domain_err("log")),
                    Func::Sqrt if x > 0.0 => Ok(ja.sqrt()),
                    Func::Sqrt if x == 0.0 && order == 0 => Ok(Jet::constant(0.0, d, 0)),
                    Func::Sqrt => Err(domain_err("sqrt")),
                }
            }
        }
    }

    fn eval_pow(
        &self,
        base: Jet,
        exponent: &ScalarExpr,
        point: &[f64],
        order: usize,
    ) -> Result<Jet, EvalError> {
        if exponent.is_closed() {
            let e = exponent.eval(point)?;
            if e.fract() == 0.0 && e.abs() <= 1024.0 {
                if e < 0.0 && base.value() == 0.0 {
                    return Err(EvalError::DivisionByZero {
                        subexpr: self.to_string(),
                    });
                }
                return Ok(base.powi(e as i64));
            }
            if base.value() > 0.0 {
                return Ok(base.powf(e));
            }
        } else if base.value() > 0.0 {
            let je = exponent.jet(point, order)?;
            return Ok(je.mul(&base.ln()).exp());
        }
        Err(EvalError::Domain {
            op: "non-integer power",
            value: base.value(),
            subexpr: self.to_string(),
        })
    }

    fn precedence(&self) -> u8 {
        match &*self.node {
            Node::Const(c) if *c < 0.0 => 3,
            Node::Const(_) | Node::Coord { .. } | Node::Call(..) => 5,
            Node::Neg(_) => 3,
            Node::Binary(op, ..) => op.precedence(),
        }
    }
}

fn fmt_const(c: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c < 0.0 {
        write!(f, "-{}", -c)
    } else {
        write!(f, "{c}")
    }
}

fn fmt_child(e: &ScalarExpr, wrap: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Const(c) => fmt_const(*c, f),
            Node::Coord { name, .. } => write!(f, "{name}"),
            Node::Neg(a) => {
                write!(f, "-")?;
                fmt_child(a, a.precedence() < 4, f)
            }
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
            Node::Binary(op, a, b) => {
                let p = op.precedence();
                let (wrap_left, wrap_right) = match op {
                    BinOp::Pow => (a.precedence() <= p, b.precedence() < 3),
                    BinOp::Add | BinOp::Mul => (a.precedence() < p, b.precedence() <= p),
                    BinOp::Sub | BinOp::Div => (a.precedence() < p, b.precedence() <= p),
                };
                fmt_child(a, wrap_left, f)?;
                write!(f, " {} ", op.symbol())?;
                fmt_child(b, wrap_right, f)
            }
        }
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({self})")
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => ScalarExpr::constant(a + b),
            (Some(a), _) if a == 0.0 => rhs.clone(),
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => ScalarExpr::from_node(Node::Binary(BinOp::Add, self.clone(), rhs.clone())),
        }
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => ScalarExpr::constant(a - b),
            (Some(a), _) if a == 0.0 => -rhs,
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => ScalarExpr::from_node(Node::Binary(BinOp::Sub, self.clone(), rhs.clone())),
        }
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) => ScalarExpr::constant(a * b),
            (Some(a), _) | (_, Some(a)) if a == 0.0 => ScalarExpr::zero(),
            (Some(a), _) if a == 1.0 => rhs.clone(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            (Some(a), _) if a == -1.0 => -rhs,
            (_, Some(b)) if b == -1.0 => -self,
            _ => ScalarExpr::from_node(Node::Binary(BinOp::Mul, self.clone(), rhs.clone())),
        }
    }
}

impl Div for &ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: &ScalarExpr) -> ScalarExpr {
        match (self.as_constant(), rhs.as_constant()) {
            (Some(a), Some(b)) if b != 0.0 => ScalarExpr::constant(a / b),
            (Some(a), _) if a == 0.0 => ScalarExpr::zero(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            _ => ScalarExpr::from_node(Node::Binary(BinOp::Div, self.clone(), rhs.clone())),
        }
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        match &*self.node {
            Node::Const(c) => ScalarExpr::constant(-c),
            Node::Neg(a) => a.clone(),
            _ => ScalarExpr::from_node(Node::Neg(self.clone())),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                $tr::$method(&self, &rhs)
            }
        }
        impl $tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                $tr::$method(&self, rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl From<f64> for ScalarExpr {
    fn from(c: f64) -> Self {
        Self::constant(c)
    }
}
