//! Dense truncated Taylor jets of order at most three.
//!
//! A [`Jet`] stores the value of a scalar function at a point together with
//! all of its partial derivatives up to the jet order. Derivatives are kept
//! as plain partials (not Taylor coefficients), in fully expanded `d`, `d×d`
//! and `d×d×d` arrays. Every operation writes the canonical entry
//! `i <= j <= k` once and mirrors it, so the higher tensors are exactly
//! symmetric, not just up to rounding.

use std::fmt;

/// Highest supported jet order.
pub const MAX_ORDER: usize = 3;

#[derive(Clone, PartialEq)]
pub struct Jet {
    dim: usize,
    order: usize,
    value: f64,
    first: Vec<f64>,
    second: Vec<f64>,
    third: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("Jet");
        s.field("order", &self.order).field("value", &self.value);
        if self.order >= 1 {
            s.field("first", &self.first);
        }
        if self.order >= 2 {
            s.field("second", &self.second);
        }
        if self.order >= 3 {
            s.field("third", &self.third);
        }
        s.finish()
    }
}

impl Jet {
    fn zeros(dim: usize, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Self {
            dim,
            order,
            value: 0.0,
            first: if order >= 1 { vec![0.0; dim] } else { Vec::new() },
            second: if order >= 2 { vec![0.0; dim * dim] } else { Vec::new() },
            third: if order >= 3 { vec![0.0; dim * dim * dim] } else { Vec::new() },
        }
    }

    pub fn constant(value: f64, dim: usize, order: usize) -> Self {
        let mut j = Self::zeros(dim, order);
        j.value = value;
        j
    }

    /// Jet of the coordinate function `x_index` evaluated at `value`.
    pub fn variable(index: usize, value: f64, dim: usize, order: usize) -> Self {
        assert!(index < dim);
        let mut j = Self::constant(value, dim, order);
        if order >= 1 {
            j.first[index] = 1.0;
        }
        j
    }

    /// Order-1 jet from a value and gradient.
    pub fn from_gradient(value: f64, gradient: Vec<f64>) -> Self {
        Self {
            dim: gradient.len(),
            order: 1,
            value,
            first: gradient,
            second: Vec::new(),
            third: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// `∂_i f`. Panics if the jet order is zero.
    pub fn first(&self, i: usize) -> f64 {
        self.first[i]
    }

    pub fn gradient(&self) -> &[f64] {
        &self.first
    }

    /// `∂_i ∂_j f`. Panics if the jet order is below two.
    pub fn second(&self, i: usize, j: usize) -> f64 {
        self.second[i * self.dim + j]
    }

    /// `∂_i ∂_j ∂_k f`. Panics if the jet order is below three.
    pub fn third(&self, i: usize, j: usize, k: usize) -> f64 {
        self.third[(i * self.dim + j) * self.dim + k]
    }

    /// Look up a partial derivative by multi-index (list of coordinate
    /// indices, one entry per differentiation).
    pub fn partial(&self, multi_index: &[usize]) -> Option<f64> {
        if multi_index.len() > self.order {
            return None;
        }
        Some(match *multi_index {
            [] => self.value,
            [i] => self.first(i),
            [i, j] => self.second(i, j),
            [i, j, k] => self.third(i, j, k),
            _ => return None,
        })
    }

    fn set_second(&mut self, i: usize, j: usize, v: f64) {
        let d = self.dim;
        self.second[i * d + j] = v;
        self.second[j * d + i] = v;
    }

    fn set_third(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let d = self.dim;
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            self.third[(a * d + b) * d + c] = v;
        }
    }

    /// Drop derivative information above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let mut j = self.clone();
        j.order = order;
        if order < 3 {
            j.third.clear();
        }
        if order < 2 {
            j.second.clear();
        }
        if order < 1 {
            j.first.clear();
        }
        j
    }

    /// The jet of `∂_i f`, one order lower.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let d = self.dim;
        let mut out = Self::zeros(d, self.order - 1);
        out.value = self.first[i];
        if out.order >= 1 {
            for m in 0..d {
                out.first[m] = self.second(i, m);
            }
        }
        if out.order >= 2 {
            for m in 0..d {
                for n in m..d {
                    out.set_second(m, n, self.third(i, m, n));
                }
            }
        }
        out
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "jet dimension mismatch");
    }

    fn zip(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        self.check_compatible(other);
        let order = self.order.min(other.order);
        let a = self.truncate(order);
        let b = other.truncate(order);
        Self {
            dim: a.dim,
            order,
            value: op(a.value, b.value),
            first: a.first.iter().zip(&b.first).map(|(x, y)| op(*x, *y)).collect(),
            second: a.second.iter().zip(&b.second).map(|(x, y)| op(*x, *y)).collect(),
            third: a.third.iter().zip(&b.third).map(|(x, y)| op(*x, *y)).collect(),
        }
    }

    fn map(&self, op: impl Fn(f64) -> f64) -> Self {
        Self {
            dim: self.dim,
            order: self.order,
            value: op(self.value),
            first: self.first.iter().map(|x| op(*x)).collect(),
            second: self.second.iter().map(|x| op(*x)).collect(),
            third: self.third.iter().map(|x| op(*x)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|a| a * s)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut j = self.clone();
        j.value += s;
        j
    }

    /// Product by the Leibniz rule, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let d = self.dim;
        let order = self.order.min(other.order);
        let (a, b) = (self, other);
        let mut out = Self::zeros(d, order);
        out.value = a.value * b.value;
        if order >= 1 {
            for i in 0..d {
                out.first[i] = a.first[i] * b.value + a.value * b.first[i];
            }
        }
        if order >= 2 {
            for i in 0..d {
                for j in i..d {
                    let v = a.second(i, j) * b.value
                        + a.first[i] * b.first[j]
                        + a.first[j] * b.first[i]
                        + a.value * b.second(i, j);
                    out.set_second(i, j, v);
                }
            }
        }
        if order >= 3 {
            for i in 0..d {
                for j in i..d {
                    for k in j..d {
                        let v = a.third(i, j, k) * b.value
                            + a.second(i, j) * b.first[k]
                            + a.second(i, k) * b.first[j]
                            + a.second(j, k) * b.first[i]
                            + a.first[i] * b.second(j, k)
                            + a.first[j] * b.second(i, k)
                            + a.first[k] * b.second(i, j)
                            + a.value * b.third(i, j, k);
                        out.set_third(i, j, k, v);
                    }
                }
            }
        }
        out
    }

    /// `h ∘ f` given `h` and its first three derivatives at `f(p)`.
    pub fn compose(&self, h: [f64; 4]) -> Self {
        let d = self.dim;
        let f = self;
        let mut out = Self::zeros(d, self.order);
        out.value = h[0];
        if f.order >= 1 {
            for i in 0..d {
                out.first[i] = h[1] * f.first[i];
            }
        }
        if f.order >= 2 {
            for i in 0..d {
                for j in i..d {
                    let v = h[2] * f.first[i] * f.first[j] + h[1] * f.second(i, j);
                    out.set_second(i, j, v);
                }
            }
        }
        if f.order >= 3 {
            for i in 0..d {
                for j in i..d {
                    for k in j..d {
                        let v = h[3] * f.first[i] * f.first[j] * f.first[k]
                            + h[2]
                                * (f.second(i, j) * f.first[k]
                                    + f.second(i, k) * f.first[j]
                                    + f.second(j, k) * f.first[i])
                            + h[1] * f.third(i, j, k);
                        out.set_third(i, j, k, v);
                    }
                }
            }
        }
        out
    }

    /// `1/f`; caller guarantees `f(p) != 0`.
    pub fn recip(&self) -> Self {
        let x = self.value;
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// [`Jet::recip`]. Exact for polynomial inputs.
    pub fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Self::constant(1.0, self.dim, self.order);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Real power `f^a` for `f(p) > 0`.
    pub fn powf(&self, a: f64) -> Self {
        let x = self.value;
        let h0 = x.powf(a);
        let h1 = a * x.powf(a - 1.0);
        let h2 = a * (a - 1.0) * x.powf(a - 2.0);
        let h3 = a * (a - 1.0) * (a - 2.0) * x.powf(a - 3.0);
        self.compose([h0, h1, h2, h3])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.compose([e, e, e, e])
    }

    /// Natural log for `f(p) > 0`.
    pub fn ln(&self) -> Self {
        let x = self.value;
        let r = 1.0 / x;
        self.compose([x.ln(), r, -r * r, 2.0 * r * r * r])
    }

    /// Square root for `f(p) > 0`.
    pub fn sqrt(&self) -> Self {
        let x = self.value;
        let s = x.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_jet_has_unit_gradient() {
        let j = Jet::variable(1, 2.5, 3, 3);
        assert_eq!(j.value(), 2.5);
        assert_eq!(j.gradient(), &[0.0, 1.0, 0.0]);
        assert_eq!(j.second(1, 1), 0.0);
    }

    #[test]
    fn product_truncates_to_lower_order() {
        let a = Jet::variable(0, 1.0, 2, 3);
        let b = Jet::variable(1, 2.0, 2, 1);
        let p = a.mul(&b);
        assert_eq!(p.order(), 1);
        assert_eq!(p.gradient(), &[2.0, 1.0]);
    }

    #[test]
    fn cube_is_exact() {
        let x = Jet::variable(0, 3.0, 1, 3);
        let c = x.powi(3);
        assert_eq!(c.value(), 27.0);
        assert_eq!(c.first(0), 27.0);
        assert_eq!(c.second(0, 0), 18.0);
        assert_eq!(c.third(0, 0, 0), 6.0);
    }

    #[test]
    fn derivative_shifts_order() {
        // f = x^2 y at (2, 3): ∂_x f = 2xy
        let x = Jet::variable(0, 2.0, 2, 3);
        let y = Jet::variable(1, 3.0, 2, 3);
        let f = x.mul(&x).mul(&y);
        let fx = f.derivative(0);
        assert_eq!(fx.order(), 2);
        assert_eq!(fx.value(), 12.0);
        assert_eq!(fx.gradient(), &[6.0, 4.0]);
        assert_eq!(fx.second(0, 1), 2.0);
        assert_eq!(fx.second(1, 1), 0.0);
    }

    #[test]
    fn negative_power_matches_reciprocal() {
        let x = Jet::variable(0, 2.0, 1, 3);
        let a = x.powi(-2);
        let b = x.mul(&x).recip();
        assert!((a.third(0, 0, 0) - b.third(0, 0, 0)).abs() < 1e-14);
        // d³/dx³ x^-2 = -24 x^-5
        assert!((a.third(0, 0, 0) + 24.0 / 32.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt_derivatives() {
        let x = Jet::variable(0, 4.0, 1, 3);
        let s = x.sqrt();
        assert!((s.value() - 2.0).abs() < 1e-15);
        assert!((s.first(0) - 0.25).abs() < 1e-15);
        assert!((s.second(0, 0) + 1.0 / 32.0).abs() < 1e-15);
        assert!((s.third(0, 0, 0) - 3.0 / 256.0).abs() < 1e-15);
    }
}
