use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub const fn unbounded() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub const fn positive() -> Self {
        Self::new(0.0, f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChartError {
    #[error("chart needs at least one coordinate")]
    Empty,
    #[error("duplicate coordinate name `{0}`")]
    DuplicateCoordinate(String),
    #[error("invalid coordinate name `{0}`")]
    InvalidName(String),
    #[error("coordinate `{name}`: {message}")]
    BadBounds { name: String, message: String },
}

/// A coordinate chart: ordered coordinate names, open-interval bounds and
/// the closed box that sample points are drawn from.
///
/// The sample box must sit strictly inside the bounds so that every sampled
/// point satisfies the constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartDomain {
    coords: Vec<String>,
    bounds: Vec<Interval>,
    sample_box: Vec<(f64, f64)>,
}

impl ChartDomain {
    pub fn new(
        coords: Vec<String>,
        bounds: Vec<Interval>,
        sample_box: Vec<(f64, f64)>,
    ) -> Result<Self, ChartError> {
        if coords.is_empty() {
            return Err(ChartError::Empty);
        }
        for (i, name) in coords.iter().enumerate() {
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || super::ast::Func::from_name(name).is_some() || name == "pow" {
                return Err(ChartError::InvalidName(name.clone()));
            }
            if coords[..i].contains(name) {
                return Err(ChartError::DuplicateCoordinate(name.clone()));
            }
        }
        let bad = |i: usize, message: &str| ChartError::BadBounds {
            name: coords[i].clone(),
            message: message.into(),
        };
        if bounds.len() != coords.len() || sample_box.len() != coords.len() {
            return Err(bad(0, "bounds and sample box must have one entry per coordinate"));
        }
        for i in 0..coords.len() {
            let b = bounds[i];
            let (lo, hi) = sample_box[i];
            if b.lo.is_nan() || b.hi.is_nan() || b.lo >= b.hi {
                return Err(bad(i, "empty or invalid interval"));
            }
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(bad(i, "sample box must be a finite, nonempty interval"));
            }
            if !(b.contains(lo) && b.contains(hi)) {
                return Err(bad(i, "sample box must lie strictly inside the bounds"));
            }
        }
        Ok(Self {
            coords,
            bounds,
            sample_box,
        })
    }

    /// Chart whose bounds are the open box itself, sampled on a slightly
    /// shrunken copy.
    pub fn boxed(coords: &[&str], open_box: &[(f64, f64)]) -> Result<Self, ChartError> {
        let bounds = open_box.iter().map(|&(lo, hi)| Interval::new(lo, hi)).collect();
        let sample = open_box
            .iter()
            .map(|&(lo, hi)| {
                let pad = 0.01 * (hi - lo);
                (lo + pad, hi - pad)
            })
            .collect();
        Self::new(coords.iter().map(|s| s.to_string()).collect(), bounds, sample)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    pub fn sample_box(&self) -> &[(f64, f64)] {
        &self.sample_box
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim() && point.iter().zip(&self.bounds).all(|(x, b)| b.contains(*x))
    }

    /// Append a coordinate (used to build `M × ℝ>0` from a base chart).
    pub fn extended(
        &self,
        name: &str,
        bounds: Interval,
        sample: (f64, f64),
    ) -> Result<Self, ChartError> {
        let mut coords = self.coords.clone();
        coords.push(name.to_string());
        let mut b = self.bounds.clone();
        b.push(bounds);
        let mut s = self.sample_box.clone();
        s.push(sample);
        Self::new(coords, b, s)
    }

    /// Drop the last coordinate.
    pub fn base(&self) -> Result<Self, ChartError> {
        let d = self.dim();
        if d < 2 {
            return Err(ChartError::Empty);
        }
        Self::new(
            self.coords[..d - 1].to_vec(),
            self.bounds[..d - 1].to_vec(),
            self.sample_box[..d - 1].to_vec(),
        )
    }

    /// `n` deterministic quasi-random points in the sample box: a Halton
    /// sequence with a seeded random shift modulo one.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        (0..n)
            .map(|k| {
                (0..d)
                    .map(|i| {
                        let u = (radical_inverse(k as u64 + 1, PRIMES[i % PRIMES.len()]) + shift[i])
                            .fract();
                        let (lo, hi) = self.sample_box[i];
                        lo + u * (hi - lo)
                    })
                    .collect()
            })
            .collect()
    }
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while k > 0 {
        r += (k % base) as f64 * f;
        k /= base;
        f *= inv;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_names() {
        let err = ChartDomain::boxed(&["x", "x"], &[(0.0, 1.0), (0.0, 1.0)]).unwrap_err();
        assert_eq!(err, ChartError::DuplicateCoordinate("x".into()));
    }

    #[test]
    fn rejects_function_names_as_coordinates() {
        assert!(ChartDomain::boxed(&["sin"], &[(0.0, 1.0)]).is_err());
    }

    #[test]
    fn samples_are_deterministic_and_inside() {
        let chart = ChartDomain::boxed(&["x", "t"], &[(-1.0, 1.0), (0.5, 2.0)]).unwrap();
        let a = chart.sample(64, 42);
        let b = chart.sample(64, 42);
        assert_eq!(a, b);
        assert_ne!(a, chart.sample(64, 7));
        assert!(a.iter().all(|p| chart.contains(p)));
    }

    #[test]
    fn extended_chart_appends_coordinate() {
        let base = ChartDomain::boxed(&["x"], &[(0.0, 1.0)]).unwrap();
        let full = base
            .extended("t", Interval::positive(), (0.5, 2.0))
            .unwrap();
        assert_eq!(full.coords(), &["x".to_string(), "t".to_string()]);
        assert!(full.contains(&[0.5, 100.0]));
        assert!(!full.contains(&[0.5, 0.0]));
        assert_eq!(full.base().unwrap(), base);
    }
}
