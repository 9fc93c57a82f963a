//! Classical orthogonal polynomials by three-term recurrence.

use crate::error::{domain, Result};
use crate::special::gamma::binomial;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyKind {
    Hermite,
    Laguerre { alpha: f64 },
    Jacobi { a: f64, b: f64 },
}

/// A single polynomial of a classical family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolynomialFamily {
    pub kind: PolyKind,
    pub degree: usize,
}

impl PolynomialFamily {
    pub fn new(kind: PolyKind, degree: usize) -> Result<Self> {
        match kind {
            PolyKind::Laguerre { alpha } if !(alpha > -1.0) => {
                return domain(format!("Laguerre needs alpha > -1, got {alpha}"))
            }
            PolyKind::Jacobi { a, b } if !(a > -1.0 && b > -1.0) => {
                return domain(format!("Jacobi needs a, b > -1, got ({a}, {b})"))
            }
            _ => {}
        }
        Ok(Self { kind, degree })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            PolyKind::Hermite => hermite(self.degree, x),
            PolyKind::Laguerre { alpha } => laguerre_unchecked(self.degree, alpha, x),
            PolyKind::Jacobi { a, b } => jacobi(self.degree, a, b, x),
        }
    }

    /// Leading coefficient of the standard normalization.
    pub fn leading_coefficient(&self) -> f64 {
        let n = self.degree;
        match self.kind {
            PolyKind::Hermite => 2f64.powi(n as i32),
            PolyKind::Laguerre { .. } => {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                s / (1..=n).fold(1.0, |p, k| p * k as f64)
            }
            PolyKind::Jacobi { a, b } => binomial(2.0 * n as f64 + a + b, n) / 2f64.powi(n as i32),
        }
    }
}

/// Physicists' Hermite polynomial H_j(x).
pub fn hermite(j: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, 2.0 * x);
    if j == 0 {
        return p0;
    }
    for k in 1..j {
        let p2 = 2.0 * x * p1 - 2.0 * k as f64 * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// H_0(x), ..., H_{n-1}(x).
pub fn hermite_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let (mut p0, mut p1) = (1.0, 2.0 * x);
    for k in 0..n {
        out.push(p0);
        let p2 = 2.0 * x * p1 - 2.0 * (k + 1) as f64 * p0;
        p0 = p1;
        p1 = p2;
    }
    out
}

/// Generalized Laguerre polynomial L_j^{(alpha)}(x).
pub fn laguerre(j: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return domain(format!("Laguerre needs alpha > -1, got {alpha}"));
    }
    Ok(laguerre_unchecked(j, alpha, x))
}

pub(crate) fn laguerre_unchecked(j: usize, alpha: f64, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, 1.0 + alpha - x);
    if j == 0 {
        return p0;
    }
    for k in 1..j {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 + alpha - x) * p1 - (kf + alpha) * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// L_0^{(alpha)}(x), ..., L_{n-1}^{(alpha)}(x).
pub(crate) fn laguerre_all(n: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let (mut p0, mut p1) = (1.0, 1.0 + alpha - x);
    for k in 0..n {
        out.push(p0);
        let kf = (k + 1) as f64;
        let p2 = ((2.0 * kf + 1.0 + alpha - x) * p1 - (kf + alpha) * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    out
}

/// Jacobi polynomial P_j^{(a,b)}(x).
///
/// Uses the recurrence when a, b > -1. Otherwise (e.g. a negative integer
/// first parameter) falls back to the explicit sum
/// sum_s C(j+a, j-s) C(j+b, s) ((x-1)/2)^s ((x+1)/2)^(j-s),
/// which is a polynomial identity valid for all real a, b.
pub fn jacobi(j: usize, a: f64, b: f64, x: f64) -> f64 {
    if a > -1.0 && b > -1.0 {
        jacobi_recurrence(j, a, b, x)
    } else {
        jacobi_sum(j, a, b, x)
    }
}

fn jacobi_recurrence(j: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if j == 0 {
        return p0;
    }
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for n in 2..=j {
        let n = n as f64;
        let s = 2.0 * n + a + b;
        let c0 = 2.0 * n * (n + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        let p2 = (c1 * p1 - c2 * p0) / c0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

pub(crate) fn jacobi_sum(j: usize, a: f64, b: f64, x: f64) -> f64 {
    let jf = j as f64;
    let u = 0.5 * (x - 1.0);
    let v = 0.5 * (x + 1.0);
    (0..=j)
        .map(|s| binomial(jf + a, j - s) * binomial(jf + b, s) * u.powi(s as i32) * v.powi((j - s) as i32))
        .sum()
}
