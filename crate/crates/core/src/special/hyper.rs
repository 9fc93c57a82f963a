//! Generalized hypergeometric series pFq by partial sums.

use num_complex::Complex64 as C64;

use crate::error::{domain, Error, Result};

pub const DEFAULT_TRUNCATION: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypKind {
    F11,
    F21,
    F32,
}

impl HypKind {
    fn shape(self) -> (usize, usize) {
        match self {
            HypKind::F11 => (1, 1),
            HypKind::F21 => (2, 1),
            HypKind::F32 => (3, 2),
        }
    }
}

/// Partial sum plus the size of the first term left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypSum<T> {
    pub value: T,
    pub terms: usize,
    pub omitted_bound: f64,
    pub terminated: bool,
}

fn nonpositive_integer(v: f64) -> Option<usize> {
    (v <= 0.0 && v.fract() == 0.0).then_some((-v) as usize)
}

pub fn hyp_series(kind: HypKind, upper: &[f64], lower: &[f64], x: f64, truncation: usize) -> Result<HypSum<f64>> {
    let s = hyp_series_complex(kind, upper, lower, C64::new(x, 0.0), truncation)?;
    Ok(HypSum { value: s.value.re, terms: s.terms, omitted_bound: s.omitted_bound, terminated: s.terminated })
}

pub fn hyp_series_complex(
    kind: HypKind,
    upper: &[f64],
    lower: &[f64],
    z: C64,
    truncation: usize,
) -> Result<HypSum<C64>> {
    let (p, q) = kind.shape();
    if upper.len() != p || lower.len() != q {
        return domain(format!("{kind:?} takes {p} upper and {q} lower parameters"));
    }
    let stop = upper.iter().filter_map(|&a| nonpositive_integer(a)).min();
    for &b in lower {
        if let Some(nb) = nonpositive_integer(b) {
            if stop.map_or(true, |na| na >= nb + 1) {
                return domain(format!("lower parameter {b} hits a pole before the series terminates"));
            }
        }
    }
    if p > q && z.norm() >= 1.0 && stop.is_none() {
        return domain(format!("{kind:?} needs |x| < 1 unless terminating, got |x| = {}", z.norm()));
    }

    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev_abs = f64::INFINITY;
    for k in 0..truncation {
        let kf = k as f64;
        let num: f64 = upper.iter().map(|a| a + kf).product();
        let den: f64 = lower.iter().map(|b| b + kf).product();
        let next = term * z * (num / (den * (kf + 1.0)));
        if next == C64::new(0.0, 0.0) {
            return Ok(HypSum { value: sum, terms: k + 1, omitted_bound: 0.0, terminated: true });
        }
        let a = next.norm();
        // the tail is negligible once terms are decreasing and below rounding
        if a <= f64::EPSILON * 1e-2 * sum.norm() && a < prev_abs {
            return Ok(HypSum { value: sum + next, terms: k + 2, omitted_bound: a, terminated: false });
        }
        prev_abs = term.norm();
        term = next;
        sum += term;
    }
    let kf = truncation as f64;
    let num: f64 = upper.iter().map(|a| a + kf).product();
    let den: f64 = lower.iter().map(|b| b + kf).product();
    let omitted = term * z * (num / (den * (kf + 1.0)));
    if omitted.norm() >= term.norm() && omitted.norm() > 1e-15 * sum.norm() {
        return Err(Error::NoConvergence(format!(
            "{kind:?} terms not decreasing after {truncation} terms (last {:.3e})",
            omitted.norm()
        )));
    }
    Ok(HypSum { value: sum, terms: truncation + 1, omitted_bound: omitted.norm(), terminated: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument() {
        let s = hyp_series(HypKind::F11, &[2.5], &[1.5], 0.0, 50).unwrap();
        assert_eq!(s.value, 1.0);
        assert!(s.terminated);
    }

    #[test]
    fn log_identity() {
        // z 2F1(1,1;2;z) = -log(1-z)
        let z = 0.37;
        let s = hyp_series(HypKind::F21, &[1.0, 1.0], &[2.0], z, 500).unwrap();
        assert!((z * s.value + (1.0f64 - z).ln()).abs() < 1e-15);
    }

    #[test]
    fn exponential() {
        let s = hyp_series(HypKind::F11, &[1.0], &[1.0], 2.0, 200).unwrap();
        assert!((s.value - 2f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn outside_disk_rejected() {
        assert!(hyp_series(HypKind::F21, &[0.5, 1.0], &[2.0], 1.2, 100).is_err());
        // terminating series is fine anywhere
        assert!(hyp_series(HypKind::F21, &[-3.0, 1.0], &[2.0], 5.0, 100).is_ok());
    }

    #[test]
    fn pole_rejected() {
        assert!(hyp_series(HypKind::F11, &[1.0], &[-2.0], 0.5, 100).is_err());
        assert!(hyp_series(HypKind::F11, &[-1.0], &[-2.0], 0.5, 100).is_ok());
    }

    #[test]
    fn truncation_too_short() {
        let r = hyp_series(HypKind::F11, &[1.0], &[1.0], 30.0, 10);
        assert!(matches!(r, Err(Error::NoConvergence(_))));
    }

    #[test]
    fn omitted_term_reported() {
        let s = hyp_series(HypKind::F11, &[1.0], &[1.0], 0.5, 5).unwrap();
        // first omitted term is 0.5^6/6!
        assert!((s.omitted_bound - 0.5f64.powi(6) / 720.0).abs() < 1e-18);
    }
}
