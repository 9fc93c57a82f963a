//! The convolution weight omega_{alpha,m} on a uniform grid.
//!
//! omega = sqrt(t) e^{-t} * phi_2 * ... * phi_m, where
//! phi_l = (sqrt(t) e^{-l t}) * (e^{-(alpha+l) t} / sqrt(t)).
//! Each phi_l is evaluated pointwise after the substitution s = t v, which
//! turns the t^{-1/2} endpoint singularity into a Gauss-Jacobi weight.
//! The outer convolutions use Gauss-Legendre on [0, t] with local
//! Lagrange interpolation of the tabulated factors.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::quadrature::{gauss_discrete, gauss_jacobi_unit, gauss_legendre, LineRule};
use crate::special::gamma::ln_gamma;

const INNER_NODES: usize = 80;
const CONV_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct OmegaWeight {
    pub alpha: f64,
    pub m: usize,
    pub h: f64,
    pub t_max: f64,
    /// omega(i h), i = 0..=n
    pub values: Vec<f64>,
    reversed: Option<Vec<f64>>,
}

/// Sampled omega_{alpha,m} on [0, T] with step h.
pub fn omega(alpha: f64, m: usize, t_max: f64, h: f64) -> Result<OmegaWeight> {
    OmegaWeight::build(alpha, m, t_max, h)
}

/// Closed-form Laplace transform of omega_{alpha,m} at j:
/// Gamma(3/2)^m Gamma(1/2)^(m-1) / ([(j+1)...(j+m)]^{3/2} [(j+alpha+2)...(j+alpha+m)]^{1/2}).
pub fn omega_laplace_closed(alpha: f64, m: usize, j: f64) -> f64 {
    let mut l = m as f64 * ln_gamma(1.5) + (m as f64 - 1.0) * 0.5 * PI.ln();
    for i in 1..=m {
        l -= 1.5 * (j + i as f64).ln();
    }
    for i in 2..=m {
        l -= 0.5 * (j + alpha + i as f64).ln();
    }
    l.exp()
}

impl OmegaWeight {
    pub fn build(alpha: f64, m: usize, t_max: f64, h: f64) -> Result<Self> {
        Self::build_inner(alpha, m, t_max, h, false)
    }

    /// Also computes the chain in reversed association order, for the
    /// self-check reported by `reversed_discrepancy`.
    pub fn build_checked(alpha: f64, m: usize, t_max: f64, h: f64) -> Result<Self> {
        Self::build_inner(alpha, m, t_max, h, true)
    }

    fn build_inner(alpha: f64, m: usize, t_max: f64, h: f64, check: bool) -> Result<Self> {
        if !(alpha > -1.0) {
            return domain(format!("omega needs alpha > -1, got {alpha}"));
        }
        if m < 2 {
            return domain(format!("omega needs m >= 2, got {m}"));
        }
        if !(t_max > 0.0 && h > 0.0 && h <= t_max) {
            return domain(format!("omega grid needs 0 < h <= T, got T={t_max}, h={h}"));
        }
        let n = (t_max / h).round() as usize;
        if n < 6 || n > 50_000_000 {
            return domain(format!("omega grid has {n} intervals; need 6..=5e7"));
        }
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let inner = gauss_jacobi_unit(INNER_NODES, 0.5, -0.5)?;
        let outer = gauss_jacobi_unit(INNER_NODES, 0.0, 0.5)?;
        let gl = gauss_legendre(CONV_NODES)?;

        let phis: Vec<Vec<f64>> = (2..=m).map(|l| tabulate_phi(&grid, alpha, l as f64, &inner)).collect();
        let forward = chain(&phis, &grid, h, &gl);
        let values = apply_outer(&forward, &grid, h, &outer);
        let reversed = if check && m > 2 {
            let rev: Vec<Vec<f64>> = phis.iter().rev().cloned().collect();
            Some(apply_outer(&chain(&rev, &grid, h, &gl), &grid, h, &outer))
        } else {
            None
        };
        Ok(Self { alpha, m, h, t_max: n as f64 * h, values, reversed })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Trapezoid weights h (with half weight at both ends) times omega.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.values.len();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| if i == 0 || i + 1 == n { 0.5 * self.h * v } else { self.h * v })
            .collect()
    }

    /// int_0^T omega(t) g(t) dt by the trapezoid rule on the grid.
    pub fn integrate<F: Fn(f64) -> C64>(&self, g: F) -> C64 {
        self.trapezoid_weights().iter().enumerate().map(|(i, w)| g(self.t(i)) * *w).sum()
    }

    /// Numeric Laplace transform at j by the trapezoid rule on the grid.
    pub fn laplace_numeric(&self, j: f64) -> f64 {
        self.trapezoid_weights().iter().enumerate().map(|(i, w)| w * (-j * self.t(i)).exp()).sum()
    }

    /// Max relative difference between the two association orders
    /// (zero when m = 2 or when built without the check).
    pub fn reversed_discrepancy(&self) -> f64 {
        let Some(rev) = &self.reversed else { return 0.0 };
        let peak = self.values.iter().cloned().fold(0.0, f64::max);
        self.values.iter().zip(rev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / peak
    }

    /// sup_t omega(t) / (t^{m-1} sqrt(t) e^{-t}) and sup_t omega(t) / (t^m sqrt(t) e^{-t}).
    pub fn envelope(&self) -> (f64, f64) {
        let m = self.m as i32;
        let mut lo = 0.0f64;
        let mut hi = 0.0f64;
        for (i, v) in self.values.iter().enumerate().skip(1) {
            let t = self.t(i);
            let base = t.sqrt() * (-t).exp();
            lo = lo.max(v / (t.powi(m - 1) * base));
            hi = hi.max(v / (t.powi(m) * base));
        }
        (lo, hi)
    }

    /// Gauss rule in s = e^{-t} that reproduces the trapezoid sum of
    /// omega(t) p(e^{-t}) for polynomials p of degree < 2n.
    pub fn s_rule(&self, n: usize) -> Result<LineRule> {
        let s: Vec<f64> = (0..self.values.len()).map(|i| (-self.t(i)).exp()).collect();
        gauss_discrete(&s, &self.trapezoid_weights(), n)
    }
}

/// phi_l(t) = e^{-l t} t int_0^1 (1-v)^{1/2} v^{-1/2} e^{-alpha t v} dv
fn tabulate_phi(grid: &[f64], alpha: f64, l: f64, rule: &LineRule) -> Vec<f64> {
    grid.par_iter()
        .map(|&t| {
            let s: f64 = rule.nodes.iter().zip(&rule.weights).map(|(v, w)| w * (-alpha * t * v).exp()).sum();
            (-l * t).exp() * t * s
        })
        .collect()
}

fn chain(factors: &[Vec<f64>], grid: &[f64], h: f64, gl: &LineRule) -> Vec<f64> {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = convolve(&acc, f, grid, h, gl);
    }
    acc
}

/// (a * b)(t) = int_0^t a(t - s) b(s) ds for tabulated a, b.
fn convolve(a: &[f64], b: &[f64], grid: &[f64], h: f64, gl: &LineRule) -> Vec<f64> {
    grid.par_iter()
        .map(|&t| {
            if t == 0.0 {
                return 0.0;
            }
            let half = 0.5 * t;
            gl.nodes
                .iter()
                .zip(&gl.weights)
                .map(|(x, w)| {
                    let s = half * (x + 1.0);
                    w * interp(a, h, t - s) * interp(b, h, s)
                })
                .sum::<f64>()
                * half
        })
        .collect()
}

/// omega(t) = t^{3/2} int_0^1 v^{1/2} e^{-t v} Phi(t (1 - v)) dv
fn apply_outer(phi: &[f64], grid: &[f64], h: f64, rule: &LineRule) -> Vec<f64> {
    grid.par_iter()
        .map(|&t| {
            if t == 0.0 {
                return 0.0;
            }
            let s: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(v, w)| w * (-t * v).exp() * interp(phi, h, t * (1.0 - v)))
                .sum();
            (t * t.sqrt() * s).max(0.0)
        })
        .collect()
}

/// Six-point Lagrange interpolation on the uniform grid.
fn interp(f: &[f64], h: f64, t: f64) -> f64 {
    let n = f.len();
    let p = t / h;
    let i0 = (p.floor() as isize - 2).clamp(0, n as isize - 6) as usize;
    let x = p - i0 as f64;
    let mut out = 0.0;
    for k in 0..6 {
        let mut l = 1.0;
        for j in 0..6 {
            if j != k {
                l *= (x - j as f64) / (k as f64 - j as f64);
            }
        }
        out += l * f[i0 + k];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_spot_value() {
        let v = omega_laplace_closed(0.0, 2, 0.0);
        assert!((v - PI.powf(1.5) / 16.0).abs() < 1e-15);
    }

    #[test]
    fn grid_basics() {
        let w = omega(0.5, 2, 10.0, 1e-2).unwrap();
        assert_eq!(w.values[0], 0.0);
        assert!(w.values.iter().all(|&v| v >= 0.0));
        assert_eq!(w.len(), 1001);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(omega(-1.0, 2, 10.0, 0.01).is_err());
        assert!(omega(0.0, 1, 10.0, 0.01).is_err());
        assert!(omega(0.0, 2, -1.0, 0.01).is_err());
        assert!(omega(0.0, 2, 1.0, 0.0).is_err());
    }

    #[test]
    fn phi_matches_kummer_form() {
        // phi_l(t) = e^{-l t} t B(3/2, 1/2) 1F1(1/2; 2; -alpha t)
        use crate::special::hyper::{hyp_series, HypKind};
        let rule = gauss_jacobi_unit(INNER_NODES, 0.5, -0.5).unwrap();
        for &(alpha, t) in &[(0.5, 0.3), (1.5, 4.0), (-0.5, 12.0), (1.5, 40.0)] {
            let got = tabulate_phi(&[t], alpha, 2.0, &rule)[0];
            // Kummer's transformation keeps the series positive for alpha > 0
            let f = if alpha > 0.0 {
                (-alpha * t).exp() * hyp_series(HypKind::F11, &[1.5], &[2.0], alpha * t, 4000).unwrap().value
            } else {
                hyp_series(HypKind::F11, &[0.5], &[2.0], -alpha * t, 4000).unwrap().value
            };
            let want = (-2.0 * t).exp() * t * PI / 2.0 * f;
            assert!((got - want).abs() < 1e-12 * want.abs().max(1e-300) + 1e-14, "{alpha} {t}: {got} {want}");
        }
    }

    #[test]
    fn s_rule_matches_trapezoid() {
        let w = omega(0.5, 2, 40.0, 1e-2).unwrap();
        let r = w.s_rule(40).unwrap();
        let z = C64::new(0.5, 0.3);
        let g = |s: f64| (C64::new(1.0, 0.0) - z * s).powf(-3.5);
        let full = w.integrate(|t| g((-t).exp()));
        let comp: C64 = r.nodes.iter().zip(&r.weights).map(|(s, wt)| g(*s) * *wt).sum();
        assert!((full - comp).norm() < 1e-14 * full.norm());
    }
}
