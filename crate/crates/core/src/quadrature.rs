//! Gauss rules for the measures used by the transforms.
//!
//! Nodes come from the eigenvalues of the Jacobi matrix (Golub-Welsch),
//! polished by Newton on the recurrence. Weights use the Christoffel
//! formula so tiny tail weights keep full relative accuracy.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::special::gamma::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Measure {
    /// e^{-x^2} dx on R.
    GaussLine,
    /// x^alpha e^{-x} dx on (0, inf).
    WeightedHalfLine { alpha: f64 },
    /// (1-|z|^2)^gamma dlambda on the unit disk.
    Disk { gamma: f64 },
    /// e^{-|z|^2} dlambda on C.
    GaussianPlane,
}

impl Measure {
    pub fn total_mass(&self) -> f64 {
        match *self {
            Measure::GaussLine => PI.sqrt(),
            Measure::WeightedHalfLine { alpha } => ln_gamma(alpha + 1.0).exp(),
            Measure::Disk { gamma } => PI / (gamma + 1.0),
            Measure::GaussianPlane => PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<C64>,
    pub weights: Vec<f64>,
    pub measure: Measure,
    pub order: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Real parts of the nodes (for line rules).
    pub fn real_nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|z| z.re).collect()
    }

    /// sum_i w_i f(node_i)
    pub fn integrate<F: FnMut(C64) -> C64>(&self, mut f: F) -> C64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| f(z) * w).sum()
    }

    /// Same as `integrate` for values already tabulated on the nodes.
    pub fn integrate_values(&self, values: &[C64]) -> C64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Integration with a fallible integrand.
    pub fn try_integrate<F: FnMut(C64) -> Result<C64>>(&self, mut f: F) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (&z, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(z)? * w;
        }
        Ok(acc)
    }
}

/// A plain one-dimensional rule: nodes and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss rule from monic recurrence coefficients.
/// `a[k]`, k < n, are the diagonal entries; `b[k]`, 1 <= k < n, the
/// squared off-diagonals (b[0] unused); `mu0` is the total mass.
fn golub_welsch(a: &[f64], b: &[f64], mu0: f64) -> LineRule {
    let n = a.len();
    let mut t = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = a[i];
        if i + 1 < n {
            let s = b[i + 1].sqrt();
            t[(i, i + 1)] = s;
            t[(i + 1, i)] = s;
        }
    }
    let mut x: Vec<f64> = t.symmetric_eigenvalues().iter().copied().collect();
    x.sort_by(|p, q| p.partial_cmp(q).unwrap());

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &x0 in &x {
        let mut xi = x0;
        for _ in 0..3 {
            let (p, dp) = monic_eval(a, b, xi);
            if dp == 0.0 || !dp.is_finite() {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.abs() > 1e-6 * (1.0 + xi.abs()) {
                break;
            }
            xi -= step;
        }
        let w = christoffel_weight(a, b, mu0, xi);
        if w > 0.0 && w.is_finite() {
            nodes.push(xi);
            weights.push(w);
        }
    }
    LineRule { nodes, weights }
}

/// p_n(x) and p_n'(x) for the monic family, rescaled against overflow
/// (only the ratio is used).
fn monic_eval(a: &[f64], b: &[f64], x: f64) -> (f64, f64) {
    let n = a.len();
    let (mut p0, mut p1) = (0.0, 1.0);
    let (mut d0, mut d1) = (0.0, 0.0);
    for k in 0..n {
        let bk = if k == 0 { 0.0 } else { b[k] };
        let p2 = (x - a[k]) * p1 - bk * p0;
        let d2 = p1 + (x - a[k]) * d1 - bk * d0;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        let m = p1.abs().max(d1.abs());
        if m > 1e150 {
            p0 /= m;
            p1 /= m;
            d0 /= m;
            d1 /= m;
        }
    }
    (p1, d1)
}

/// mu0-normalized Christoffel weight 1 / sum_k phat_k(x)^2, computed in
/// log scale so large nodes give a clean underflow to zero.
fn christoffel_weight(a: &[f64], b: &[f64], mu0: f64, x: f64) -> f64 {
    let n = a.len();
    // orthonormal recurrence: sqrt(b_{k+1}) q_{k+1} = (x - a_k) q_k - sqrt(b_k) q_{k-1}
    let mut q0 = 0.0;
    let mut q1 = 1.0;
    let mut sum = 1.0;
    let mut log_scale = 0.0f64;
    for k in 0..n - 1 {
        let sb = if k == 0 { 0.0 } else { b[k].sqrt() };
        let q2 = ((x - a[k]) * q1 - sb * q0) / b[k + 1].sqrt();
        q0 = q1;
        q1 = q2;
        sum += q1 * q1;
        if sum > 1e200 {
            let s = sum.sqrt();
            q0 /= s;
            q1 /= s;
            sum = 1.0;
            log_scale += 2.0 * s.ln();
        }
    }
    (mu0.ln() - sum.ln() - log_scale).exp()
}

/// Gauss-Jacobi rule on [-1, 1] for (1-x)^a (1+x)^b.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<LineRule> {
    if n == 0 {
        return domain("rule needs at least one node");
    }
    if !(a > -1.0 && b > -1.0) {
        return domain(format!("Jacobi weight needs a, b > -1, got ({a}, {b})"));
    }
    let ab = a + b;
    let mut ak = vec![0.0; n];
    let mut bk = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        ak[k] = if k == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k >= 1 {
            bk[k] = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
        }
    }
    let mu0 = ((ab + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(ab + 2.0)).exp();
    Ok(golub_welsch(&ak, &bk, mu0))
}

/// Gauss-Jacobi on (0, 1) for the weight (1-v)^a v^b.
pub fn gauss_jacobi_unit(n: usize, a: f64, b: f64) -> Result<LineRule> {
    let r = gauss_jacobi(n, a, b)?;
    let scale = 2f64.powf(-(a + b + 1.0));
    Ok(LineRule {
        nodes: r.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: r.weights.iter().map(|w| w * scale).collect(),
    })
}

/// Gauss-Legendre on [-1, 1].
pub fn gauss_legendre(n: usize) -> Result<LineRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Gauss rule for a discrete positive measure sum_i w_i delta(x - x_i),
/// from recurrence coefficients built by the Stieltjes (Lanczos) procedure.
pub fn gauss_discrete(points: &[f64], weights: &[f64], n: usize) -> Result<LineRule> {
    if n == 0 || points.len() != weights.len() {
        return domain("discrete rule needs n >= 1 and matching points/weights");
    }
    if weights.iter().any(|&w| !(w >= 0.0)) {
        return domain("discrete measure must be nonnegative");
    }
    let support = weights.iter().filter(|&&w| w > 0.0).count();
    if support < n {
        return domain(format!("measure has {support} support points, fewer than {n}"));
    }
    let mu0: f64 = weights.iter().sum();
    let mut a = vec![0.0f64; n];
    let mut b = vec![0.0f64; n];
    let mut basis: Vec<Vec<f64>> = vec![vec![mu0.sqrt().recip(); points.len()]];
    for k in 0..n {
        let q = &basis[k];
        a[k] = points.iter().zip(weights).zip(q).map(|((x, w), qi)| w * x * qi * qi).sum();
        if k + 1 == n {
            break;
        }
        let sb = if k == 0 { 0.0 } else { b[k].sqrt() };
        let mut r: Vec<f64> = (0..points.len())
            .map(|i| (points[i] - a[k]) * q[i] - if k == 0 { 0.0 } else { sb * basis[k - 1][i] })
            .collect();
        // full reorthogonalization, twice
        for _ in 0..2 {
            for prev in &basis {
                let c: f64 = r.iter().zip(prev).zip(weights).map(|((ri, pi), w)| w * ri * pi).sum();
                r.iter_mut().zip(prev).for_each(|(ri, pi)| *ri -= c * pi);
            }
        }
        let norm2: f64 = r.iter().zip(weights).map(|(ri, w)| w * ri * ri).sum();
        b[k + 1] = norm2;
        let inv = norm2.sqrt().recip();
        basis.push(r.into_iter().map(|v| v * inv).collect());
    }
    Ok(golub_welsch(&a, &b, mu0))
}

/// n-point Gauss-Hermite rule for e^{-x^2} dx.
pub fn gauss_line(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return domain("rule needs at least one node");
    }
    let a = vec![0.0; n];
    let b: Vec<f64> = (0..n).map(|k| 0.5 * k as f64).collect();
    let mut r = golub_welsch(&a, &b, PI.sqrt());
    // exact symmetry
    let m = r.nodes.len();
    for i in 0..m / 2 {
        let x = 0.5 * (r.nodes[m - 1 - i] - r.nodes[i]);
        let w = 0.5 * (r.weights[i] + r.weights[m - 1 - i]);
        r.nodes[i] = -x;
        r.nodes[m - 1 - i] = x;
        r.weights[i] = w;
        r.weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        r.nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes: r.nodes.into_iter().map(C64::from).collect(),
        weights: r.weights,
        measure: Measure::GaussLine,
        order: n,
    })
}

/// n-point generalized Gauss-Laguerre rule for x^alpha e^{-x} dx.
/// Nodes whose weight underflows to zero are dropped.
pub fn gauss_halfline(n: usize, alpha: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return domain("rule needs at least one node");
    }
    if !(alpha > -1.0) {
        return domain(format!("half-line weight needs alpha > -1, got {alpha}"));
    }
    let a: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let b: Vec<f64> = (0..n).map(|k| k as f64 * (k as f64 + alpha)).collect();
    let r = golub_welsch(&a, &b, ln_gamma(alpha + 1.0).exp());
    Ok(QuadratureRule {
        nodes: r.nodes.into_iter().map(C64::from).collect(),
        weights: r.weights,
        measure: Measure::WeightedHalfLine { alpha },
        order: n,
    })
}

/// Tensor rule on the unit disk for (1-|z|^2)^gamma dlambda: radial
/// Gauss-Jacobi in u = r^2 times a uniform angular grid.
pub fn disk_rule(n_r: usize, n_theta: usize, gamma: f64) -> Result<QuadratureRule> {
    if n_r == 0 || n_theta == 0 {
        return domain("disk rule needs n_r, n_theta >= 1");
    }
    let radial = gauss_jacobi_unit(n_r, gamma, 0.0)?;
    let dtheta = 2.0 * PI / n_theta as f64;
    let mut nodes = Vec::with_capacity(n_r * n_theta);
    let mut weights = Vec::with_capacity(n_r * n_theta);
    for (&u, &wu) in radial.nodes.iter().zip(&radial.weights) {
        let r = u.sqrt();
        for k in 0..n_theta {
            nodes.push(C64::from_polar(r, k as f64 * dtheta));
            weights.push(0.5 * wu * dtheta);
        }
    }
    Ok(QuadratureRule { nodes, weights, measure: Measure::Disk { gamma }, order: n_r.min(n_theta) })
}

/// Tensor of two Gauss-Hermite rules for e^{-|z|^2} dlambda.
pub fn gaussian_plane_rule(n: usize) -> Result<QuadratureRule> {
    let line = gauss_line(n)?;
    let mut nodes = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (x, wx) in line.nodes.iter().zip(&line.weights) {
        for (y, wy) in line.nodes.iter().zip(&line.weights) {
            nodes.push(C64::new(x.re, y.re));
            weights.push(wx * wy);
        }
    }
    Ok(QuadratureRule { nodes, weights, measure: Measure::GaussianPlane, order: n })
}

/// sum_i w_i f(node_i)
pub fn integrate<F: FnMut(C64) -> C64>(rule: &QuadratureRule, f: F) -> C64 {
    rule.integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rules() {
        let r = gauss_line(1).unwrap();
        assert!(r.nodes[0].re.abs() < 1e-15);
        assert!((r.weights[0] - PI.sqrt()).abs() < 1e-15);
        let r = gauss_halfline(1, 0.0).unwrap();
        assert!((r.nodes[0].re - 1.0).abs() < 1e-15 && (r.weights[0] - 1.0).abs() < 1e-15);
        let r = gauss_halfline(1, 1.0).unwrap();
        assert!((r.nodes[0].re - 2.0).abs() < 1e-15 && (r.weights[0] - 1.0).abs() < 1e-15);
        let r = gauss_halfline(1, 0.5).unwrap();
        assert!((r.weights[0] - PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(gauss_line(0).is_err());
        assert!(gauss_halfline(4, -1.0).is_err());
        assert!(disk_rule(0, 4, 0.0).is_err());
        assert!(disk_rule(4, 4, -1.5).is_err());
    }

    #[test]
    fn two_point_second_moment() {
        let r = gauss_line(2).unwrap();
        let m = r.integrate(|z| z * z).re;
        assert!((m - PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_nodes() {
        for n in [3, 8, 31] {
            let r = gauss_line(n).unwrap();
            for i in 0..n {
                assert_eq!(r.nodes[i].re, -r.nodes[n - 1 - i].re);
            }
        }
    }

    #[test]
    fn disk_masses() {
        let r = disk_rule(8, 16, 0.0).unwrap();
        assert!((r.integrate(|_| C64::new(1.0, 0.0)).re - PI).abs() < 1e-14);
        assert!((r.integrate(|z| C64::from(z.norm_sqr())).re - PI / 2.0).abs() < 1e-14);
        let r = disk_rule(8, 16, 1.0).unwrap();
        assert!((r.integrate(|_| C64::new(1.0, 0.0)).re - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn plane_moments() {
        let r = gaussian_plane_rule(10).unwrap();
        assert!((r.integrate(|_| C64::new(1.0, 0.0)).re - PI).abs() < 1e-13);
        assert!((r.integrate(|z| C64::from(z.norm_sqr())).re - PI).abs() < 1e-13);
        assert!(r.integrate(|z| z).norm() < 1e-14);
    }

    #[test]
    fn big_laguerre_drops_underflow() {
        let r = gauss_halfline(200, 0.0).unwrap();
        assert!(r.len() <= 200 && r.len() > 150);
        assert!(r.weights.iter().all(|&w| w > 0.0));
        let s: f64 = r.weights.iter().sum();
        assert!((s - 1.0).abs() < 1e-13);
    }

    #[test]
    fn discrete_rule_reproduces_polynomials() {
        let xs: Vec<f64> = (0..2001).map(|i| (i as f64 * 1e-3 * 3.0).exp().recip()).collect();
        let ws: Vec<f64> = (0..2001).map(|i| 1.0 + (i as f64 * 0.01).sin().powi(2)).collect();
        let r = gauss_discrete(&xs, &ws, 12).unwrap();
        for k in 0..24 {
            let exact: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(k)).sum();
            let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k)).sum();
            assert!((exact - got).abs() < 1e-12 * exact.abs(), "k={k}");
        }
    }

    #[test]
    fn integrate_examples() {
        let r = gauss_line(10).unwrap();
        assert!((integrate(&r, |_| C64::new(1.0, 0.0)).re - PI.sqrt()).abs() < 1e-14);
        let r = gauss_halfline(5, 0.0).unwrap();
        assert!((integrate(&r, |x| x).re - 1.0).abs() < 1e-14);
        assert_eq!(integrate(&r, |_| C64::new(0.0, 0.0)), C64::new(0.0, 0.0));
    }
}
