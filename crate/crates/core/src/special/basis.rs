//! Orthonormal systems phi_j (source side) and psi_j (target side).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};
use crate::special::gamma::{binomial, ln_factorial, ln_gamma};
use crate::special::poly::laguerre_all;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisFamily {
    /// H_j / (pi^{1/4} sqrt(j! 2^j)) in L2(R, e^{-x^2} dx).
    HermiteL2,
    /// sqrt(j!/Gamma(alpha+j+1)) L_j^{(alpha)} in L2(R+, x^alpha e^{-x} dx).
    LaguerreL2 { alpha: f64 },
    /// z^j / sqrt(pi j!) in the Fock space.
    BargmannFock,
    /// Weighted Bergman space with measure (delta/pi)(1-|z|^2)^{delta-1}.
    Bergman { delta: f64 },
    /// Eigenspace of H_nu for the eigenvalue 4 ell (2 nu - ell - 1).
    DiskEigen { nu: f64, ell: usize },
    Dirichlet,
    GenDirichlet { alpha: f64, m: usize },
}

impl BasisFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BasisFamily::LaguerreL2 { alpha } if !(alpha > -1.0) => domain(format!("alpha must exceed -1, got {alpha}")),
            BasisFamily::Bergman { delta } if !(delta > 0.0) => domain(format!("delta must be positive, got {delta}")),
            BasisFamily::DiskEigen { nu, ell } => check_disk_eigen(nu, ell),
            BasisFamily::GenDirichlet { alpha, m } => {
                if !(alpha > -1.0) {
                    domain(format!("alpha must exceed -1, got {alpha}"))
                } else if m == 0 {
                    domain("m must be at least 1")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn is_real_line(&self) -> bool {
        matches!(self, BasisFamily::HermiteL2 | BasisFamily::LaguerreL2 { .. })
    }

    /// psi_j = c_j z^j for the holomorphic families; None otherwise.
    pub fn monomial_coefficient(&self, j: usize) -> Option<f64> {
        let jf = j as f64;
        match *self {
            BasisFamily::BargmannFock => Some((-0.5 * (PI.ln() + ln_factorial(j))).exp()),
            BasisFamily::Bergman { delta } => {
                Some((0.5 * (ln_gamma(1.0 + delta + jf) - ln_factorial(j) - ln_gamma(delta + 1.0))).exp())
            }
            BasisFamily::DiskEigen { nu, ell: 0 } => {
                let b = 2.0 * nu - 1.0;
                Some(((b / PI).ln() * 0.5 + 0.5 * (ln_gamma(b + 1.0 + jf) - ln_factorial(j) - ln_gamma(b + 1.0))).exp())
            }
            BasisFamily::Dirichlet => Some(if j == 0 { PI.sqrt().recip() } else { (PI * jf).sqrt().recip() }),
            BasisFamily::GenDirichlet { alpha, m } => {
                let l = if j < m {
                    ln_gamma(jf + 1.0 + alpha) - PI.ln() - ln_factorial(j) - ln_gamma(alpha + 1.0)
                } else {
                    ln_factorial(j - m) + ln_gamma(jf - m as f64 + 2.0 + alpha)
                        - PI.ln()
                        - 2.0 * ln_factorial(j)
                        - ln_gamma(alpha + 1.0)
                };
                Some((0.5 * l).exp())
            }
            _ => None,
        }
    }

    /// The j-th basis function at `point` (real families use the real part
    /// and require a zero imaginary part).
    pub fn eval(&self, j: usize, point: C64) -> Result<C64> {
        self.validate()?;
        self.check_point(point)?;
        Ok(self.eval_unchecked(j, point))
    }

    /// Values of the first `n` basis functions at `point`.
    pub fn eval_all(&self, n: usize, point: C64) -> Result<Vec<C64>> {
        self.validate()?;
        self.check_point(point)?;
        Ok(match *self {
            BasisFamily::HermiteL2 => hermite_normalized(n, point.re).into_iter().map(C64::from).collect(),
            BasisFamily::LaguerreL2 { alpha } => laguerre_normalized(n, alpha, point.re).into_iter().map(C64::from).collect(),
            _ => (0..n).map(|j| self.eval_unchecked(j, point)).collect(),
        })
    }

    fn check_point(&self, p: C64) -> Result<()> {
        match self {
            BasisFamily::HermiteL2 if p.im != 0.0 => domain("Hermite family lives on the real line"),
            BasisFamily::LaguerreL2 { .. } if p.im != 0.0 || p.re < 0.0 => domain("Laguerre family lives on [0, inf)"),
            BasisFamily::DiskEigen { .. } if p.norm() >= 1.0 => domain(format!("|z| = {} is outside the disk", p.norm())),
            _ => Ok(()),
        }
    }

    pub(crate) fn eval_unchecked(&self, j: usize, z: C64) -> C64 {
        match *self {
            BasisFamily::HermiteL2 => C64::from(hermite_normalized(j + 1, z.re)[j]),
            BasisFamily::LaguerreL2 { alpha } => C64::from(laguerre_normalized(j + 1, alpha, z.re)[j]),
            BasisFamily::DiskEigen { nu, ell } if ell > 0 => disk_eigen(nu, ell, j, z),
            _ => z.powu(j as u32) * self.monomial_coefficient(j).unwrap(),
        }
    }
}

fn check_disk_eigen(nu: f64, ell: usize) -> Result<()> {
    if !(nu > 0.5) {
        return domain(format!("nu must exceed 1/2, got {nu}"));
    }
    if ell as f64 > (nu - 0.5).floor() {
        return domain(format!("ell = {ell} exceeds floor(nu - 1/2) for nu = {nu}"));
    }
    if 2.0 * (nu - ell as f64) - 1.0 <= 0.0 {
        return domain(format!("ell = {ell} gives a degenerate space for nu = {nu} (2(nu-ell)-1 must be positive)"));
    }
    Ok(())
}

pub(crate) fn hermite_normalized(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut p0 = PI.powf(-0.25);
    let mut p1 = 2f64.sqrt() * x * p0;
    for k in 0..n {
        out.push(p0);
        let kf = (k + 1) as f64;
        let p2 = (2.0 / (kf + 1.0)).sqrt() * x * p1 - (kf / (kf + 1.0)).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    out
}

pub(crate) fn laguerre_normalized(n: usize, alpha: f64, x: f64) -> Vec<f64> {
    laguerre_all(n, alpha, x)
        .into_iter()
        .enumerate()
        .map(|(j, l)| l * (0.5 * (ln_factorial(j) - ln_gamma(alpha + j as f64 + 1.0))).exp())
        .collect()
}

/// psi_j^{nu,ell}(z) through the explicit Jacobi sum, with the factor
/// zbar^{ell-j} absorbed termwise so no negative powers appear.
fn disk_eigen(nu: f64, ell: usize, j: usize, z: C64) -> C64 {
    let beta = 2.0 * (nu - ell as f64) - 1.0;
    let r2 = z.norm_sqr();
    let q = 1.0 - r2;
    let jf = j as f64;
    let ln_pref = 0.5 * ((beta / PI).ln() + ln_factorial(j) + ln_gamma(beta + 1.0 + ell as f64)
        - ln_factorial(ell)
        - ln_gamma(beta + 1.0 + jf));
    let zc = z.conj();
    let s0 = j.saturating_sub(ell);
    let mut acc = C64::new(0.0, 0.0);
    for s in s0..=j {
        let c = binomial(ell as f64, j - s) * binomial(jf + beta, s);
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        acc += z.powu(s as u32) * zc.powu((ell + s - j) as u32) * (sign * c * q.powi((j - s) as i32));
    }
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    acc * (sign * ln_pref.exp() / q.powi(ell as i32))
}
