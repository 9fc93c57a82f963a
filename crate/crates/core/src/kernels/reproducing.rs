//! Reproducing kernels of the target spaces.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};
use crate::special::basis::BasisFamily;
use crate::special::gamma::{ln_factorial, pochhammer};
use crate::special::hyper::{hyp_series_complex, HypKind};
use crate::special::poly::jacobi;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReproducingKernel {
    /// e^{z conj(w)} / pi
    BargmannFock,
    /// (1 - z conj(w))^{-delta-1}, measure (delta/pi)(1-|z|^2)^{delta-1}.
    Bergman { delta: f64 },
    /// (alpha+1)/pi (1 - z conj(w))^{-alpha-2}, measure (1-|z|^2)^alpha.
    WeightedBergman { alpha: f64 },
    DiskEigen { nu: f64, ell: usize },
    /// (1/pi)(1 + log(1/(1 - z conj(w))))
    Dirichlet,
    GenBergmanDirichlet { alpha: f64, m: usize },
}

impl ReproducingKernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ReproducingKernel::WeightedBergman { alpha } if !(alpha > -1.0) => {
                domain(format!("alpha must exceed -1, got {alpha}"))
            }
            _ => self.basis().validate(),
        }
    }

    /// An orthonormal basis whose Papadakis sum is this kernel.
    pub fn basis(&self) -> BasisFamily {
        match *self {
            ReproducingKernel::BargmannFock => BasisFamily::BargmannFock,
            ReproducingKernel::Bergman { delta } => BasisFamily::Bergman { delta },
            ReproducingKernel::WeightedBergman { alpha } => BasisFamily::DiskEigen { nu: 0.5 * alpha + 1.0, ell: 0 },
            ReproducingKernel::DiskEigen { nu, ell } => BasisFamily::DiskEigen { nu, ell },
            ReproducingKernel::Dirichlet => BasisFamily::Dirichlet,
            ReproducingKernel::GenBergmanDirichlet { alpha, m } => BasisFamily::GenDirichlet { alpha, m },
        }
    }

    pub fn eval(&self, z: C64, w: C64) -> Result<C64> {
        self.validate()?;
        for p in [z, w] {
            if !p.re.is_finite() || !p.im.is_finite() {
                return domain("non-finite argument");
            }
            if !matches!(self, ReproducingKernel::BargmannFock) && p.norm() >= 1.0 {
                return domain(format!("|z| = {} is outside the unit disk", p.norm()));
            }
        }
        let u = z * w.conj();
        Ok(match *self {
            ReproducingKernel::BargmannFock => u.exp() / PI,
            ReproducingKernel::Bergman { delta } => (ONE - u).powf(-delta - 1.0),
            ReproducingKernel::WeightedBergman { alpha } => (ONE - u).powf(-alpha - 2.0) * ((alpha + 1.0) / PI),
            ReproducingKernel::DiskEigen { nu, ell } => {
                let beta = 2.0 * (nu - ell as f64) - 1.0;
                let d = (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()) / (ONE - u).norm_sqr();
                (ONE - u).powf(-2.0 * nu) * (beta / PI * d.powi(-(ell as i32)) * jacobi(ell, 0.0, beta, 2.0 * d - 1.0))
            }
            ReproducingKernel::Dirichlet => (ONE - (ONE - u).ln()) / PI,
            ReproducingKernel::GenBergmanDirichlet { alpha, m } => {
                let head: C64 = (0..m)
                    .map(|j| u.powu(j as u32) * (pochhammer(alpha + 1.0, j) / ln_factorial(j).exp()))
                    .sum();
                let mf = m as f64 + 1.0;
                let f = hyp_series_complex(HypKind::F32, &[1.0, 1.0, alpha + 2.0], &[mf, mf], u, 200_000)?;
                (head + u.powu(m as u32) * f.value * ((alpha + 1.0) / (2.0 * ln_factorial(m)).exp())) / PI
            }
        })
    }
}

/// sum_{j=0}^{J} f_j(z) conj(f_j(w))
pub fn papadakis_sum(basis: BasisFamily, z: C64, w: C64, terms: usize) -> Result<C64> {
    let a = basis.eval_all(terms + 1, z)?;
    let b = basis.eval_all(terms + 1, w)?;
    Ok(a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum())
}
