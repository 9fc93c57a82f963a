//! Discretized forward and inverse transforms, target inner products and
//! the pairing / isometry machinery.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};
use crate::kernels::{KernelConfig, KernelFamily, KernelKind};
use crate::quadrature::{disk_rule, gauss_halfline, gauss_jacobi_unit, gauss_line, gaussian_plane_rule, Measure, QuadratureRule};
use crate::special::basis::BasisFamily;
use crate::special::gamma::{ln_factorial, ln_gamma};

/// Where the transform lands and how its inner product is computed.
#[derive(Debug, Clone)]
pub enum Target {
    /// Fock space, e^{-|z|^2} dlambda, with its plane rule.
    GaussianPlane { rule: QuadratureRule },
    /// L2 of scale (1-|z|^2)^gamma dlambda on the disk; `ell` is the
    /// eigenspace index (modes carry a (1-|z|^2)^{-ell} factor).
    L2Disk { gamma: f64, scale: f64, ell: usize, rule: QuadratureRule },
    DirichletInner,
    GenDirichletInner { alpha: f64, m: usize },
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::GaussianPlane { .. } => "gaussian-plane",
            Target::L2Disk { .. } => "l2-disk",
            Target::DirichletInner => "dirichlet-inner",
            Target::GenDirichletInner { .. } => "gen-dirichlet-inner",
        }
    }

    /// Target rule for the integral inverse (None for Dirichlet-type targets).
    pub fn rule(&self) -> Option<&QuadratureRule> {
        match self {
            Target::GaussianPlane { rule } | Target::L2Disk { rule, .. } => Some(rule),
            _ => None,
        }
    }

    fn scale(&self) -> f64 {
        match self {
            Target::L2Disk { scale, .. } => *scale,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConfig {
    /// Source rule size (None: 100 on the line, 120 on the half-line).
    pub source_n: Option<usize>,
    pub plane_n: usize,
    pub disk_nr: usize,
    pub disk_ntheta: usize,
    /// Largest radius used for sampling images in target norms.
    pub sample_radius: f64,
    /// Samples per circle (power of two).
    pub sample_n: usize,
    pub kernel: KernelConfig,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            source_n: None,
            plane_n: 60,
            disk_nr: 120,
            disk_ntheta: 256,
            sample_radius: 0.6,
            sample_n: 64,
            kernel: KernelConfig::default(),
        }
    }
}

/// Coefficients c_j = <f, phi_j> for j < J.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub values: Vec<C64>,
    pub basis: BasisFamily,
}

impl CoefficientVector {
    pub fn truncation(&self) -> usize {
        self.values.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ||f||^2 - sum |c_j|^2, nonnegative up to quadrature error (Bessel).
    pub fn bessel_gap(&self, f_norm_sqr: f64) -> f64 {
        f_norm_sqr - self.norm_sqr()
    }
}

/// A target-space element known through coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetElement {
    /// <F, psi_j> for j < J.
    PsiCoefficients(Vec<C64>),
    /// Taylor coefficients a_j of a holomorphic F.
    Taylor(Vec<C64>),
}

#[derive(Debug, Clone)]
pub struct TransformOperator {
    kernel: KernelFamily,
    source_rule: QuadratureRule,
    target: Target,
    cfg: TransformConfig,
}

impl TransformOperator {
    pub fn new(kind: KernelKind) -> Result<Self> {
        Self::with_config(kind, &TransformConfig::default())
    }

    pub fn with_config(kind: KernelKind, cfg: &TransformConfig) -> Result<Self> {
        let kernel = KernelFamily::with_config(kind, &cfg.kernel)?;
        Self::from_kernel(kernel, cfg)
    }

    /// Builds the default source and target rules around a ready kernel.
    pub fn from_kernel(kernel: KernelFamily, cfg: &TransformConfig) -> Result<Self> {
        let kind = kernel.kind();
        let source_rule = match kind.source_alpha() {
            None => gauss_line(cfg.source_n.unwrap_or(100))?,
            Some(a) => gauss_halfline(cfg.source_n.unwrap_or(120), a)?,
        };
        let target = match kind {
            KernelKind::Classical => Target::GaussianPlane { rule: gaussian_plane_rule(cfg.plane_n)? },
            KernelKind::Second { delta } => Target::L2Disk {
                gamma: delta - 1.0,
                scale: delta / PI,
                ell: 0,
                rule: disk_rule(cfg.disk_nr, cfg.disk_ntheta, delta - 1.0)?,
            },
            KernelKind::GeneralizedSecond { nu, ell } => Target::L2Disk {
                gamma: 2.0 * nu - 2.0,
                scale: 1.0,
                ell,
                rule: disk_rule(cfg.disk_nr, cfg.disk_ntheta, 2.0 * nu - 2.0)?,
            },
            KernelKind::Dirichlet => Target::DirichletInner,
            KernelKind::GenBergmanDirichlet { alpha, m } => Target::GenDirichletInner { alpha, m },
        };
        Self::from_parts(kernel, source_rule, target, cfg)
    }

    pub fn from_parts(kernel: KernelFamily, source_rule: QuadratureRule, target: Target, cfg: &TransformConfig) -> Result<Self> {
        let want = kernel.kind().source_measure();
        if source_rule.measure != want {
            return domain(format!("source rule measure {:?} does not match the kernel's {:?}", source_rule.measure, want));
        }
        if let Some(r) = target.rule() {
            match (kernel.kind(), r.measure) {
                (KernelKind::Classical, Measure::GaussianPlane) => {}
                (k, Measure::Disk { .. }) if k.disk_target() => {}
                (_, m) => return domain(format!("target rule measure {m:?} does not fit the {} kernel", kernel.kind().name())),
            }
        }
        if !cfg.sample_n.is_power_of_two() || !(cfg.sample_radius > 0.0) {
            return domain("sample_n must be a power of two and sample_radius positive");
        }
        if kernel.kind().disk_target() && cfg.sample_radius >= 1.0 {
            return domain("sample_radius must be inside the unit disk");
        }
        Ok(Self { kernel, source_rule, target, cfg: *cfg })
    }

    pub fn kind(&self) -> KernelKind {
        self.kernel.kind()
    }

    pub fn kernel(&self) -> &KernelFamily {
        &self.kernel
    }

    pub fn source_rule(&self) -> &QuadratureRule {
        &self.source_rule
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn source_basis(&self) -> BasisFamily {
        self.kind().source_basis()
    }

    pub fn target_basis(&self) -> BasisFamily {
        self.kind().target_basis()
    }

    pub fn source_nodes(&self) -> Vec<f64> {
        self.source_rule.real_nodes()
    }

    /// phi_j at the source nodes, j < n.
    pub fn source_basis_values(&self, n: usize) -> Result<Vec<Vec<C64>>> {
        let b = self.source_basis();
        let per_node: Vec<Vec<C64>> =
            self.source_nodes().iter().map(|&x| b.eval_all(n, C64::from(x))).collect::<Result<_>>()?;
        Ok((0..n).map(|j| per_node.iter().map(|v| v[j]).collect()).collect())
    }

    /// sum_i w_i K(z, x_i) f(x_i), f given at the source nodes.
    pub fn forward(&self, f: &[C64], z: C64) -> Result<C64> {
        Ok(self.forward_many(&[f.to_vec()], &[z])?[0][0])
    }

    /// forward for several functions at several points: out[k][p].
    pub fn forward_many(&self, fs: &[Vec<C64>], zs: &[C64]) -> Result<Vec<Vec<C64>>> {
        let n = self.source_rule.len();
        if fs.iter().any(|f| f.len() != n) {
            return domain(format!("source values must have one entry per source node ({n})"));
        }
        let xs = self.source_nodes();
        for &z in zs {
            self.check_target_point(z)?;
        }
        let w = &self.source_rule.weights;
        let cols: Vec<Vec<C64>> = zs
            .par_iter()
            .map(|&z| {
                let row = self.kernel.row_unchecked(z, &xs);
                let kw: Vec<C64> = row.iter().zip(w).map(|(k, w)| k * w).collect();
                fs.iter().map(|f| kw.iter().zip(f).map(|(a, b)| a * b).sum()).collect()
            })
            .collect();
        Ok((0..fs.len()).map(|k| cols.iter().map(|c| c[k]).collect()).collect())
    }

    /// sum_i w_i conj(K(z_i, x)) F(z_i) over the target rule.
    pub fn inverse_integral(&self, values: &[C64], x: f64) -> Result<C64> {
        Ok(self.inverse_integral_many(values, &[x])?[0])
    }

    pub fn inverse_integral_many(&self, values: &[C64], xs: &[f64]) -> Result<Vec<C64>> {
        Ok(self.inverse_integral_multi(&[values.to_vec()], xs)?.remove(0))
    }

    /// Integral inverse of several target functions at several points: out[k][p].
    pub fn inverse_integral_multi(&self, values: &[Vec<C64>], xs: &[f64]) -> Result<Vec<Vec<C64>>> {
        let rule = self.target.rule().ok_or_else(|| {
            Error::Capability(format!(
                "the {} target is not inside an L2 space; use inverse_series",
                self.kind().name()
            ))
        })?;
        if values.iter().any(|v| v.len() != rule.len()) {
            return domain(format!("target values must have one entry per target node ({})", rule.len()));
        }
        for &x in xs {
            self.check_source_point(x)?;
        }
        let scale = self.target.scale();
        let nf = values.len();
        let zero = || vec![C64::new(0.0, 0.0); nf * xs.len()];
        let acc = (0..rule.len())
            .into_par_iter()
            .fold(zero, |mut acc, i| {
                let row = self.kernel.row_unchecked(rule.nodes[i], xs);
                let w = rule.weights[i];
                for (k, v) in values.iter().enumerate() {
                    let vw = v[i] * w;
                    for (a, kx) in acc[k * xs.len()..(k + 1) * xs.len()].iter_mut().zip(&row) {
                        *a += kx.conj() * vw;
                    }
                }
                acc
            })
            .reduce(zero, |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            });
        Ok(acc.chunks(xs.len().max(1)).take(nf).map(|c| c.iter().map(|v| v * scale).collect()).collect())
    }

    /// c_j = <f, phi_j>, j < J, by the source rule.
    pub fn coefficients(&self, f: &[C64], terms: usize) -> Result<CoefficientVector> {
        coefficients_on(f, self.source_basis(), &self.source_rule, terms)
    }

    pub fn series_transform(&self, c: &CoefficientVector, z: C64) -> Result<C64> {
        series_transform(c, self.target_basis(), z)
    }

    pub fn inverse_series(&self, elem: &TargetElement) -> Result<CoefficientVector> {
        inverse_series(elem, self.target_basis(), self.source_basis())
    }

    /// Gram matrix <B f_a, B f_b> in the target space. Images are sampled on
    /// interior circles and split into angular modes; each mode is then
    /// integrated in the radial variable (or, for holomorphic targets with
    /// a coefficient norm, read off as Taylor coefficients).
    pub fn target_gram(&self, fs: &[Vec<C64>], max_mode: usize) -> Result<DMatrix<C64>> {
        match &self.target {
            Target::GaussianPlane { rule } => {
                let img = self.forward_many(fs, &rule.nodes)?;
                Ok(DMatrix::from_fn(fs.len(), fs.len(), |a, b| {
                    img[a].iter().zip(&img[b]).zip(&rule.weights).map(|((x, y), w)| x * y.conj() * w).sum()
                }))
            }
            Target::L2Disk { gamma, scale, ell, .. } => {
                let ell = *ell;
                let radii: Vec<f64> = (0..=ell).map(|i| self.cfg.sample_radius * (1.0 - 0.15 * i as f64)).collect();
                let kmax = (max_mode + ell).min(self.cfg.sample_n / 2 - 1) as i64;
                let modes: Vec<Vec<Vec<C64>>> =
                    radii.iter().map(|&r| self.modes_on_circle(fs, r)).collect::<Result<_>>()?;
                let n = self.cfg.sample_n as i64;
                let us: Vec<f64> = radii.iter().map(|r| r * r).collect();
                let vander = DMatrix::from_fn(ell + 1, ell + 1, |i, d| us[i].powi(d as i32)).lu();
                let a = gamma - 2.0 * ell as f64;
                let mut g = DMatrix::from_element(fs.len(), fs.len(), C64::new(0.0, 0.0));
                for k in -kmax..=kmax {
                    let idx = k.rem_euclid(n) as usize;
                    let ak = k.unsigned_abs() as i32;
                    // p_k(u) coefficients for each function
                    let polys: Vec<Vec<C64>> = (0..fs.len())
                        .map(|f| {
                            let ys: Vec<C64> = (0..=ell)
                                .map(|i| modes[i][f][idx] * (1.0 - us[i]).powi(ell as i32) / radii[i].powi(ak))
                                .collect();
                            let re = vander.solve(&DMatrix::from_fn(ell + 1, 1, |i, _| ys[i].re)).unwrap();
                            let im = vander.solve(&DMatrix::from_fn(ell + 1, 1, |i, _| ys[i].im)).unwrap();
                            (0..=ell).map(|d| C64::new(re[d], im[d])).collect()
                        })
                        .collect();
                    let q = gauss_jacobi_unit(ell + ak as usize / 2 + 2, a, ak as f64)?;
                    let vals: Vec<Vec<C64>> = polys
                        .iter()
                        .map(|p| q.nodes.iter().map(|&u| p.iter().rev().fold(C64::new(0.0, 0.0), |s, c| s * u + c)).collect())
                        .collect();
                    for x in 0..fs.len() {
                        for y in 0..fs.len() {
                            let s: C64 = vals[x].iter().zip(&vals[y]).zip(&q.weights).map(|((p, r), w)| p * r.conj() * w).sum();
                            g[(x, y)] += s * (PI * scale);
                        }
                    }
                }
                Ok(g)
            }
            Target::DirichletInner | Target::GenDirichletInner { .. } => {
                let taylor = self.taylor_coefficients(fs, max_mode + 1)?;
                let norms = self.coefficient_norms(max_mode + 1);
                Ok(DMatrix::from_fn(fs.len(), fs.len(), |x, y| {
                    taylor[x].iter().zip(&taylor[y]).zip(&norms).map(|((a, b), n)| a * b.conj() * n).sum()
                }))
            }
        }
    }

    /// ||B f|| in the target space and ||f|| by the source rule.
    pub fn isometry_check(&self, f: &[C64], max_mode: usize) -> Result<(f64, f64)> {
        let g = self.target_gram(&[f.to_vec()], max_mode)?;
        let src: f64 = f.iter().zip(&self.source_rule.weights).map(|(v, w)| v.norm_sqr() * w).sum();
        Ok((g[(0, 0)].re.max(0.0).sqrt(), src.sqrt()))
    }

    /// Taylor coefficients a_0..a_{n-1} of B f_k, from samples on a circle.
    pub fn taylor_coefficients(&self, fs: &[Vec<C64>], n: usize) -> Result<Vec<Vec<C64>>> {
        if !matches!(self.target_basis().monomial_coefficient(0), Some(_)) || matches!(self.target, Target::L2Disk { ell, .. } if ell > 0) {
            return Err(Error::Capability("images are not holomorphic for this transform".into()));
        }
        let r = self.sample_radius();
        let modes = self.modes_on_circle(fs, r)?;
        let n = n.min(self.cfg.sample_n / 2);
        Ok(modes.iter().map(|m| (0..n).map(|k| m[k] / r.powi(k as i32)).collect()).collect())
    }

    /// <F, G> from Taylor coefficients in the target's coefficient norm.
    pub fn taylor_inner(&self, a: &[C64], b: &[C64]) -> Result<C64> {
        let norms = self.coefficient_norms(a.len().max(b.len()));
        Ok(a.iter().zip(b).zip(&norms).map(|((x, y), n)| x * y.conj() * n).sum())
    }

    /// ||z^j||^2 in the target space (holomorphic targets).
    fn coefficient_norms(&self, n: usize) -> Vec<f64> {
        let b = self.target_basis();
        (0..n).map(|j| b.monomial_coefficient(j).map_or(f64::NAN, |c| (c * c).recip())).collect()
    }

    fn sample_radius(&self) -> f64 {
        match self.kind() {
            KernelKind::Classical => 1.0,
            _ => self.cfg.sample_radius,
        }
    }

    /// Angular DFT of B f_k on the circle of radius r, divided by N.
    fn modes_on_circle(&self, fs: &[Vec<C64>], r: f64) -> Result<Vec<Vec<C64>>> {
        let n = self.cfg.sample_n;
        let zs: Vec<C64> = (0..n).map(|i| C64::from_polar(r, 2.0 * PI * i as f64 / n as f64)).collect();
        let mut img = self.forward_many(fs, &zs)?;
        let fft = FftPlanner::new().plan_fft_forward(n);
        for v in img.iter_mut() {
            fft.process(v);
            v.iter_mut().for_each(|c| *c /= n as f64);
        }
        Ok(img)
    }

    fn check_target_point(&self, z: C64) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return domain("non-finite target point");
        }
        if self.kind().disk_target() && z.norm() >= 1.0 {
            return domain(format!("|z| = {} is outside the unit disk", z.norm()));
        }
        Ok(())
    }

    fn check_source_point(&self, x: f64) -> Result<()> {
        if !x.is_finite() || (self.kind().disk_target() && x < 0.0) {
            return domain(format!("x = {x} is outside the source domain"));
        }
        Ok(())
    }
}

/// c_j = integrate(rule, f conj(phi_j)) for j < J.
pub fn coefficients_on(f: &[C64], basis: BasisFamily, rule: &QuadratureRule, terms: usize) -> Result<CoefficientVector> {
    if f.len() != rule.len() {
        return domain("function values must match the rule nodes");
    }
    if !basis.is_real_line() {
        return domain("coefficients are taken against a source basis");
    }
    let mut c = vec![C64::new(0.0, 0.0); terms];
    for ((x, w), v) in rule.nodes.iter().zip(&rule.weights).zip(f) {
        let phi = basis.eval_all(terms, *x)?;
        for (cj, p) in c.iter_mut().zip(&phi) {
            *cj += v * p.conj() * w;
        }
    }
    Ok(CoefficientVector { values: c, basis })
}

/// sum_j c_j psi_j(z)
pub fn series_transform(c: &CoefficientVector, target: BasisFamily, z: C64) -> Result<C64> {
    let psi = target.eval_all(c.values.len(), z)?;
    Ok(c.values.iter().zip(&psi).map(|(a, b)| a * b).sum())
}

/// Source coefficients sum_j <F, psi_j> phi_j of the inverse image.
pub fn inverse_series(elem: &TargetElement, target: BasisFamily, source: BasisFamily) -> Result<CoefficientVector> {
    target.validate()?;
    source.validate()?;
    let values = match elem {
        TargetElement::PsiCoefficients(d) => d.clone(),
        TargetElement::Taylor(a) => a
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                target
                    .monomial_coefficient(j)
                    .map(|c| v / c)
                    .ok_or_else(|| Error::Capability(format!("{target:?} is not spanned by monomials")))
            })
            .collect::<Result<_>>()?,
    };
    Ok(CoefficientVector { values, basis: source })
}

/// pi a_0 conj(b_0) + pi sum_{j>=1} j a_j conj(b_j)
pub fn dirichlet_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(j, (x, y))| x * y.conj() * (PI * (j.max(1)) as f64))
        .sum()
}

/// Split at index m: head norms pi j! Gamma(alpha+1)/Gamma(j+alpha+1),
/// tail norms pi (j!)^2 Gamma(alpha+1) / ((j-m)! Gamma(j-m+alpha+2)).
pub fn gen_dirichlet_inner(alpha: f64, m: usize, a: &[C64], b: &[C64]) -> Result<C64> {
    BasisFamily::GenDirichlet { alpha, m }.validate()?;
    Ok(a.iter().zip(b).enumerate().map(|(j, (x, y))| x * y.conj() * gen_dirichlet_norm(alpha, m, j)).sum())
}

pub fn gen_dirichlet_norm(alpha: f64, m: usize, j: usize) -> f64 {
    let jf = j as f64;
    let l = if j < m {
        ln_factorial(j) + ln_gamma(alpha + 1.0) - ln_gamma(jf + alpha + 1.0)
    } else {
        2.0 * ln_factorial(j) + ln_gamma(alpha + 1.0) - ln_factorial(j - m) - ln_gamma(jf - m as f64 + alpha + 2.0)
    };
    PI * l.exp()
}
