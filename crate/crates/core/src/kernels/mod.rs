//! The five transform kernels K(z, x) = sum_j conj(phi_j(x)) psi_j(z),
//! each with a closed-form or integral evaluator and a truncated series.

pub mod omega;
pub mod reproducing;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{domain, Error, Result};
use crate::quadrature::{gauss_halfline, LineRule, Measure, QuadratureRule};
use crate::special::basis::BasisFamily;
use crate::special::gamma::{ln_factorial, ln_gamma};
use crate::special::poly::laguerre_unchecked;

pub use omega::{omega, omega_laplace_closed, OmegaWeight};
pub use reproducing::{papadakis_sum, ReproducingKernel};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    Classical,
    Second { delta: f64 },
    GeneralizedSecond { nu: f64, ell: usize },
    Dirichlet,
    GenBergmanDirichlet { alpha: f64, m: usize },
}

impl KernelKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelKind::Second { delta } if !(delta > 0.0) => domain(format!("delta must be positive, got {delta}")),
            KernelKind::GeneralizedSecond { nu, ell } => BasisFamily::DiskEigen { nu, ell }.validate(),
            KernelKind::GenBergmanDirichlet { alpha, m } => {
                if !(alpha > -1.0) {
                    domain(format!("alpha must exceed -1, got {alpha}"))
                } else if m < 2 {
                    domain(format!("the transform kernel needs m >= 2, got {m}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::Classical => "classical",
            KernelKind::Second { .. } => "second",
            KernelKind::GeneralizedSecond { .. } => "generalized-second",
            KernelKind::Dirichlet => "dirichlet",
            KernelKind::GenBergmanDirichlet { .. } => "gen-bergman-dirichlet",
        }
    }

    /// Weight exponent of the half-line source measure (None for the line).
    pub fn source_alpha(&self) -> Option<f64> {
        match *self {
            KernelKind::Classical => None,
            KernelKind::Second { delta } => Some(delta),
            KernelKind::GeneralizedSecond { nu, ell } => Some(2.0 * (nu - ell as f64) - 1.0),
            KernelKind::Dirichlet => Some(0.0),
            KernelKind::GenBergmanDirichlet { alpha, .. } => Some(alpha),
        }
    }

    pub fn source_measure(&self) -> Measure {
        match self.source_alpha() {
            None => Measure::GaussLine,
            Some(alpha) => Measure::WeightedHalfLine { alpha },
        }
    }

    pub fn source_basis(&self) -> BasisFamily {
        match self.source_alpha() {
            None => BasisFamily::HermiteL2,
            Some(alpha) => BasisFamily::LaguerreL2 { alpha },
        }
    }

    pub fn target_basis(&self) -> BasisFamily {
        match *self {
            KernelKind::Classical => BasisFamily::BargmannFock,
            KernelKind::Second { delta } => BasisFamily::Bergman { delta },
            KernelKind::GeneralizedSecond { nu, ell } => BasisFamily::DiskEigen { nu, ell },
            KernelKind::Dirichlet => BasisFamily::Dirichlet,
            KernelKind::GenBergmanDirichlet { alpha, m } => BasisFamily::GenDirichlet { alpha, m },
        }
    }

    /// True when the target lives on the unit disk.
    pub fn disk_target(&self) -> bool {
        !matches!(self, KernelKind::Classical)
    }

    pub fn primary_strategy(&self) -> Strategy {
        match self {
            KernelKind::Dirichlet | KernelKind::GenBergmanDirichlet { .. } => Strategy::Integral,
            _ => Strategy::Closed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Closed,
    /// Truncated basis series with J terms (None: automatic).
    Series(Option<usize>),
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    /// Half-line points for the Dirichlet t-integral.
    pub halfline_n: usize,
    pub omega_t: f64,
    pub omega_h: f64,
    /// Nodes of the compressed rule in s = e^{-t} for the omega integral.
    pub omega_nodes: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self { halfline_n: 200, omega_t: 40.0, omega_h: 1e-3, omega_nodes: 48 }
    }
}

/// A kernel with whatever precomputed data its integral evaluator needs.
#[derive(Debug, Clone)]
pub struct KernelFamily {
    kind: KernelKind,
    t_rule: Option<LineRule>,
    omega: Option<Arc<OmegaWeight>>,
}

impl KernelFamily {
    pub fn new(kind: KernelKind) -> Result<Self> {
        Self::with_config(kind, &KernelConfig::default())
    }

    pub fn with_config(kind: KernelKind, cfg: &KernelConfig) -> Result<Self> {
        kind.validate()?;
        match kind {
            KernelKind::Dirichlet => {
                let r = gauss_halfline(cfg.halfline_n, 0.5)?;
                Ok(Self { kind, t_rule: Some(t_to_s(&r)), omega: None })
            }
            KernelKind::GenBergmanDirichlet { alpha, m } => {
                let w = OmegaWeight::build(alpha, m, cfg.omega_t, cfg.omega_h)?;
                Self::with_omega(kind, Arc::new(w), cfg.omega_nodes)
            }
            _ => Ok(Self { kind, t_rule: None, omega: None }),
        }
    }

    /// Generalized Bergman-Dirichlet kernel over a given omega.
    pub fn with_omega(kind: KernelKind, w: Arc<OmegaWeight>, nodes: usize) -> Result<Self> {
        kind.validate()?;
        let KernelKind::GenBergmanDirichlet { alpha, m } = kind else {
            return domain("only the generalized Bergman-Dirichlet kernel takes an omega weight");
        };
        if w.alpha != alpha || w.m != m {
            return domain(format!("omega built for (alpha={}, m={}) used with (alpha={alpha}, m={m})", w.alpha, w.m));
        }
        let rule = w.s_rule(nodes)?;
        Ok(Self { kind, t_rule: Some(rule), omega: Some(w) })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn omega(&self) -> Option<&OmegaWeight> {
        self.omega.as_deref()
    }

    pub fn eval(&self, z: C64, x: f64, strategy: Strategy) -> Result<C64> {
        self.check_point(z, x)?;
        match (strategy, self.kind) {
            (Strategy::Series(j), _) => Ok(self.series_unchecked(z, x, j.unwrap_or_else(|| self.default_series_terms(z, x)))),
            (Strategy::Closed, KernelKind::Classical) => Ok(classical_kernel(z, x)),
            (Strategy::Closed, KernelKind::Second { delta }) => Ok(second_unchecked(delta, z, x)),
            (Strategy::Closed, KernelKind::GeneralizedSecond { nu, ell }) => Ok(gen_second_unchecked(nu, ell, z, x)),
            (Strategy::Integral, KernelKind::Dirichlet | KernelKind::GenBergmanDirichlet { .. }) => {
                Ok(self.row_unchecked(z, &[x])[0])
            }
            (s, k) => Err(Error::Capability(format!(
                "{} kernel has no {:?} evaluator; use {:?} or series",
                k.name(),
                s,
                k.primary_strategy()
            ))),
        }
    }

    pub fn eval_primary(&self, z: C64, x: f64) -> Result<C64> {
        self.eval(z, x, self.kind.primary_strategy())
    }

    /// K(z, x_i) for many x at once (shares the z-dependent work).
    pub fn eval_row(&self, z: C64, xs: &[f64]) -> Result<Vec<C64>> {
        for &x in xs {
            self.check_point(z, x)?;
        }
        Ok(self.row_unchecked(z, xs))
    }

    pub(crate) fn row_unchecked(&self, z: C64, xs: &[f64]) -> Vec<C64> {
        match self.kind {
            KernelKind::Classical => xs.iter().map(|&x| classical_kernel(z, x)).collect(),
            KernelKind::Second { delta } => xs.iter().map(|&x| second_unchecked(delta, z, x)).collect(),
            KernelKind::GeneralizedSecond { nu, ell } => xs.iter().map(|&x| gen_second_unchecked(nu, ell, z, x)).collect(),
            KernelKind::Dirichlet => {
                let rule = self.t_rule.as_ref().unwrap();
                let pre = s_precompute(rule, z, 2.0);
                let c = z / ln_gamma(1.5).exp();
                xs.iter()
                    .map(|&x| {
                        let s: C64 = pre.iter().map(|(q, w)| w * (-x * (q - 1.0)).exp() * (1.0 - x * q)).sum();
                        (ONE + c * s) / PI.sqrt()
                    })
                    .collect()
            }
            KernelKind::GenBergmanDirichlet { alpha, m } => {
                let rule = self.t_rule.as_ref().unwrap();
                let pre = s_precompute(rule, z, alpha + m as f64 + 1.0);
                let norm = (PI * ln_gamma(1.0 + alpha).exp()).sqrt();
                let c = z.powu(m as u32)
                    * (ln_factorial(m) - m as f64 * ln_gamma(1.5) - (m as f64 - 1.0) * 0.5 * PI.ln()).exp();
                xs.iter()
                    .map(|&x| {
                        let head: C64 = (0..m).map(|j| z.powu(j as u32) * laguerre_unchecked(j, alpha, x)).sum();
                        let s: C64 = pre
                            .iter()
                            .map(|(q, w)| w * (-x * (q - 1.0)).exp() * laguerre_complex(m, alpha, x * q))
                            .sum();
                        (head + c * s) / norm
                    })
                    .collect()
            }
        }
    }

    /// sum_{j<J} conj(phi_j(x)) psi_j(z)
    pub fn series(&self, z: C64, x: f64, terms: usize) -> Result<C64> {
        self.check_point(z, x)?;
        Ok(self.series_unchecked(z, x, terms))
    }

    fn series_unchecked(&self, z: C64, x: f64, terms: usize) -> C64 {
        let src = self.kind.source_basis();
        let tgt = self.kind.target_basis();
        let phi = src.eval_all(terms, C64::from(x)).expect("validated point");
        phi.iter().enumerate().map(|(j, p)| p.conj() * tgt.eval_unchecked(j, z)).sum()
    }

    /// Truncation that makes the neglected tail negligible in double
    /// precision, from a geometric bound on the terms.
    pub fn default_series_terms(&self, z: C64, x: f64) -> usize {
        let r = z.norm();
        match self.kind {
            KernelKind::Classical => {
                // |phi_j(x) psi_j(z)| <~ e^{x^2/2} |sqrt(2) z|^j / sqrt(j!)
                let lead = 0.5 * x * x;
                let a = (2f64.sqrt() * r).max(1e-300).ln();
                (1..5000).find(|&j| lead + j as f64 * a - 0.5 * ln_factorial(j) < -40.0).unwrap_or(5000).max(20)
            }
            _ => {
                // psi_j vanishes to order j - ell at the origin
                let ell = match self.kind {
                    KernelKind::GeneralizedSecond { ell, .. } => ell,
                    _ => 0,
                };
                if r == 0.0 {
                    return ell + 2;
                }
                let p = self.kind.source_alpha().unwrap_or(0.0).abs() * 0.5 + 1.5 + ell as f64;
                let lead = 0.5 * x - ell as f64 * (1.0 - r * r).ln();
                (1..20000)
                    .find(|&j| lead + (j as f64 - ell as f64) * r.ln() + p * (j as f64).ln() < -36.0)
                    .unwrap_or(20000)
                    .max(8)
            }
        }
    }

    /// Primary value, series value and their distance.
    pub fn cross_check(&self, z: C64, x: f64) -> Result<(C64, C64, f64)> {
        let a = self.eval_primary(z, x)?;
        let b = self.eval(z, x, Strategy::Series(None))?;
        Ok((a, b, (a - b).norm()))
    }

    /// Factor turning the kernel against the weighted source measure into
    /// the kernel against the flat measure of the unitary map:
    /// e^{-x^2/2} (dx), sqrt(Gamma(delta+1)) e^{-x/2} (x^delta dx / Gamma(delta+1)),
    /// e^{-x/2} (dx), x^{alpha/2} e^{-x/2} (dx).
    pub fn flat_factor(&self, x: f64) -> Result<f64> {
        match self.kind {
            KernelKind::Classical => Ok((-0.5 * x * x).exp()),
            KernelKind::Second { delta } => Ok((0.5 * ln_gamma(delta + 1.0) - 0.5 * x).exp()),
            KernelKind::Dirichlet => Ok((-0.5 * x).exp()),
            KernelKind::GenBergmanDirichlet { alpha, .. } => Ok(x.powf(0.5 * alpha) * (-0.5 * x).exp()),
            KernelKind::GeneralizedSecond { .. } => {
                Err(Error::Capability("no flat variant for the generalized second kernel".into()))
            }
        }
    }

    fn check_point(&self, z: C64, x: f64) -> Result<()> {
        if !x.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return domain("non-finite argument");
        }
        if self.kind.disk_target() {
            if z.norm() >= 1.0 {
                return domain(format!("|z| = {} is outside the unit disk", z.norm()));
            }
            if x < 0.0 {
                return domain(format!("x = {x} is outside the half-line"));
            }
        }
        Ok(())
    }
}

/// Map a half-line rule in t to nodes s = e^{-t}.
fn t_to_s(r: &QuadratureRule) -> LineRule {
    LineRule { nodes: r.nodes.iter().map(|t| (-t.re).exp()).collect(), weights: r.weights.clone() }
}

/// (q, w q^p) with q = 1/(1 - z s) for each node s.
fn s_precompute(rule: &LineRule, z: C64, p: f64) -> Vec<(C64, C64)> {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| {
            let q = (ONE - z * s).inv();
            (q, q.powf(p) * w)
        })
        .collect()
}

pub(crate) fn laguerre_complex(n: usize, alpha: f64, w: C64) -> C64 {
    let mut p0 = ONE;
    if n == 0 {
        return p0;
    }
    let mut p1 = C64::from(1.0 + alpha) - w;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((C64::from(2.0 * kf + 1.0 + alpha) - w) * p1 - p0 * (kf + alpha)) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// pi^{-3/4} exp(sqrt(2) x z - z^2 / 2)
pub fn classical_kernel(z: C64, x: f64) -> C64 {
    (z * (2f64.sqrt() * x) - z * z * 0.5).exp() * PI.powf(-0.75)
}

/// Gamma(delta+1)^{-1/2} (1-z)^{-delta-1} exp(-x z / (1-z))
pub fn second_kernel(delta: f64, z: C64, x: f64) -> Result<C64> {
    KernelKind::Second { delta }.validate()?;
    if z.norm() >= 1.0 {
        return domain(format!("|z| = {} is outside the unit disk", z.norm()));
    }
    if x < 0.0 {
        return domain("x must be nonnegative");
    }
    Ok(second_unchecked(delta, z, x))
}

fn second_unchecked(delta: f64, z: C64, x: f64) -> C64 {
    let w = ONE - z;
    w.powf(-delta - 1.0) * (-x * z / w).exp() * (-0.5 * ln_gamma(delta + 1.0)).exp()
}

/// Closed form of sum_j conj(phi_j^{(beta)}(x)) psi_j^{nu,ell}(z), beta = 2(nu-ell)-1:
/// (-1)^ell (ell! beta / (pi Gamma(2nu-ell)))^{1/2} (rho)^{-ell} (1-z)^{-2nu}
/// exp(x z / (z-1)) L_ell^{(beta)}(x rho), rho = (1-|z|^2)/|1-z|^2.
pub fn generalized_second_kernel(nu: f64, ell: usize, z: C64, x: f64) -> Result<C64> {
    KernelKind::GeneralizedSecond { nu, ell }.validate()?;
    if z.norm() >= 1.0 {
        return domain(format!("|z| = {} is outside the unit disk", z.norm()));
    }
    if x < 0.0 {
        return domain("x must be nonnegative");
    }
    Ok(gen_second_unchecked(nu, ell, z, x))
}

fn gen_second_unchecked(nu: f64, ell: usize, z: C64, x: f64) -> C64 {
    let beta = 2.0 * (nu - ell as f64) - 1.0;
    let w = ONE - z;
    let rho = (1.0 - z.norm_sqr()) / w.norm_sqr();
    let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
    let pref = sign * (0.5 * (ln_factorial(ell) + beta.ln() - PI.ln() - ln_gamma(2.0 * nu - ell as f64))).exp();
    w.powf(-2.0 * nu) * (x * z / (z - 1.0)).exp() * (pref * rho.powi(-(ell as i32)) * laguerre_unchecked(ell, beta, x * rho))
}

/// Dirichlet kernel from its t-integral on a half-line rule with alpha = 1/2.
pub fn dirichlet_kernel(z: C64, x: f64, rule: &QuadratureRule) -> Result<C64> {
    match rule.measure {
        Measure::WeightedHalfLine { alpha } if alpha == 0.5 => {}
        m => return domain(format!("Dirichlet t-integral needs the alpha = 1/2 half-line rule, got {m:?}")),
    }
    let k = KernelFamily { kind: KernelKind::Dirichlet, t_rule: Some(t_to_s(rule)), omega: None };
    k.check_point(z, x)?;
    Ok(k.row_unchecked(z, &[x])[0])
}

/// Generalized Bergman-Dirichlet kernel from the omega-weighted t-integral.
/// With `rule = None` the integral is the trapezoid sum on the omega grid;
/// otherwise the given compressed rule in s = e^{-t} is used.
pub fn gen_dirichlet_kernel(alpha: f64, m: usize, z: C64, x: f64, w: &OmegaWeight, rule: Option<&LineRule>) -> Result<C64> {
    let kind = KernelKind::GenBergmanDirichlet { alpha, m };
    kind.validate()?;
    if w.alpha != alpha || w.m != m {
        return domain("omega built for different (alpha, m)");
    }
    let rule = match rule {
        Some(r) => r.clone(),
        None => {
            let tw = w.trapezoid_weights();
            LineRule { nodes: (0..tw.len()).map(|i| (-w.t(i)).exp()).collect(), weights: tw }
        }
    };
    let k = KernelFamily { kind, t_rule: Some(rule), omega: None };
    k.check_point(z, x)?;
    Ok(k.row_unchecked(z, &[x])[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        let z0 = C64::new(0.0, 0.0);
        assert!((classical_kernel(z0, 1.3).re - PI.powf(-0.75)).abs() < 1e-15);
        let v = second_kernel(1.5, z0, 2.0).unwrap();
        assert!((v.re - (-0.5 * ln_gamma(2.5)).exp()).abs() < 1e-15);
        let d = KernelFamily::new(KernelKind::Dirichlet).unwrap().eval_primary(z0, 1.0).unwrap();
        assert!((d.re - PI.sqrt().recip()).abs() < 1e-15);
    }

    #[test]
    fn strategy_capabilities() {
        let k = KernelFamily::new(KernelKind::Dirichlet).unwrap();
        assert!(matches!(k.eval(C64::new(0.1, 0.0), 1.0, Strategy::Closed), Err(Error::Capability(_))));
        let k = KernelFamily::new(KernelKind::Classical).unwrap();
        assert!(matches!(k.eval(C64::new(0.1, 0.0), 1.0, Strategy::Integral), Err(Error::Capability(_))));
    }

    #[test]
    fn disk_domain_rejected() {
        assert!(second_kernel(1.0, C64::new(1.0, 0.0), 1.0).is_err());
        assert!(generalized_second_kernel(2.0, 1, C64::new(0.0, 1.2), 1.0).is_err());
        assert!(generalized_second_kernel(1.2, 1, C64::new(0.0, 0.2), 1.0).is_err());
    }

    #[test]
    fn complex_laguerre_matches_real() {
        for n in 0..7 {
            let a = laguerre_complex(n, 0.7, C64::new(1.9, 0.0));
            assert!((a.re - laguerre_unchecked(n, 0.7, 1.9)).abs() < 1e-13 && a.im == 0.0);
        }
    }

    #[test]
    fn dual_paths_agree() {
        let kinds = [
            (KernelKind::Classical, 1e-10),
            (KernelKind::Second { delta: 1.5 }, 1e-9),
            (KernelKind::GeneralizedSecond { nu: 2.0, ell: 1 }, 1e-7),
            (KernelKind::GeneralizedSecond { nu: 3.4, ell: 2 }, 1e-7),
            (KernelKind::Dirichlet, 1e-7),
            (KernelKind::GenBergmanDirichlet { alpha: 0.0, m: 2 }, 1e-5),
            (KernelKind::GenBergmanDirichlet { alpha: 1.5, m: 3 }, 1e-5),
        ];
        for (kind, tol) in kinds {
            let k = KernelFamily::new(kind).unwrap();
            for z in [C64::new(0.3, 0.1), C64::new(-0.6, 0.0), C64::new(0.1, -0.5)] {
                for x in [0.5, 2.0, 8.0] {
                    let (a, b, d) = k.cross_check(z, x).unwrap();
                    assert!(d < tol * a.norm().max(1.0), "{kind:?} z={z} x={x}: {a} vs {b}");
                }
            }
        }
    }
}
