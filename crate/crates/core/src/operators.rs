//! Invariant second-order operators on the disk,
//! D_gamma = -4(1-|z|^2)[(1-|z|^2) d^2/dz dzbar - gamma zbar d/dzbar] + shift.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::disk_rule;
use crate::special::basis::BasisFamily;
use crate::transforms::gen_dirichlet_norm;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskOperator {
    pub gamma: f64,
    pub shift: f64,
}

impl DiskOperator {
    pub fn d_gamma(gamma: f64) -> Self {
        Self { gamma, shift: 0.0 }
    }

    /// D_gamma - gamma^2 + 2 gamma
    pub fn casimir(gamma: f64) -> Self {
        Self { gamma, shift: 2.0 * gamma - gamma * gamma }
    }

    /// The invariant Laplacian, D_2.
    pub fn laplacian() -> Self {
        Self::d_gamma(2.0)
    }

    /// H_nu = D_{2 nu}
    pub fn h_nu(nu: f64) -> Self {
        Self::d_gamma(2.0 * nu)
    }

    /// Delta_alpha = D_{alpha + 2}
    pub fn delta_alpha(alpha: f64) -> Self {
        Self::d_gamma(alpha + 2.0)
    }

    /// Exact action on sum c_ab z^a zbar^b:
    /// z^a zbar^b -> -4ab z^{a-1} zbar^{b-1} + 4(2ab + gamma b) z^a zbar^b
    ///               - 4(ab + gamma b) z^{a+1} zbar^{b+1}.
    pub fn apply_exact(&self, f: &MonomialExpansion) -> MonomialExpansion {
        let mut out = MonomialExpansion::new();
        for (&(a, b), &c) in &f.terms {
            let (af, bf) = (a as f64, b as f64);
            if a > 0 && b > 0 {
                out.add_term(a - 1, b - 1, c * (-4.0 * af * bf));
            }
            out.add_term(a, b, c * (4.0 * (2.0 * af * bf + self.gamma * bf) + self.shift));
            out.add_term(a + 1, b + 1, c * (-4.0 * (af * bf + self.gamma * bf)));
        }
        out.prune();
        out
    }

    /// Second-order central differences in x, y:
    /// d^2/dz dzbar = (1/4) Laplacian, d/dzbar = (1/2)(d/dx + i d/dy).
    pub fn apply_fd<F: Fn(C64) -> C64>(&self, f: F, z: C64, h: f64) -> Result<C64> {
        if !(h > 0.0) {
            return domain("step must be positive");
        }
        if z.norm() + 2.0 * h >= 1.0 {
            return domain(format!("stencil at |z| = {} with h = {h} leaves the disk", z.norm()));
        }
        let c = f(z);
        let (xp, xm) = (f(z + h), f(z - h));
        let (yp, ym) = (f(z + C64::new(0.0, h)), f(z - C64::new(0.0, h)));
        let lap = (xp + xm + yp + ym - c * 4.0) / (h * h);
        let dzbar = ((xp - xm) + C64::i() * (yp - ym)) / (4.0 * h);
        let s = 1.0 - z.norm_sqr();
        Ok(-(s * (lap * (0.25 * s) - z.conj() * dzbar * self.gamma)) * 4.0 + c * self.shift)
    }

    /// Richardson extrapolation of apply_fd over steps h and h/2.
    pub fn apply_fd_richardson<F: Fn(C64) -> C64>(&self, f: F, z: C64, h: f64) -> Result<C64> {
        let a = self.apply_fd(&f, z, h)?;
        let b = self.apply_fd(&f, z, 0.5 * h)?;
        Ok((b * 4.0 - a) / 3.0)
    }
}

/// sum c_ab z^a zbar^b with finitely many terms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonomialExpansion {
    pub terms: BTreeMap<(u32, u32), C64>,
}

impl MonomialExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(a: u32, b: u32, c: C64) -> Self {
        let mut m = Self::new();
        m.add_term(a, b, c);
        m.prune();
        m
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: C64) {
        *self.terms.entry((a, b)).or_insert(C64::new(0.0, 0.0)) += c;
    }

    /// Drops exactly-zero coefficients.
    pub fn prune(&mut self) {
        self.terms.retain(|_, c| c.re != 0.0 || c.im != 0.0);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|&(_, b)| b == 0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let zb = z.conj();
        self.terms.iter().map(|(&(a, b), c)| c * z.powu(a) * zb.powu(b)).sum()
    }

    /// d^k/dz^k
    pub fn dz(&self, k: u32) -> Self {
        let mut out = Self::new();
        for (&(a, b), &c) in &self.terms {
            if a >= k {
                let f: f64 = (a - k + 1..=a).map(|v| v as f64).product();
                out.add_term(a - k, b, c * f);
            }
        }
        out.prune();
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = self.clone();
        for (&(a, b), &c) in &other.terms {
            d.add_term(a, b, -c);
        }
        d.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// JSON object mapping "a,b" to [re, im].
    pub fn to_json(&self) -> serde_json::Value {
        let m: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(&(a, b), c)| (format!("{a},{b}"), serde_json::json!([c.re, c.im])))
            .collect();
        serde_json::Value::Object(m)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| crate::Error::Config("expansion must be a JSON object".into()))?;
        let mut out = Self::new();
        for (k, val) in obj {
            let (a, b) = k
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<u32>().ok()?, b.trim().parse::<u32>().ok()?)))
                .ok_or_else(|| crate::Error::Config(format!("bad monomial key {k:?}, expected \"a,b\"")))?;
            let pair: [f64; 2] = serde_json::from_value(val.clone())
                .map_err(|_| crate::Error::Config(format!("coefficient of {k:?} must be [re, im]")))?;
            out.add_term(a, b, C64::new(pair[0], pair[1]));
        }
        out.prune();
        Ok(out)
    }
}

/// Sample points: 10 on each of the circles |z| = 0.3 and |z| = 0.6.
pub fn sample_points() -> Vec<C64> {
    let mut v = Vec::with_capacity(20);
    for (r, off) in [(0.3, 0.1), (0.6, 0.4)] {
        for k in 0..10 {
            v.push(C64::from_polar(r, off + 2.0 * PI * k as f64 / 10.0));
        }
    }
    v
}

/// 4 ell (2 nu - ell - 1)
pub fn landau_level(nu: f64, ell: usize) -> f64 {
    let l = ell as f64;
    4.0 * l * (2.0 * nu - l - 1.0)
}

/// max_p |H_nu psi_j(p) - eps psi_j(p)| / max_p |psi_j(p)| by Richardson
/// finite differences.
pub fn eigen_check(nu: f64, ell: usize, j: usize, points: &[C64], h: f64) -> Result<f64> {
    let b = BasisFamily::DiskEigen { nu, ell };
    b.validate()?;
    let op = DiskOperator::h_nu(nu);
    let eps = landau_level(nu, ell);
    let psi = |z: C64| b.eval(j, z).unwrap_or(C64::new(f64::NAN, 0.0));
    let mut res = 0.0f64;
    let mut scale = 0.0f64;
    for &z in points {
        let v = psi(z);
        let hv = op.apply_fd_richardson(psi, z, h)?;
        res = res.max((hv - v * eps).norm());
        scale = scale.max(v.norm());
    }
    Ok(if scale > 0.0 { res / scale } else { res })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumKind {
    HNu(f64),
    DeltaAlpha(f64),
}

/// Enumerated point spectrum. `flagged` is set for Delta_alpha with
/// alpha < 1, where the index range floor((alpha-1)/2) is negative and the
/// single entry (0, 0) is returned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub levels: Vec<(usize, f64)>,
    pub flagged: bool,
}

pub fn point_spectrum(kind: SpectrumKind) -> Result<Spectrum> {
    match kind {
        SpectrumKind::HNu(nu) => {
            if !(nu > 0.5) {
                return domain(format!("nu must exceed 1/2, got {nu}"));
            }
            let top = (nu - 0.5).floor() as usize;
            Ok(Spectrum { levels: (0..=top).map(|l| (l, landau_level(nu, l))).collect(), flagged: false })
        }
        SpectrumKind::DeltaAlpha(alpha) => {
            if !(alpha > -1.0) {
                return domain(format!("alpha must exceed -1, got {alpha}"));
            }
            let top = ((alpha - 1.0) / 2.0).floor();
            if top < 0.0 {
                return Ok(Spectrum { levels: vec![(0, 0.0)], flagged: true });
            }
            let levels = (0..=top as usize).map(|l| (l, 4.0 * l as f64 * (alpha - l as f64 + 1.0))).collect();
            Ok(Spectrum { levels, flagged: false })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HarmonicSpace {
    Dirichlet,
    GenDirichlet { alpha: f64, m: usize },
}

impl HarmonicSpace {
    fn operator(&self) -> DiskOperator {
        match *self {
            HarmonicSpace::Dirichlet => DiskOperator::laplacian(),
            HarmonicSpace::GenDirichlet { alpha, .. } => DiskOperator::delta_alpha(alpha),
        }
    }

    /// (weight exponent, derivative order) of the domain condition.
    fn condition(&self) -> (f64, u32) {
        match *self {
            HarmonicSpace::Dirichlet => (0.0, 1),
            HarmonicSpace::GenDirichlet { alpha, m } => (alpha, m as u32),
        }
    }

    /// Coefficient weight w_j with ||f||^2 = sum w_j |a_j|^2.
    fn coefficient_weight(&self, j: usize) -> f64 {
        match *self {
            HarmonicSpace::Dirichlet => PI * j.max(1) as f64,
            HarmonicSpace::GenDirichlet { alpha, m } => gen_dirichlet_norm(alpha, m, j),
        }
    }
}

#[derive(Debug, Clone)]
pub enum HolomorphicInput {
    Expansion(MonomialExpansion),
    /// Taylor coefficients a_0, a_1, ... of a holomorphic function.
    Coefficients(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    /// Disk-quadrature L2 norm of the operator applied to F.
    pub residual: f64,
    pub norm_f: f64,
    pub norm_derivative: f64,
    /// Domain conditions judged finite.
    pub finite: bool,
    /// Log-log slope of the coefficient-norm terms over the tail
    /// (coefficient input only); finiteness needs a slope below -1.
    pub tail_slope: Option<f64>,
    pub member: bool,
}

const TAIL_SLOPE_LIMIT: f64 = -1.05;

/// Null-space membership: residual of the operator plus the domain
/// conditions (F and d^m F / dz^m square integrable).
pub fn harmonic_membership(input: &HolomorphicInput, space: HarmonicSpace) -> Result<Membership> {
    if let HarmonicSpace::GenDirichlet { alpha, m } = space {
        BasisFamily::GenDirichlet { alpha, m }.validate()?;
    }
    let (weight, order) = space.condition();
    match input {
        HolomorphicInput::Expansion(f) => {
            let res = space.operator().apply_exact(f);
            let deg = f.degree().max(1) as usize;
            let d = f.dz(order);
            // norm growth under refinement as the divergence heuristic
            let n1 = disk_norms(f, &d, weight, deg)?;
            let n2 = disk_norms(f, &d, weight, 2 * deg)?;
            let stable = |a: f64, b: f64| a.is_finite() && b.is_finite() && (a - b).abs() <= 1e-8 * b.max(1e-300);
            let finite = stable(n1.0, n2.0) && stable(n1.1, n2.1);
            let residual = disk_l2(&res, 0.0, 2 * deg + 4)?;
            Ok(Membership {
                residual,
                norm_f: n2.0,
                norm_derivative: n2.1,
                finite,
                tail_slope: None,
                member: finite && residual == 0.0,
            })
        }
        HolomorphicInput::Coefficients(a) => {
            let terms: Vec<f64> = a.iter().enumerate().map(|(j, c)| space.coefficient_weight(j) * c.norm_sqr()).collect();
            let slope = tail_slope(&terms);
            let finite = slope.map_or(true, |s| s < TAIL_SLOPE_LIMIT);
            let norm: f64 = terms.iter().sum::<f64>().sqrt();
            Ok(Membership {
                residual: 0.0,
                norm_f: a.iter().enumerate().map(|(j, c)| c.norm_sqr() * PI / (j + 1) as f64).sum::<f64>().sqrt(),
                norm_derivative: norm,
                finite,
                tail_slope: slope,
                member: finite,
            })
        }
    }
}

/// Least-squares slope of log t_j against log j over the upper half of the
/// nonzero terms; None when the tail is identically zero (finite support).
fn tail_slope(t: &[f64]) -> Option<f64> {
    let start = (t.len() / 2).max(1);
    let pts: Vec<(f64, f64)> =
        (start..t.len()).filter(|&j| t[j] > 0.0).map(|j| ((j as f64).ln(), t[j].ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn disk_l2(f: &MonomialExpansion, weight: f64, n: usize) -> Result<f64> {
    let rule = disk_rule(n + 2, 2 * n + 4, weight)?;
    Ok(rule.nodes.iter().zip(&rule.weights).map(|(z, w)| f.eval(*z).norm_sqr() * w).sum::<f64>().sqrt())
}

/// (||F||, ||d^m F||) in L2 of the disk with weight (1-|z|^2)^weight.
fn disk_norms(f: &MonomialExpansion, d: &MonomialExpansion, weight: f64, n: usize) -> Result<(f64, f64)> {
    Ok((disk_l2(f, weight, n)?, disk_l2(d, weight, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_action_examples() {
        let d2 = DiskOperator::laplacian();
        let zbar = MonomialExpansion::monomial(0, 1, C64::new(1.0, 0.0));
        let mut want = MonomialExpansion::monomial(0, 1, C64::new(8.0, 0.0));
        want.add_term(1, 2, C64::new(-8.0, 0.0));
        assert_eq!(d2.apply_exact(&zbar), want);
        for g in [1.0, 2.0, 3.5] {
            for j in 0..13 {
                assert!(DiskOperator::d_gamma(g).apply_exact(&MonomialExpansion::monomial(j, 0, C64::new(1.0, 0.0))).is_zero());
            }
            let one = MonomialExpansion::monomial(0, 0, C64::new(1.0, 0.0));
            assert_eq!(DiskOperator::casimir(g).apply_exact(&one), MonomialExpansion::monomial(0, 0, C64::new(2.0 * g - g * g, 0.0)));
        }
    }

    #[test]
    fn fd_matches_exact_on_zbar() {
        let z = C64::new(0.3, 0.0);
        let v = DiskOperator::laplacian().apply_fd(|z: C64| z.conj(), z, 1e-3).unwrap();
        assert!((v - 8.0 * 0.3 * (1.0 - 0.09)).norm() < 1e-6);
        assert!(DiskOperator::laplacian().apply_fd(|z: C64| z, C64::new(0.99, 0.0), 1e-2).is_err());
    }

    #[test]
    fn eigenfunctions() {
        for (nu, ell) in [(1.0, 0), (2.0, 0), (2.0, 1), (3.0, 1), (3.0, 2)] {
            for j in 0..=5 {
                let r = eigen_check(nu, ell, j, &sample_points(), 1e-3).unwrap();
                assert!(r < 1e-4, "nu={nu} ell={ell} j={j}: {r}");
            }
        }
    }

    #[test]
    fn spectra() {
        assert_eq!(point_spectrum(SpectrumKind::HNu(1.0)).unwrap().levels, vec![(0, 0.0)]);
        assert_eq!(point_spectrum(SpectrumKind::HNu(3.0)).unwrap().levels, vec![(0, 0.0), (1, 16.0), (2, 24.0)]);
        assert_eq!(point_spectrum(SpectrumKind::DeltaAlpha(2.0)).unwrap().levels, vec![(0, 0.0)]);
        assert!(point_spectrum(SpectrumKind::DeltaAlpha(0.5)).unwrap().flagged);
    }

    #[test]
    fn membership_examples() {
        let z3 = HolomorphicInput::Expansion(MonomialExpansion::monomial(3, 0, C64::new(1.0, 0.0)));
        assert!(harmonic_membership(&z3, HarmonicSpace::Dirichlet).unwrap().member);
        let zb = HolomorphicInput::Expansion(MonomialExpansion::monomial(0, 1, C64::new(1.0, 0.0)));
        let m = harmonic_membership(&zb, HarmonicSpace::Dirichlet).unwrap();
        assert!(!m.member && m.residual > 0.0);
        let harmonic: Vec<C64> = (0..2000).map(|j| C64::new(1.0 / (j + 1) as f64, 0.0)).collect();
        assert!(!harmonic_membership(&HolomorphicInput::Coefficients(harmonic), HarmonicSpace::Dirichlet).unwrap().member);
        let fine: Vec<C64> = (0..2000).map(|j| C64::new(1.0 / (j + 1) as f64 / (j + 1) as f64, 0.0)).collect();
        assert!(harmonic_membership(&HolomorphicInput::Coefficients(fine), HarmonicSpace::Dirichlet).unwrap().member);
    }
}
