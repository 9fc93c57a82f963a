//! Verification suites: each module's invariants as ordered, named checks.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::kernels::{
    laguerre_complex, omega_laplace_closed, papadakis_sum, KernelFamily, KernelKind, OmegaWeight, ReproducingKernel, Strategy,
};
use crate::operators::{
    eigen_check, harmonic_membership, landau_level, point_spectrum, sample_points, DiskOperator, HarmonicSpace, HolomorphicInput,
    MonomialExpansion, SpectrumKind,
};
use crate::quadrature::{disk_rule, gauss_discrete, gauss_halfline, gauss_line, gaussian_plane_rule, QuadratureRule};
use crate::report::{Check, VerificationReport};
use crate::special::basis::BasisFamily;
use crate::special::gamma::{beta, gamma, ln_factorial, ln_gamma, pochhammer};
use crate::special::hyper::{hyp_series, HypKind};
use crate::special::poly::{hermite_all, jacobi, laguerre_all, laguerre_unchecked};
use crate::transforms::{
    dirichlet_inner, gen_dirichlet_inner, inverse_series, series_transform, CoefficientVector, TargetElement, TransformOperator,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Special,
    Quadrature,
    Kernels,
    Transforms,
    Operators,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["special", "quadrature", "kernels", "transforms", "operators", "all"];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Quadrature => "quadrature",
            Suite::Kernels => "kernels",
            Suite::Transforms => "transforms",
            Suite::Operators => "operators",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "special" => Suite::Special,
            "quadrature" => Suite::Quadrature,
            "kernels" => Suite::Kernels,
            "transforms" => Suite::Transforms,
            "operators" => Suite::Operators,
            "all" => Suite::All,
            _ => return Err(Error::Config(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", ")))),
        })
    }
}

/// Runs a suite and assembles its report in declaration order.
pub fn run(suite: Suite, cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut ctx = Ctx { cfg, report: VerificationReport::new(suite.name()), omegas: HashMap::new() };
    let parts: &[Suite] = match suite {
        Suite::All => &[Suite::Special, Suite::Quadrature, Suite::Kernels, Suite::Transforms, Suite::Operators],
        s => std::slice::from_ref(match s {
            Suite::Special => &Suite::Special,
            Suite::Quadrature => &Suite::Quadrature,
            Suite::Kernels => &Suite::Kernels,
            Suite::Transforms => &Suite::Transforms,
            _ => &Suite::Operators,
        }),
    };
    for p in parts {
        match p {
            Suite::Special => special(&mut ctx),
            Suite::Quadrature => quadrature(&mut ctx),
            Suite::Kernels => kernels(&mut ctx),
            Suite::Transforms => transforms(&mut ctx),
            Suite::Operators => operators(&mut ctx),
            Suite::All => unreachable!(),
        }
    }
    let mut report = ctx.report;
    report.metadata.config = cfg.to_pairs();
    report.metadata.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    report: VerificationReport,
    omegas: HashMap<(u64, usize), Arc<OmegaWeight>>,
}

impl Ctx<'_> {
    fn check(&mut self, id: &str, description: &str, tolerance: f64, reference: &str, f: impl FnOnce(&mut Self) -> Result<f64>) {
        let tol = self.cfg.tol(id, tolerance);
        let c = match f(self) {
            Ok(v) => Check::new(id, description, v, tol, reference),
            Err(e) => Check::errored(id, description, tol, reference, &e),
        };
        self.report.checks.push(c);
    }

    fn note(&mut self, key: &str, value: String) {
        self.report.metadata.notes.insert(key.to_string(), value);
    }

    fn omega(&mut self, alpha: f64, m: usize) -> Result<Arc<OmegaWeight>> {
        let key = (alpha.to_bits(), m);
        if let Some(w) = self.omegas.get(&key) {
            return Ok(w.clone());
        }
        let w = Arc::new(OmegaWeight::build(alpha, m, self.cfg.omega_t, self.cfg.omega_h)?);
        self.omegas.insert(key, w.clone());
        Ok(w)
    }

    fn kernel(&mut self, kind: KernelKind) -> Result<KernelFamily> {
        match kind {
            KernelKind::GenBergmanDirichlet { alpha, m } => {
                let w = self.omega(alpha, m)?;
                KernelFamily::with_omega(kind, w, self.cfg.omega_nodes)
            }
            _ => KernelFamily::with_config(kind, &self.cfg.kernel_config()),
        }
    }

    fn transform(&mut self, kind: KernelKind) -> Result<TransformOperator> {
        let k = self.kernel(kind)?;
        TransformOperator::from_kernel(k, &self.cfg.transform_config(kind.source_alpha().is_none()))
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        r.set_stream(stream);
        r
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn rel_floor(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

fn try_max(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut m = 0.0f64;
    for v in it {
        let v = v?;
        if v.is_nan() {
            return Ok(f64::NAN);
        }
        m = m.max(v);
    }
    Ok(m)
}

fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn disk_points(radii: &[f64], per: usize) -> Vec<C64> {
    let mut v = Vec::new();
    for (i, &r) in radii.iter().enumerate() {
        for k in 0..per {
            v.push(C64::from_polar(r, 0.3 + 0.5 * i as f64 + 2.0 * PI * k as f64 / per as f64));
        }
    }
    v
}

fn identity_error(g: &nalgebra::DMatrix<C64>) -> f64 {
    let mut e = 0.0f64;
    for a in 0..g.nrows() {
        for b in 0..g.ncols() {
            e = e.max((g[(a, b)] - if a == b { 1.0 } else { 0.0 }).norm());
        }
    }
    e
}

// ---------------------------------------------------------------- special

fn special(ctx: &mut Ctx) {
    ctx.check(
        "special.genfun.hermite",
        "sum_{j<=80} H_j(x) t^j / j! vs exp(2xt - t^2), |t| <= 0.6, x in [-3, 3]",
        1e-9,
        "Hermite generating function",
        |_| {
            let mut worst = 0.0f64;
            for i in 0..=12 {
                let x = -3.0 + 0.5 * i as f64;
                let h = hermite_all(81, x);
                for t in [-0.6, -0.35, -0.1, 0.2, 0.45, 0.6] {
                    let mut s = 0.0;
                    let mut p = 1.0;
                    for (j, hj) in h.iter().enumerate() {
                        s += hj * p;
                        p *= t / (j + 1) as f64;
                    }
                    let want = (2.0 * x * t - t * t).exp();
                    worst = worst.max((s - want).abs() / want);
                }
            }
            Ok(worst)
        },
    );
    ctx.check(
        "special.genfun.laguerre",
        "sum_{j<=120} z^j L_j^(d)(x) vs (1-z)^{-d-1} exp(-xz/(1-z)), |z| <= 0.6",
        1e-9,
        "Laguerre generating function",
        |_| {
            let mut worst = 0.0f64;
            for d in [0.0, 0.5, 1.5, 3.0] {
                for x in [0.0, 0.5, 2.0, 5.0, 8.0] {
                    let l = laguerre_all(121, d, x);
                    for z in disk_points(&[0.3, 0.6], 6) {
                        let s: C64 = l.iter().enumerate().map(|(j, v)| z.powu(j as u32) * v).sum();
                        let one = C64::new(1.0, 0.0);
                        let want = (one - z).powf(-d - 1.0) * (-x * z / (one - z)).exp();
                        worst = worst.max(rel(s, want));
                    }
                }
            }
            Ok(worst)
        },
    );
    for (k, b, id) in [(1usize, 0.0, "special.genfun.shifted.k1"), (3, 0.5, "special.genfun.shifted.k3")] {
        ctx.check(
            id,
            &format!("sum_j C(j+k,k) L_{{j+k}}^(b)(y) s^j vs closed form, k={k}, b={b}, |s| <= 0.6"),
            1e-8,
            "shifted Laguerre generating function",
            |_| {
                let mut worst = 0.0f64;
                for y in [0.5, 2.0, 5.0] {
                    let l = laguerre_all(121 + k, b, y);
                    for s in disk_points(&[0.3, 0.6], 5) {
                        let mut acc = C64::new(0.0, 0.0);
                        for j in 0..=120 {
                            let c = (ln_factorial(j + k) - ln_factorial(j) - ln_factorial(k)).exp();
                            acc += s.powu(j as u32) * (c * l[j + k]);
                        }
                        let w = C64::new(1.0, 0.0) - s;
                        let want = w.powf(-b - k as f64 - 1.0) * (-y * s / w).exp() * laguerre_complex(k, b, y / w);
                        worst = worst.max(rel(acc, want));
                    }
                }
                Ok(worst)
            },
        );
    }
    ctx.check(
        "special.genfun.bilateral",
        "sum_j l^j 2F1(-j,b;1+a;y) L_j^(a)(x) vs closed form at l=0.4, b=5, a=3, y=0.36, x=1",
        1e-8,
        "bilateral generating function",
        |_| {
            let (l, b, a, y, x) = (0.4f64, 5.0, 3.0, 0.36, 1.0);
            let lag = laguerre_all(121, a, x);
            let mut s = 0.0;
            for (j, lj) in lag.iter().enumerate() {
                let f = hyp_series(HypKind::F21, &[-(j as f64), b], &[1.0 + a], y, 200)?.value;
                s += l.powi(j as i32) * f * lj;
            }
            let w = 1.0 - l + l * y;
            let arg = x * y * l / ((1.0 - l) * w);
            let want =
                (1.0 - l).powf(b - 1.0 - a) / w.powf(b) * (-x * l / (1.0 - l)).exp() * hyp_series(HypKind::F11, &[b], &[1.0 + a], arg, 400)?.value;
            Ok((s - want).abs() / want.abs())
        },
    );
    special_orthonormality(ctx);
    ctx.check(
        "special.jacobi.symmetry",
        "max |P_j^(a,b)(x) - (-1)^j P_j^(b,a)(-x)| over j <= 12 and a grid",
        1e-12,
        "Jacobi symmetry",
        |_| {
            let mut worst = 0.0f64;
            for (a, b) in [(0.5, 1.5), (-0.5, 2.0), (3.0, 0.2), (0.0, 1.0)] {
                for j in 0..=12 {
                    for i in 0..=10 {
                        let x = -1.0 + 0.2 * i as f64;
                        let p = jacobi(j, a, b, x);
                        let q = if j % 2 == 0 { 1.0 } else { -1.0 } * jacobi(j, b, a, -x);
                        worst = worst.max((p - q).abs() / p.abs().max(1.0));
                    }
                }
            }
            Ok(worst)
        },
    );
    ctx.check(
        "special.laguerre.growth",
        "max_{1<=j<=500} |L_j(1)| (j x)^{1/4} at x = 1 (bounded by 2)",
        2.0,
        "Laguerre growth estimate",
        |_| {
            let l = laguerre_all(501, 0.0, 1.0);
            Ok(max_of((1..=500).map(|j| l[j].abs() * (j as f64).powf(0.25))))
        },
    );
    ctx.check("special.gamma.identities", "beta(3/2,1/2) = pi/2, Gamma(1.7) = 0.7 Gamma(0.7), Gamma(5.3) = (2.3)_3 Gamma(2.3)", 1e-13, "Gamma identities", |_| {
        let a = (beta(1.5, 0.5)? - PI / 2.0).abs() / (PI / 2.0);
        let b = (gamma(1.7)? / (0.7 * gamma(0.7)?) - 1.0).abs();
        let c = (gamma(5.3)? / (pochhammer(2.3, 3) * gamma(2.3)?) - 1.0).abs();
        Ok(a.max(b).max(c))
    });
    ctx.check("special.hyp.kummer", "1F1(3.5;2;0.7) vs e^0.7 1F1(-1.5;2;-0.7)", 1e-12, "Kummer transformation", |_| {
        let a = hyp_series(HypKind::F11, &[3.5], &[2.0], 0.7, 200)?.value;
        let b = 0.7f64.exp() * hyp_series(HypKind::F11, &[-1.5], &[2.0], -0.7, 200)?.value;
        Ok((a - b).abs() / a.abs())
    });
    ctx.check(
        "special.hyp.laguerre",
        "1F1(-2;1.5;1.2) vs 2! Gamma(1.5)/Gamma(3.5) L_2^(0.5)(1.2)",
        1e-13,
        "terminating 1F1 as a Laguerre polynomial",
        |_| {
            let a = hyp_series(HypKind::F11, &[-2.0], &[1.5], 1.2, 200)?.value;
            let b = 2.0 * (ln_gamma(1.5) - ln_gamma(3.5)).exp() * laguerre_unchecked(2, 0.5, 1.2);
            Ok((a - b).abs() / b.abs())
        },
    );
}

fn gram_error(basis: BasisFamily, rule: &QuadratureRule, scale: f64, extra: impl Fn(C64) -> f64) -> Result<f64> {
    let vals: Vec<Vec<C64>> = rule.nodes.iter().map(|&p| basis.eval_all(9, p)).collect::<Result<_>>()?;
    let mut g = nalgebra::DMatrix::from_element(9, 9, C64::new(0.0, 0.0));
    for ((v, w), p) in vals.iter().zip(&rule.weights).zip(&rule.nodes) {
        let w = w * scale * extra(*p);
        for a in 0..9 {
            for b in 0..9 {
                g[(a, b)] += v[a] * v[b].conj() * w;
            }
        }
    }
    Ok(identity_error(&g))
}

fn special_orthonormality(ctx: &mut Ctx) {
    let cases: Vec<(&str, BasisFamily)> = vec![
        ("hermite", BasisFamily::HermiteL2),
        ("laguerre", BasisFamily::LaguerreL2 { alpha: 1.5 }),
        ("fock", BasisFamily::BargmannFock),
        ("bergman", BasisFamily::Bergman { delta: 1.5 }),
        ("disk-eigen.nu2.l1", BasisFamily::DiskEigen { nu: 2.0, ell: 1 }),
        ("disk-eigen.nu3.4.l2", BasisFamily::DiskEigen { nu: 3.4, ell: 2 }),
        ("dirichlet", BasisFamily::Dirichlet),
        ("gen-dirichlet", BasisFamily::GenDirichlet { alpha: 0.5, m: 2 }),
    ];
    for (name, basis) in cases {
        let id = format!("special.orthonormality.{name}");
        ctx.check(&id, "Gram matrix of the first 9 basis functions vs identity", 1e-8, "orthonormal basis", |_| match basis {
            BasisFamily::HermiteL2 => gram_error(basis, &gauss_line(20)?, 1.0, |_| 1.0),
            BasisFamily::LaguerreL2 { alpha } => gram_error(basis, &gauss_halfline(20, alpha)?, 1.0, |_| 1.0),
            BasisFamily::BargmannFock => gram_error(basis, &gaussian_plane_rule(12)?, 1.0, |_| 1.0),
            BasisFamily::Bergman { delta } => gram_error(basis, &disk_rule(12, 24, delta - 1.0)?, delta / PI, |_| 1.0),
            BasisFamily::DiskEigen { nu, ell } => {
                // |psi|^2 (1-|z|^2)^{2 nu - 2} = poly * (1-|z|^2)^{2 nu - 2 - 2 ell}
                let rule = disk_rule(16, 40, 2.0 * nu - 2.0 - 2.0 * ell as f64)?;
                gram_error(basis, &rule, 1.0, |z| (1.0 - z.norm_sqr()).powi(2 * ell as i32))
            }
            BasisFamily::Dirichlet | BasisFamily::GenDirichlet { .. } => {
                let coeff = |j: usize| {
                    let mut v = vec![C64::new(0.0, 0.0); 9];
                    v[j] = C64::from(basis.monomial_coefficient(j).unwrap());
                    v
                };
                let mut e = 0.0f64;
                for a in 0..9 {
                    for b in 0..9 {
                        let g = match basis {
                            BasisFamily::Dirichlet => dirichlet_inner(&coeff(a), &coeff(b)),
                            BasisFamily::GenDirichlet { alpha, m } => gen_dirichlet_inner(alpha, m, &coeff(a), &coeff(b))?,
                            _ => unreachable!(),
                        };
                        e = e.max((g - if a == b { 1.0 } else { 0.0 }).norm());
                    }
                }
                Ok(e)
            }
        });
    }
}

// ------------------------------------------------------------- quadrature

/// int_R |x|^k e^{-x^2} dx
fn line_abs_moment(k: usize) -> f64 {
    ln_gamma((k as f64 + 1.0) / 2.0).exp()
}

fn quadrature(ctx: &mut Ctx) {
    for n in [4usize, 16, 64] {
        ctx.check(&format!("quadrature.moments.line.n{n}"), "x^k against e^{-x^2}, k <= 2n-1", 1e-11, "Gauss rule exactness", |_| {
            let r = gauss_line(n)?;
            Ok(max_of((0..2 * n).map(|k| {
                let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.re.powi(k as i32)).sum();
                let exact = if k % 2 == 0 { line_abs_moment(k) } else { 0.0 };
                (q - exact).abs() / line_abs_moment(k)
            })))
        });
    }
    for alpha in [0.0, 0.5, 1.5] {
        for n in [4usize, 16, 64] {
            ctx.check(
                &format!("quadrature.moments.halfline.a{alpha}.n{n}"),
                "x^k against x^a e^{-x}, k <= 2n-1",
                1e-11,
                "Gauss rule exactness",
                |_| {
                    let r = gauss_halfline(n, alpha)?;
                    Ok(max_of((0..2 * n).map(|k| {
                        let lq: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.re.powi(k as i32)).sum();
                        let exact = ln_gamma(k as f64 + alpha + 1.0).exp();
                        (lq - exact).abs() / exact
                    })))
                },
            );
        }
    }
    for g in [0.0, 0.5] {
        for n in [4usize, 16, 64] {
            ctx.check(
                &format!("quadrature.moments.disk.g{g}.n{n}"),
                "z^a zbar^b against (1-|z|^2)^g, a+b <= 2n-1, rule n x 2n",
                1e-11,
                "pi a! Gamma(g+1)/Gamma(a+g+2) on the diagonal, 0 off it",
                |_| {
                    let r = disk_rule(n, 2 * n, g)?;
                    let d = 2 * n;
                    // pw[a][i] = z_i^a, cw[b][i] = w_i conj(z_i)^b
                    let mut pw = vec![vec![C64::new(1.0, 0.0); r.len()]];
                    for a in 1..d {
                        let next: Vec<C64> = pw[a - 1].iter().zip(&r.nodes).map(|(p, z)| p * z).collect();
                        pw.push(next);
                    }
                    let cw: Vec<Vec<C64>> = pw.iter().map(|row| row.iter().zip(&r.weights).map(|(p, w)| p.conj() * w).collect()).collect();
                    let mut worst = 0.0f64;
                    for a in 0..d {
                        for b in 0..d - a {
                            let q: C64 = pw[a].iter().zip(&cw[b]).map(|(p, c)| p * c).sum();
                            let exact = if a == b {
                                PI * (ln_factorial(a) + ln_gamma(g + 1.0) - ln_gamma(a as f64 + g + 2.0)).exp()
                            } else {
                                0.0
                            };
                            let s = (a + b) as f64 / 2.0;
                            let scale = PI * (ln_gamma(s + 1.0) + ln_gamma(g + 1.0) - ln_gamma(s + g + 2.0)).exp();
                            worst = worst.max((q - exact).norm() / scale);
                        }
                    }
                    Ok(worst)
                },
            );
        }
    }
    for n in [4usize, 16, 64] {
        ctx.check(&format!("quadrature.moments.plane.n{n}"), "x^a y^b against e^{-|z|^2}, a, b <= 2n-1", 1e-11, "tensor Gauss rule exactness", |_| {
            let r = gaussian_plane_rule(n)?;
            let d = 2 * n;
            // px[a][i] = x_i^a, py[b][i] = w_i y_i^b
            let px: Vec<Vec<f64>> = (0..d).map(|a| r.nodes.iter().map(|z| z.re.powi(a as i32)).collect()).collect();
            let py: Vec<Vec<f64>> = (0..d).map(|b| r.nodes.iter().zip(&r.weights).map(|(z, w)| w * z.im.powi(b as i32)).collect()).collect();
            let mut worst = 0.0f64;
            for a in 0..d {
                for b in 0..d {
                    let q: f64 = px[a].iter().zip(&py[b]).map(|(x, y)| x * y).sum();
                    let exact = if a % 2 == 0 && b % 2 == 0 { line_abs_moment(a) * line_abs_moment(b) } else { 0.0 };
                    worst = worst.max((q - exact).abs() / (line_abs_moment(a) * line_abs_moment(b)));
                }
            }
            Ok(worst)
        });
    }
    let (nr, nt) = (ctx.cfg.disk_nr, ctx.cfg.disk_ntheta);
    ctx.check(
        "quadrature.disk.monomial_norms",
        &format!("int |z|^{{2a}} (1-|z|^2)^0.5 on the {nr} x {nt} disk rule, a <= 40"),
        1e-10,
        "pi a! Gamma(g+1)/Gamma(a+g+2)",
        |_| {
            let r = disk_rule(nr, nt, 0.5)?;
            Ok(max_of((0..=40usize).map(|a| {
                let q: f64 = r.nodes.iter().zip(&r.weights).map(|(z, w)| w * z.norm_sqr().powi(a as i32)).sum();
                let exact = PI * (ln_factorial(a) + ln_gamma(1.5) - ln_gamma(a as f64 + 2.5)).exp();
                (q - exact).abs() / exact
            })))
        },
    );
    ctx.check(
        "quadrature.halfline.refinement",
        "non-monotone steps in the error of int e^{-x/2} e^{-x} dx = 2/3 for n = 4..24",
        0.0,
        "Gauss-Laguerre convergence",
        |_| {
            let mut errs = Vec::new();
            for n in 4..=24 {
                let r = gauss_halfline(n, 0.0)?;
                let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * (-0.5 * x.re).exp()).sum();
                errs.push((q - 2.0 / 3.0).abs());
            }
            Ok(errs.windows(2).filter(|w| w[0] > 1e-14 && w[1] > w[0]).count() as f64)
        },
    );
    ctx.check(
        "quadrature.discrete.exactness",
        "12-point Gauss rule of a 2000-point discrete measure: moments up to degree 23",
        1e-12,
        "Gauss rule of a discrete measure",
        |_| {
            let pts: Vec<f64> = (0..2000).map(|i| (i as f64 + 0.5) / 2000.0).collect();
            let wts: Vec<f64> = pts.iter().map(|x| x.sqrt() * (-x).exp() / 2000.0).collect();
            let r = gauss_discrete(&pts, &wts, 12)?;
            Ok(max_of((0..24).map(|k| {
                let exact: f64 = pts.iter().zip(&wts).map(|(x, w)| w * x.powi(k)).sum();
                let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k)).sum();
                (q - exact).abs() / exact
            })))
        },
    );
}

// ---------------------------------------------------------------- kernels

fn kernel_label(kind: KernelKind) -> String {
    match kind {
        KernelKind::Classical => "classical".into(),
        KernelKind::Second { delta } => format!("second.d{delta}"),
        KernelKind::GeneralizedSecond { nu, ell } => format!("generalized-second.nu{nu}.l{ell}"),
        KernelKind::Dirichlet => "dirichlet".into(),
        KernelKind::GenBergmanDirichlet { alpha, m } => format!("gen-bergman-dirichlet.a{alpha}.m{m}"),
    }
}

fn kernels(ctx: &mut Ctx) {
    let families = [
        (KernelKind::Classical, 1e-10),
        (KernelKind::Second { delta: 1.5 }, 1e-10),
        (KernelKind::Second { delta: 0.4 }, 1e-10),
        (KernelKind::GeneralizedSecond { nu: 2.0, ell: 1 }, 1e-10),
        (KernelKind::GeneralizedSecond { nu: 3.4, ell: 2 }, 1e-10),
        (KernelKind::Dirichlet, 1e-7),
        (KernelKind::GenBergmanDirichlet { alpha: 0.0, m: 2 }, 1e-5),
        (KernelKind::GenBergmanDirichlet { alpha: 1.5, m: 3 }, 1e-5),
    ];
    let zs = [C64::new(0.0, 0.0), C64::new(0.3, 0.1), C64::new(-0.45, 0.2), C64::new(0.1, -0.5), C64::new(0.0, 0.6)];
    let xs = [0.5, 2.0, 4.5, 8.0];
    for (kind, tol) in families {
        let id = format!("kernels.dual.{}", kernel_label(kind));
        ctx.check(&id, "primary evaluator vs truncated series on 5 z x 4 x, |z| <= 0.6", tol, "K(z,x) = sum conj(phi_j(x)) psi_j(z)", |c| {
            let k = c.kernel(kind)?;
            try_max(zs.iter().flat_map(|&z| xs.iter().map(move |&x| (z, x))).map(|(z, x)| {
                let (a, b, _) = k.cross_check(z, x)?;
                Ok(rel_floor(b, a))
            }))
        });
    }
    ctx.check("kernels.values.origin", "kernel values at z = 0 against their constants", 1e-14, "K(0,x) = conj(phi_0(x)) psi_0(0)", |c| {
        let z0 = C64::new(0.0, 0.0);
        let mut e = 0.0f64;
        let k = c.kernel(KernelKind::Classical)?;
        e = e.max((k.eval_primary(z0, 1.3)? - PI.powf(-0.75)).norm());
        let k = c.kernel(KernelKind::Second { delta: 1.5 })?;
        e = e.max((k.eval_primary(z0, 2.0)? - (-0.5 * ln_gamma(2.5)).exp()).norm());
        let k = c.kernel(KernelKind::GeneralizedSecond { nu: 2.0, ell: 0 })?;
        e = e.max((k.eval_primary(z0, 2.0)? - (3.0 / (PI * gamma(4.0)?)).sqrt()).norm());
        let k = c.kernel(KernelKind::Dirichlet)?;
        e = e.max((k.eval_primary(z0, 1.0)? - PI.sqrt().recip()).norm());
        let k = c.kernel(KernelKind::GenBergmanDirichlet { alpha: 1.5, m: 3 })?;
        e = e.max((k.eval_primary(z0, 1.0)? - (PI * gamma(2.5)?).sqrt().recip()).norm());
        Ok(e)
    });
    ctx.check("kernels.dirichlet.derivative", "|dK/dz| at z = 0, x = 1 (L_1(1)/sqrt(pi) = 0) by central difference", 1e-8, "first series coefficient", |c| {
        let k = c.kernel(KernelKind::Dirichlet)?;
        let h = 1e-4;
        let d = (k.eval_primary(C64::new(h, 0.0), 1.0)? - k.eval_primary(C64::new(-h, 0.0), 1.0)?) / (2.0 * h);
        Ok(d.norm())
    });
    ctx.check(
        "kernels.gen_dirichlet.coefficient",
        "z^m Taylor coefficient of the a=0.5, m=2 kernel at x=1.5 vs sqrt(Gamma(a+2)/(m! Gamma(m+a+1))) L_m^(a)(x)/sqrt(pi Gamma(1+a))",
        1e-8,
        "first tail coefficient of the kernel series",
        |c| {
            let (alpha, m, x) = (0.5, 2usize, 1.5);
            let k = c.kernel(KernelKind::GenBergmanDirichlet { alpha, m })?;
            let n = 32;
            let r = 0.3;
            let mut a = C64::new(0.0, 0.0);
            for i in 0..n {
                let th = 2.0 * PI * i as f64 / n as f64;
                a += k.eval_primary(C64::from_polar(r, th), x)? * C64::from_polar(1.0, -(m as f64) * th);
            }
            a /= n as f64 * r.powi(m as i32);
            let want = (0.5 * (ln_gamma(alpha + 2.0) - ln_factorial(m) - ln_gamma(m as f64 + alpha + 1.0))).exp()
                * laguerre_unchecked(m, alpha, x)
                / (PI * gamma(1.0 + alpha)?).sqrt();
            Ok((a - want).norm() / want.abs())
        },
    );
    ctx.check(
        "kernels.ell0_reduction",
        "spread of generalized-second(nu, 0) / second(2nu-1) over (z, x), nu in {1.3, 2}",
        1e-13,
        "ell = 0 reduction",
        |c| {
            let mut worst = 0.0f64;
            for nu in [1.3, 2.0] {
                let g = c.kernel(KernelKind::GeneralizedSecond { nu, ell: 0 })?;
                let s = c.kernel(KernelKind::Second { delta: 2.0 * nu - 1.0 })?;
                let mut ratios = Vec::new();
                for &z in &zs {
                    for &x in &xs {
                        ratios.push(g.eval(z, x, Strategy::Closed)? / s.eval(z, x, Strategy::Closed)?);
                    }
                }
                let r0 = ratios[0];
                worst = worst.max(max_of(ratios.iter().map(|r| rel(*r, r0))));
            }
            Ok(worst)
        },
    );
    for m in [2usize, 3] {
        for alpha in [0.0, 0.5, 1.5] {
            let id = format!("kernels.omega.laplace.a{alpha}.m{m}");
            ctx.check(&id, "numeric Laplace transform of omega vs closed form, j = 0..5", 1e-4, "Laplace transform of omega", |c| {
                let w = c.omega(alpha, m)?;
                Ok(max_of((0..=5).map(|j| {
                    let exact = omega_laplace_closed(alpha, m, j as f64);
                    (w.laplace_numeric(j as f64) - exact).abs() / exact
                })))
            });
        }
    }
    ctx.check("kernels.omega.nonnegative", "max(0, -min omega) + |omega(0)| over the built grids", 0.0, "omega >= 0, omega(0) = 0", |c| {
        let mut e = 0.0f64;
        for m in [2usize, 3] {
            for alpha in [0.0, 0.5, 1.5] {
                let w = c.omega(alpha, m)?;
                let lo = w.values.iter().cloned().fold(f64::INFINITY, f64::min);
                e = e.max((-lo).max(0.0) + w.values[0].abs());
            }
        }
        Ok(e)
    });
    ctx.check(
        "kernels.omega.association",
        "max |omega - omega_reversed| / max omega for a = 0.5, m = 3",
        1e-8,
        "associativity of convolution",
        |c| {
            let w = OmegaWeight::build_checked(0.5, 3, c.cfg.omega_t, c.cfg.omega_h)?;
            let (lo, hi) = w.envelope();
            c.note("omega.envelope.a0.5.m3", format!("sup omega/(t^(m-1) sqrt(t) e^-t) = {lo:.6e}, sup omega/(t^m sqrt(t) e^-t) = {hi:.6e}"));
            Ok(w.reversed_discrepancy())
        },
    );
    ctx.check(
        "kernels.omega.closed_form",
        "closed Laplace product vs pi^{3/2}/16 at (0,2,0) and vs the factor-by-factor route at (0.5,3,2)",
        1e-12,
        "L(t^a e^{-bt})(j) = Gamma(a+1)/(j+b)^{a+1}",
        |_| {
            let a = (omega_laplace_closed(0.0, 2, 0.0) - PI.powf(1.5) / 16.0).abs() / (PI.powf(1.5) / 16.0);
            let (alpha, m, j) = (0.5, 3usize, 2.0);
            let mut p = 1.0;
            for b in 1..=m {
                p *= gamma(1.5)? / (j + b as f64).powf(1.5);
            }
            for b in 2..=m {
                p *= gamma(0.5)? / (j + alpha + b as f64).sqrt();
            }
            let b = (omega_laplace_closed(alpha, m, j) - p).abs() / p;
            Ok(a.max(b))
        },
    );
    ctx.check("kernels.omega.monotone", "increasing steps of the closed Laplace transform in j = 0..40", 0.0, "decreasing Laplace transform", |_| {
        let mut bad = 0;
        for (alpha, m) in [(0.0, 2usize), (0.5, 3), (1.5, 4)] {
            for j in 0..40 {
                if omega_laplace_closed(alpha, m, j as f64 + 1.0) >= omega_laplace_closed(alpha, m, j as f64) {
                    bad += 1;
                }
            }
        }
        Ok(bad as f64)
    });
    reproducing_checks(ctx);
}

fn reproducing_checks(ctx: &mut Ctx) {
    let spaces: [(&str, ReproducingKernel, usize); 7] = [
        ("fock", ReproducingKernel::BargmannFock, 60),
        ("bergman", ReproducingKernel::Bergman { delta: 1.5 }, 200),
        ("weighted-bergman", ReproducingKernel::WeightedBergman { alpha: 0.5 }, 200),
        ("disk-eigen.nu2.l1", ReproducingKernel::DiskEigen { nu: 2.0, ell: 1 }, 150),
        ("disk-eigen.nu3.4.l2", ReproducingKernel::DiskEigen { nu: 3.4, ell: 2 }, 200),
        ("dirichlet", ReproducingKernel::Dirichlet, 400),
        ("gen-bergman-dirichlet", ReproducingKernel::GenBergmanDirichlet { alpha: 0.5, m: 3 }, 300),
    ];
    let pairs = [
        (C64::new(0.5, 0.0), C64::new(0.5, 0.0)),
        (C64::new(0.4, 0.0), C64::new(0.3, 0.0)),
        (C64::new(0.2, 0.0), C64::new(0.2, 0.0)),
        (C64::new(0.3, 0.2), C64::new(-0.1, 0.4)),
        (C64::new(-0.35, -0.35), C64::new(0.1, -0.45)),
    ];
    for (name, k, terms) in spaces {
        ctx.check(
            &format!("kernels.papadakis.{name}"),
            &format!("truncated basis sum (J = {terms}) vs closed kernel at |z|, |w| <= 0.5"),
            1e-6,
            "K(z,w) = sum f_j(z) conj(f_j(w))",
            |_| try_max(pairs.iter().map(|&(z, w)| Ok((papadakis_sum(k.basis(), z, w, terms)? - k.eval(z, w)?).norm()))),
        );
    }
    let probe = disk_points(&[0.2, 0.5, 0.7], 4);
    ctx.check("kernels.reproducing.hermitian", "max |K(z,w) - conj(K(w,z))| / |K(z,w)|", 1e-12, "Hermitian symmetry", |_| {
        let mut e = 0.0f64;
        for (_, k, _) in spaces {
            for &z in &probe {
                for &w in &probe {
                    let a = k.eval(z, w)?;
                    e = e.max((a - k.eval(w, z)?.conj()).norm() / a.norm());
                }
            }
        }
        Ok(e)
    });
    ctx.check(
        "kernels.reproducing.positivity",
        "violations of K(z,z) > 0 real and K(z,z) K(w,w) >= |K(z,w)|^2",
        0.0,
        "positive definite kernel",
        |_| {
            let mut bad = 0;
            for (_, k, _) in spaces {
                for &z in &probe {
                    let kz = k.eval(z, z)?;
                    if !(kz.re > 0.0) || kz.im.abs() > 1e-13 * kz.re {
                        bad += 1;
                    }
                    for &w in &probe {
                        if kz.re * k.eval(w, w)?.re < k.eval(z, w)?.norm_sqr() * (1.0 - 1e-12) {
                            bad += 1;
                        }
                    }
                }
            }
            Ok(bad as f64)
        },
    );
    ctx.check("kernels.reproducing.dirichlet_reduction", "alpha = 0, m = 1 kernel vs the Dirichlet kernel", 1e-9, "reduction to the Dirichlet kernel", |_| {
        let k = ReproducingKernel::GenBergmanDirichlet { alpha: 0.0, m: 1 };
        let mut e = 0.0f64;
        for &z in &probe {
            for &w in &probe {
                e = e.max((k.eval(z, w)? - ReproducingKernel::Dirichlet.eval(z, w)?).norm());
            }
        }
        Ok(e)
    });
}

// ------------------------------------------------------------- transforms

const TRANSFORMS: [KernelKind; 5] = [
    KernelKind::Classical,
    KernelKind::Second { delta: 1.5 },
    KernelKind::GeneralizedSecond { nu: 2.0, ell: 1 },
    KernelKind::Dirichlet,
    KernelKind::GenBergmanDirichlet { alpha: 0.5, m: 2 },
];

fn check_rule(ctx: &Ctx, kind: KernelKind) -> Result<QuadratureRule> {
    match kind.source_alpha() {
        None => gauss_line(ctx.cfg.check_n),
        Some(a) => gauss_halfline(ctx.cfg.check_n, a),
    }
}

fn transforms(ctx: &mut Ctx) {
    let deg = ctx.cfg.degree;
    let zs = disk_points(&[0.3, 0.6], 5);
    for (ti, kind) in TRANSFORMS.into_iter().enumerate() {
        let label = kernel_label(kind);
        let op = match ctx.transform(kind) {
            Ok(op) => op,
            Err(e) => {
                ctx.report.checks.push(Check::errored(format!("transforms.setup.{label}"), "build transform", 0.0, "", &e));
                continue;
            }
        };
        let op = &op;
        let phis = match op.source_basis_values(deg + 1) {
            Ok(p) => p,
            Err(e) => {
                ctx.report.checks.push(Check::errored(format!("transforms.setup.{label}"), "source basis", 0.0, "", &e));
                continue;
            }
        };
        ctx.check(
            &format!("transforms.pairing.{label}"),
            &format!("max |B[phi_j](z) - psi_j(z)|, j <= {deg}, 10 points with |z| <= 0.6"),
            1e-7,
            "B[phi_j] = psi_j",
            |_| {
                let img = op.forward_many(&phis, &zs)?;
                let tb = op.target_basis();
                try_max((0..=deg).flat_map(|j| zs.iter().enumerate().map(move |(p, z)| (j, p, *z))).map(|(j, p, z)| Ok((img[j][p] - tb.eval(j, z)?).norm())))
            },
        );
        if op.target().rule().is_some() {
            let xs = match check_rule(ctx, kind) {
                Ok(r) => r.real_nodes(),
                Err(e) => {
                    ctx.report.checks.push(Check::errored(format!("transforms.setup.{label}"), "check rule", 0.0, "", &e));
                    continue;
                }
            };
            let rule = op.target().rule().unwrap().clone();
            ctx.check(
                &format!("transforms.reverse_pairing.{label}"),
                &format!("max |B^-1[psi_j](x) - phi_j(x)|, j <= {deg}, x at the nodes of the {}-point source rule", xs.len()),
                1e-6,
                "integral inverse of psi_j is phi_j",
                |_| {
                    let tb = op.target_basis();
                    let sb = op.source_basis();
                    let vals: Vec<Vec<C64>> =
                        (0..=deg).map(|j| rule.nodes.iter().map(|&z| tb.eval(j, z)).collect::<Result<_>>()).collect::<Result<_>>()?;
                    let inv = op.inverse_integral_multi(&vals, &xs)?;
                    let mut e = 0.0f64;
                    for (j, row) in inv.iter().enumerate() {
                        for (x, v) in xs.iter().zip(row) {
                            e = e.max((v - sb.eval(j, C64::from(*x))?).norm());
                        }
                    }
                    Ok(e)
                },
            );
            ctx.check(
                &format!("transforms.roundtrip.{label}"),
                "max |B^-1[B f](x) - f(x)| at the check nodes, f a random unit combination of phi_0..phi_8",
                1e-4,
                "integral inverse after forward",
                |c| {
                    let mut rng = c.rng(100 + ti as u64);
                    let mut coef = random_complex(&mut rng, deg + 1);
                    let nrm = coef.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                    coef.iter_mut().for_each(|v| *v /= nrm);
                    let f: Vec<C64> = (0..op.source_rule().len()).map(|i| (0..=deg).map(|j| coef[j] * phis[j][i]).sum()).collect();
                    let img = op.forward_many(&[f], &rule.nodes)?;
                    let back = op.inverse_integral_multi(&img, &xs)?;
                    let sb = op.source_basis();
                    let mut e = 0.0f64;
                    for (x, v) in xs.iter().zip(&back[0]) {
                        let phi = sb.eval_all(deg + 1, C64::from(*x))?;
                        let want: C64 = coef.iter().zip(&phi).map(|(a, b)| a * b).sum();
                        e = e.max((v - want).norm());
                    }
                    Ok(e)
                },
            );
        } else {
            ctx.check(
                &format!("transforms.roundtrip.{label}"),
                &format!("max |c_out - c_in| for inverse_series after forward, random c with J = {}", deg + 1),
                1e-8,
                "series inverse after forward",
                |c| {
                    let mut rng = c.rng(100 + ti as u64);
                    let coef = random_complex(&mut rng, deg + 1);
                    let f: Vec<C64> = (0..op.source_rule().len()).map(|i| (0..=deg).map(|j| coef[j] * phis[j][i]).sum()).collect();
                    let taylor = op.taylor_coefficients(&[f], deg + 1)?.remove(0);
                    let back = op.inverse_series(&TargetElement::Taylor(taylor))?;
                    Ok(max_of(back.values.iter().zip(&coef).map(|(a, b)| (a - b).norm())))
                },
            );
        }
        ctx.check(
            &format!("transforms.isometry.{label}"),
            &format!("max | ||B f|| - ||f|| | over {} random degree-{deg} coefficient vectors", ctx.cfg.random_vectors),
            1e-6,
            "<B f, B g> = <f, g>",
            |c| {
                let mut rng = c.rng(200 + ti as u64);
                let n = op.source_rule().len();
                let fs: Vec<Vec<C64>> = (0..c.cfg.random_vectors)
                    .map(|_| {
                        let coef = random_complex(&mut rng, deg + 1);
                        (0..n).map(|i| (0..=deg).map(|j| coef[j] * phis[j][i]).sum()).collect()
                    })
                    .collect();
                let g = op.target_gram(&fs, deg)?;
                let w = &op.source_rule().weights;
                Ok(max_of(fs.iter().enumerate().map(|(k, f)| {
                    let src: f64 = f.iter().zip(w).map(|(v, w)| v.norm_sqr() * w).sum::<f64>().sqrt();
                    (g[(k, k)].re.max(0.0).sqrt() - src).abs()
                })))
            },
        );
        ctx.check(
            &format!("transforms.adjoint.{label}"),
            &format!("max |<B phi_a, B phi_b> - delta_ab|, a, b <= {deg}"),
            1e-8,
            "B*B = I",
            |_| Ok(identity_error(&op.target_gram(&phis, deg)?)),
        );
    }
    ctx.check(
        "transforms.forward.ground_state",
        "B[phi_0] = psi_0 constant: classical (1/sqrt(pi)) and second (1) at 4 points",
        1e-12,
        "Gaussian and Laplace integrals",
        |c| {
            let mut e = 0.0f64;
            let op = c.transform(KernelKind::Classical)?;
            let f = vec![C64::new(PI.powf(-0.25), 0.0); op.source_rule().len()];
            for z in [C64::new(0.3, 0.2), C64::new(-1.0, 0.5), C64::new(0.0, 1.5), C64::new(2.0, 0.0)] {
                e = e.max((op.forward(&f, z)? - PI.sqrt().recip()).norm());
            }
            let op = c.transform(KernelKind::Second { delta: 1.5 })?;
            let f = vec![C64::new((-0.5 * ln_gamma(2.5)).exp(), 0.0); op.source_rule().len()];
            for z in [C64::new(0.3, 0.2), C64::new(-0.5, 0.1), C64::new(0.0, 0.6), C64::new(0.55, 0.0)] {
                e = e.max((op.forward(&f, z)? - 1.0).norm());
            }
            Ok(e)
        },
    );
    ctx.check(
        "transforms.coefficients.exponential",
        "c_j of e^{-x/2} against LaguerreL2(0) vs (2/3)(1/3)^j, j < 12",
        1e-12,
        "Laguerre generating function at z = 1/3",
        |c| {
            let op = c.transform(KernelKind::Dirichlet)?;
            let f: Vec<C64> = op.source_nodes().iter().map(|x| C64::from((-0.5 * x).exp())).collect();
            let cv = op.coefficients(&f, 12)?;
            Ok(max_of(cv.values.iter().enumerate().map(|(j, v)| (v - 2.0 / 3.0 * 3f64.powi(-(j as i32))).norm())))
        },
    );
    ctx.check(
        "transforms.series_agreement.dirichlet",
        "|B f(z) - sum_j c_j psi_j(z)| for f = e^{-x/2}, z = 0.3+0.2i, J = 64",
        1e-6,
        "series and integral forms of the transform agree",
        |c| {
            let op = c.transform(KernelKind::Dirichlet)?;
            let f: Vec<C64> = op.source_nodes().iter().map(|x| C64::from((-0.5 * x).exp())).collect();
            let z = C64::new(0.3, 0.2);
            let cv: CoefficientVector = op.coefficients(&f, 64)?;
            Ok((op.forward(&f, z)? - series_transform(&cv, op.target_basis(), z)?).norm())
        },
    );
    ctx.check(
        "transforms.inverse_series.examples",
        "inverse_series of psi_2 and 3 psi_0 - psi_5 in the Dirichlet basis",
        0.0,
        "B^-1[psi_j] = phi_j",
        |_| {
            let t = BasisFamily::Dirichlet;
            let s = BasisFamily::LaguerreL2 { alpha: 0.0 };
            let e = |j: usize| (0..6).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect::<Vec<_>>();
            let a = inverse_series(&TargetElement::PsiCoefficients(e(2)), t, s)?;
            let d: Vec<C64> = e(0).iter().zip(e(5)).map(|(a, b)| a * 3.0 - b).collect();
            let b = inverse_series(&TargetElement::PsiCoefficients(d.clone()), t, s)?;
            let ea = max_of(a.values.iter().zip(e(2)).map(|(x, y)| (x - y).norm()));
            let eb = max_of(b.values.iter().zip(&d).map(|(x, y)| (x - y).norm()));
            Ok(ea.max(eb))
        },
    );
    ctx.check(
        "transforms.reproducing.weighted_bergman",
        "max relative error of int K(z,w) f(w) (1-|w|^2)^a dlambda(w) = f(z), random f of degree 6, a in {0, 0.5, 2}",
        1e-8,
        "reproducing property",
        |c| {
            let mut rng = c.rng(300);
            let mut e = 0.0f64;
            for alpha in [0.0, 0.5, 2.0] {
                let k = ReproducingKernel::WeightedBergman { alpha };
                let rule = disk_rule(16, 64, alpha)?;
                let coef = random_complex(&mut rng, 7);
                let f = |z: C64| coef.iter().rev().fold(C64::new(0.0, 0.0), |s, a| s * z + a);
                for z in disk_points(&[0.2, 0.5], 3) {
                    let mut acc = C64::new(0.0, 0.0);
                    for (w, wt) in rule.nodes.iter().zip(&rule.weights) {
                        acc += k.eval(z, *w)? * f(*w) * wt;
                    }
                    e = e.max(rel(acc, f(z)));
                }
            }
            Ok(e)
        },
    );
}

// -------------------------------------------------------------- operators

fn random_expansion(rng: &mut ChaCha8Rng, degree: u32, dyadic: bool) -> MonomialExpansion {
    let mut f = MonomialExpansion::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            let c = if dyadic {
                C64::new(rng.gen_range(-16i32..=16) as f64 / 8.0, rng.gen_range(-16i32..=16) as f64 / 8.0)
            } else {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            f.add_term(a, b, c);
        }
    }
    f.prune();
    f
}

/// Rescales the coefficient vector to unit Euclidean norm.
fn unit_expansion(mut f: MonomialExpansion) -> MonomialExpansion {
    let n = f.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    f.terms.values_mut().for_each(|c| *c /= n);
    f
}

fn operators(ctx: &mut Ctx) {
    ctx.check("operators.annihilation", "nonzero terms of D_g(z^j), g in {1, 2, 2.5}, j <= 12", 0.0, "D_g kills holomorphic functions", |_| {
        let mut n = 0;
        for g in [1.0, 2.0, 2.5] {
            for j in 0..=12 {
                n += DiskOperator::d_gamma(g).apply_exact(&MonomialExpansion::monomial(j, 0, C64::new(1.0, 0.0))).terms.len();
            }
        }
        Ok(n as f64)
    });
    ctx.check("operators.laplacian_zbar", "max coefficient difference of D_2(zbar) and 8 zbar - 8 z zbar^2", 0.0, "exact action", |_| {
        let got = DiskOperator::laplacian().apply_exact(&MonomialExpansion::monomial(0, 1, C64::new(1.0, 0.0)));
        let mut want = MonomialExpansion::monomial(0, 1, C64::new(8.0, 0.0));
        want.add_term(1, 2, C64::new(-8.0, 0.0));
        Ok(got.max_abs_diff(&want))
    });
    ctx.check("operators.casimir_constant", "max |box_g(1) - (2g - g^2)|, g in {0.5, 1, 2, 3}", 0.0, "constant term of the Casimir form", |_| {
        let one = MonomialExpansion::monomial(0, 0, C64::new(1.0, 0.0));
        Ok(max_of([0.5, 1.0, 2.0, 3.0].iter().map(|&g| {
            DiskOperator::casimir(g).apply_exact(&one).max_abs_diff(&MonomialExpansion::monomial(0, 0, C64::new(2.0 * g - g * g, 0.0)))
        })))
    });
    ctx.check(
        "operators.specialization",
        "max coefficient difference of Delta_a f and H_{a/2+1} f, random dyadic f of degree 5, a in {0.5, 1.5, 3}",
        0.0,
        "Delta_a = H_{a/2+1}",
        |c| {
            let mut rng = c.rng(400);
            let mut e = 0.0f64;
            for alpha in [0.5, 1.5, 3.0] {
                let f = random_expansion(&mut rng, 5, true);
                e = e.max(DiskOperator::delta_alpha(alpha).apply_exact(&f).max_abs_diff(&DiskOperator::h_nu(alpha / 2.0 + 1.0).apply_exact(&f)));
            }
            Ok(e)
        },
    );
    let pts: Vec<C64> = sample_points().into_iter().step_by(2).collect();
    let h = ctx.cfg.fd_h;
    ctx.check(
        "operators.fd_vs_exact",
        &format!("max |apply_fd - apply_exact| at 10 points, random unit-norm degree-4 f, g in {{1, 2, 2.5}}, h = {h}"),
        1e-6,
        "finite differences vs exact action",
        |c| {
            let mut rng = c.rng(500);
            let mut e = 0.0f64;
            for g in [1.0, 2.0, 2.5] {
                let f = unit_expansion(random_expansion(&mut rng, 4, false));
                let op = DiskOperator::d_gamma(g);
                let exact = op.apply_exact(&f);
                for &z in &pts {
                    e = e.max((op.apply_fd(|w| f.eval(w), z, h)? - exact.eval(z)).norm());
                }
            }
            Ok(e)
        },
    );
    ctx.check(
        "operators.fd_vs_exact.richardson",
        &format!("as operators.fd_vs_exact with Richardson extrapolation over h = {h} and h/2"),
        1e-6,
        "extrapolated finite differences vs exact action",
        |c| {
            let mut rng = c.rng(500);
            let mut e = 0.0f64;
            for g in [1.0, 2.0, 2.5] {
                let f = unit_expansion(random_expansion(&mut rng, 4, false));
                let op = DiskOperator::d_gamma(g);
                let exact = op.apply_exact(&f);
                for &z in &pts {
                    e = e.max((op.apply_fd_richardson(|w| f.eval(w), z, h)? - exact.eval(z)).norm());
                }
            }
            Ok(e)
        },
    );
    ctx.check(
        "operators.fd_order",
        "shortfall of the observed finite-difference order below 1.9 (h = 1e-2 vs 1e-3)",
        0.0,
        "second-order differences",
        |c| {
            let mut rng = c.rng(600);
            let f = random_expansion(&mut rng, 4, false);
            let op = DiskOperator::laplacian();
            let exact = op.apply_exact(&f);
            let err = |h: f64| -> Result<f64> { try_max(pts.iter().map(|&z| Ok((op.apply_fd(|w| f.eval(w), z, h)? - exact.eval(z)).norm()))) };
            let order = (err(1e-2)? / err(1e-3)?).log10();
            c.note("operators.fd_order", format!("{order:.4}"));
            Ok((1.9 - order).max(0.0))
        },
    );
    for nu in [1.0, 2.0, 3.0] {
        let top = (nu - 0.5f64).floor() as usize;
        for ell in 0..=top {
            let id = format!("operators.eigen.nu{nu}.l{ell}");
            ctx.check(
                &id,
                &format!("max_j<=5 relative residual of H_nu psi_j = {} psi_j, Richardson h = {h}", landau_level(nu, ell)),
                1e-4,
                "H_nu psi = 4 l (2 nu - l - 1) psi",
                |_| try_max((0..=5).map(|j| eigen_check(nu, ell, j, &sample_points(), h))),
            );
        }
    }
    ctx.check("operators.spectrum", "mismatches of the enumerated point spectra against hand-listed sets", 0.0, "point spectra", |_| {
        let mut bad = 0;
        let cases: Vec<(SpectrumKind, Vec<(usize, f64)>, bool)> = vec![
            (SpectrumKind::HNu(1.0), vec![(0, 0.0)], false),
            (SpectrumKind::HNu(3.0), vec![(0, 0.0), (1, 16.0), (2, 24.0)], false),
            (SpectrumKind::HNu(2.7), vec![(0, 0.0), (1, 13.6), (2, 19.2)], false),
            (SpectrumKind::DeltaAlpha(2.0), vec![(0, 0.0)], false),
            (SpectrumKind::DeltaAlpha(5.0), vec![(0, 0.0), (1, 20.0), (2, 32.0)], false),
            (SpectrumKind::DeltaAlpha(0.5), vec![(0, 0.0)], true),
        ];
        for (k, want, flag) in cases {
            let s = point_spectrum(k)?;
            let same = s.levels.len() == want.len() && s.levels.iter().zip(&want).all(|(a, b)| a.0 == b.0 && (a.1 - b.1).abs() < 1e-12);
            if !same || s.flagged != flag {
                bad += 1;
            }
        }
        Ok(bad as f64)
    });
    ctx.check(
        "operators.membership",
        "wrong verdicts among: z^3, zbar, sum z^j/(j+1) (Dirichlet); z^4, zbar z (a=0.5, m=2)",
        0.0,
        "harmonic characterization of the Dirichlet spaces",
        |_| {
            let one = C64::new(1.0, 0.0);
            let cases: Vec<(HolomorphicInput, HarmonicSpace, bool)> = vec![
                (HolomorphicInput::Expansion(MonomialExpansion::monomial(3, 0, one)), HarmonicSpace::Dirichlet, true),
                (HolomorphicInput::Expansion(MonomialExpansion::monomial(0, 1, one)), HarmonicSpace::Dirichlet, false),
                (HolomorphicInput::Coefficients((0..4000).map(|j| C64::new(1.0 / (j + 1) as f64, 0.0)).collect()), HarmonicSpace::Dirichlet, false),
                (HolomorphicInput::Expansion(MonomialExpansion::monomial(4, 0, one)), HarmonicSpace::GenDirichlet { alpha: 0.5, m: 2 }, true),
                (HolomorphicInput::Expansion(MonomialExpansion::monomial(1, 1, one)), HarmonicSpace::GenDirichlet { alpha: 0.5, m: 2 }, false),
            ];
            let mut bad = 0;
            for (f, s, want) in cases {
                if harmonic_membership(&f, s)?.member != want {
                    bad += 1;
                }
            }
            Ok(bad as f64)
        },
    );
}
