//! Command-line front end: quadrature nodes, kernel evaluation, transforms,
//! operators and verification suites.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use bargmann::config::{RunConfig, CONFIG_ENV};
use bargmann::kernels::{KernelKind, Strategy};
use bargmann::operators::{DiskOperator, MonomialExpansion};
use bargmann::quadrature::{disk_rule, gauss_halfline, gauss_line, gaussian_plane_rule};
use bargmann::transforms::{CoefficientVector, TransformOperator};
use bargmann::verify::{self, Suite};
use bargmann::{Error, C64};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bargmann", version, about = "Bargmann-type transforms, kernels and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a quadrature rule as CSV rows: node_re, node_im, weight.
    Nodes {
        #[arg(long, value_enum)]
        rule: RuleName,
        /// Rule size (radial size for the disk rule).
        #[arg(long)]
        n: usize,
        /// Half-line weight exponent.
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Disk weight exponent.
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Angular size of the disk rule (default 2n).
        #[arg(long)]
        ntheta: Option<usize>,
    },
    /// Evaluate a transform kernel K(z, x).
    KernelEval {
        #[arg(long)]
        family: String,
        /// Family parameters as key=value pairs, e.g. nu=2,ell=1.
        #[arg(long, default_value = "")]
        params: String,
        /// Complex point re,im.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, value_enum)]
        strategy: Option<StrategyName>,
        /// Number of series terms for the series strategy.
        #[arg(long)]
        terms: Option<usize>,
        /// Also report the discrepancy between the primary and series evaluators.
        #[arg(long)]
        cross_check: bool,
    },
    /// Apply a transform to a coefficient vector in the source basis.
    Transform {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "")]
        params: String,
        /// JSON list of complex pairs [[re, im], ...] (or a flat [re, im, re, im, ...]).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Apply the disk operator D_gamma (or its Casimir form) to a monomial expansion.
    Operator {
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        casimir: bool,
        /// JSON object mapping "a,b" to [re, im], the coefficient of z^a zbar^b.
        #[arg(long)]
        apply: PathBuf,
        /// Compare against finite differences at --at.
        #[arg(long, requires = "at")]
        fd: bool,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        /// special, quadrature, kernels, transforms, operators or all.
        suite: String,
        /// Flat key = value config file.
        #[arg(long, env = CONFIG_ENV)]
        config: Option<PathBuf>,
        /// Config override key=value (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
        /// Shorthand for --set omega.h=<h>.
        #[arg(long)]
        omega_h: Option<f64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleName {
    Line,
    Halfline,
    Disk,
    Plane,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    Closed,
    Series,
    Integral,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Domain(_) | Error::Capability(_) => ExitCode::from(2),
                Error::NoConvergence(_) => ExitCode::from(1),
            }
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Nodes { rule, n, alpha, gamma, ntheta } => {
            let r = match rule {
                RuleName::Line => gauss_line(n)?,
                RuleName::Halfline => gauss_halfline(n, alpha)?,
                RuleName::Disk => disk_rule(n, ntheta.unwrap_or(2 * n), gamma)?,
                RuleName::Plane => gaussian_plane_rule(n)?,
            };
            for (z, w) in r.nodes.iter().zip(&r.weights) {
                println!("{}, {}, {}", num(z.re), num(z.im), num(*w));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::KernelEval { family, params, z, x, strategy, terms, cross_check } => {
            let kind = parse_family(&family, &params)?;
            let z = parse_complex(&z)?;
            let cfg = RunConfig::default();
            let k = bargmann::kernels::KernelFamily::with_config(kind, &cfg.kernel_config())?;
            let strategy = match strategy {
                None => kind.primary_strategy(),
                Some(StrategyName::Closed) => Strategy::Closed,
                Some(StrategyName::Series) => Strategy::Series(terms),
                Some(StrategyName::Integral) => Strategy::Integral,
            };
            let v = k.eval(z, x, strategy)?;
            let mut out = json!({
                "family": kind.name(),
                "strategy": strategy_name(strategy),
                "value_re": v.re,
                "value_im": v.im,
            });
            if cross_check {
                let (_, s, d) = k.cross_check(z, x)?;
                out["series_re"] = json!(s.re);
                out["series_im"] = json!(s.im);
                out["discrepancy"] = json!(d);
            }
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform { family, params, input, at } => {
            let kind = parse_family(&family, &params)?;
            let z = parse_complex(&at)?;
            let text = fs::read_to_string(&input).map_err(|e| Error::Config(format!("{}: {e}", input.display())))?;
            let coeffs = parse_coefficients(&text)?;
            let cfg = RunConfig::default();
            let op = TransformOperator::from_kernel(
                bargmann::kernels::KernelFamily::with_config(kind, &cfg.kernel_config())?,
                &cfg.transform_config(kind.source_alpha().is_none()),
            )?;
            let c = CoefficientVector { values: coeffs, basis: op.source_basis() };
            let v = op.series_transform(&c, z)?;
            // The same function sampled on the source rule and pushed through the kernel integral.
            let phis = op.source_basis_values(c.values.len())?;
            let f: Vec<C64> = (0..op.source_rule().len()).map(|i| c.values.iter().zip(&phis).map(|(a, p)| a * p[i]).sum()).collect();
            let w = op.forward(&f, z)?;
            let out = json!({
                "value_re": v.re,
                "value_im": v.im,
                "truncation": c.values.len(),
                "est_error": (v - w).norm(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Operator { gamma, casimir, apply, fd, at, h } => {
            let text = fs::read_to_string(&apply).map_err(|e| Error::Config(format!("{}: {e}", apply.display())))?;
            let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", apply.display())))?;
            let f = MonomialExpansion::from_json(&v)?;
            let op = if casimir { DiskOperator::casimir(gamma) } else { DiskOperator::d_gamma(gamma) };
            let g = op.apply_exact(&f);
            let mut out = json!({ "result": g.to_json() });
            if fd {
                let z = parse_complex(at.as_deref().unwrap_or_default())?;
                let exact = g.eval(z);
                let approx = op.apply_fd(|w| f.eval(w), z, h)?;
                out["at"] = json!([z.re, z.im]);
                out["exact"] = json!([exact.re, exact.im]);
                out["fd"] = json!([approx.re, approx.im]);
                out["difference"] = json!((exact - approx).norm());
            }
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, config, sets, omega_h, output } => {
            let suite = Suite::from_str(&suite)?;
            let mut cfg = match &config {
                Some(p) => RunConfig::load(p)?,
                None => RunConfig::default(),
            };
            for s in &sets {
                let (k, v) = s.split_once('=').ok_or_else(|| Error::Config(format!("--set expects key=value, got {s:?}")))?;
                cfg.set(k, v)?;
            }
            if let Some(h) = omega_h {
                cfg.omega_h = h;
            }
            let report = verify::run(suite, &cfg)?;
            let text = report.to_json();
            match output {
                Some(p) => fs::write(&p, text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
                None => println!("{text}"),
            }
            for c in report.failures() {
                eprintln!("FAIL {}: measured {:e} > tolerance {:e}", c.id, c.measured, c.tolerance);
            }
            eprintln!(
                "{}: {}/{} checks passed in {:.1} s",
                report.suite,
                report.checks.iter().filter(|c| c.passed).count(),
                report.checks.len(),
                report.metadata.wall_time_s
            );
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

/// Shortest representation that round-trips (at most 17 significant digits).
fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Closed => "closed",
        Strategy::Series(_) => "series",
        Strategy::Integral => "integral",
    }
}

fn parse_complex(s: &str) -> Result<C64, Error> {
    let bad = || Error::Config(format!("expected re,im, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok(C64::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_family(name: &str, params: &str) -> Result<KernelKind, Error> {
    let mut map = std::collections::HashMap::new();
    for kv in params.split([',', ' ']).filter(|s| !s.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("--params expects key=value, got {kv:?}")))?;
        let v: f64 = v.parse().map_err(|_| Error::Config(format!("invalid value for {k}: {v:?}")))?;
        map.insert(k.trim().to_string(), v);
    }
    let mut take = |k: &str| map.remove(k).ok_or_else(|| Error::Config(format!("family {name} needs --params {k}=<value>")));
    let index = |k: &str, v: f64| {
        if v >= 0.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(Error::Config(format!("{k} must be a nonnegative integer")))
        }
    };
    let kind = match name {
        "classical" => KernelKind::Classical,
        "second" => KernelKind::Second { delta: take("delta")? },
        "generalized-second" => {
            let nu = take("nu")?;
            KernelKind::GeneralizedSecond { nu, ell: index("ell", take("ell")?)? }
        }
        "dirichlet" => KernelKind::Dirichlet,
        "gen-bergman-dirichlet" => {
            let alpha = take("alpha")?;
            KernelKind::GenBergmanDirichlet { alpha, m: index("m", take("m")?)? }
        }
        _ => {
            return Err(Error::Config(format!(
                "unknown family {name:?}; expected classical, second, generalized-second, dirichlet or gen-bergman-dirichlet"
            )))
        }
    };
    if let Some(k) = map.keys().next() {
        return Err(Error::Config(format!("unexpected parameter {k:?} for family {name}")));
    }
    kind.validate()?;
    Ok(kind)
}

fn parse_coefficients(text: &str) -> Result<Vec<C64>, Error> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("coefficients: {e}")))?;
    let bad = || Error::Config("coefficients must be [[re, im], ...] or [re, im, re, im, ...]".into());
    let arr = v.as_array().ok_or_else(bad)?;
    if arr.iter().all(|x| x.is_array()) {
        arr.iter()
            .map(|p| {
                let p: [f64; 2] = serde_json::from_value(p.clone()).map_err(|_| bad())?;
                Ok(C64::new(p[0], p[1]))
            })
            .collect()
    } else {
        let flat: Vec<f64> = arr.iter().map(|x| x.as_f64().ok_or_else(bad)).collect::<Result<_, _>>()?;
        if flat.len() % 2 != 0 {
            return Err(bad());
        }
        Ok(flat.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
    }
}
