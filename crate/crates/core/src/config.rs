//! Run configuration as a flat `key = value` text file.
//!
//! Lines starting with `#` are comments. Tolerances are overridden with
//! `tol.<check id> = value`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kernels::KernelConfig;
use crate::transforms::TransformConfig;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "BARGMANN_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub line_n: usize,
    pub halfline_n: usize,
    pub plane_n: usize,
    pub disk_nr: usize,
    pub disk_ntheta: usize,
    /// Size of the rule whose nodes are the check points of integral inverses.
    pub check_n: usize,
    pub kernel_halfline_n: usize,
    pub omega_t: f64,
    pub omega_h: f64,
    pub omega_nodes: usize,
    pub sample_radius: f64,
    pub sample_n: usize,
    pub fd_h: f64,
    pub degree: usize,
    pub random_vectors: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let k = KernelConfig::default();
        let t = TransformConfig::default();
        Self {
            line_n: 100,
            halfline_n: 120,
            plane_n: t.plane_n,
            disk_nr: t.disk_nr,
            disk_ntheta: t.disk_ntheta,
            check_n: 24,
            kernel_halfline_n: k.halfline_n,
            omega_t: k.omega_t,
            omega_h: k.omega_h,
            omega_nodes: k.omega_nodes,
            sample_radius: t.sample_radius,
            sample_n: t.sample_n,
            fd_h: 1e-3,
            degree: 8,
            random_vectors: 20,
            seed: 20240611,
            tolerances: BTreeMap::new(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

impl RunConfig {
    pub const KEYS: [&'static str; 17] = [
        "quadrature.line_n",
        "quadrature.halfline_n",
        "quadrature.plane_n",
        "quadrature.disk_nr",
        "quadrature.disk_ntheta",
        "quadrature.check_n",
        "kernel.halfline_n",
        "omega.t_max",
        "omega.h",
        "omega.nodes",
        "sample.radius",
        "sample.n",
        "fd.h",
        "transform.degree",
        "transform.random_vectors",
        "seed",
        "tol.<check id>",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "quadrature.line_n" => self.line_n = parse(key, value)?,
            "quadrature.halfline_n" => self.halfline_n = parse(key, value)?,
            "quadrature.plane_n" => self.plane_n = parse(key, value)?,
            "quadrature.disk_nr" => self.disk_nr = parse(key, value)?,
            "quadrature.disk_ntheta" => self.disk_ntheta = parse(key, value)?,
            "quadrature.check_n" => self.check_n = parse(key, value)?,
            "kernel.halfline_n" => self.kernel_halfline_n = parse(key, value)?,
            "omega.t_max" => self.omega_t = parse(key, value)?,
            "omega.h" => self.omega_h = parse(key, value)?,
            "omega.nodes" => self.omega_nodes = parse(key, value)?,
            "sample.radius" => self.sample_radius = parse(key, value)?,
            "sample.n" => self.sample_n = parse(key, value)?,
            "fd.h" => self.fd_h = parse(key, value)?,
            "transform.degree" => self.degree = parse(key, value)?,
            "transform.random_vectors" => self.random_vectors = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            _ => match key.strip_prefix("tol.") {
                Some(id) if !id.is_empty() => {
                    self.tolerances.insert(id.to_string(), parse(key, value)?);
                }
                _ => return Err(Error::Config(format!("unknown config key {key:?}"))),
            },
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if [self.line_n, self.halfline_n, self.plane_n, self.disk_nr, self.disk_ntheta, self.check_n, self.kernel_halfline_n]
            .contains(&0)
        {
            return bad("rule sizes must be at least 1");
        }
        if !(self.omega_t > 0.0) || !(self.omega_h > 0.0) || self.omega_h >= self.omega_t {
            return bad("omega grid needs 0 < h < T");
        }
        if self.omega_nodes < 2 {
            return bad("omega.nodes must be at least 2");
        }
        if !(self.sample_radius > 0.0 && self.sample_radius < 1.0) {
            return bad("sample.radius must be in (0, 1)");
        }
        if !self.sample_n.is_power_of_two() || self.sample_n < 8 {
            return bad("sample.n must be a power of two, at least 8");
        }
        if !(self.fd_h > 0.0 && self.fd_h < 0.1) {
            return bad("fd.h must be in (0, 0.1)");
        }
        if self.degree == 0 || 2 * (self.degree + 3) > self.sample_n {
            return bad("transform.degree must be positive and below sample.n / 2 - 3");
        }
        if self.tolerances.values().any(|t| !(*t >= 0.0)) {
            return bad("tolerances must be nonnegative");
        }
        Ok(())
    }

    /// Tolerance for a check id, after overrides.
    pub fn tol(&self, id: &str, default: f64) -> f64 {
        self.tolerances.get(id).copied().unwrap_or(default)
    }

    pub fn kernel_config(&self) -> KernelConfig {
        KernelConfig {
            halfline_n: self.kernel_halfline_n,
            omega_t: self.omega_t,
            omega_h: self.omega_h,
            omega_nodes: self.omega_nodes,
        }
    }

    /// Transform settings for a source rule on the line or the half-line.
    pub fn transform_config(&self, line: bool) -> TransformConfig {
        TransformConfig {
            source_n: Some(if line { self.line_n } else { self.halfline_n }),
            plane_n: self.plane_n,
            disk_nr: self.disk_nr,
            disk_ntheta: self.disk_ntheta,
            sample_radius: self.sample_radius,
            sample_n: self.sample_n,
            kernel: self.kernel_config(),
        }
    }

    /// The effective configuration as key = value pairs.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("quadrature.line_n", self.line_n.to_string());
        put("quadrature.halfline_n", self.halfline_n.to_string());
        put("quadrature.plane_n", self.plane_n.to_string());
        put("quadrature.disk_nr", self.disk_nr.to_string());
        put("quadrature.disk_ntheta", self.disk_ntheta.to_string());
        put("quadrature.check_n", self.check_n.to_string());
        put("kernel.halfline_n", self.kernel_halfline_n.to_string());
        put("omega.t_max", self.omega_t.to_string());
        put("omega.h", self.omega_h.to_string());
        put("omega.nodes", self.omega_nodes.to_string());
        put("sample.radius", self.sample_radius.to_string());
        put("sample.n", self.sample_n.to_string());
        put("fd.h", self.fd_h.to_string());
        put("transform.degree", self.degree.to_string());
        put("transform.random_vectors", self.random_vectors.to_string());
        put("seed", self.seed.to_string());
        for (k, v) in &self.tolerances {
            put(&format!("tol.{k}"), v.to_string());
        }
        m
    }

    pub fn to_text(&self) -> String {
        self.to_pairs().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}
