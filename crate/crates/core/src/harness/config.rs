use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::ensembles::{EnsembleSpec, EntryDistribution};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    Semicircle,
    BulkClt,
    Universality,
    EdgeTw,
    EdgeMeasure,
    TraceMoment,
    PairCorrelation,
    GapCorrelation,
    PropShell,
    PropVolumeRatio,
    TwTable,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 11] = [
        ExperimentKind::Semicircle,
        ExperimentKind::BulkClt,
        ExperimentKind::Universality,
        ExperimentKind::EdgeTw,
        ExperimentKind::EdgeMeasure,
        ExperimentKind::TraceMoment,
        ExperimentKind::PairCorrelation,
        ExperimentKind::GapCorrelation,
        ExperimentKind::PropShell,
        ExperimentKind::PropVolumeRatio,
        ExperimentKind::TwTable,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Semicircle => "semicircle",
            ExperimentKind::BulkClt => "bulk-clt",
            ExperimentKind::Universality => "universality",
            ExperimentKind::EdgeTw => "edge-tw",
            ExperimentKind::EdgeMeasure => "edge-measure",
            ExperimentKind::TraceMoment => "trace-moment",
            ExperimentKind::PairCorrelation => "pair-correlation",
            ExperimentKind::GapCorrelation => "gap-correlation",
            ExperimentKind::PropShell => "prop-shell",
            ExperimentKind::PropVolumeRatio => "prop-volume-ratio",
            ExperimentKind::TwTable => "tw-table",
        }
    }

    /// Parameters that must be supplied explicitly.
    pub fn required_params(&self) -> &'static [&'static str] {
        match self {
            ExperimentKind::BulkClt => &["k"],
            ExperimentKind::Universality => &["b", "c"],
            ExperimentKind::EdgeMeasure => &["rn_exponent"],
            ExperimentKind::GapCorrelation => &["theta"],
            ExperimentKind::PropShell | ExperimentKind::PropVolumeRatio => &["m1", "m2"],
            _ => &[],
        }
    }

    /// Optional parameters with their defaults.
    pub fn default_params(&self) -> &'static [(&'static str, &'static str)] {
        match self {
            ExperimentKind::Semicircle => &[("tol", "0.02"), ("grid", "-1.1:1.1:0.01")],
            ExperimentKind::BulkClt => &[("tol", "0.05")],
            ExperimentKind::Universality => &[("k", "median"), ("ref", "goe"), ("p_min", "0.01"), ("se_mult", "3")],
            ExperimentKind::EdgeTw => &[("tol", "0.08"), ("ref", "none"), ("p_min", "0.01")],
            ExperimentKind::EdgeMeasure => &[("window", "2"), ("bins", "10"), ("tol", "0.15")],
            ExperimentKind::TraceMoment => &[("p", "auto"), ("tol", "0.15")],
            ExperimentKind::PairCorrelation => &[("half_width", "0.1"), ("bins", "30"), ("y_max", "3"), ("tol", "0.1")],
            ExperimentKind::GapCorrelation => &[("target_theta", "0.5"), ("tol", "0.15")],
            ExperimentKind::PropShell => &[("se_mult", "3")],
            ExperimentKind::PropVolumeRatio => &[("a", "-0.05"), ("b", "0.05"), ("se_mult", "3")],
            ExperimentKind::TwTable => &[("grid", "-8:4:0.1")],
        }
    }

    /// Distribution used when none is given.
    pub fn default_dist(&self) -> EnsembleSpec {
        match self {
            ExperimentKind::BulkClt
            | ExperimentKind::EdgeTw
            | ExperimentKind::PairCorrelation
            | ExperimentKind::GapCorrelation => EnsembleSpec::Gue,
            ExperimentKind::EdgeMeasure => EnsembleSpec::Goe,
            _ => EnsembleSpec::Wigner(EntryDistribution::Gaussian),
        }
    }

    pub fn samples_matrices(&self) -> bool {
        *self != ExperimentKind::TwTable
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown experiment kind '{s}'")))
    }
}

/// Declarative description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub reps: usize,
    pub dist: EnsembleSpec,
    pub seed: u64,
    pub workers: usize,
    /// Kind-specific parameters; defaults are filled in by [`Self::validate`].
    pub params: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, n: usize, reps: usize) -> Self {
        ExperimentConfig {
            kind,
            n,
            reps,
            dist: kind.default_dist(),
            seed: 0,
            workers: 1,
            params: BTreeMap::new(),
        }
    }

    pub fn with_dist(mut self, dist: EnsembleSpec) -> Self {
        self.dist = dist;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Checks the configuration before any sampling and fills in default
    /// parameters.
    pub fn validate(mut self) -> Result<Self> {
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.kind.samples_matrices() {
            if self.reps == 0 {
                return Err(Error::Config("reps must be at least 1".into()));
            }
            if self.n == 0 {
                return Err(Error::Config("n must be at least 1".into()));
            }
        }
        for key in self.kind.required_params() {
            if !self.params.contains_key(*key) {
                return Err(Error::Config(format!(
                    "{} requires parameter '{key}' (pass --param {key}=<value>)",
                    self.kind
                )));
            }
        }
        let known: Vec<&str> = self
            .kind
            .required_params()
            .iter()
            .copied()
            .chain(self.kind.default_params().iter().map(|(k, _)| *k))
            .collect();
        if let Some(bad) = self.params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::Config(format!(
                "unknown parameter '{bad}' for {}; known: {}",
                self.kind,
                known.join(", ")
            )));
        }
        for (k, v) in self.kind.default_params() {
            self.params.entry(k.to_string()).or_insert_with(|| v.to_string());
        }
        Ok(self)
    }

    pub fn param(&self, key: &str) -> Result<&str> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Config(format!("{} requires parameter '{key}'", self.kind)))
    }

    pub fn param_f64(&self, key: &str) -> Result<f64> {
        let v = self.param(key)?;
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::Config(format!("parameter '{key}' must be a finite number, got '{v}'")))
    }

    pub fn param_usize(&self, key: &str) -> Result<usize> {
        let v = self.param(key)?;
        v.parse::<usize>()
            .map_err(|_| Error::Config(format!("parameter '{key}' must be a non-negative integer, got '{v}'")))
    }

    pub fn param_list(&self, key: &str) -> Result<Vec<f64>> {
        self.param(key)?
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("parameter '{key}' must be a comma-separated list of numbers")))
            })
            .collect()
    }

    /// `start:stop:step` grid, inclusive of `stop` up to rounding.
    pub fn param_grid(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.param(key)?;
        let parts: Vec<f64> = v
            .split(':')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("parameter '{key}' must look like start:stop:step, got '{v}'")))?;
        match parts[..] {
            [a, b, h] if h > 0.0 && b >= a && ((b - a) / h) < 1e6 => {
                let steps = ((b - a) / h + 1e-9).floor() as usize;
                Ok((0..=steps).map(|i| a + i as f64 * h).collect())
            }
            _ => Err(Error::Config(format!("parameter '{key}' must look like start:stop:step with step > 0, got '{v}'"))),
        }
    }
}

/// Parses the flat key-value config format:
///
/// ```text
/// # comment
/// [edge-gue]
/// kind = edge-tw
/// n = 400
/// reps = 2000
/// dist = tridiag:2
/// seed = 7
/// tol = 0.08
/// ```
///
/// `kind`, `n`, `reps`, `dist`, `seed` and `workers` fill the fields; every
/// other key becomes a parameter. Returns `(section, config)` pairs in file
/// order, already validated.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, ExperimentConfig)>> {
    let mut sections: Vec<(String, BTreeMap<String, String>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            sections.push((name.trim().to_string(), BTreeMap::new()));
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
        let current = sections
            .last_mut()
            .ok_or_else(|| Error::Config(format!("line {}: key outside a [section]", lineno + 1)))?;
        if current.1.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key '{}'", lineno + 1, k.trim())));
        }
    }
    sections
        .into_iter()
        .map(|(name, mut kv)| {
            let take = |kv: &mut BTreeMap<String, String>, key: &str| kv.remove(key);
            let kind: ExperimentKind = take(&mut kv, "kind")
                .ok_or_else(|| Error::Config(format!("[{name}]: missing 'kind'")))?
                .parse()?;
            let num = |v: Option<String>, key: &str| -> Result<Option<u64>> {
                v.map(|s| s.parse::<u64>().map_err(|_| Error::Config(format!("[{name}]: '{key}' must be an integer"))))
                    .transpose()
            };
            let n = num(take(&mut kv, "n"), "n")?.unwrap_or(0) as usize;
            let reps = num(take(&mut kv, "reps"), "reps")?.unwrap_or(0) as usize;
            let mut cfg = ExperimentConfig::new(kind, n, reps);
            if let Some(d) = take(&mut kv, "dist") {
                cfg.dist = d.parse()?;
            }
            cfg.seed = num(take(&mut kv, "seed"), "seed")?.unwrap_or(0);
            cfg.workers = num(take(&mut kv, "workers"), "workers")?.unwrap_or(1) as usize;
            cfg.params = kv;
            let cfg = cfg.validate().map_err(|e| Error::Config(format!("[{name}]: {e}")))?;
            Ok((name, cfg))
        })
        .collect()
}
