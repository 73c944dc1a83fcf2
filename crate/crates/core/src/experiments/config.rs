//! Flat `key = value` experiment descriptions.
//!
//! Blank lines and lines starting with `#` are ignored. Recognised keys:
//!
//! | key | value | default |
//! |-----|-------|---------|
//! | `kind` | `connectivity`, `matching`, `giant`, `diameter`, `hamilton`, `mst`, `atsp`, `moments`, `marginals` | required |
//! | `model` | `simplex`, `exponential`, `ball` | `simplex` |
//! | `n` | vertex counts, e.g. `100,300` | required |
//! | `alpha` | `unit`, `bounded:<M>`, `scale:<c>`, `decomposable:<d1,d2,..>`, `row:<b1,b2,..>` | `unit` |
//! | `budget` | simplex budget `L` | `N` |
//! | `rate` | exponential rate | `1` |
//! | `radius` | orthant ball radius | `1` |
//! | `edge` | edge index for `marginals` | `0` |
//! | `trials`, `seed`, `workers`, `out` | run controls | `100`, `0`, `1`, stdout |
//!
//! Exactly one threshold schedule is given for the graph kinds and none for
//! `mst` and `atsp`:
//!
//! | key | thresholds |
//! |-----|------------|
//! | `p` | the listed values |
//! | `p.c` | `(ln n + c) / n` |
//! | `p.eps` | `(1 - eps) p0` and `(1 + eps) p0`, `0 < eps < 1` |
//! | `p.theta` | `n^(theta - 1)` |
//! | `p.scaled` | `c / n` |
//! | `p.sigma` | `c sigma ln(n) / n`, `sigma = max_e sqrt(E X_e^2)` |
//!
//! Real lists are comma separated or generated by `lin:<a>:<b>:<k>` or
//! `geom:<a>:<b>:<k>` (`k` points from `a` to `b` inclusive). Decomposable and
//! row patterns repeat cyclically over the vertices.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::HAMILTON_MAX_N;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Connectivity,
    Matching,
    Giant,
    Diameter,
    Hamilton,
    Mst,
    Atsp,
    Moments,
    Marginals,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::Connectivity,
        ExperimentKind::Matching,
        ExperimentKind::Giant,
        ExperimentKind::Diameter,
        ExperimentKind::Hamilton,
        ExperimentKind::Mst,
        ExperimentKind::Atsp,
        ExperimentKind::Moments,
        ExperimentKind::Marginals,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Connectivity => "connectivity",
            ExperimentKind::Matching => "matching",
            ExperimentKind::Giant => "giant",
            ExperimentKind::Diameter => "diameter",
            ExperimentKind::Hamilton => "hamilton",
            ExperimentKind::Mst => "mst",
            ExperimentKind::Atsp => "atsp",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Marginals => "marginals",
        }
    }

    /// Whether the per-trial outcome is an indicator.
    pub fn is_boolean(self) -> bool {
        matches!(
            self,
            ExperimentKind::Connectivity
                | ExperimentKind::Matching
                | ExperimentKind::Hamilton
                | ExperimentKind::Marginals
        )
    }

    /// Whether trials threshold at some `p` (all kinds except `mst` and `atsp`).
    pub fn uses_threshold(self) -> bool {
        !matches!(self, ExperimentKind::Mst | ExperimentKind::Atsp)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Simplex,
    Exponential,
    Ball,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSpec {
    Unit,
    /// Random weights in `[1/M, M]`.
    Bounded(f64),
    /// Every weight equal to the constant.
    Scale(f64),
    /// `alpha_vw = d_v d_w` with the pattern repeated over the vertices.
    Decomposable(Vec<f64>),
    /// Directed, `alpha_(i,j) = beta_j` with the pattern repeated over the vertices.
    Row(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub alpha: AlphaSpec,
    pub budget: Option<f64>,
    pub rate: f64,
    pub radius: f64,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self { kind: ModelKind::Simplex, alpha: AlphaSpec::Unit, budget: None, rate: 1.0, radius: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    /// Only for `mst` and `atsp`.
    None,
    Explicit(Vec<f64>),
    LogShift(Vec<f64>),
    /// Relative offsets `e`, giving `p = (1 + e) p0`.
    P0Relative(Vec<f64>),
    Power(Vec<f64>),
    Scaled(Vec<f64>),
    Sigma(Vec<f64>),
}

impl Schedule {
    pub fn len(&self) -> usize {
        match self {
            Schedule::None => 1,
            Schedule::Explicit(v)
            | Schedule::LogShift(v)
            | Schedule::P0Relative(v)
            | Schedule::Power(v)
            | Schedule::Scaled(v)
            | Schedule::Sigma(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub model: ModelSpec,
    pub n: Vec<usize>,
    pub schedule: Schedule,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub edge: usize,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Minimal valid configuration; callers fill in the rest.
    pub fn new(kind: ExperimentKind, n: Vec<usize>, schedule: Schedule) -> Self {
        Self {
            kind,
            model: ModelSpec::default(),
            n,
            schedule,
            trials: 100,
            seed: 0,
            workers: 1,
            edge: 0,
            out: None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    /// Checks everything that can be checked without building a model.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind;
        if self.n.is_empty() {
            return Err(Error::config("n list is empty"));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < 2) {
            return Err(Error::config(format!("n = {n} must be at least 2")));
        }
        if self.workers == 0 {
            return Err(Error::config("workers must be at least 1"));
        }
        match (&self.schedule, kind.uses_threshold()) {
            (Schedule::None, true) => {
                return Err(Error::config(format!("kind {kind} needs a threshold schedule")))
            }
            (s, false) if *s != Schedule::None => {
                return Err(Error::config(format!("kind {kind} takes no threshold schedule")))
            }
            _ => {}
        }
        check_schedule(&self.schedule)?;
        let m = &self.model;
        if !(m.rate.is_finite() && m.rate > 0.0) {
            return Err(Error::config(format!("rate = {} must be positive", m.rate)));
        }
        if !(m.radius.is_finite() && m.radius > 0.0) {
            return Err(Error::config(format!("radius = {} must be positive", m.radius)));
        }
        if let Some(b) = m.budget {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::config(format!("budget = {b} must be positive")));
            }
        }
        check_alpha(&m.alpha)?;
        if m.kind != ModelKind::Simplex && (m.alpha != AlphaSpec::Unit || m.budget.is_some()) {
            return Err(Error::config("alpha and budget apply to the simplex model only"));
        }
        if matches!(self.schedule, Schedule::P0Relative(_)) && m.kind != ModelKind::Simplex {
            return Err(Error::config("p.eps needs the simplex model"));
        }
        if matches!(self.schedule, Schedule::LogShift(_))
            && kind == ExperimentKind::Connectivity
            && (m.kind != ModelKind::Simplex || m.alpha != AlphaSpec::Unit || m.budget.is_some())
        {
            return Err(Error::config("the connectivity limit law needs the unit simplex (alpha = unit)"));
        }
        let directed = matches!(m.alpha, AlphaSpec::Row(_));
        match kind {
            ExperimentKind::Mst => {
                if m.kind != ModelKind::Simplex
                    || !matches!(m.alpha, AlphaSpec::Unit | AlphaSpec::Decomposable(_))
                {
                    return Err(Error::config("mst needs the simplex model with alpha = unit or decomposable"));
                }
                if m.budget.is_some() {
                    return Err(Error::config("mst compares against the series at L = N; drop budget"));
                }
            }
            ExperimentKind::Atsp => {
                if m.kind != ModelKind::Simplex
                    || !matches!(m.alpha, AlphaSpec::Unit | AlphaSpec::Row(_))
                {
                    return Err(Error::config("atsp needs the simplex model with alpha = unit or row"));
                }
            }
            _ if directed => {
                return Err(Error::config(format!("kind {kind} works on undirected graphs; row alpha is for atsp")));
            }
            ExperimentKind::Matching => {
                if let Some(n) = self.n.iter().find(|&&n| n % 2 == 1) {
                    return Err(Error::config(format!("matching needs even n, got {n}")));
                }
            }
            ExperimentKind::Hamilton => {
                if let Some(n) = self.n.iter().find(|&&n| n > HAMILTON_MAX_N) {
                    return Err(Error::capacity(format!(
                        "Hamiltonicity search supports n <= {HAMILTON_MAX_N}, got {n}"
                    )));
                }
            }
            ExperimentKind::Marginals => {
                let smallest = *self.n.iter().min().expect("non-empty");
                let dim = smallest * (smallest - 1) / 2;
                if self.edge >= dim {
                    return Err(Error::config(format!("edge {} out of range for n = {smallest}", self.edge)));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn check_alpha(alpha: &AlphaSpec) -> Result<()> {
    let positive = |v: &[f64], what: &str| -> Result<()> {
        if v.is_empty() || v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::config(format!("{what} pattern must be non-empty and positive")));
        }
        Ok(())
    };
    match alpha {
        AlphaSpec::Unit => Ok(()),
        AlphaSpec::Bounded(m) if m.is_finite() && *m >= 1.0 => Ok(()),
        AlphaSpec::Bounded(m) => Err(Error::config(format!("bound M = {m} must be at least 1"))),
        AlphaSpec::Scale(c) if c.is_finite() && *c > 0.0 => Ok(()),
        AlphaSpec::Scale(c) => Err(Error::config(format!("scale {c} must be positive"))),
        AlphaSpec::Decomposable(d) => positive(d, "decomposable"),
        AlphaSpec::Row(b) => positive(b, "row"),
    }
}

fn check_schedule(schedule: &Schedule) -> Result<()> {
    let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
    match schedule {
        Schedule::None => Ok(()),
        Schedule::Explicit(v) | Schedule::Scaled(v) | Schedule::Sigma(v) => {
            if v.is_empty() || v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(Error::config("threshold list must be non-empty and positive"));
            }
            Ok(())
        }
        Schedule::LogShift(v) if !v.is_empty() && finite(v) => Ok(()),
        Schedule::LogShift(_) => Err(Error::config("p.c list must be non-empty and finite")),
        Schedule::P0Relative(v) => {
            if v.is_empty() || v.iter().any(|e| !(e.abs() > 0.0 && e.abs() < 1.0)) {
                return Err(Error::config("p.eps needs 0 < eps < 1"));
            }
            Ok(())
        }
        Schedule::Power(v) => {
            if v.is_empty() || v.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
                return Err(Error::config("p.theta needs 0 < theta <= 1"));
            }
            Ok(())
        }
    }
}

/// Parses `1,2,3`, `lin:a:b:k` or `geom:a:b:k`.
pub fn parse_real_list(value: &str) -> Result<Vec<f64>> {
    let bad = || Error::config(format!("bad number list {value:?}"));
    if let Some(rest) = value.strip_prefix("lin:").or_else(|| value.strip_prefix("geom:")) {
        let geometric = value.starts_with("geom:");
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let k: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if k == 0 || (geometric && !(a > 0.0 && b > 0.0)) {
            return Err(bad());
        }
        if k == 1 {
            return Ok(vec![a]);
        }
        let step = |i: usize| i as f64 / (k - 1) as f64;
        return Ok((0..k)
            .map(|i| if geometric { a * (b / a).powf(step(i)) } else { a + (b - a) * step(i) })
            .collect());
    }
    value.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn parse_usize_list(value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::config(format!("bad integer list {value:?}")))
        })
        .collect()
}

fn parse_alpha(value: &str) -> Result<AlphaSpec> {
    let (head, arg) = value.split_once(':').unwrap_or((value, ""));
    let number = || {
        arg.trim()
            .parse::<f64>()
            .map_err(|_| Error::config(format!("bad alpha {value:?}")))
    };
    match head.trim() {
        "unit" if arg.is_empty() => Ok(AlphaSpec::Unit),
        "bounded" => Ok(AlphaSpec::Bounded(number()?)),
        "scale" => Ok(AlphaSpec::Scale(number()?)),
        "decomposable" => Ok(AlphaSpec::Decomposable(parse_real_list(arg)?)),
        "row" => Ok(AlphaSpec::Row(parse_real_list(arg)?)),
        _ => Err(Error::config(format!("bad alpha {value:?}"))),
    }
}

fn parse_scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("bad value {value:?} for {key}")))
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Error::config(format!("duplicate key {key}")));
            }
        }
        let kind: ExperimentKind = entries
            .remove("kind")
            .ok_or_else(|| Error::config("missing key kind"))?
            .parse()?;
        let n = parse_usize_list(&entries.remove("n").ok_or_else(|| Error::config("missing key n"))?)?;
        let mut schedule = Schedule::None;
        for key in ["p", "p.c", "p.eps", "p.theta", "p.scaled", "p.sigma"] {
            if let Some(v) = entries.remove(key) {
                if schedule != Schedule::None {
                    return Err(Error::config("give exactly one threshold schedule"));
                }
                let list = parse_real_list(&v)?;
                schedule = match key {
                    "p" => Schedule::Explicit(list),
                    "p.c" => Schedule::LogShift(list),
                    "p.eps" => Schedule::P0Relative(list.iter().flat_map(|&e| [-e, e]).collect()),
                    "p.theta" => Schedule::Power(list),
                    "p.scaled" => Schedule::Scaled(list),
                    _ => Schedule::Sigma(list),
                };
            }
        }
        let mut config = ExperimentConfig::new(kind, n, schedule);
        for (key, value) in entries {
            let v = value.as_str();
            match key.as_str() {
                "model" => {
                    config.model.kind = match v {
                        "simplex" => ModelKind::Simplex,
                        "exponential" => ModelKind::Exponential,
                        "ball" => ModelKind::Ball,
                        _ => return Err(Error::config(format!("unknown model {v:?}"))),
                    }
                }
                "alpha" => config.model.alpha = parse_alpha(v)?,
                "budget" => config.model.budget = Some(parse_scalar(&key, v)?),
                "rate" => config.model.rate = parse_scalar(&key, v)?,
                "radius" => config.model.radius = parse_scalar(&key, v)?,
                "edge" => config.edge = parse_scalar(&key, v)?,
                "trials" => config.trials = parse_scalar(&key, v)?,
                "seed" => config.seed = parse_scalar(&key, v)?,
                "workers" => config.workers = parse_scalar(&key, v)?,
                "out" => config.out = Some(PathBuf::from(v)),
                _ => return Err(Error::config(format!("unknown key {key}"))),
            }
        }
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_file() {
        let c: ExperimentConfig = "
            # connectivity near the threshold
            kind = connectivity
            n = 1000
            p.c = -2, 0, 2
            trials = 50
            seed = 7
            workers = 2
            out = run.csv
        "
        .parse()
        .unwrap();
        assert_eq!(c.kind, ExperimentKind::Connectivity);
        assert_eq!(c.n, vec![1000]);
        assert_eq!(c.schedule, Schedule::LogShift(vec![-2.0, 0.0, 2.0]));
        assert_eq!((c.trials, c.seed, c.workers), (50, 7, 2));
        assert_eq!(c.out, Some(PathBuf::from("run.csv")));
        assert_eq!(c.model, ModelSpec::default());
    }

    #[test]
    fn eps_expands_to_both_sides() {
        let c: ExperimentConfig = "kind=connectivity\nn=100\np.eps=0.3\nalpha=bounded:1.5".parse().unwrap();
        assert_eq!(c.schedule, Schedule::P0Relative(vec![-0.3, 0.3]));
        assert_eq!(c.model.alpha, AlphaSpec::Bounded(1.5));
    }

    #[test]
    fn generated_lists() {
        let v = parse_real_list("geom:0.1:10:3").unwrap();
        assert!((v[0] - 0.1).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-12 && (v[2] - 10.0).abs() < 1e-12);
        assert_eq!(parse_real_list("lin:0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_real_list("geom:0:1:3").is_err());
        assert!(parse_real_list("lin:0:1").is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            "n=10\np=0.1",
            "kind=connectivity\np=0.1",
            "kind=bogus\nn=10\np=0.1",
            "kind=connectivity\nn=10",
            "kind=connectivity\nn=10\np=0.1\np.c=0",
            "kind=connectivity\nn=10\np=0.1\ncolour=red",
            "kind=connectivity\nn=10\np=0.1\nn=20",
            "kind=connectivity\nn=10\np.eps=0",
            "kind=connectivity\nn=10\np.eps=1.5",
            "kind=connectivity\nn=10\np.c=0\nalpha=scale:2",
            "kind=connectivity\nn=10\np=-1",
            "kind=connectivity\nn=1\np=0.1",
            "kind=matching\nn=11\np=0.1",
            "kind=mst\nn=10\np=0.1",
            "kind=mst\nn=10\nalpha=bounded:2",
            "kind=atsp\nn=10\nalpha=decomposable:1",
            "kind=giant\nn=10\np=0.1\nalpha=row:1",
            "kind=giant\nn=10\np=0.1\nmodel=ball\nalpha=scale:2",
            "kind=giant\nn=10\np=0.1\nworkers=0",
            "kind=giant\nn=10\np=0.1\ntrials=-3",
            "kind=marginals\nn=4\np=0.1\nedge=6",
            "kind=giant\nn=10\np.eps=0.2\nmodel=exponential",
            "just some text",
        ];
        for text in cases {
            let err = text.parse::<ExperimentConfig>().unwrap_err();
            assert!(matches!(err, Error::Config(_)), "{text:?} gave {err:?}");
        }
    }

    #[test]
    fn hamilton_size_is_a_capacity_error() {
        let err = "kind=hamilton\nn=30\np=0.5".parse::<ExperimentConfig>().unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
        assert!("kind=hamilton\nn=24\np=0.5".parse::<ExperimentConfig>().is_ok());
    }
}
