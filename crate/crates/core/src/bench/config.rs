//! Flat `key = value` experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::solvers::Algorithm;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Qp,
    DOptimal,
    Interpolation,
    Custom,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qp" => Ok(Self::Qp),
            "doptimal" | "d-optimal" | "d_optimal" => Ok(Self::DOptimal),
            "interpolation" => Ok(Self::Interpolation),
            "custom" => Ok(Self::Custom),
            other => Err(Error::Config(format!("unknown experiment '{other}'"))),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Qp => "qp",
            Self::DOptimal => "doptimal",
            Self::Interpolation => "interpolation",
            Self::Custom => "custom",
        })
    }
}

/// Design matrix used by the D-optimal experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Design {
    Gaussian,
    /// `Y = I`, so that `G(x) = sum log x_i`.
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub iterations: usize,
    pub lambda: f64,
    pub sigma: f64,
    pub budget: f64,
    pub output_dir: PathBuf,
    /// Fixed step size. Required by the interpolation experiment.
    pub step: Option<f64>,
    /// Run the solvers in their theoretical schedule with this epsilon
    /// instead of the fixed-iteration experiment schedule.
    pub epsilon: Option<f64>,
    pub design: Design,
    pub grid_side: usize,
    /// Instance file for custom runs, relative to the config file.
    pub instance: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            n: None,
            m: None,
            seeds: vec![0],
            algorithms: Algorithm::ALL.to_vec(),
            iterations: 50,
            lambda: 0.5,
            sigma: 0.04,
            budget: 25.0,
            output_dir: PathBuf::from("."),
            step: None,
            epsilon: None,
            design: Design::Gaussian,
            grid_side: 20,
            instance: None,
        }
    }

    /// Parses a config file. Blank lines and `#` comments are ignored; the
    /// `experiment` key is mandatory. Relative `instance` and `output_dir`
    /// paths are resolved against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key = value, got '{line}'"),
            })?;
            pairs.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let kind = pairs
            .iter()
            .find(|(_, k, _)| k == "experiment")
            .ok_or_else(|| Error::Config("missing 'experiment' key".into()))?;
        let mut cfg = Self::new(kind.2.parse().map_err(|e: Error| Error::Parse {
            line: kind.0,
            msg: e.to_string(),
        })?);
        for (line, k, v) in &pairs {
            cfg.set(k, v).map_err(|e| Error::Parse {
                line: *line,
                msg: e.to_string(),
            })?;
        }
        if let Some(base) = base {
            if let Some(p) = &cfg.instance {
                if p.is_relative() {
                    cfg.instance = Some(base.join(p));
                }
            }
            if cfg.output_dir.is_relative() && pairs.iter().any(|(_, k, _)| k == "output_dir") {
                cfg.output_dir = base.join(&cfg.output_dir);
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    /// Sets one key; used by the parser and for command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "experiment" => self.experiment = v.parse()?,
            "n" => self.n = Some(parse_num(key, v)?),
            "m" => self.m = Some(parse_num(key, v)?),
            "seed" => self.seeds = vec![parse_num(key, v)?],
            "seeds" => self.seeds = parse_seeds(v)?,
            "algorithms" | "algo" => self.algorithms = parse_algorithms(v)?,
            "iterations" => self.iterations = parse_num(key, v)?,
            "lambda" => self.lambda = parse_num(key, v)?,
            "sigma" => self.sigma = parse_num(key, v)?,
            "budget" => self.budget = parse_num(key, v)?,
            "output_dir" | "out" => self.output_dir = PathBuf::from(v),
            "step" => self.step = Some(parse_num(key, v)?),
            "epsilon" => self.epsilon = Some(parse_num(key, v)?),
            "design" => {
                self.design = match v {
                    "gaussian" => Design::Gaussian,
                    "identity" => Design::Identity,
                    _ => return Err(Error::Config(format!("unknown design '{v}'"))),
                }
            }
            "grid_side" => self.grid_side = parse_num(key, v)?,
            "instance" => self.instance = Some(PathBuf::from(v)),
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Checks the fields the selected experiment needs.
    pub fn validate(&self) -> Result<()> {
        let need = |v: Option<usize>, name: &str| match v {
            Some(x) if x > 0 => Ok(x),
            _ => Err(Error::Config(format!(
                "'{name}' must be a positive integer"
            ))),
        };
        if self.seeds.is_empty() {
            return Err(Error::Config("no seeds given".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms given".into()));
        }
        if self.iterations == 0 && self.epsilon.is_none() {
            return Err(Error::Config("'iterations' must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::Config(format!(
                "lambda {} outside [0, 1]",
                self.lambda
            )));
        }
        match self.experiment {
            ExperimentKind::Qp => {
                need(self.n, "n")?;
                need(self.m, "m")?;
            }
            ExperimentKind::DOptimal => {
                need(self.n, "n")?;
            }
            ExperimentKind::Interpolation => {
                if self.step.is_none() {
                    return Err(Error::Config(
                        "the interpolation experiment requires 'step'".into(),
                    ));
                }
                if self.sigma.is_nan() || self.sigma <= 0.0 || self.grid_side < 2 {
                    return Err(Error::Config("need sigma > 0 and grid_side >= 2".into()));
                }
            }
            ExperimentKind::Custom => {
                if self.instance.is_none() {
                    return Err(Error::Config("custom runs require 'instance'".into()));
                }
            }
        }
        Ok(())
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("invalid value '{v}' for '{key}'")))
}

/// `0,1,5` or a half-open range `0..50`.
fn parse_seeds(v: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = v.split_once("..") {
        let a: u64 = parse_num("seeds", a.trim())?;
        let b: u64 = parse_num("seeds", b.trim())?;
        return Ok((a..b).collect());
    }
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num("seeds", s.trim()))
        .collect()
}

fn parse_algorithms(v: &str) -> Result<Vec<Algorithm>> {
    if v.eq_ignore_ascii_case("all") {
        return Ok(Algorithm::ALL.to_vec());
    }
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse())
        .collect()
}
