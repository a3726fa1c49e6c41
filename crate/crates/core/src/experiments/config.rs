use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MODEL_KEYS;

/// Per-graph quantity recorded by a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Nodes,
    Edges,
    MeanDegree,
    MaxDegree,
    Components,
    LargestSize,
    LargestFraction,
    Clustering,
    /// 1 if a component joins the two faces orthogonal to the first axis.
    Crossing,
    /// Hill estimate of the degree tail exponent.
    TailTau,
}

impl Observable {
    pub const ALL: [Observable; 10] = [
        Observable::Nodes,
        Observable::Edges,
        Observable::MeanDegree,
        Observable::MaxDegree,
        Observable::Components,
        Observable::LargestSize,
        Observable::LargestFraction,
        Observable::Clustering,
        Observable::Crossing,
        Observable::TailTau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Nodes => "nodes",
            Observable::Edges => "edges",
            Observable::MeanDegree => "mean_degree",
            Observable::MaxDegree => "max_degree",
            Observable::Components => "components",
            Observable::LargestSize => "largest_size",
            Observable::LargestFraction => "largest_fraction",
            Observable::Clustering => "clustering",
            Observable::Crossing => "crossing",
            Observable::TailTau => "tail_tau",
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Observable::ALL.iter().map(|o| o.name()).collect();
                Error::Config(format!(
                    "unknown observable `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

impl std::fmt::Display for Observable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A parameter sweep: fixed model keys, grid axes, replicates and outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Model keys shared by every grid point.
    pub fixed: BTreeMap<String, String>,
    /// Values per swept key; grid points are the Cartesian product.
    pub grid: BTreeMap<String, Vec<String>>,
    pub replicates: usize,
    pub seed: u64,
    pub observables: Vec<Observable>,
    /// Output prefix; the sweep writes `<out>.csv` and `<out>.summary.json`.
    pub out: PathBuf,
    /// Fill the `walltime_ms` column. Off by default so that reruns are
    /// byte-identical.
    pub timing: bool,
}

pub const CONFIG_KEYS: &[&str] = &["observables", "out", "replicates", "seed", "timing"];

impl ExperimentConfig {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// `grid.<key> = v1, v2, ...` declares a grid axis.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let k = k.trim().to_string();
            if map.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{k}`",
                    i + 1
                )));
            }
        }
        Self::from_map(map)
    }

    pub fn from_map(map: BTreeMap<String, String>) -> Result<Self> {
        let mut fixed = BTreeMap::new();
        let mut grid = BTreeMap::new();
        let mut replicates = 1;
        let mut seed = None;
        let mut observables = vec![Observable::LargestFraction];
        let mut out = None;
        let mut timing = false;
        for (k, v) in map {
            if let Some(param) = k.strip_prefix("grid.") {
                if !MODEL_KEYS.contains(&param) {
                    return Err(Error::Config(format!(
                        "`{k}`: `{param}` is not a model key"
                    )));
                }
                let values: Vec<String> = v.split(',').map(|s| s.trim().to_string()).collect();
                if values.iter().any(String::is_empty) {
                    return Err(Error::Config(format!("`{k}`: empty grid value")));
                }
                grid.insert(param.to_string(), values);
                continue;
            }
            match k.as_str() {
                "replicates" => replicates = parse_value(&k, &v)?,
                "seed" => seed = Some(parse_value(&k, &v)?),
                "out" => out = Some(PathBuf::from(v)),
                "timing" => timing = parse_value(&k, &v)?,
                "observables" => {
                    observables = v
                        .split(',')
                        .map(|s| s.trim().parse())
                        .collect::<Result<_>>()?;
                }
                key if MODEL_KEYS.contains(&key) => {
                    fixed.insert(k, v);
                }
                _ => return Err(Error::Config(format!("unknown key `{k}`"))),
            }
        }
        if let Some(k) = grid.keys().find(|k| fixed.contains_key(*k)) {
            return Err(Error::Config(format!("`{k}` is both fixed and swept")));
        }
        let config = Self {
            fixed,
            grid,
            replicates,
            seed: seed.ok_or_else(|| Error::Config("missing `seed`".into()))?,
            observables,
            out: out.ok_or_else(|| Error::Config("missing `out`".into()))?,
            timing,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("`replicates` must be at least 1".into()));
        }
        if self.observables.is_empty() {
            return Err(Error::Config("no observables".into()));
        }
        if !self.fixed.contains_key("model") && !self.grid.contains_key("model") {
            return Err(Error::Config("missing `model`".into()));
        }
        Ok(())
    }

    pub fn num_points(&self) -> usize {
        self.grid.values().map(Vec::len).product()
    }

    /// Parameter map of grid point `index`; the last axis (alphabetically)
    /// varies fastest.
    pub fn point(&self, index: usize) -> BTreeMap<String, String> {
        let mut params = self.fixed.clone();
        let mut rest = index;
        for (k, values) in self.grid.iter().rev() {
            params.insert(k.clone(), values[rest % values.len()].clone());
            rest /= values.len();
        }
        params
    }

    /// Parameter columns of the CSV, alphabetical.
    pub fn param_columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.fixed.keys().chain(self.grid.keys()).cloned().collect();
        cols.sort();
        cols
    }

    /// Flat key-value form accepted by [`ExperimentConfig::from_map`].
    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut map = self.fixed.clone();
        for (k, v) in &self.grid {
            map.insert(format!("grid.{k}"), v.join(","));
        }
        map.insert("replicates".into(), self.replicates.to_string());
        map.insert("seed".into(), self.seed.to_string());
        map.insert("out".into(), self.out.display().to_string());
        map.insert("timing".into(), self.timing.to_string());
        let obs: Vec<_> = self.observables.iter().map(|o| o.name()).collect();
        map.insert("observables".into(), obs.join(","));
        map
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse()
        .map_err(|e| Error::Config(format!("`{key}` = `{v}`: {e}")))
}
