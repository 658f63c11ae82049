//! Run configuration: a TOML file with a `[run]` table and one optional
//! table per scenario, overlaid by command-line flags.
//!
//! ```toml
//! [run]
//! seed = 7
//! out = "results"
//! scenarios = ["fejer", "disk13"]
//!
//! [fejer]
//! grid = 4096
//! schedule = [8, 16, 32, 64, 128, 256]
//! tol = 1e-2
//! ```
//!
//! Unknown tables and keys are rejected, and so is any key the selected
//! scenario does not read.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::scenarios::{self, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("unknown scenario `{0}` (see --list)")]
    UnknownScenario(String),
    #[error("scenario `{scenario}` does not use key `{key}`")]
    UnusedKey { scenario: &'static str, key: &'static str },
    #[error("scenario `{scenario}`: {message}")]
    Invalid { scenario: &'static str, message: String },
    #[error("scenario `{0}` selected twice")]
    Duplicate(String),
}

/// Per-scenario overrides as they appear in the file. Every field is
/// optional; absent fields keep the scenario default.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Sample count: circle grid `M`, real-line grid `G`, or circle angles.
    pub grid: Option<usize>,
    /// Half-width `L` of the real-line window.
    pub half_width: Option<f64>,
    /// Tail tolerance of the real-line grid.
    pub tail: Option<f64>,
    /// Matrix size.
    pub dim: Option<usize>,
    /// Number of seeded cases.
    pub cases: Option<usize>,
    /// Degree cap for random polynomials and band-limited signals.
    pub degree: Option<usize>,
    /// Random starts of the disk-algebra search.
    pub starts: Option<usize>,
    /// Exponents of `Lp` or Schatten norms; `inf` is written as a string.
    pub p: Option<Vec<PValue>>,
    /// Net indices, strictly increasing.
    pub schedule: Option<Vec<usize>>,
    pub tol: Option<f64>,
    /// Poisson radii.
    pub radii: Option<Vec<f64>>,
    /// Relative division floor.
    pub floor: Option<f64>,
    /// Noise standard deviation.
    pub sigma: Option<f64>,
}

/// A `p` entry: a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PValue {
    Finite(f64),
    Named(PName),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub enum PName {
    #[serde(rename = "inf")]
    Inf,
}

impl PValue {
    pub fn value(self) -> f64 {
        match self {
            PValue::Finite(p) => p,
            PValue::Named(PName::Inf) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub scenarios: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub run: RunSection,
    pub fejer: Option<Overrides>,
    #[serde(rename = "wiener-division")]
    pub wiener_division: Option<Overrides>,
    pub products: Option<Overrides>,
    #[serde(rename = "um-net")]
    pub um_net: Option<Overrides>,
    pub schatten: Option<Overrides>,
    #[serde(rename = "pure-state")]
    pub pure_state: Option<Overrides>,
    #[serde(rename = "c0-interior")]
    pub c0_interior: Option<Overrides>,
    pub disk13: Option<Overrides>,
    pub deconv: Option<Overrides>,
    pub tdz: Option<Overrides>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    fn overrides(&self, s: Scenario) -> Option<&Overrides> {
        match s {
            Scenario::Fejer => self.fejer.as_ref(),
            Scenario::WienerDivision => self.wiener_division.as_ref(),
            Scenario::Products => self.products.as_ref(),
            Scenario::UmNet => self.um_net.as_ref(),
            Scenario::Schatten => self.schatten.as_ref(),
            Scenario::PureState => self.pure_state.as_ref(),
            Scenario::C0Interior => self.c0_interior.as_ref(),
            Scenario::Disk13 => self.disk13.as_ref(),
            Scenario::Deconv => self.deconv.as_ref(),
            Scenario::Tdz => self.tdz.as_ref(),
        }
    }
}

/// Resolved parameters. Scenarios read only the fields listed by
/// [`Scenario::keys`].
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub grid: usize,
    pub half_width: f64,
    pub tail: f64,
    pub dim: usize,
    pub cases: usize,
    pub degree: usize,
    pub starts: usize,
    pub p: Vec<f64>,
    pub schedule: Vec<usize>,
    pub tol: f64,
    pub radii: Vec<f64>,
    pub floor: f64,
    pub sigma: f64,
}

/// Everything one scenario run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Already mixed with the scenario name.
    pub seed: u64,
    pub out: PathBuf,
    pub params: Params,
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub scenarios: Vec<String>,
}

pub const DEFAULT_SEED: u64 = 0x00a1_2024;
pub const DEFAULT_OUT: &str = "ainv-results";

/// Combines file and flags into one config per selected scenario, in
/// registry order unless the selection names them explicitly.
pub fn resolve(file: &ConfigFile, flags: &FlagOverrides) -> Result<Vec<ScenarioConfig>, ConfigError> {
    let seed = flags.seed.or(file.run.seed).unwrap_or(DEFAULT_SEED);
    let out = flags
        .out
        .clone()
        .or_else(|| file.run.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let names: Vec<String> = if !flags.scenarios.is_empty() {
        flags.scenarios.clone()
    } else if let Some(list) = &file.run.scenarios {
        list.clone()
    } else {
        Scenario::ALL.iter().map(|s| s.name().to_owned()).collect()
    };
    if names.is_empty() {
        return Err(ConfigError::Invalid {
            scenario: "run",
            message: "no scenarios selected".into(),
        });
    }
    let mut selected: Vec<Scenario> = Vec::new();
    for name in &names {
        let s = Scenario::from_name(name).ok_or_else(|| ConfigError::UnknownScenario(name.clone()))?;
        if selected.contains(&s) {
            return Err(ConfigError::Duplicate(name.clone()));
        }
        selected.push(s);
    }
    selected
        .into_iter()
        .map(|s| {
            let params = apply(s, scenarios::defaults(s), file.overrides(s))?;
            validate(s, &params)?;
            Ok(ScenarioConfig {
                scenario: s,
                seed: seed ^ ainv_core::rng::stable_hash(s.name().as_bytes()),
                out: out.clone(),
                params,
            })
        })
        .collect()
}

fn apply(s: Scenario, mut p: Params, o: Option<&Overrides>) -> Result<Params, ConfigError> {
    let Some(o) = o else { return Ok(p) };
    let allowed = s.keys();
    let set = |key: &'static str, present: bool| -> Result<bool, ConfigError> {
        if present && !allowed.contains(&key) {
            return Err(ConfigError::UnusedKey {
                scenario: s.name(),
                key,
            });
        }
        Ok(present)
    };
    if set("grid", o.grid.is_some())? {
        p.grid = o.grid.unwrap();
    }
    if set("half_width", o.half_width.is_some())? {
        p.half_width = o.half_width.unwrap();
    }
    if set("tail", o.tail.is_some())? {
        p.tail = o.tail.unwrap();
    }
    if set("dim", o.dim.is_some())? {
        p.dim = o.dim.unwrap();
    }
    if set("cases", o.cases.is_some())? {
        p.cases = o.cases.unwrap();
    }
    if set("degree", o.degree.is_some())? {
        p.degree = o.degree.unwrap();
    }
    if set("starts", o.starts.is_some())? {
        p.starts = o.starts.unwrap();
    }
    if set("p", o.p.is_some())? {
        p.p = o.p.as_ref().unwrap().iter().map(|v| v.value()).collect();
    }
    if set("schedule", o.schedule.is_some())? {
        p.schedule = o.schedule.clone().unwrap();
    }
    if set("tol", o.tol.is_some())? {
        p.tol = o.tol.unwrap();
    }
    if set("radii", o.radii.is_some())? {
        p.radii = o.radii.clone().unwrap();
    }
    if set("floor", o.floor.is_some())? {
        p.floor = o.floor.unwrap();
    }
    if set("sigma", o.sigma.is_some())? {
        p.sigma = o.sigma.unwrap();
    }
    Ok(p)
}

fn validate(s: Scenario, p: &Params) -> Result<(), ConfigError> {
    let bad = |message: String| ConfigError::Invalid {
        scenario: s.name(),
        message,
    };
    let keys = s.keys();
    let uses = |k: &str| keys.contains(&k);
    for (key, v) in [
        ("grid", p.grid),
        ("dim", p.dim),
        ("cases", p.cases),
        ("degree", p.degree),
        ("starts", p.starts),
    ] {
        if uses(key) && v == 0 {
            return Err(bad(format!("`{key}` must be positive")));
        }
    }
    for (key, v) in [
        ("half_width", p.half_width),
        ("tail", p.tail),
        ("tol", p.tol),
        ("floor", p.floor),
    ] {
        if uses(key) && !(v.is_finite() && v > 0.0) {
            return Err(bad(format!("`{key}` must be positive and finite, got {v}")));
        }
    }
    if uses("sigma") && !(p.sigma.is_finite() && p.sigma >= 0.0) {
        return Err(bad(format!("`sigma` must be non-negative, got {}", p.sigma)));
    }
    if uses("schedule") {
        if p.schedule.is_empty() {
            return Err(bad("schedule is empty".into()));
        }
        if p.schedule[0] == 0 {
            return Err(bad("net indices start at 1".into()));
        }
        if let Some(w) = p.schedule.windows(2).find(|w| w[1] <= w[0]) {
            return Err(bad(format!(
                "schedule must be strictly increasing ({} after {})",
                w[1], w[0]
            )));
        }
    }
    if uses("p") {
        if p.p.is_empty() {
            return Err(bad("`p` list is empty".into()));
        }
        if let Some(x) = p.p.iter().find(|&&x| x.is_nan() || x < 1.0) {
            return Err(bad(format!("exponents must be at least 1, got {x}")));
        }
    }
    if uses("radii") {
        if p.radii.is_empty() {
            return Err(bad("`radii` list is empty".into()));
        }
        if let Some(r) = p.radii.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(bad(format!("Poisson radii lie in (0, 1), got {r}")));
        }
    }
    scenarios::validate_extra(s, p).map_err(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ConfigFile, toml::de::Error> {
        toml::from_str(text)
    }

    #[test]
    fn empty_file_selects_everything_in_order() {
        let cfgs = resolve(&ConfigFile::default(), &FlagOverrides::default()).unwrap();
        let names: Vec<_> = cfgs.iter().map(|c| c.scenario.name()).collect();
        let all: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
        assert_eq!(names, all);
        assert!(cfgs.iter().all(|c| c.out == Path::new(DEFAULT_OUT)));
    }

    #[test]
    fn flags_override_the_file() {
        let file = parse("[run]\nseed = 3\nout = \"a\"\nscenarios = [\"tdz\"]\n").unwrap();
        let flags = FlagOverrides {
            seed: Some(4),
            out: Some("b".into()),
            scenarios: vec!["fejer".into(), "deconv".into()],
        };
        let cfgs = resolve(&file, &flags).unwrap();
        assert_eq!(cfgs.len(), 2);
        assert_eq!(cfgs[0].scenario, Scenario::Fejer);
        assert_eq!(cfgs[0].out, Path::new("b"));
        assert_eq!(cfgs[0].seed, 4 ^ ainv_core::rng::stable_hash(b"fejer"));
        let cfgs = resolve(&file, &FlagOverrides::default()).unwrap();
        assert_eq!(cfgs[0].scenario, Scenario::Tdz);
        assert_eq!(cfgs[0].seed, 3 ^ ainv_core::rng::stable_hash(b"tdz"));
    }

    #[test]
    fn sections_override_defaults() {
        let file = parse("[fejer]\nschedule = [4, 8]\ntol = 0.5\n[deconv]\np = [1, 2.5, \"inf\"]\n").unwrap();
        let flags = FlagOverrides {
            scenarios: vec!["fejer".into(), "deconv".into()],
            ..Default::default()
        };
        let cfgs = resolve(&file, &flags).unwrap();
        assert_eq!(cfgs[0].params.schedule, vec![4, 8]);
        assert_eq!(cfgs[0].params.tol, 0.5);
        assert_eq!(cfgs[1].params.p, vec![1.0, 2.5, f64::INFINITY]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse("[fejer]\nbogus = 1\n").is_err());
        assert!(parse("[nonsense]\n").is_err());
        assert!(parse("[run]\nseed = -1\n").is_err());
        assert!(parse("[deconv]\np = [\"two\"]\n").is_err());
        let only = |name: &str| FlagOverrides {
            scenarios: vec![name.into()],
            ..Default::default()
        };
        let empty = parse("[fejer]\nschedule = []\n").unwrap();
        assert!(matches!(
            resolve(&empty, &only("fejer")),
            Err(ConfigError::Invalid { .. })
        ));
        let unsorted = parse("[fejer]\nschedule = [8, 8]\n").unwrap();
        assert!(resolve(&unsorted, &only("fejer")).is_err());
        let unused = parse("[fejer]\nstarts = 3\n").unwrap();
        assert!(matches!(
            resolve(&unused, &only("fejer")),
            Err(ConfigError::UnusedKey { key: "starts", .. })
        ));
        assert!(matches!(
            resolve(&ConfigFile::default(), &only("nope")),
            Err(ConfigError::UnknownScenario(_))
        ));
        let twice = FlagOverrides {
            scenarios: vec!["tdz".into(), "tdz".into()],
            ..Default::default()
        };
        assert!(matches!(
            resolve(&ConfigFile::default(), &twice),
            Err(ConfigError::Duplicate(_))
        ));
        let radii = parse("[wiener-division]\nradii = [1.0]\n").unwrap();
        assert!(resolve(&radii, &only("wiener-division")).is_err());
        let none = parse("[run]\nscenarios = []\n").unwrap();
        assert!(resolve(&none, &FlagOverrides::default()).is_err());
    }
}
