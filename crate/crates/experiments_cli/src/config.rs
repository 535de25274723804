use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use speclab_spectral::Potential;

use crate::error::usage;
use crate::CliError;

/// Flag values backed by an optional JSON config document.
#[derive(Clone, Debug, Default)]
pub struct Resolver {
    map: Map<String, Value>,
}

impl Resolver {
    pub fn from_file(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        let value: Value =
            serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })?;
        match value {
            Value::Object(map) => Ok(Resolver { map }),
            _ => usage(format!("{}: config must be a JSON object", path.display())),
        }
    }

    pub fn from_map(map: Map<String, Value>) -> Self {
        Resolver { map }
    }

    fn raw(&self, key: &str) -> Option<&Value> {
        self.map.get(key).or_else(|| self.map.get(&key.replace('-', "_")))
    }

    /// The flag if given, else the config key of the same name.
    pub fn get<T: DeserializeOwned>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key {key}: {e}"))),
        }
    }

    pub fn req<T: DeserializeOwned>(&self, key: &str, flag: Option<T>) -> Result<T, CliError> {
        match self.get(key, flag)? {
            Some(v) => Ok(v),
            None => usage(format!("missing --{key}")),
        }
    }

    pub fn or<T: DeserializeOwned>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError> {
        Ok(self.get(key, flag)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str, flag: bool) -> Result<bool, CliError> {
        Ok(flag || self.get::<bool>(key, None)?.unwrap_or(false))
    }

    /// A list given either as an array or as a single number.
    pub fn list(&self, key: &str, flag: Option<Vec<f64>>) -> Result<Option<Vec<f64>>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            Some(Value::Number(n)) => Ok(n.as_f64().map(|v| vec![v])),
            _ => self.get(key, None),
        }
    }

    /// `potential` as a name, inline JSON, a JSON file, or a config object.
    pub fn potential(&self, flag: Option<String>) -> Result<Option<Potential>, CliError> {
        let p = match (flag, self.raw("potential")) {
            (Some(text), _) => parse_potential(&text)?,
            (None, Some(Value::String(text))) => parse_potential(text)?,
            (None, Some(v @ Value::Object(_))) => serde_json::from_value(v.clone())
                .map_err(|e| CliError::Usage(format!("config key potential: {e}")))?,
            (None, None | Some(Value::Null)) => return Ok(None),
            (None, Some(_)) => return usage("config key potential must be a string or an object"),
        };
        p.validate().map_err(|e| CliError::Usage(format!("potential: {e}")))?;
        Ok(Some(p))
    }
}

pub fn parse_potential(text: &str) -> Result<Potential, CliError> {
    match text.trim() {
        "q1" | "Q1" => return Ok(Potential::q1()),
        "squarewell" | "square-well" | "square_well" => return Ok(Potential::SquareWell),
        _ => {}
    }
    let body = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        let path = PathBuf::from(text);
        fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?
    };
    serde_json::from_str(&body).map_err(|e| CliError::Usage(format!("potential {text}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderSpec {
    pub l: f64,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_max: f64,
    pub intervals: usize,
}

/// Everything a run depends on, written next to its outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub command: String,
    pub potential: Option<Potential>,
    pub omega: Vec<f64>,
    pub holder: Option<HolderSpec>,
    pub grid: Option<GridSpec>,
    pub seed: u64,
    pub parameters: BTreeMap<String, Value>,
    #[serde(skip)]
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn new(command: &str, experiment: Option<String>, seed: u64, out: PathBuf) -> Self {
        ExperimentConfig {
            experiment: experiment.unwrap_or_else(|| command.to_string()),
            command: command.to_string(),
            potential: None,
            omega: vec![],
            holder: None,
            grid: None,
            seed,
            parameters: BTreeMap::new(),
            out,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.omega.iter().any(|w| !w.is_finite()) {
            return usage("omega values must be finite");
        }
        if self.omega.windows(2).any(|w| w[1] <= w[0]) {
            return usage(format!("omega list must be strictly increasing, got {:?}", self.omega));
        }
        if self.experiment.is_empty() || self.experiment.contains(['/', '\\']) || self.experiment.starts_with('.') {
            return usage(format!("experiment name {:?} is not a plain directory name", self.experiment));
        }
        Ok(())
    }

    pub fn dir(&self) -> PathBuf {
        self.out.join(&self.experiment)
    }
}
