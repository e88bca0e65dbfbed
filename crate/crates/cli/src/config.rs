//! Line-based `key = value` experiment configuration with dotted sections.
//!
//! Every run dumps its resolved configuration next to the traces, so an
//! archived output directory can be re-run verbatim.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use condgrad::error::Error;

/// A resolved experiment configuration: the experiment name plus flat
/// dotted-key settings, in deterministic (sorted) order.
#[derive(Debug, Clone, Default)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    fields: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn named(name: &str) -> Self {
        ExperimentConfig { experiment: Some(name.to_string()), fields: BTreeMap::new() }
    }

    /// Parse the `key = value` format. `#` starts a comment; blank lines
    /// are skipped.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            if key == "experiment" {
                cfg.experiment = Some(value.to_string());
            } else {
                cfg.fields.insert(key.to_string(), value.to_string());
            }
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.fields.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.get(key).map(|s| s.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, Error> {
        match self.fields.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::Config(format!("field `{key}`: not a number: `{v}`"))),
        }
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, Error> {
        match self.fields.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| Error::Config(format!("field `{key}`: not an integer: `{v}`"))),
        }
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, Error> {
        match self.fields.get(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| Error::Config(format!("field `{key}`: not a number list: `{v}`"))),
        }
    }

    /// Serialize in the same format `parse` accepts.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.experiment {
            let _ = writeln!(out, "experiment = {name}");
        }
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let text = "experiment = scalar-quadratic\nrun.seed = 7\nrun.tol = 1e-8\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.experiment.as_deref(), Some("scalar-quadratic"));
        assert_eq!(cfg.get_u64("run.seed").unwrap(), Some(7));
        assert_eq!(ExperimentConfig::parse(&cfg.dump()).unwrap().dump(), cfg.dump());
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let cfg = ExperimentConfig::parse("# note\n\nrun.tol = 0.5 # inline\n").unwrap();
        assert_eq!(cfg.get_f64("run.tol").unwrap(), Some(0.5));
    }

    #[test]
    fn bad_number_names_the_field() {
        let cfg = ExperimentConfig::parse("run.tol = abc\n").unwrap();
        let err = cfg.get_f64("run.tol").unwrap_err();
        assert!(err.to_string().contains("run.tol"));
    }

    #[test]
    fn missing_equals_is_an_error() {
        assert!(ExperimentConfig::parse("just a line\n").is_err());
    }
}
