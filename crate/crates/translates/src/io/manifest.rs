use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{write_json, IoError};

/// Record of one command-line run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
    pub timings_ms: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        RunManifest {
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, path: &Path) -> &mut Self {
        self.inputs.push(path.display().to_string());
        self
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) -> &mut Self {
        self.parameters
            .insert(name.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.display().to_string());
        self
    }

    pub fn timing(&mut self, stage: &str, d: Duration) -> &mut Self {
        self.timings_ms.insert(stage.to_string(), d.as_secs_f64() * 1e3);
        self
    }

    pub fn verdict(&mut self, stage: &str, v: impl Into<String>) -> &mut Self {
        self.verdicts.insert(stage.to_string(), v.into());
        self
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        write_json(path, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_serialize_in_sorted_order() {
        let mut m = RunManifest::new("separate");
        m.param("seeds", 16).param("margin", 0.01).verdict("separation", "Separated");
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.find("\"margin\"").unwrap() < s.find("\"seeds\"").unwrap());
        let back: RunManifest = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
