use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{ConfigError, Configuration, State};
use crate::model::{FeatureId, FeatureModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Selected,
    Deselected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionRecord {
    pub feature: String,
    pub state: Decision,
}

/// Wire form of a [`Configuration`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub model: String,
    #[serde(default)]
    pub decisions: Vec<DecisionRecord>,
}

impl ConfigDocument {
    /// Decisions follow `model`'s declaration order; ids the model does not
    /// know come last, in id order.
    pub fn from_configuration(config: &Configuration, model: &FeatureModel) -> Self {
        let record = |id: &FeatureId, state: State| DecisionRecord {
            feature: id.to_string(),
            state: match state {
                State::Selected => Decision::Selected,
                _ => Decision::Deselected,
            },
        };
        let mut decisions: Vec<_> = model
            .features()
            .iter()
            .filter_map(|f| {
                let s = config.get(f.id.as_str());
                s.is_decided().then(|| record(&f.id, s))
            })
            .collect();
        decisions.extend(
            config
                .decisions()
                .filter(|(id, _)| !model.contains(id.as_str()))
                .map(|(id, s)| record(id, s)),
        );
        ConfigDocument {
            model: config.model_ref().to_string(),
            decisions,
        }
    }

    pub fn into_configuration(self) -> Result<Configuration, ConfigError> {
        let mut config = Configuration::for_model_ref(self.model);
        let mut seen = HashSet::new();
        for d in self.decisions {
            if !FeatureId::is_valid_token(&d.feature) {
                return Err(ConfigError::Document(format!("invalid feature id `{}`", d.feature)));
            }
            if !seen.insert(d.feature.clone()) {
                return Err(ConfigError::Document(format!(
                    "feature `{}` is decided more than once",
                    d.feature
                )));
            }
            let state = match d.state {
                Decision::Selected => State::Selected,
                Decision::Deselected => State::Deselected,
            };
            config.set(&d.feature, state);
        }
        Ok(config)
    }
}

pub fn parse_config(document: &str) -> Result<Configuration, ConfigError> {
    let doc: ConfigDocument = serde_json::from_str(document).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_configuration()
}

pub fn serialize_config(config: &Configuration, model: &FeatureModel) -> String {
    let doc = ConfigDocument::from_configuration(config, model);
    let mut out = serde_json::to_string_pretty(&doc).expect("configuration documents always serialize");
    out.push('\n');
    out
}
