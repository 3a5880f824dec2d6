//! Ternary configurations over a [`FeatureModel`]: validation, unit
//! propagation, exhaustive enumeration and product counting.
//!
//! Every feature of a configuration is [`State::Selected`],
//! [`State::Deselected`] or [`State::Undecided`]. [`Mode::Partial`] treats
//! undecided features as open; [`Mode::Complete`] requires an explicit
//! decision for every feature.

mod document;
mod enumerate;
mod propagate;
mod rules;

pub use document::{parse_config, serialize_config, ConfigDocument, Decision, DecisionRecord};
pub use enumerate::{count_products, enumerate, for_each_completion, Enumeration, MAX_ENUMERABLE_FEATURES, UNBOUNDED};
pub use propagate::{propagate, Forced, PropagationResult};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FeatureId, FeatureModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("configuration does not belong to model `{model}`: {reason}")]
    ModelMismatch { model: String, reason: String },
    #[error("model has {features} features; exhaustive search supports at most {limit}")]
    ModelTooLarge { features: usize, limit: usize },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid configuration document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum State {
    Selected,
    Deselected,
    Undecided,
}

impl State {
    pub fn is_decided(self) -> bool {
        self != State::Undecided
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            State::Selected => "selected",
            State::Deselected => "deselected",
            State::Undecided => "undecided",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Partial,
    Complete,
}

/// The rule a [`Diagnostic`] reports, or the reason a literal was forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    MandatoryChildMissing,
    GroupCardinalityViolated,
    RequiresViolated,
    ExcludesViolated,
    RequiresAnyViolated,
    VariantWithoutParent,
    RootDeselected,
    /// A selected feature below a deselected ancestor.
    DeselectedAncestor,
    /// Complete mode only: a feature left undecided.
    FeatureUndecided,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub rule: Rule,
    pub features: Vec<FeatureId>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.rule)?;
        for (i, id) in self.features.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "]: {}", self.message)
    }
}

/// A configuration: the model it was built against plus the decided
/// features. Features absent from the map are undecided.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    model_ref: String,
    decisions: BTreeMap<FeatureId, State>,
}

impl Configuration {
    /// An all-undecided configuration referencing `model` by its root id.
    pub fn new(model: &FeatureModel) -> Self {
        Self::for_model_ref(model.root_id().to_string())
    }

    /// `model_ref` is either the model's root id or its digest.
    pub fn for_model_ref(model_ref: impl Into<String>) -> Self {
        Configuration {
            model_ref: model_ref.into(),
            decisions: BTreeMap::new(),
        }
    }

    pub fn model_ref(&self) -> &str {
        &self.model_ref
    }

    pub fn get(&self, feature: &str) -> State {
        self.decisions
            .get(feature)
            .copied()
            .unwrap_or(State::Undecided)
    }

    /// Ids that are not part of the model are kept and later reported as
    /// [`ConfigError::ModelMismatch`].
    pub fn set(&mut self, feature: &str, state: State) {
        let id = FeatureId::new_unchecked(feature);
        if state.is_decided() {
            self.decisions.insert(id, state);
        } else {
            self.decisions.remove(&id);
        }
    }

    pub fn with(mut self, feature: &str, state: State) -> Self {
        self.set(feature, state);
        self
    }

    pub fn select(self, feature: &str) -> Self {
        self.with(feature, State::Selected)
    }

    pub fn deselect(self, feature: &str) -> Self {
        self.with(feature, State::Deselected)
    }

    /// Decided features, in id order.
    pub fn decisions(&self) -> impl Iterator<Item = (&FeatureId, State)> {
        self.decisions.iter().map(|(k, v)| (k, *v))
    }

    pub fn decided_count(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_selected(&self, feature: &str) -> bool {
        self.get(feature) == State::Selected
    }

    /// Resolves the configuration against `model` into a dense assignment.
    pub fn resolve(&self, model: &FeatureModel) -> Result<Assignment, ConfigError> {
        if self.model_ref != model.root_id().as_str() && self.model_ref != model.digest() {
            return Err(ConfigError::ModelMismatch {
                model: model.root_id().to_string(),
                reason: format!("configuration references model `{}`", self.model_ref),
            });
        }
        let mut states = vec![State::Undecided; model.len()];
        for (id, state) in &self.decisions {
            let i = model.index_of(id.as_str()).ok_or_else(|| ConfigError::ModelMismatch {
                model: model.root_id().to_string(),
                reason: format!("unknown feature `{id}`"),
            })?;
            states[i] = *state;
        }
        Ok(Assignment { states })
    }
}

/// Dense per-feature states indexed by declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    states: Vec<State>,
}

impl Assignment {
    pub fn undecided(model: &FeatureModel) -> Self {
        Assignment {
            states: vec![State::Undecided; model.len()],
        }
    }

    pub fn from_states(model: &FeatureModel, states: Vec<State>) -> Self {
        assert_eq!(states.len(), model.len(), "one state per feature");
        Assignment { states }
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn set(&mut self, index: usize, state: State) {
        self.states[index] = state;
    }

    pub fn to_configuration(&self, model: &FeatureModel, model_ref: &str) -> Configuration {
        let mut config = Configuration::for_model_ref(model_ref);
        for (i, s) in self.states.iter().enumerate() {
            if s.is_decided() {
                config.decisions.insert(model.id_at(i).clone(), *s);
            }
        }
        config
    }
}

/// Checks `config` against every rule. The list is empty iff no rule is
/// violated.
pub fn validate(
    model: &FeatureModel,
    config: &Configuration,
    mode: Mode,
) -> Result<Vec<Diagnostic>, ConfigError> {
    let assignment = config.resolve(model)?;
    Ok(validate_assignment(model, &assignment, mode))
}

/// [`validate`] over an already resolved assignment.
pub fn validate_assignment(model: &FeatureModel, assignment: &Assignment, mode: Mode) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let _ = rules::check(model, &assignment.states, mode, &mut |rule, features| {
        out.push(rules::diagnostic(model, &assignment.states, rule, features));
        ControlFlow::Continue(())
    });
    out
}
