//! Feature-model structure and well-formedness.
//!
//! A [`FeatureModel`] is a tree of [`Feature`]s. Each feature is either a
//! variation point (whose variant children are governed by a
//! [`GroupCardinality`]), a variant, or an invariable element, and is
//! independently mandatory or optional under its parent. Cross-tree
//! [`Dependency`] edges and [`RequiresAny`] constraints restrict which
//! combinations form a valid product.

mod builtin;
mod document;

pub use builtin::builtin_webxr_model;
pub use document::{parse_model, serialize_model};

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("structure error at feature `{feature}`: {message}")]
    Structure { feature: String, message: String },
}

impl ModelError {
    fn structure(feature: impl fmt::Display, message: impl Into<String>) -> Self {
        ModelError::Structure {
            feature: feature.to_string(),
            message: message.into(),
        }
    }
}

/// Identifier of a feature: a non-empty token of lowercase ASCII letters,
/// digits and hyphens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureId(String);

impl FeatureId {
    pub fn new(value: impl Into<String>) -> Result<Self, ModelError> {
        let value = value.into();
        if Self::is_valid_token(&value) {
            Ok(FeatureId(value))
        } else {
            Err(ModelError::structure(
                &value,
                "feature ids must be non-empty and use only lowercase letters, digits and `-`",
            ))
        }
    }

    /// Skips the token check; callers validate membership against a model.
    pub(crate) fn new_unchecked(value: impl Into<String>) -> Self {
        FeatureId(value.into())
    }

    pub fn is_valid_token(value: &str) -> bool {
        !value.is_empty()
            && value
                .bytes()
                .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for FeatureId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for FeatureId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Optionality {
    Mandatory,
    Optional,
}

/// Inclusive bounds on the number of selected variants of a variation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupCardinality {
    pub min: usize,
    pub max: usize,
}

impl GroupCardinality {
    pub const fn new(min: usize, max: usize) -> Self {
        GroupCardinality { min, max }
    }

    pub const fn alternative() -> Self {
        GroupCardinality { min: 1, max: 1 }
    }

    pub fn is_alternative(&self) -> bool {
        self.min == 1 && self.max == 1
    }
}

impl fmt::Display for GroupCardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]", self.min, self.max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    VariationPoint(GroupCardinality),
    Variant,
    Invariable,
}

impl FeatureKind {
    pub fn is_variation_point(&self) -> bool {
        matches!(self, FeatureKind::VariationPoint(_))
    }

    pub fn is_variant(&self) -> bool {
        matches!(self, FeatureKind::Variant)
    }

    pub fn group(&self) -> Option<GroupCardinality> {
        match self {
            FeatureKind::VariationPoint(g) => Some(*g),
            _ => None,
        }
    }
}

/// Processing style of a multimodal-interface feature. Metadata only; it
/// does not take part in configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Processing {
    Direct,
    #[default]
    Indirect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub id: FeatureId,
    pub display_name: String,
    pub optionality: Optionality,
    pub kind: FeatureKind,
    pub parent: Option<FeatureId>,
    pub processing: Option<Processing>,
    pub description: String,
}

impl Feature {
    pub fn is_mandatory(&self) -> bool {
        self.optionality == Optionality::Mandatory
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DependencyKind {
    Requires,
    Excludes,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dependency {
    pub source: FeatureId,
    pub kind: DependencyKind,
    pub target: FeatureId,
}

/// `source` selected implies at least one of `targets` selected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RequiresAny {
    pub source: FeatureId,
    pub targets: Vec<FeatureId>,
}

/// A validated feature tree plus its cross-tree constraints.
///
/// Immutable once built. Features keep their declaration order, which fixes
/// the order of children, of serialized output and of every rule sweep in
/// the configurator.
#[derive(Debug, Clone)]
pub struct FeatureModel {
    root: usize,
    features: Vec<Feature>,
    dependencies: Vec<Dependency>,
    constraints: Vec<RequiresAny>,
    index: HashMap<FeatureId, usize>,
    parents: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    variants: Vec<Vec<usize>>,
    dependency_indices: Vec<(usize, DependencyKind, usize)>,
    constraint_indices: Vec<(usize, Vec<usize>)>,
    digest: OnceLock<String>,
}

impl PartialEq for FeatureModel {
    fn eq(&self, other: &Self) -> bool {
        self.root_id() == other.root_id()
            && self.features == other.features
            && self.dependencies == other.dependencies
            && self.constraints == other.constraints
    }
}

impl Eq for FeatureModel {}

impl FeatureModel {
    /// Builds a model, checking every structural invariant.
    pub fn new(
        root: FeatureId,
        features: Vec<Feature>,
        dependencies: Vec<Dependency>,
        constraints: Vec<RequiresAny>,
    ) -> Result<Self, ModelError> {
        let mut index = HashMap::with_capacity(features.len());
        for (i, f) in features.iter().enumerate() {
            if !FeatureId::is_valid_token(f.id.as_str()) {
                return Err(ModelError::structure(&f.id, "invalid feature id"));
            }
            if index.insert(f.id.clone(), i).is_some() {
                return Err(ModelError::structure(&f.id, "duplicate feature id"));
            }
        }

        let root_idx = *index
            .get(&root)
            .ok_or_else(|| ModelError::structure(&root, "root feature is not declared"))?;

        let mut parents = vec![None; features.len()];
        let mut children = vec![Vec::new(); features.len()];
        for (i, f) in features.iter().enumerate() {
            match (&f.parent, i == root_idx) {
                (Some(_), true) => {
                    return Err(ModelError::structure(&f.id, "the root cannot have a parent"))
                }
                (None, true) => {}
                (None, false) => {
                    return Err(ModelError::structure(
                        &f.id,
                        "non-root feature without a parent",
                    ))
                }
                (Some(p), false) => {
                    let pi = *index.get(p).ok_or_else(|| {
                        ModelError::structure(&f.id, format!("parent `{p}` is not declared"))
                    })?;
                    if pi == i {
                        return Err(ModelError::structure(&f.id, "feature is its own parent"));
                    }
                    parents[i] = Some(pi);
                    children[pi].push(i);
                }
            }
        }

        // Every feature must reach the root by following parents; a cycle
        // would never get there.
        let mut reaches_root = vec![false; features.len()];
        reaches_root[root_idx] = true;
        for start in 0..features.len() {
            let mut path = Vec::new();
            let mut cur = start;
            while !reaches_root[cur] {
                if path.contains(&cur) {
                    return Err(ModelError::structure(
                        &features[cur].id,
                        "parent relation contains a cycle",
                    ));
                }
                path.push(cur);
                match parents[cur] {
                    Some(p) => cur = p,
                    None => break,
                }
            }
            for p in path {
                reaches_root[p] = true;
            }
        }

        let root_feature = &features[root_idx];
        if root_feature.optionality != Optionality::Mandatory {
            return Err(ModelError::structure(&root_feature.id, "the root must be mandatory"));
        }
        if root_feature.kind.is_variant() {
            return Err(ModelError::structure(&root_feature.id, "the root cannot be a variant"));
        }

        let mut variants = vec![Vec::new(); features.len()];
        for (i, f) in features.iter().enumerate() {
            if f.kind.is_variant() {
                let pi = parents[i].expect("non-root features have parents");
                if !features[pi].kind.is_variation_point() {
                    return Err(ModelError::structure(
                        &f.id,
                        format!(
                            "variant must be a child of a variation point, but `{}` is not one",
                            features[pi].id
                        ),
                    ));
                }
                variants[pi].push(i);
            }
        }
        for (i, f) in features.iter().enumerate() {
            if let FeatureKind::VariationPoint(group) = f.kind {
                let n = variants[i].len();
                if n == 0 {
                    return Err(ModelError::structure(
                        &f.id,
                        "variation point has no variant children",
                    ));
                }
                if group.min < 1 || group.min > group.max || group.max > n {
                    return Err(ModelError::structure(
                        &f.id,
                        format!("bad group cardinality {group} for {n} variants"),
                    ));
                }
            }
        }

        for d in &dependencies {
            for end in [&d.source, &d.target] {
                if !index.contains_key(end) {
                    return Err(ModelError::structure(
                        end,
                        "dependency endpoint is not declared",
                    ));
                }
            }
            if d.source == d.target {
                return Err(ModelError::structure(&d.source, "dependency on itself"));
            }
        }
        for c in &constraints {
            if !index.contains_key(&c.source) {
                return Err(ModelError::structure(
                    &c.source,
                    "constraint source is not declared",
                ));
            }
            if c.targets.is_empty() {
                return Err(ModelError::structure(
                    &c.source,
                    "requires-any constraint needs at least one target",
                ));
            }
            for t in &c.targets {
                if !index.contains_key(t) {
                    return Err(ModelError::structure(t, "constraint target is not declared"));
                }
                if *t == c.source {
                    return Err(ModelError::structure(t, "constraint targets its own source"));
                }
            }
        }

        let dependency_indices = dependencies
            .iter()
            .map(|d| (index[&d.source], d.kind, index[&d.target]))
            .collect();
        let constraint_indices = constraints
            .iter()
            .map(|c| (index[&c.source], c.targets.iter().map(|t| index[t]).collect()))
            .collect();

        Ok(FeatureModel {
            digest: OnceLock::new(),
            dependency_indices,
            constraint_indices,
            root: root_idx,
            features,
            dependencies,
            constraints,
            index,
            parents,
            children,
            variants,
        })
    }

    pub fn root_id(&self) -> &FeatureId {
        &self.features[self.root].id
    }

    pub fn root(&self) -> &Feature {
        &self.features[self.root]
    }

    /// Features in declaration order.
    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn dependencies(&self) -> &[Dependency] {
        &self.dependencies
    }

    pub fn constraints(&self) -> &[RequiresAny] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Feature> {
        self.index_of(id).map(|i| &self.features[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index_of(id).is_some()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn feature_at(&self, index: usize) -> &Feature {
        &self.features[index]
    }

    pub fn children(&self, id: &str) -> impl Iterator<Item = &Feature> {
        self.index_of(id)
            .map(|i| self.children[i].as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&c| &self.features[c])
    }

    pub fn variants(&self, id: &str) -> impl Iterator<Item = &Feature> {
        self.index_of(id)
            .map(|i| self.variants[i].as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&c| &self.features[c])
    }

    /// Canonical serialized document, hashed.
    pub fn digest(&self) -> &str {
        self.digest.get_or_init(|| {
            let doc = serialize_model(self);
            hex::encode(Sha256::digest(doc.as_bytes()))
        })
    }

    // Index-level accessors for the configurator.

    pub(crate) fn root_index(&self) -> usize {
        self.root
    }

    pub(crate) fn parent_index(&self, i: usize) -> Option<usize> {
        self.parents[i]
    }

    pub(crate) fn child_indices(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub(crate) fn variant_indices(&self, i: usize) -> &[usize] {
        &self.variants[i]
    }

    pub(crate) fn dependency_indices(&self) -> &[(usize, DependencyKind, usize)] {
        &self.dependency_indices
    }

    pub(crate) fn constraint_indices(&self) -> &[(usize, Vec<usize>)] {
        &self.constraint_indices
    }

    pub(crate) fn id_at(&self, i: usize) -> &FeatureId {
        &self.features[i].id
    }
}
