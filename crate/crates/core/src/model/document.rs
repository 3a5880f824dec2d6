//! JSON model documents.

use serde::{Deserialize, Serialize};

use super::{
    Dependency, DependencyKind, Feature, FeatureId, FeatureKind, FeatureModel, GroupCardinality,
    ModelError, Optionality, Processing, RequiresAny,
};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    root: String,
    features: Vec<FeatureRecord>,
    #[serde(default)]
    dependencies: Vec<DependencyRecord>,
    #[serde(default)]
    constraints: Vec<ConstraintRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum KindTag {
    VariationPoint,
    Variant,
    Invariable,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeatureRecord {
    id: String,
    name: String,
    optionality: Optionality,
    kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<GroupCardinality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    processing: Option<Processing>,
    #[serde(default)]
    description: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DependencyRecord {
    source: String,
    kind: DependencyKind,
    target: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ConstraintKind {
    RequiresAny,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintRecord {
    kind: ConstraintKind,
    source: String,
    targets: Vec<String>,
}

/// Parses a JSON model document and checks the model's structure.
pub fn parse_model(document: &str) -> Result<FeatureModel, ModelError> {
    let doc: ModelDocument = serde_json::from_str(document).map_err(|e| ModelError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut features = Vec::with_capacity(doc.features.len());
    for rec in doc.features {
        let id = FeatureId::new(rec.id)?;
        let kind = match (rec.kind, rec.group) {
            (KindTag::VariationPoint, Some(g)) => FeatureKind::VariationPoint(g),
            (KindTag::VariationPoint, None) => {
                return Err(ModelError::structure(
                    &id,
                    "variation point requires a `group` cardinality",
                ))
            }
            (_, Some(_)) => {
                return Err(ModelError::structure(
                    &id,
                    "only variation points may carry a `group`",
                ))
            }
            (KindTag::Variant, None) => FeatureKind::Variant,
            (KindTag::Invariable, None) => FeatureKind::Invariable,
        };
        let parent = rec.parent.map(FeatureId::new).transpose()?;
        features.push(Feature {
            id,
            display_name: rec.name,
            optionality: rec.optionality,
            kind,
            parent,
            processing: rec.processing,
            description: rec.description,
        });
    }

    let dependencies = doc
        .dependencies
        .into_iter()
        .map(|d| {
            Ok(Dependency {
                source: FeatureId::new(d.source)?,
                kind: d.kind,
                target: FeatureId::new(d.target)?,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;

    let constraints = doc
        .constraints
        .into_iter()
        .map(|c| {
            let ConstraintKind::RequiresAny = c.kind;
            Ok(RequiresAny {
                source: FeatureId::new(c.source)?,
                targets: c
                    .targets
                    .into_iter()
                    .map(FeatureId::new)
                    .collect::<Result<_, _>>()?,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;

    FeatureModel::new(FeatureId::new(doc.root)?, features, dependencies, constraints)
}

/// Canonical document: features in declaration order, keys in fixed order,
/// two-space indentation, trailing newline.
pub fn serialize_model(model: &FeatureModel) -> String {
    let doc = ModelDocument {
        root: model.root_id().to_string(),
        features: model
            .features()
            .iter()
            .map(|f| FeatureRecord {
                id: f.id.to_string(),
                name: f.display_name.clone(),
                optionality: f.optionality,
                kind: match f.kind {
                    FeatureKind::VariationPoint(_) => KindTag::VariationPoint,
                    FeatureKind::Variant => KindTag::Variant,
                    FeatureKind::Invariable => KindTag::Invariable,
                },
                group: f.kind.group(),
                parent: f.parent.as_ref().map(ToString::to_string),
                processing: f.processing,
                description: f.description.clone(),
            })
            .collect(),
        dependencies: model
            .dependencies()
            .iter()
            .map(|d| DependencyRecord {
                source: d.source.to_string(),
                kind: d.kind,
                target: d.target.to_string(),
            })
            .collect(),
        constraints: model
            .constraints()
            .iter()
            .map(|c| ConstraintRecord {
                kind: ConstraintKind::RequiresAny,
                source: c.source.to_string(),
                targets: c.targets.iter().map(ToString::to_string).collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("model documents always serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
  "root": "app",
  "features": [
    {
      "id": "app",
      "name": "App",
      "optionality": "mandatory",
      "kind": "invariable",
      "description": ""
    }
  ],
  "dependencies": [],
  "constraints": []
}
"#;

    #[test]
    fn minimal_document() {
        let m = parse_model(MINIMAL).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.dependencies().is_empty());
        assert_eq!(serialize_model(&m), MINIMAL);
    }

    #[test]
    fn missing_arrays_default_to_empty() {
        let m = parse_model(r#"{"root": "app", "features": [{"id": "app", "name": "App", "optionality": "mandatory", "kind": "invariable"}]}"#).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(serialize_model(&m), MINIMAL);
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_model("{\n  \"root\": \"app\",\n  \"features\": [\n}").unwrap_err();
        match err {
            ModelError::Syntax { line, column, .. } => {
                assert_eq!(line, 4);
                assert!(column >= 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_kind_is_a_syntax_error() {
        let err = parse_model(r#"{"root": "app", "features": [{"id": "app", "name": "App", "optionality": "mandatory", "kind": "blob"}]}"#).unwrap_err();
        assert!(matches!(err, ModelError::Syntax { .. }));
    }

    #[test]
    fn variant_under_invariable_names_the_variant() {
        let doc = r#"{
          "root": "app",
          "features": [
            {"id": "app", "name": "App", "optionality": "mandatory", "kind": "invariable"},
            {"id": "base", "name": "Base", "optionality": "mandatory", "kind": "invariable", "parent": "app"},
            {"id": "stray", "name": "Stray", "optionality": "optional", "kind": "variant", "parent": "base"}
          ]
        }"#;
        match parse_model(doc).unwrap_err() {
            ModelError::Structure { feature, .. } => assert_eq!(feature, "stray"),
            other => panic!("expected structure error, got {other:?}"),
        }
    }

    #[test]
    fn group_on_invariable_is_rejected() {
        let doc = r#"{"root": "app", "features": [{"id": "app", "name": "App", "optionality": "mandatory", "kind": "invariable", "group": {"min": 1, "max": 1}}]}"#;
        assert!(matches!(
            parse_model(doc).unwrap_err(),
            ModelError::Structure { .. }
        ));
    }

    #[test]
    fn invalid_id_token_is_named() {
        let doc = r#"{"root": "App", "features": [{"id": "App", "name": "App", "optionality": "mandatory", "kind": "invariable"}]}"#;
        match parse_model(doc).unwrap_err() {
            ModelError::Structure { feature, .. } => assert_eq!(feature, "App"),
            other => panic!("expected structure error, got {other:?}"),
        }
    }

    #[test]
    fn one_requires_edge_serializes_one_record() {
        let doc = r#"{
          "root": "app",
          "features": [
            {"id": "app", "name": "App", "optionality": "mandatory", "kind": "invariable"},
            {"id": "a", "name": "A", "optionality": "optional", "kind": "invariable", "parent": "app"},
            {"id": "b", "name": "B", "optionality": "optional", "kind": "invariable", "parent": "app"}
          ],
          "dependencies": [{"source": "a", "kind": "requires", "target": "b"}]
        }"#;
        let m = parse_model(doc).unwrap();
        let out = serialize_model(&m);
        assert_eq!(out.matches("\"source\"").count(), 1);
        assert!(out.contains("\"kind\": \"requires\""));
        assert_eq!(parse_model(&out).unwrap(), m);
    }
}
