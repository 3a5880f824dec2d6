//! Unit propagation to a fixpoint.
//!
//! Each rule only fires when exactly one way remains to satisfy it, so every
//! forced literal holds in every valid completion. The result is sound but
//! not complete: some implied literals may stay undecided. Conflict
//! detection is exact; when the fixpoint itself is consistent, a
//! backtracking search (branching in declaration order, propagating after
//! each branch) decides whether any valid completion exists.

use serde::{Deserialize, Serialize};

use super::rules::{describe, diagnostic};
use super::{ConfigError, Configuration, Diagnostic, Rule, State};
use crate::model::{DependencyKind, FeatureId, FeatureModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forced {
    pub feature: FeatureId,
    pub state: State,
    pub reason: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationResult {
    pub configuration: Configuration,
    pub forced: Vec<Forced>,
    pub conflict: Option<Diagnostic>,
}

impl PropagationResult {
    pub fn is_conflict(&self) -> bool {
        self.conflict.is_some()
    }
}

pub(crate) struct Conflict {
    rule: Rule,
    features: Vec<usize>,
}

struct Engine<'m> {
    model: &'m FeatureModel,
    states: Vec<State>,
    forced: Option<Vec<(usize, State, Rule)>>,
    changed: bool,
}

impl<'m> Engine<'m> {
    fn assign(&mut self, i: usize, state: State, rule: Rule, involved: &[usize]) -> Result<(), Conflict> {
        match self.states[i] {
            s if s == state => Ok(()),
            State::Undecided => {
                self.states[i] = state;
                self.changed = true;
                if let Some(log) = self.forced.as_mut() {
                    log.push((i, state, rule));
                }
                Ok(())
            }
            _ => Err(Conflict {
                rule,
                features: involved.to_vec(),
            }),
        }
    }

    fn run(&mut self) -> Result<(), Conflict> {
        loop {
            self.changed = false;
            self.tree_rules()?;
            self.group_rules()?;
            self.dependency_rules()?;
            if !self.changed {
                return Ok(());
            }
        }
    }

    fn tree_rules(&mut self) -> Result<(), Conflict> {
        let model = self.model;
        let root = model.root_index();
        self.assign(root, State::Selected, Rule::RootDeselected, &[root])?;
        for i in 0..model.len() {
            match self.states[i] {
                State::Selected => {
                    if let Some(p) = model.parent_index(i) {
                        if model.feature_at(i).kind.is_variant() {
                            self.assign(p, State::Selected, Rule::VariantWithoutParent, &[i, p])?;
                        } else {
                            self.assign(p, State::Selected, Rule::DeselectedAncestor, &[p, i])?;
                        }
                    }
                    for &c in model.child_indices(i) {
                        if model.feature_at(c).is_mandatory() {
                            self.assign(c, State::Selected, Rule::MandatoryChildMissing, &[i, c])?;
                        }
                    }
                }
                State::Deselected => {
                    for &c in model.child_indices(i) {
                        let rule = if model.feature_at(c).kind.is_variant() {
                            Rule::VariantWithoutParent
                        } else {
                            Rule::DeselectedAncestor
                        };
                        let involved = if rule == Rule::VariantWithoutParent { [c, i] } else { [i, c] };
                        self.assign(c, State::Deselected, rule, &involved)?;
                    }
                    if let Some(p) = model.parent_index(i) {
                        if model.feature_at(i).is_mandatory() {
                            self.assign(p, State::Deselected, Rule::MandatoryChildMissing, &[p, i])?;
                        }
                    }
                }
                State::Undecided => {}
            }
        }
        Ok(())
    }

    fn group_rules(&mut self) -> Result<(), Conflict> {
        let model = self.model;
        for i in 0..model.len() {
            let Some(group) = model.feature_at(i).kind.group() else {
                continue;
            };
            let variants = model.variant_indices(i);
            let chosen = variants.iter().filter(|&&v| self.states[v] == State::Selected).count();
            let open = variants.iter().filter(|&&v| self.states[v] == State::Undecided).count();
            match self.states[i] {
                State::Selected => {
                    if chosen > group.max || chosen + open < group.min {
                        let mut involved = vec![i];
                        involved.extend(variants.iter().copied().filter(|&v| self.states[v] == State::Selected));
                        return Err(Conflict {
                            rule: Rule::GroupCardinalityViolated,
                            features: involved,
                        });
                    }
                    if open == 0 {
                        continue;
                    }
                    let fill = if chosen == group.max {
                        Some(State::Deselected)
                    } else if chosen + open == group.min {
                        Some(State::Selected)
                    } else {
                        None
                    };
                    if let Some(state) = fill {
                        for &v in variants {
                            if self.states[v] == State::Undecided {
                                self.assign(v, state, Rule::GroupCardinalityViolated, &[i, v])?;
                            }
                        }
                    }
                }
                State::Undecided => {
                    if chosen + open < group.min {
                        self.assign(i, State::Deselected, Rule::GroupCardinalityViolated, &[i])?;
                    }
                }
                State::Deselected => {}
            }
        }
        Ok(())
    }

    fn dependency_rules(&mut self) -> Result<(), Conflict> {
        let model = self.model;
        for &(s, kind, t) in model.dependency_indices() {
            match kind {
                DependencyKind::Requires => {
                    if self.states[s] == State::Selected {
                        self.assign(t, State::Selected, Rule::RequiresViolated, &[s, t])?;
                    }
                    if self.states[t] == State::Deselected {
                        self.assign(s, State::Deselected, Rule::RequiresViolated, &[s, t])?;
                    }
                }
                DependencyKind::Excludes => {
                    if self.states[s] == State::Selected {
                        self.assign(t, State::Deselected, Rule::ExcludesViolated, &[s, t])?;
                    }
                    if self.states[t] == State::Selected {
                        self.assign(s, State::Deselected, Rule::ExcludesViolated, &[s, t])?;
                    }
                }
            }
        }
        for (s, targets) in model.constraint_indices() {
            let s = *s;
            let mut open = targets.iter().copied().filter(|&t| self.states[t] != State::Deselected);
            match (open.next(), open.next()) {
                (None, _) => {
                    let mut involved = vec![s];
                    involved.extend(targets);
                    self.assign(s, State::Deselected, Rule::RequiresAnyViolated, &involved)?;
                }
                (Some(only), None) if self.states[s] == State::Selected => {
                    self.assign(only, State::Selected, Rule::RequiresAnyViolated, &[s, only])?;
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Propagates `states` in place without logging. Used by the completion
/// search.
fn propagate_silently(model: &FeatureModel, states: Vec<State>) -> Result<Vec<State>, (Vec<State>, Conflict)> {
    let mut engine = Engine {
        model,
        states,
        forced: None,
        changed: false,
    };
    match engine.run() {
        Ok(()) => Ok(engine.states),
        Err(c) => Err((engine.states, c)),
    }
}

/// Depth-first search for one valid completion of a conflict-free
/// fixpoint. On failure returns the first conflict met.
fn search_completion(model: &FeatureModel, states: &[State], first_conflict: &mut Option<(Vec<State>, Conflict)>) -> bool {
    let Some(next) = states.iter().position(|s| *s == State::Undecided) else {
        return true;
    };
    for choice in [State::Selected, State::Deselected] {
        let mut branch = states.to_vec();
        branch[next] = choice;
        match propagate_silently(model, branch) {
            Ok(fix) => {
                if search_completion(model, &fix, first_conflict) {
                    return true;
                }
            }
            Err(c) => {
                if first_conflict.is_none() {
                    *first_conflict = Some(c);
                }
            }
        }
    }
    false
}

/// Applies the unit rules (tree, then group, then dependency, repeated) to
/// a fixpoint and reports a conflict iff no valid completion exists.
pub fn propagate(model: &FeatureModel, config: &Configuration) -> Result<PropagationResult, ConfigError> {
    let assignment = config.resolve(model)?;
    let mut engine = Engine {
        model,
        states: assignment.states().to_vec(),
        forced: Some(Vec::new()),
        changed: false,
    };

    let mut conflict = None;
    if let Err(c) = engine.run() {
        conflict = Some(diagnostic(model, &engine.states, c.rule, &c.features));
    } else {
        let mut first = None;
        if !search_completion(model, &engine.states, &mut first) {
            let (states, c) = first.expect("a failed search met at least one conflict");
            let base = diagnostic(model, &states, c.rule, &c.features);
            conflict = Some(Diagnostic {
                message: format!(
                    "no valid completion exists: every remaining choice leads to a violation, e.g. {}",
                    describe(model, &states, c.rule, &c.features)
                ),
                ..base
            });
        }
    }

    let forced = engine
        .forced
        .take()
        .unwrap_or_default()
        .into_iter()
        .map(|(i, state, reason)| Forced {
            feature: model.id_at(i).clone(),
            state,
            reason,
        })
        .collect();
    let assignment = super::Assignment::from_states(model, engine.states);
    Ok(PropagationResult {
        configuration: assignment.to_configuration(model, config.model_ref()),
        forced,
        conflict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurator::{validate, Mode};
    use crate::model::builtin_webxr_model;

    fn forced_state(r: &PropagationResult, id: &str) -> Option<State> {
        r.forced.iter().find(|f| f.feature.as_str() == id).map(|f| f.state)
    }

    #[test]
    fn root_selection_forces_mandatory_children() {
        let m = builtin_webxr_model();
        let r = propagate(&m, &Configuration::new(&m).select("web-xr-app")).unwrap();
        assert!(r.conflict.is_none());
        for f in [
            "platform",
            "multimodal-interfaces",
            "xr-modality",
            "devices",
            "browser",
            "avatar",
            "virtual-world",
        ] {
            assert_eq!(forced_state(&r, f), Some(State::Selected), "{f}");
        }
        assert_eq!(r.configuration.get("interaction-events"), State::Undecided);
    }

    #[test]
    fn alternative_group_exclusivity() {
        let m = builtin_webxr_model();
        let r = propagate(&m, &Configuration::new(&m).select("virtual-reality")).unwrap();
        assert_eq!(forced_state(&r, "mixed-reality"), Some(State::Deselected));
        // hololens requires mixed-reality
        assert_eq!(forced_state(&r, "hololens"), Some(State::Deselected));
    }

    #[test]
    fn tactile_forces_wearable() {
        let m = builtin_webxr_model();
        let r = propagate(&m, &Configuration::new(&m).select("tactile")).unwrap();
        assert_eq!(forced_state(&r, "wearable"), Some(State::Selected));
        assert_eq!(
            r.forced.iter().find(|f| f.feature.as_str() == "wearable").unwrap().reason,
            Rule::RequiresViolated
        );
    }

    #[test]
    fn requires_any_with_single_open_target() {
        let m = builtin_webxr_model();
        let r = propagate(&m, &Configuration::new(&m).select("mixed-reality").deselect("wearable")).unwrap();
        assert_eq!(forced_state(&r, "mobile"), Some(State::Selected));
    }

    #[test]
    fn direct_conflict() {
        let m = builtin_webxr_model();
        let r = propagate(&m, &Configuration::new(&m).select("tactile").deselect("wearable")).unwrap();
        let c = r.conflict.unwrap();
        assert_eq!(c.rule, Rule::RequiresViolated);
    }

    #[test]
    fn fixpoint_passes_partial_validation() {
        let m = builtin_webxr_model();
        let r = propagate(&m, &Configuration::new(&m).select("hololens").select("desktop")).unwrap();
        assert!(r.conflict.is_none());
        assert_eq!(r.configuration.get("mixed-reality"), State::Selected);
        assert!(validate(&m, &r.configuration, Mode::Partial).unwrap().is_empty());
    }

    #[test]
    fn search_detects_hidden_conflict() {
        // Requires/excludes cycle: no single rule is unit at the start, yet
        // every choice of variant fails.
        let m = crate::model::parse_model(
            r#"{
              "root": "app",
              "features": [
                {"id": "app", "name": "App", "optionality": "mandatory", "kind": "variation-point", "group": {"min": 1, "max": 2}},
                {"id": "a", "name": "A", "optionality": "optional", "kind": "variant", "parent": "app"},
                {"id": "b", "name": "B", "optionality": "optional", "kind": "variant", "parent": "app"},
                {"id": "c", "name": "C", "optionality": "optional", "kind": "variant", "parent": "app"}
              ],
              "dependencies": [
                {"source": "a", "kind": "excludes", "target": "b"},
                {"source": "a", "kind": "excludes", "target": "c"},
                {"source": "b", "kind": "excludes", "target": "c"},
                {"source": "a", "kind": "requires", "target": "b"},
                {"source": "b", "kind": "requires", "target": "c"},
                {"source": "c", "kind": "requires", "target": "a"}
              ]
            }"#,
        )
        .unwrap();
        let r = propagate(&m, &Configuration::new(&m)).unwrap();
        assert!(r.conflict.is_some());
    }

    #[test]
    fn deterministic() {
        let m = builtin_webxr_model();
        let c = Configuration::new(&m).select("click").select("hololens");
        assert_eq!(propagate(&m, &c).unwrap(), propagate(&m, &c).unwrap());
    }
}
