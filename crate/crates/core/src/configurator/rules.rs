//! The configuration rules, shared by validation and enumeration.

use std::ops::ControlFlow;

use super::{Diagnostic, Mode, Rule, State};
use crate::model::{DependencyKind, FeatureModel};

/// Reports every violated rule to `report` in a fixed order: root, then per
/// feature in declaration order (mandatory children, ancestry, group), then
/// dependencies, then requires-any constraints, then undecided features.
/// Stops early when `report` breaks.
pub(crate) fn check<F>(model: &FeatureModel, states: &[State], mode: Mode, report: &mut F) -> ControlFlow<()>
where
    F: FnMut(Rule, &[usize]) -> ControlFlow<()>,
{
    let selected = |i: usize| states[i] == State::Selected;
    // Complete mode has no open features; anything not selected is out.
    let deselected = |i: usize| match mode {
        Mode::Partial => states[i] == State::Deselected,
        Mode::Complete => states[i] != State::Selected,
    };

    let root = model.root_index();
    if deselected(root) {
        report(Rule::RootDeselected, &[root])?;
    }

    for (i, feature) in model.features().iter().enumerate() {
        if !selected(i) {
            continue;
        }

        for &c in model.child_indices(i) {
            if model.feature_at(c).is_mandatory() && deselected(c) {
                report(Rule::MandatoryChildMissing, &[i, c])?;
            }
        }

        if let Some(p) = model.parent_index(i) {
            if deselected(p) {
                if feature.kind.is_variant() {
                    report(Rule::VariantWithoutParent, &[i, p])?;
                } else {
                    report(Rule::DeselectedAncestor, &[p, i])?;
                }
            } else if !selected(p) {
                // Partial mode, undecided parent: the nearest decided
                // ancestor must not be deselected.
                let mut a = p;
                while states[a] == State::Undecided {
                    match model.parent_index(a) {
                        Some(up) => a = up,
                        None => break,
                    }
                }
                if states[a] == State::Deselected {
                    report(Rule::DeselectedAncestor, &[a, i])?;
                }
            }
        }

        if let Some(group) = feature.kind.group() {
            let variants = model.variant_indices(i);
            let chosen = variants.iter().filter(|&&v| selected(v)).count();
            let open = variants.iter().filter(|&&v| !deselected(v)).count();
            let violated = match mode {
                Mode::Complete => chosen < group.min || chosen > group.max,
                Mode::Partial => open < group.min || chosen > group.max,
            };
            if violated {
                let mut involved = vec![i];
                involved.extend(variants.iter().copied().filter(|&v| selected(v)));
                report(Rule::GroupCardinalityViolated, &involved)?;
            }
        }
    }

    for &(s, kind, t) in model.dependency_indices() {
        match kind {
            DependencyKind::Requires => {
                if selected(s) && deselected(t) {
                    report(Rule::RequiresViolated, &[s, t])?;
                }
            }
            DependencyKind::Excludes => {
                if selected(s) && selected(t) {
                    report(Rule::ExcludesViolated, &[s, t])?;
                }
            }
        }
    }

    for (s, targets) in model.constraint_indices() {
        if !selected(*s) {
            continue;
        }
        let satisfied = match mode {
            Mode::Complete => targets.iter().any(|&t| selected(t)),
            Mode::Partial => targets.iter().any(|&t| !deselected(t)),
        };
        if !satisfied {
            let mut involved = vec![*s];
            involved.extend(targets);
            report(Rule::RequiresAnyViolated, &involved)?;
        }
    }

    if mode == Mode::Complete {
        for (i, s) in states.iter().enumerate() {
            if *s == State::Undecided {
                report(Rule::FeatureUndecided, &[i])?;
            }
        }
    }

    ControlFlow::Continue(())
}

/// True when `check` reports nothing.
pub(crate) fn is_clean(model: &FeatureModel, states: &[State], mode: Mode) -> bool {
    check(model, states, mode, &mut |_, _| ControlFlow::Break(())).is_continue()
}

pub(crate) fn diagnostic(model: &FeatureModel, states: &[State], rule: Rule, features: &[usize]) -> Diagnostic {
    Diagnostic {
        rule,
        features: features.iter().map(|&i| model.id_at(i).clone()).collect(),
        message: describe(model, states, rule, features),
    }
}

pub(crate) fn describe(model: &FeatureModel, states: &[State], rule: Rule, features: &[usize]) -> String {
    let id = |k: usize| model.id_at(features[k]).as_str();
    match rule {
        Rule::RootDeselected => format!("the root feature `{}` must be selected", id(0)),
        Rule::MandatoryChildMissing => format!(
            "`{}` is selected, so its mandatory child `{}` must be selected too",
            id(0),
            id(1)
        ),
        Rule::VariantWithoutParent => format!(
            "variant `{}` is selected but its variation point `{}` is not",
            id(0),
            id(1)
        ),
        Rule::DeselectedAncestor => format!(
            "`{}` is selected but its ancestor `{}` is deselected",
            id(1),
            id(0)
        ),
        Rule::GroupCardinalityViolated => {
            let vp = model.feature_at(features[0]);
            let group = vp.kind.group().expect("group rule only fires on variation points");
            let chosen = features.len() - 1;
            let open = model
                .variant_indices(features[0])
                .iter()
                .filter(|&&v| states[v] != State::Deselected)
                .count();
            format!(
                "`{}` allows {} selected variants; {} selected, {} still possible",
                vp.id, group, chosen, open
            )
        }
        Rule::RequiresViolated => format!("`{}` requires `{}`", id(0), id(1)),
        Rule::ExcludesViolated => {
            format!("`{}` and `{}` exclude each other", id(0), id(1))
        }
        Rule::RequiresAnyViolated => {
            let targets: Vec<_> = features[1..]
                .iter()
                .map(|&t| format!("`{}`", model.id_at(t)))
                .collect();
            format!("`{}` requires at least one of {}", id(0), targets.join(", "))
        }
        Rule::FeatureUndecided => format!(
            "`{}` is undecided; a complete configuration decides every feature",
            id(0)
        ),
    }
}
