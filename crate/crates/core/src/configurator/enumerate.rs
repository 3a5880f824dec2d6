//! Exhaustive enumeration of valid complete configurations.
//!
//! Plain depth-first search over the undecided features in declaration
//! order, trying `Selected` before `Deselected`. Partial-mode validation
//! prunes a branch as soon as one of its rules is violated; every such
//! violation persists in all extensions, so pruning never loses a product.
//! This is deliberately independent of [`propagate`](super::propagate).

use std::ops::ControlFlow;

use super::rules::is_clean;
use super::{ConfigError, Configuration, Mode, State};
use crate::model::FeatureModel;

/// Largest model the exhaustive search accepts.
pub const MAX_ENUMERABLE_FEATURES: usize = 64;

/// Pass as `limit` to [`enumerate`] to collect every completion.
pub const UNBOUNDED: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub configurations: Vec<Configuration>,
    /// More completions exist beyond `limit`.
    pub truncated: bool,
}

fn guard(model: &FeatureModel) -> Result<(), ConfigError> {
    if model.len() > MAX_ENUMERABLE_FEATURES {
        return Err(ConfigError::ModelTooLarge {
            features: model.len(),
            limit: MAX_ENUMERABLE_FEATURES,
        });
    }
    Ok(())
}

fn search<F>(model: &FeatureModel, states: &mut Vec<State>, from: usize, on_product: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[State]) -> ControlFlow<()>,
{
    if !is_clean(model, states, Mode::Partial) {
        return ControlFlow::Continue(());
    }
    let Some(offset) = states[from..].iter().position(|s| *s == State::Undecided) else {
        if is_clean(model, states, Mode::Complete) {
            return on_product(states);
        }
        return ControlFlow::Continue(());
    };
    let next = from + offset;
    for choice in [State::Selected, State::Deselected] {
        states[next] = choice;
        search(model, states, next + 1, on_product)?;
    }
    states[next] = State::Undecided;
    ControlFlow::Continue(())
}

/// Calls `visit` with each valid complete extension of `config`, in
/// lexicographic order over declaration order with `Selected` before
/// `Deselected`, until `visit` breaks.
pub fn for_each_completion<F>(model: &FeatureModel, config: &Configuration, mut visit: F) -> Result<(), ConfigError>
where
    F: FnMut(Configuration) -> ControlFlow<()>,
{
    guard(model)?;
    let mut states = config.resolve(model)?.states().to_vec();
    let _ = search(model, &mut states, 0, &mut |product| {
        let assignment = super::Assignment::from_states(model, product.to_vec());
        visit(assignment.to_configuration(model, config.model_ref()))
    });
    Ok(())
}

/// All valid complete extensions of `config` in [`for_each_completion`]
/// order, truncated at `limit`.
pub fn enumerate(model: &FeatureModel, config: &Configuration, limit: usize) -> Result<Enumeration, ConfigError> {
    let mut configurations = Vec::new();
    let mut truncated = false;
    for_each_completion(model, config, |product| {
        if configurations.len() == limit {
            truncated = true;
            return ControlFlow::Break(());
        }
        configurations.push(product);
        ControlFlow::Continue(())
    })?;
    Ok(Enumeration {
        configurations,
        truncated,
    })
}

/// Number of valid products of `model`.
pub fn count_products(model: &FeatureModel) -> Result<u64, ConfigError> {
    guard(model)?;
    let mut states = vec![State::Undecided; model.len()];
    let mut count = 0u64;
    let _ = search(model, &mut states, 0, &mut |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    Ok(count)
}
