//! Make decisions step by step, letting propagation fill in what follows.
//!
//! ```sh
//! cargo run --example configure
//! ```

use webxr_spl::configurator::{propagate, validate, Configuration, Mode, State};
use webxr_spl::model::builtin_webxr_model;

fn main() {
    let model = builtin_webxr_model();
    let mut config = Configuration::new(&model);

    for (feature, state) in [
        ("tactile", State::Selected),
        ("virtual-reality", State::Selected),
        ("desktop", State::Deselected),
        ("mobile", State::Deselected),
    ] {
        config.set(feature, state);
        let result = propagate(&model, &config).expect("config belongs to the model");
        println!("{feature} := {state}");
        for forced in &result.forced {
            println!("  forces {} := {} ({})", forced.feature, forced.state, forced.reason);
        }
        if let Some(conflict) = &result.conflict {
            println!("  conflict: {conflict}");
            return;
        }
        config = result.configuration;
    }

    let open: Vec<_> = model
        .features()
        .iter()
        .filter(|f| !config.get(f.id.as_str()).is_decided())
        .map(|f| f.id.as_str())
        .collect();
    println!("\nstill open: {}", open.join(", "));

    // Contradict an earlier decision to see the diagnostics.
    let broken = config.clone().deselect("wearable");
    for d in validate(&model, &broken, Mode::Partial).unwrap() {
        println!("{d}");
    }
}
