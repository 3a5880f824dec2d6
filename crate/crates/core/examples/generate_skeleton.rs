//! Generate the skeleton for the worked example configuration and show
//! which features produced which elements.
//!
//! ```sh
//! cargo run --example generate_skeleton
//! ```

use webxr_spl::configurator::{Configuration, State};
use webxr_spl::generator::{explain, generate, GenerationOptions};
use webxr_spl::model::builtin_webxr_model;

fn main() {
    let model = builtin_webxr_model();
    let selected = [
        "wearable", "mobile", "vision", "audition", "tactile", "virtual-reality", "meta-quest", "pcvr", "chrome",
    ];
    let mut config = Configuration::new(&model);
    for f in model.features() {
        let on = selected.contains(&f.id.as_str()) || (f.is_mandatory() && !f.kind.is_variant());
        config.set(f.id.as_str(), if on { State::Selected } else { State::Deselected });
    }

    let options = GenerationOptions {
        app_title: "Haptic Gallery".into(),
        ..Default::default()
    };
    let artifact = generate(&model, &config, &options).expect("a valid product");
    print!("{}", artifact.document);

    println!("\nmanifest:");
    for e in &artifact.manifest {
        let causes: Vec<_> = e.caused_by.iter().map(|f| f.as_str()).collect();
        println!("  {:8} {:18} <- {}", e.path, e.element, causes.join(", "));
    }
    println!("\nexplain(tactile): {} entries", explain(&artifact, "tactile").len());
}
