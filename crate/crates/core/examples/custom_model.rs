//! Load a feature model from its JSON document, extend the built-in one,
//! and see structural errors reported.
//!
//! ```sh
//! cargo run --example custom_model
//! ```

use webxr_spl::configurator::count_products;
use webxr_spl::model::{builtin_webxr_model, parse_model, serialize_model};

const KIOSK: &str = r#"{
  "root": "kiosk",
  "features": [
    {"id": "kiosk", "name": "Kiosk", "optionality": "mandatory", "kind": "invariable"},
    {"id": "input", "name": "Input", "optionality": "mandatory", "kind": "variation-point", "group": {"min": 1, "max": 2}, "parent": "kiosk"},
    {"id": "touch", "name": "Touch", "optionality": "optional", "kind": "variant", "parent": "input"},
    {"id": "gaze", "name": "Gaze", "optionality": "optional", "kind": "variant", "parent": "input"},
    {"id": "audio-guide", "name": "Audio guide", "optionality": "optional", "kind": "invariable", "parent": "kiosk"}
  ],
  "dependencies": [
    {"source": "gaze", "kind": "excludes", "target": "touch"}
  ]
}"#;

fn main() {
    let kiosk = parse_model(KIOSK).unwrap();
    println!("kiosk: {} features, {} products", kiosk.len(), count_products(&kiosk).unwrap());

    // Extend the built-in model through its document: add a `teleport`
    // interaction event.
    let mut doc: serde_json::Value = serde_json::from_str(&serialize_model(&builtin_webxr_model())).unwrap();
    doc["features"].as_array_mut().unwrap().push(serde_json::json!({
        "id": "teleport", "name": "Teleport", "optionality": "optional", "kind": "variant",
        "parent": "interaction-events"
    }));
    let extended = parse_model(&doc.to_string()).unwrap();
    println!("extended built-in: {} features", extended.len());

    let broken = KIOSK.replace(r#""max": 2"#, r#""max": 3"#);
    println!("broken: {}", parse_model(&broken).unwrap_err());
}
