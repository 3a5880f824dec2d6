//! Walk the built-in Web XR feature model and print it as a tree.
//!
//! ```sh
//! cargo run --example feature_model
//! ```

use webxr_spl::model::{builtin_webxr_model, FeatureKind, FeatureModel};

fn print_subtree(model: &FeatureModel, id: &str, depth: usize) {
    let f = model.get(id).expect("ids come from the model");
    let kind = match f.kind {
        FeatureKind::VariationPoint(g) if g.is_alternative() => "alternative".to_string(),
        FeatureKind::VariationPoint(g) => format!("or {g}"),
        FeatureKind::Variant => "variant".to_string(),
        FeatureKind::Invariable => "invariable".to_string(),
    };
    let mark = if f.is_mandatory() { "*" } else { "?" };
    println!("{:indent$}{mark} {} ({kind})", "", f.id, indent = depth * 2);
    for child in model.children(id) {
        print_subtree(model, child.id.as_str(), depth + 1);
    }
}

fn main() {
    let model = builtin_webxr_model();
    print_subtree(&model, model.root_id().as_str(), 0);
    println!();
    for d in model.dependencies() {
        println!("{} {:?} {}", d.source, d.kind, d.target);
    }
    for c in model.constraints() {
        let targets: Vec<_> = c.targets.iter().map(|t| t.as_str()).collect();
        println!("{} requires one of [{}]", c.source, targets.join(", "));
    }
    println!("\n{} features, digest {}", model.len(), &model.digest()[..16]);
}
