//! Count the products of the built-in model and list a few completions of
//! a partial configuration.
//!
//! ```sh
//! cargo run --release --example enumerate_products
//! ```

use webxr_spl::configurator::{count_products, enumerate, Configuration, State};
use webxr_spl::model::builtin_webxr_model;

fn main() {
    let model = builtin_webxr_model();
    println!("products: {}", count_products(&model).unwrap());

    let partial = Configuration::new(&model)
        .select("mixed-reality")
        .select("hololens")
        .deselect("wearable")
        .deselect("interaction-events");
    let e = enumerate(&model, &partial, 5).unwrap();
    println!("first {} completions (truncated: {}):", e.configurations.len(), e.truncated);
    for c in &e.configurations {
        let picked: Vec<_> = c
            .decisions()
            .filter(|(id, s)| *s == State::Selected && model.get(id.as_str()).is_some_and(|f| f.kind.is_variant()))
            .map(|(id, _)| id.as_str())
            .collect();
        println!("  {}", picked.join(" "));
    }
}
