//! Build an entity-component scene by hand and render it.
//!
//! ```sh
//! cargo run --example scene_graph
//! ```

use webxr_spl::scene::{render, ComponentInstance, DocumentHead, Entity, Scene};

fn main() {
    let mut scene = Scene::new();
    scene.attach_system(ComponentInstance::new("fog").with("type", "linear").with("color", "#AAA"));

    let ball = Entity::new("a-sphere")
        .with(ComponentInstance::value("position", "0 1.25 -5"))
        .with(ComponentInstance::value("radius", "1.25"))
        .with(ComponentInstance::new("event-set__click").with("color", "red"))
        .with(ComponentInstance::new("event-set__mouseleave").with("color", "blue"));
    let mut label = Entity::new("a-text").with(ComponentInstance::value("position", "0 3 -5"));
    label.set_text("click me");
    scene.root_mut().push_child(ball);
    scene.root_mut().push_child(label);

    // Attaching a component that is already present replaces it.
    let ball = scene.resolve_mut("0/0").unwrap();
    ball.attach(ComponentInstance::value("radius", "0.5"));

    for (path, entity) in scene.walk() {
        println!("{path:6} {} ({} components)", entity.tag(), entity.components().len());
    }
    println!();
    print!("{}", render(&scene, &DocumentHead::new("Scene demo", "https://aframe.io/releases/1.5.0/aframe.min.js")));
}
