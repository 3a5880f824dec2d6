//! Entity-component scene graph and its HTML serialization.
//!
//! An [`Entity`] is a tagged container holding named [`ComponentInstance`]s
//! (rendered as HTML attributes) and child entities (rendered as nested
//! elements). A [`Scene`] is rooted at an `a-scene` entity whose systems are
//! rendered as attributes of the root.
//!
//! Rendering is byte-deterministic: two spaces of indentation per depth,
//! attributes in insertion order, component properties in insertion order.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SceneError {
    #[error("invalid component name `{0}`")]
    ComponentName(String),
    #[error("invalid property name `{0}`")]
    PropertyName(String),
    #[error("invalid tag `{0}`")]
    Tag(String),
}

/// Property name used by single-value components such as `color`.
pub const VALUE_PROPERTY: &str = "value";

fn is_token(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}

/// `base` or `base__instance`, each part a lowercase token.
fn is_component_name(s: &str) -> bool {
    match s.split_once("__") {
        Some((base, suffix)) => is_token(base) && is_token(suffix),
        None => is_token(s),
    }
}

fn is_property_name(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ':' | ';' | '"' | '<' | '>' | '&'))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentInstance {
    name: String,
    properties: Vec<(String, String)>,
}

impl ComponentInstance {
    pub fn try_new(name: impl Into<String>) -> Result<Self, SceneError> {
        let name = name.into();
        if !is_component_name(&name) {
            return Err(SceneError::ComponentName(name));
        }
        Ok(ComponentInstance {
            name,
            properties: Vec::new(),
        })
    }

    /// Panics on an invalid name; use [`try_new`](Self::try_new) for
    /// untrusted input.
    pub fn new(name: impl Into<String>) -> Self {
        Self::try_new(name).unwrap_or_else(|e| panic!("{e}"))
    }

    /// A single-value component, rendered `name="value"`.
    pub fn value(name: impl Into<String>, value: impl Into<String>) -> Self {
        Self::new(name).with(VALUE_PROPERTY, value)
    }

    pub fn try_set(&mut self, key: impl Into<String>, value: impl Into<String>) -> Result<(), SceneError> {
        let key = key.into();
        if !is_property_name(&key) {
            return Err(SceneError::PropertyName(key));
        }
        let value = value.into();
        match self.properties.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.properties.push((key, value)),
        }
        Ok(())
    }

    /// Sets a property, keeping its position when it already exists.
    pub fn with(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.try_set(key, value).unwrap_or_else(|e| panic!("{e}"));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn properties(&self) -> &[(String, String)] {
        &self.properties
    }

    pub fn property(&self, key: &str) -> Option<&str> {
        self.properties
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// The attribute value as rendered, or `None` for a bare attribute.
    pub fn attribute_value(&self) -> Option<String> {
        match self.properties.as_slice() {
            [] => None,
            [(k, v)] if k == VALUE_PROPERTY => Some(v.clone()),
            props => Some(
                props
                    .iter()
                    .map(|(k, v)| format!("{k}: {v}").trim_end().to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entity {
    tag: String,
    components: Vec<ComponentInstance>,
    children: Vec<Entity>,
    text: Option<String>,
}

impl Entity {
    pub fn try_new(tag: impl Into<String>) -> Result<Self, SceneError> {
        let tag = tag.into();
        if !is_token(&tag) {
            return Err(SceneError::Tag(tag));
        }
        Ok(Entity {
            tag,
            components: Vec::new(),
            children: Vec::new(),
            text: None,
        })
    }

    /// Panics on an invalid tag.
    pub fn new(tag: impl Into<String>) -> Self {
        Self::try_new(tag).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn components(&self) -> &[ComponentInstance] {
        &self.components
    }

    pub fn component(&self, name: &str) -> Option<&ComponentInstance> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn children(&self) -> &[Entity] {
        &self.children
    }

    pub fn children_mut(&mut self) -> &mut Vec<Entity> {
        &mut self.children
    }

    pub fn text(&self) -> Option<&str> {
        self.text.as_deref()
    }

    pub fn set_text(&mut self, text: impl Into<String>) {
        self.text = Some(text.into());
    }

    /// Appends `component`, or replaces the properties of an existing
    /// component of the same name in place.
    pub fn attach(&mut self, component: ComponentInstance) {
        match self.components.iter_mut().find(|c| c.name == component.name) {
            Some(existing) => existing.properties = component.properties,
            None => self.components.push(component),
        }
    }

    pub fn with(mut self, component: ComponentInstance) -> Self {
        self.attach(component);
        self
    }

    /// Appends a child and returns its index.
    pub fn push_child(&mut self, child: Entity) -> usize {
        self.children.push(child);
        self.children.len() - 1
    }

    pub fn with_child(mut self, child: Entity) -> Self {
        self.children.push(child);
        self
    }

    /// Number of entities in this subtree, including `self`.
    pub fn count(&self) -> usize {
        1 + self.children.iter().map(Entity::count).sum::<usize>()
    }
}

/// Returns `entity` with `component` attached (last write wins).
pub fn attach(mut entity: Entity, component: ComponentInstance) -> Entity {
    entity.attach(component);
    entity
}

pub const SCENE_TAG: &str = "a-scene";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scene {
    root: Entity,
    systems: Vec<ComponentInstance>,
}

impl Default for Scene {
    fn default() -> Self {
        Self::new()
    }
}

impl Scene {
    pub fn new() -> Self {
        Scene {
            root: Entity::new(SCENE_TAG),
            systems: Vec::new(),
        }
    }

    /// Fails unless `root` is tagged `a-scene`.
    pub fn from_root(root: Entity, systems: Vec<ComponentInstance>) -> Result<Self, SceneError> {
        if root.tag != SCENE_TAG {
            return Err(SceneError::Tag(root.tag));
        }
        let mut scene = Scene {
            root,
            systems: Vec::new(),
        };
        for s in systems {
            scene.attach_system(s);
        }
        Ok(scene)
    }

    pub fn root(&self) -> &Entity {
        &self.root
    }

    pub fn root_mut(&mut self) -> &mut Entity {
        &mut self.root
    }

    pub fn systems(&self) -> &[ComponentInstance] {
        &self.systems
    }

    /// Attaches a scene-wide system (last write wins by name).
    pub fn attach_system(&mut self, system: ComponentInstance) {
        match self.systems.iter_mut().find(|s| s.name == system.name) {
            Some(existing) => existing.properties = system.properties,
            None => self.systems.push(system),
        }
    }

    pub fn entity_count(&self) -> usize {
        self.root.count()
    }

    /// Resolves a path such as `"0/2/1"`: `0` is the root, each further
    /// segment a child index.
    pub fn resolve(&self, path: &str) -> Option<&Entity> {
        let mut parts = path.split('/');
        if parts.next()? != "0" {
            return None;
        }
        parts.try_fold(&self.root, |e, seg| e.children.get(seg.parse::<usize>().ok()?))
    }

    pub fn resolve_mut(&mut self, path: &str) -> Option<&mut Entity> {
        let mut parts = path.split('/');
        if parts.next()? != "0" {
            return None;
        }
        parts.try_fold(&mut self.root, |e, seg| e.children.get_mut(seg.parse::<usize>().ok()?))
    }

    /// Depth-first, pre-order walk yielding each entity with its path.
    pub fn walk(&self) -> Vec<(String, &Entity)> {
        fn go<'a>(e: &'a Entity, path: String, out: &mut Vec<(String, &'a Entity)>) {
            out.push((path.clone(), e));
            for (i, c) in e.children.iter().enumerate() {
                go(c, format!("{path}/{i}"), out);
            }
        }
        let mut out = Vec::with_capacity(self.entity_count());
        go(&self.root, "0".to_string(), &mut out);
        out
    }
}

/// Document-level settings that are not part of the scene itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentHead {
    pub title: String,
    pub author: Option<String>,
    /// Script URL of the XR runtime.
    pub runtime_url: String,
    /// Further component scripts, loaded after the runtime.
    pub scripts: Vec<String>,
}

impl DocumentHead {
    pub fn new(title: impl Into<String>, runtime_url: impl Into<String>) -> Self {
        DocumentHead {
            title: title.into(),
            author: None,
            runtime_url: runtime_url.into(),
            scripts: Vec::new(),
        }
    }
}

fn escape_attr(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
}

fn escape_text(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
}

fn push_attribute(c: &ComponentInstance, out: &mut String) {
    out.push(' ');
    out.push_str(&c.name);
    if let Some(v) = c.attribute_value() {
        out.push_str("=\"");
        escape_attr(&v, out);
        out.push('"');
    }
}

fn render_entity(e: &Entity, extra: &[ComponentInstance], depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    out.push_str(&indent);
    out.push('<');
    out.push_str(&e.tag);
    for c in extra.iter().chain(&e.components) {
        push_attribute(c, out);
    }
    out.push('>');
    if e.children.is_empty() {
        if let Some(t) = &e.text {
            escape_text(t, out);
        }
    } else {
        out.push('\n');
        if let Some(t) = &e.text {
            out.push_str(&indent);
            out.push_str("  ");
            escape_text(t, out);
            out.push('\n');
        }
        for child in &e.children {
            render_entity(child, &[], depth + 1, out);
        }
        out.push_str(&indent);
    }
    out.push_str("</");
    out.push_str(&e.tag);
    out.push_str(">\n");
}

/// Serializes only the `a-scene` subtree, starting at `depth`.
pub fn render_scene(scene: &Scene, depth: usize) -> String {
    let mut out = String::new();
    render_entity(&scene.root, &scene.systems, depth, &mut out);
    out
}

/// Renders a complete HTML document around the scene.
pub fn render(scene: &Scene, head: &DocumentHead) -> String {
    let mut out = String::with_capacity(2048);
    out.push_str("<!DOCTYPE html>\n<html>\n  <head>\n    <meta charset=\"utf-8\">\n    <title>");
    escape_text(&head.title, &mut out);
    out.push_str("</title>\n");
    if let Some(author) = &head.author {
        out.push_str("    <meta name=\"author\" content=\"");
        escape_attr(author, &mut out);
        out.push_str("\">\n");
    }
    for src in std::iter::once(&head.runtime_url).chain(&head.scripts) {
        out.push_str("    <script src=\"");
        escape_attr(src, &mut out);
        out.push_str("\"></script>\n");
    }
    out.push_str("  </head>\n  <body>\n");
    render_entity(&scene.root, &scene.systems, 2, &mut out);
    let _ = write!(out, "  </body>\n</html>\n");
    out
}
