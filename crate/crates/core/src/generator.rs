//! Template generator: turns a complete, valid configuration of the Web XR
//! model into an A-Frame scene skeleton plus a manifest tracing every
//! emitted entity and component back to the features that caused it.
//!
//! Rules fire in a fixed order:
//!
//! | rule | condition | effect |
//! |------|-----------|--------|
//! | R1 | always | `a-scene` root; demo `a-box` and `a-sky` when enabled |
//! | R2 | `avatar` | camera rig `a-entity#rig` holding a camera entity |
//! | R3 | `desktop` or `mobile` | `a-cursor` inside the camera |
//! | R4 | `wearable` | right hand with `hand-controls`, left hand with per-device controls |
//! | R5 | `tactile` | `haptics` on both hands |
//! | R6 | `audition` | `sound` on the demo box, or on the rig without demo objects |
//! | R7 | `mixed-reality` | `webxr` system requesting an AR session; no `a-sky` |
//! | R8 | `click` | `event-set__click` on interactive entities |
//! | R9 | `vision` | nothing beyond the visual scene |

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::configurator::{serialize_config, validate, ConfigError, Configuration, Diagnostic, Mode};
use crate::model::{FeatureId, FeatureModel};
use crate::scene::{render, ComponentInstance, DocumentHead, Entity, Scene};

pub const DEFAULT_AFRAME_RUNTIME_URL: &str = "https://aframe.io/releases/1.5.0/aframe.min.js";
pub const DEFAULT_EVENT_SET_COMPONENT_URL: &str =
    "https://unpkg.com/aframe-event-set-component@5.0.0/dist/aframe-event-set-component.min.js";
pub const DEFAULT_APP_TITLE: &str = "Web XR App";

/// Feature ids the rule table reads.
pub const RULE_FEATURES: &[&str] = &[
    "platform",
    "wearable",
    "desktop",
    "mobile",
    "multimodal-interfaces",
    "vision",
    "audition",
    "tactile",
    "xr-modality",
    "mixed-reality",
    "devices",
    "avatar",
    "virtual-world",
    "interaction-events",
    "click",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("configuration is not a valid complete product ({} diagnostics)", .0.len())]
    InvalidConfiguration(Vec<Diagnostic>),
    #[error("model lacks features used by the generator: {}", .missing.join(", "))]
    UnknownModel { missing: Vec<String> },
    #[error("invalid generation options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationOptions {
    pub app_title: String,
    pub author: Option<String>,
    /// Emit a demo box and sky so the skeleton visibly renders something.
    pub include_demo_objects: bool,
}

impl Default for GenerationOptions {
    fn default() -> Self {
        GenerationOptions {
            app_title: DEFAULT_APP_TITLE.to_string(),
            author: None,
            include_demo_objects: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HapticsSettings {
    pub event: String,
    /// Vibration time in milliseconds.
    pub duration_ms: u32,
    /// Vibration intensity, 0 to 1.
    pub force: f32,
}

impl Default for HapticsSettings {
    fn default() -> Self {
        HapticsSettings {
            event: "gripdown".to_string(),
            duration_ms: 100,
            force: 1.0,
        }
    }
}

/// Generator data that is not per-request: script URLs, haptics defaults and
/// the device → controls-component table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorSettings {
    pub aframe_runtime_url: String,
    pub event_set_component_url: String,
    pub haptics: HapticsSettings,
    /// Device feature id → left-hand controls component.
    pub device_controls: BTreeMap<String, String>,
    /// Controls component for devices missing from `device_controls`.
    pub fallback_controls: String,
}

impl Default for GeneratorSettings {
    fn default() -> Self {
        let device_controls = [
            ("magic-leap", "magicleap-controls"),
            ("oculus-go", "oculus-go-controls"),
            ("vive-focus", "vive-focus-controls"),
        ]
        .into_iter()
        .map(|(d, c)| (d.to_string(), c.to_string()))
        .collect();
        GeneratorSettings {
            aframe_runtime_url: DEFAULT_AFRAME_RUNTIME_URL.to_string(),
            event_set_component_url: DEFAULT_EVENT_SET_COMPONENT_URL.to_string(),
            haptics: HapticsSettings::default(),
            device_controls,
            fallback_controls: "tracked-controls".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Entity path: `0` is the `a-scene`, then child indices, e.g. `0/2/1`.
    pub path: String,
    /// Entity tag or component name.
    pub element: String,
    pub caused_by: Vec<FeatureId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedArtifact {
    pub scene: Scene,
    pub document: String,
    pub manifest: Vec<ManifestEntry>,
    pub config_digest: String,
}

#[derive(Serialize, Deserialize)]
struct ManifestDocument {
    entries: Vec<ManifestEntry>,
}

impl GeneratedArtifact {
    /// The manifest as a JSON document `{entries: [{path, element, caused_by}]}`.
    pub fn manifest_document(&self) -> String {
        manifest_to_document(&self.manifest)
    }
}

pub fn manifest_to_document(entries: &[ManifestEntry]) -> String {
    let doc = ManifestDocument {
        entries: entries.to_vec(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("manifest serializes");
    out.push('\n');
    out
}

pub fn manifest_from_document(text: &str) -> Result<Vec<ManifestEntry>, serde_json::Error> {
    serde_json::from_str::<ManifestDocument>(text).map(|d| d.entries)
}

#[derive(Debug, Clone, Default)]
pub struct Generator {
    settings: GeneratorSettings,
}

impl Generator {
    pub fn new(settings: GeneratorSettings) -> Self {
        Generator { settings }
    }

    pub fn settings(&self) -> &GeneratorSettings {
        &self.settings
    }

    pub fn generate(
        &self,
        model: &FeatureModel,
        config: &Configuration,
        options: &GenerationOptions,
    ) -> Result<GeneratedArtifact, GenerateError> {
        if options.app_title.trim().is_empty() {
            return Err(GenerateError::InvalidOptions("app_title must not be empty".into()));
        }
        let missing: Vec<String> = RULE_FEATURES
            .iter()
            .filter(|id| !model.contains(id))
            .map(|id| id.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(GenerateError::UnknownModel { missing });
        }
        let diagnostics = validate(model, config, Mode::Complete)?;
        if !diagnostics.is_empty() {
            return Err(GenerateError::InvalidConfiguration(diagnostics));
        }

        let mut build = Build {
            model,
            config,
            settings: &self.settings,
            options,
            scene: Scene::new(),
            manifest: Vec::new(),
            scripts: Vec::new(),
            demo_box: None,
            rig: None,
            camera: None,
            hands: Vec::new(),
        };
        build.run();

        let head = DocumentHead {
            title: options.app_title.clone(),
            author: options.author.clone(),
            runtime_url: self.settings.aframe_runtime_url.clone(),
            scripts: build.scripts.clone(),
        };
        let document = render(&build.scene, &head);
        let config_digest = hex::encode(Sha256::digest(serialize_config(config, model).as_bytes()));
        Ok(GeneratedArtifact {
            scene: build.scene,
            document,
            manifest: build.manifest,
            config_digest,
        })
    }
}

/// [`Generator::generate`] with default settings.
pub fn generate(
    model: &FeatureModel,
    config: &Configuration,
    options: &GenerationOptions,
) -> Result<GeneratedArtifact, GenerateError> {
    Generator::default().generate(model, config, options)
}

/// Manifest entries caused (in part) by `feature`.
pub fn explain<'a>(artifact: &'a GeneratedArtifact, feature: &str) -> Vec<&'a ManifestEntry> {
    artifact
        .manifest
        .iter()
        .filter(|e| e.caused_by.iter().any(|f| f.as_str() == feature))
        .collect()
}

struct Build<'a> {
    model: &'a FeatureModel,
    config: &'a Configuration,
    settings: &'a GeneratorSettings,
    options: &'a GenerationOptions,
    scene: Scene,
    manifest: Vec<ManifestEntry>,
    scripts: Vec<String>,
    demo_box: Option<String>,
    rig: Option<String>,
    camera: Option<String>,
    hands: Vec<String>,
}

fn fid(id: &str) -> FeatureId {
    FeatureId::new(id).expect("rule feature ids are valid tokens")
}

impl Build<'_> {
    fn on(&self, feature: &str) -> bool {
        self.config.is_selected(feature)
    }

    fn record(&mut self, path: &str, element: &str, caused_by: &[&str]) {
        self.manifest.push(ManifestEntry {
            path: path.to_string(),
            element: element.to_string(),
            caused_by: caused_by.iter().map(|f| fid(f)).collect(),
        });
    }

    fn add_entity(&mut self, parent: &str, entity: Entity, caused_by: &[&str]) -> String {
        let tag = entity.tag().to_string();
        let index = self
            .scene
            .resolve_mut(parent)
            .expect("parent paths come from earlier rules")
            .push_child(entity);
        let path = format!("{parent}/{index}");
        self.record(&path, &tag, caused_by);
        path
    }

    fn add_component(&mut self, path: &str, component: ComponentInstance, caused_by: &[&str]) {
        let name = component.name().to_string();
        self.scene
            .resolve_mut(path)
            .expect("component paths come from earlier rules")
            .attach(component);
        self.record(path, &name, caused_by);
    }

    fn run(&mut self) {
        self.scene_root();
        self.avatar_rig();
        self.cursor();
        self.hands();
        self.haptics();
        self.sound();
        self.mixed_reality();
        self.click_events();
        self.vision();
    }

    // R1
    fn scene_root(&mut self) {
        let root = self.model.root_id().to_string();
        self.record("0", crate::scene::SCENE_TAG, &[&root]);
        if !self.options.include_demo_objects || !self.on("virtual-world") {
            return;
        }
        let demo_box = Entity::new("a-box")
            .with(ComponentInstance::value("position", "-1 0.5 -3"))
            .with(ComponentInstance::value("rotation", "0 45 0"))
            .with(ComponentInstance::value("color", "#4CC3D9"));
        self.demo_box = Some(self.add_entity("0", demo_box, &["virtual-world"]));
        // R7 suppresses the sky: mixed reality shows the real surroundings.
        if !self.on("mixed-reality") {
            let sky = Entity::new("a-sky").with(ComponentInstance::value("color", "#ECECEC"));
            self.add_entity("0", sky, &["virtual-world"]);
        }
    }

    // R2
    fn avatar_rig(&mut self) {
        if !self.on("avatar") {
            return;
        }
        let rig = Entity::new("a-entity")
            .with(ComponentInstance::value("id", "rig"))
            .with(ComponentInstance::value("position", "0 0 0"));
        let rig = self.add_entity("0", rig, &["avatar"]);
        let camera = Entity::new("a-entity")
            .with(ComponentInstance::value("id", "camera"))
            .with(ComponentInstance::new("camera"))
            .with(ComponentInstance::new("look-controls"))
            .with(ComponentInstance::new("wasd-controls"))
            .with(ComponentInstance::value("position", "0 1.6 0"));
        self.camera = Some(self.add_entity(&rig, camera, &["avatar"]));
        self.rig = Some(rig);
    }

    // R3
    fn cursor(&mut self) {
        let causes: Vec<&str> = ["desktop", "mobile"].into_iter().filter(|f| self.on(f)).collect();
        if causes.is_empty() {
            return;
        }
        let Some(camera) = self.camera.clone() else {
            return;
        };
        self.add_entity(&camera, Entity::new("a-cursor"), &causes);
    }

    // R4
    fn hands(&mut self) {
        if !self.on("wearable") {
            return;
        }
        let Some(rig) = self.rig.clone() else {
            return;
        };
        let right = Entity::new("a-entity").with(ComponentInstance::value("id", "right-hand"));
        let right = self.add_entity(&rig, right, &["wearable"]);
        self.add_component(
            &right,
            ComponentInstance::new("hand-controls").with("hand", "right"),
            &["wearable"],
        );

        let left = Entity::new("a-entity").with(ComponentInstance::value("id", "left-hand"));
        let left = self.add_entity(&rig, left, &["wearable"]);
        let mut fallback: Vec<String> = Vec::new();
        let selected_devices: Vec<String> = self
            .model
            .variants("devices")
            .filter(|d| self.on(d.id.as_str()))
            .map(|d| d.id.to_string())
            .collect();
        for device in &selected_devices {
            match self.settings.device_controls.get(device).cloned() {
                Some(component) => self.add_component(
                    &left,
                    ComponentInstance::new(component).with("hand", "left"),
                    &["wearable", device],
                ),
                None => fallback.push(device.clone()),
            }
        }
        if !fallback.is_empty() {
            let mut causes = vec!["wearable"];
            causes.extend(fallback.iter().map(String::as_str));
            let component = ComponentInstance::new(self.settings.fallback_controls.clone()).with("hand", "left");
            self.add_component(&left, component, &causes);
        }
        self.hands = vec![right, left];
    }

    // R5
    fn haptics(&mut self) {
        if !self.on("tactile") {
            return;
        }
        let h = &self.settings.haptics;
        let component = ComponentInstance::new("haptics")
            .with("events", h.event.clone())
            .with("dur", h.duration_ms.to_string())
            .with("force", h.force.to_string());
        for hand in self.hands.clone() {
            self.add_component(&hand, component.clone(), &["tactile"]);
        }
    }

    // R6
    fn sound(&mut self) {
        if !self.on("audition") {
            return;
        }
        let Some(target) = self.demo_box.clone().or_else(|| self.rig.clone()) else {
            return;
        };
        self.add_component(&target, ComponentInstance::new("sound").with("src", ""), &["audition"]);
    }

    // R7
    fn mixed_reality(&mut self) {
        if !self.on("mixed-reality") {
            return;
        }
        self.scene
            .attach_system(ComponentInstance::new("webxr").with("requestedMode", "immersive-ar"));
        self.record("0", "webxr", &["mixed-reality"]);
    }

    // R8
    fn click_events(&mut self) {
        if !self.on("click") {
            return;
        }
        let Some(target) = self.demo_box.clone() else {
            return;
        };
        self.add_component(
            &target,
            ComponentInstance::new("event-set__click").with("color", "#EF2D5E"),
            &["click"],
        );
        self.scripts.push(self.settings.event_set_component_url.clone());
    }

    // R9
    fn vision(&mut self) {
        if self.on("vision") {
            self.record("0", crate::scene::SCENE_TAG, &["vision"]);
        }
    }
}
