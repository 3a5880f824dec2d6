use super::{
    Dependency, DependencyKind, Feature, FeatureId, FeatureKind, FeatureModel, GroupCardinality,
    Optionality, Processing, RequiresAny,
};

struct Row {
    id: &'static str,
    name: &'static str,
    parent: Option<&'static str>,
    optionality: Optionality,
    kind: FeatureKind,
    processing: Option<Processing>,
    description: &'static str,
}

const fn vp(
    id: &'static str,
    name: &'static str,
    optionality: Optionality,
    min: usize,
    max: usize,
    description: &'static str,
) -> Row {
    Row {
        id,
        name,
        parent: Some("web-xr-app"),
        optionality,
        kind: FeatureKind::VariationPoint(GroupCardinality::new(min, max)),
        processing: None,
        description,
    }
}

const fn variant(id: &'static str, name: &'static str, parent: &'static str) -> Row {
    Row {
        id,
        name,
        parent: Some(parent),
        optionality: Optionality::Optional,
        kind: FeatureKind::Variant,
        processing: None,
        description: "",
    }
}

const fn sense(id: &'static str, name: &'static str) -> Row {
    Row {
        processing: Some(Processing::Indirect),
        ..variant(id, name, "multimodal-interfaces")
    }
}

use Optionality::{Mandatory, Optional};

const FEATURES: &[Row] = &[
    Row {
        id: "web-xr-app",
        name: "Web XR App",
        parent: None,
        optionality: Mandatory,
        kind: FeatureKind::Invariable,
        processing: None,
        description: "A Web XR application",
    },
    vp("platform", "Platform", Mandatory, 1, 3, "Kind of device the application runs on"),
    variant("wearable", "Wearable", "platform"),
    variant("desktop", "Desktop", "platform"),
    variant("mobile", "Mobile", "platform"),
    vp(
        "multimodal-interfaces",
        "Multimodal Interfaces",
        Mandatory,
        1,
        3,
        "Human senses engaged by the immersive experience",
    ),
    sense("vision", "Vision"),
    sense("audition", "Audition"),
    sense("tactile", "Tactile"),
    vp(
        "xr-modality",
        "XR Modality",
        Mandatory,
        1,
        1,
        "Position on the reality-virtuality continuum",
    ),
    variant("virtual-reality", "Virtual Reality", "xr-modality"),
    variant("mixed-reality", "Mixed Reality", "xr-modality"),
    vp("devices", "Devices", Mandatory, 1, 7, "Devices used for interaction and feedback"),
    variant("meta-quest", "Meta Quest", "devices"),
    variant("htc-vive", "HTC Vive", "devices"),
    variant("hololens", "HoloLens", "devices"),
    variant("pcvr", "PCVR", "devices"),
    variant("magic-leap", "Magic Leap", "devices"),
    variant("oculus-go", "Oculus Go", "devices"),
    variant("vive-focus", "Vive Focus", "devices"),
    vp("browser", "Browser", Mandatory, 1, 4, "Web browsers the application supports"),
    variant("chrome", "Chrome", "browser"),
    variant("firefox", "Firefox", "browser"),
    variant("edge", "Edge", "browser"),
    variant("safari", "Safari", "browser"),
    Row {
        id: "avatar",
        name: "Avatar",
        parent: Some("web-xr-app"),
        optionality: Mandatory,
        kind: FeatureKind::Invariable,
        processing: None,
        description: "Representation of the user",
    },
    Row {
        id: "virtual-world",
        name: "Virtual World",
        parent: Some("web-xr-app"),
        optionality: Mandatory,
        kind: FeatureKind::Invariable,
        processing: None,
        description: "Virtual space the user is placed in",
    },
    vp(
        "interaction-events",
        "Interaction Events",
        Optional,
        1,
        3,
        "Interaction events for each type of device",
    ),
    variant("click", "Click", "interaction-events"),
    variant("grip", "Grip", "interaction-events"),
    variant("hover", "Hover", "interaction-events"),
];

fn fid(s: &str) -> FeatureId {
    FeatureId::new(s).expect("built-in ids are valid tokens")
}

/// The built-in Web XR product-line model.
pub fn builtin_webxr_model() -> FeatureModel {
    let features = FEATURES
        .iter()
        .map(|s| Feature {
            id: fid(s.id),
            display_name: s.name.to_string(),
            optionality: s.optionality,
            kind: s.kind,
            parent: s.parent.map(fid),
            processing: s.processing,
            description: s.description.to_string(),
        })
        .collect();
    let dependencies = vec![
        Dependency {
            source: fid("tactile"),
            kind: DependencyKind::Requires,
            target: fid("wearable"),
        },
        Dependency {
            source: fid("hololens"),
            kind: DependencyKind::Requires,
            target: fid("mixed-reality"),
        },
    ];
    let constraints = vec![RequiresAny {
        source: fid("mixed-reality"),
        targets: vec![fid("wearable"), fid("mobile")],
    }];
    FeatureModel::new(fid("web-xr-app"), features, dependencies, constraints)
        .expect("built-in model is well-formed")
}
