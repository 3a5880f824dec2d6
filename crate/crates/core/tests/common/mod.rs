//! Shared test support: seeded random models, an independent brute-force
//! product oracle and a balanced-tag checker for generated documents.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use webxr_spl::configurator::{parse_config, Configuration, State};
use webxr_spl::model::{
    Dependency, DependencyKind, Feature, FeatureId, FeatureKind, FeatureModel, GroupCardinality, Optionality,
    RequiresAny,
};

pub const WORKED_EXAMPLE_CFG: &str = include_str!("../fixtures/worked_example.cfg");
pub const BAD_CFG: &str = include_str!("../fixtures/bad.cfg");

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn worked_example() -> Configuration {
    parse_config(WORKED_EXAMPLE_CFG).expect("worked_example fixture parses")
}

/// Complete configuration selecting `selected` plus every mandatory
/// non-variant feature.
pub fn product(model: &FeatureModel, selected: &[&str]) -> Configuration {
    let mut c = Configuration::new(model);
    for f in model.features() {
        let on = selected.contains(&f.id.as_str()) || (f.is_mandatory() && !f.kind.is_variant());
        c.set(f.id.as_str(), if on { State::Selected } else { State::Deselected });
    }
    c
}

/// Desktop-only virtual reality with vision as the only sense.
pub fn desktop_only(model: &FeatureModel) -> Configuration {
    product(model, &["desktop", "vision", "virtual-reality", "htc-vive", "firefox"])
}

fn id(s: &str) -> FeatureId {
    FeatureId::new(s).unwrap()
}

/// A random valid model with between 1 and `max_features` features.
pub fn random_model(rng: &mut ChaCha8Rng, max_features: usize) -> FeatureModel {
    let target = rng.gen_range(1..=max_features);
    // (parent, is_variation_point, is_variant, mandatory)
    let mut shape: Vec<(Option<usize>, bool, bool, bool)> = vec![(None, false, false, true)];
    if target >= 2 && rng.gen_bool(0.3) {
        shape[0].1 = true;
    }
    let variant_count = |shape: &[(Option<usize>, bool, bool, bool)], p: usize| {
        shape.iter().filter(|s| s.0 == Some(p) && s.2).count()
    };
    while shape.len() < target {
        let empty_vp = (0..shape.len()).find(|&p| shape[p].1 && variant_count(&shape, p) == 0);
        let parent = empty_vp.unwrap_or_else(|| rng.gen_range(0..shape.len()));
        let variant = shape[parent].1 && (empty_vp.is_some() || rng.gen_bool(0.7));
        let room = target - shape.len();
        let vp = !variant && room >= 2 && rng.gen_bool(0.25);
        let mandatory = !variant && rng.gen_bool(0.4);
        shape.push((Some(parent), vp, variant, mandatory));
    }
    // A variation point left without variants at the end becomes plain.
    let empty: Vec<usize> = (0..shape.len())
        .filter(|&p| shape[p].1 && variant_count(&shape, p) == 0)
        .collect();
    for p in empty {
        shape[p].1 = false;
    }

    let name = |i: usize| format!("f{i}");
    let features: Vec<Feature> = (0..shape.len())
        .map(|i| {
            let (parent, vp, variant, mandatory) = shape[i];
            let kind = if vp {
                let n = variant_count(&shape, i);
                let min = rng.gen_range(1..=n);
                let max = rng.gen_range(min..=n);
                FeatureKind::VariationPoint(GroupCardinality::new(min, max))
            } else if variant {
                FeatureKind::Variant
            } else {
                FeatureKind::Invariable
            };
            Feature {
                id: id(&name(i)),
                display_name: format!("Feature {i}"),
                optionality: if mandatory { Optionality::Mandatory } else { Optionality::Optional },
                kind,
                parent: parent.map(|p| id(&name(p))),
                processing: None,
                description: String::new(),
            }
        })
        .collect();

    let n = features.len();
    let mut dependencies = Vec::new();
    let mut constraints = Vec::new();
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=3) {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            if s != t {
                let kind = if rng.gen_bool(0.5) { DependencyKind::Requires } else { DependencyKind::Excludes };
                dependencies.push(Dependency {
                    source: id(&name(s)),
                    kind,
                    target: id(&name(t)),
                });
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            let s = rng.gen_range(0..n);
            let mut others: Vec<usize> = (0..n).filter(|&t| t != s).collect();
            others.shuffle(rng);
            let k = rng.gen_range(1..=others.len().min(3));
            constraints.push(RequiresAny {
                source: id(&name(s)),
                targets: others[..k].iter().map(|&t| id(&name(t))).collect(),
            });
        }
    }
    FeatureModel::new(id("f0"), features, dependencies, constraints).expect("generator builds valid models")
}

/// Each feature decided with probability `density`, selected or deselected
/// with equal odds.
pub fn random_partial(rng: &mut ChaCha8Rng, model: &FeatureModel, density: f64) -> Configuration {
    let mut c = Configuration::new(model);
    for f in model.features() {
        if rng.gen_bool(density) {
            let s = if rng.gen_bool(0.5) { State::Selected } else { State::Deselected };
            c.set(f.id.as_str(), s);
        }
    }
    c
}

/// Brute-force product semantics over bitmasks, written directly from the
/// feature-tree definitions and sharing no code with the configurator.
pub struct BruteForce {
    n: usize,
    root: u64,
    parent: Vec<Option<u64>>,
    mandatory_children: Vec<u64>,
    groups: Vec<(usize, u64, usize, usize)>,
    requires: Vec<(u64, u64)>,
    excludes: Vec<(u64, u64)>,
    requires_any: Vec<(u64, u64)>,
}

impl BruteForce {
    pub fn new(model: &FeatureModel) -> Self {
        let n = model.len();
        assert!(n <= 64);
        let bit = |id: &FeatureId| 1u64 << model.index_of(id.as_str()).unwrap();
        let features = model.features();
        let parent = features.iter().map(|f| f.parent.as_ref().map(bit)).collect();
        let mut mandatory_children = vec![0u64; n];
        let mut groups = Vec::new();
        for (i, f) in features.iter().enumerate() {
            for c in features.iter().filter(|c| c.parent.as_ref() == Some(&f.id)) {
                if c.is_mandatory() {
                    mandatory_children[i] |= bit(&c.id);
                }
            }
            if let FeatureKind::VariationPoint(g) = f.kind {
                let variants = features
                    .iter()
                    .filter(|c| c.parent.as_ref() == Some(&f.id) && matches!(c.kind, FeatureKind::Variant))
                    .fold(0u64, |m, c| m | bit(&c.id));
                groups.push((i, variants, g.min, g.max));
            }
        }
        let mut requires = Vec::new();
        let mut excludes = Vec::new();
        for d in model.dependencies() {
            let pair = (bit(&d.source), bit(&d.target));
            match d.kind {
                DependencyKind::Requires => requires.push(pair),
                DependencyKind::Excludes => excludes.push(pair),
            }
        }
        let requires_any = model
            .constraints()
            .iter()
            .map(|c| (bit(&c.source), c.targets.iter().fold(0, |m, t| m | bit(t))))
            .collect();
        BruteForce {
            n,
            root: bit(model.root_id()),
            parent,
            mandatory_children,
            groups,
            requires,
            excludes,
            requires_any,
        }
    }

    /// Is the feature set `s` (bit i = feature i selected) a valid product?
    pub fn is_product(&self, s: u64) -> bool {
        if s & self.root == 0 {
            return false;
        }
        for i in 0..self.n {
            if s >> i & 1 == 0 {
                continue;
            }
            if let Some(p) = self.parent[i] {
                if s & p == 0 {
                    return false;
                }
            }
            if s & self.mandatory_children[i] != self.mandatory_children[i] {
                return false;
            }
        }
        for &(vp, variants, min, max) in &self.groups {
            if s >> vp & 1 == 1 {
                let k = (s & variants).count_ones() as usize;
                if k < min || k > max {
                    return false;
                }
            }
        }
        self.requires.iter().all(|&(a, b)| s & a == 0 || s & b != 0)
            && self.excludes.iter().all(|&(a, b)| s & a == 0 || s & b == 0)
            && self.requires_any.iter().all(|&(a, t)| s & a == 0 || s & t != 0)
    }

    /// Features every product contains by definition: the root and,
    /// transitively, the mandatory children of such features.
    pub fn core(&self) -> u64 {
        let mut core = self.root;
        loop {
            let next = (0..self.n)
                .filter(|i| core >> i & 1 == 1)
                .fold(core, |m, i| m | self.mandatory_children[i]);
            if next == core {
                return core;
            }
            core = next;
        }
    }

    /// Calls `f` with every product, by trying every subset of the
    /// non-core features.
    pub fn for_each_product(&self, mut f: impl FnMut(u64)) {
        let core = self.core();
        let free: Vec<usize> = (0..self.n).filter(|i| core >> i & 1 == 0).collect();
        assert!(free.len() <= 30, "too many free features for brute force");
        for pattern in 0u64..(1 << free.len()) {
            let mut s = core;
            for (j, &i) in free.iter().enumerate() {
                s |= (pattern >> j & 1) << i;
            }
            if self.is_product(s) {
                f(s);
            }
        }
    }

    pub fn count(&self) -> u64 {
        let mut count = 0;
        self.for_each_product(|_| count += 1);
        count
    }
}

/// Bitmask of a complete configuration's selected features.
pub fn mask(model: &FeatureModel, config: &Configuration) -> u64 {
    model
        .features()
        .iter()
        .enumerate()
        .filter(|(_, f)| config.is_selected(f.id.as_str()))
        .fold(0, |m, (i, _)| m | 1 << i)
}

const VOID_ELEMENTS: &[&str] = &["meta", "link", "br", "img", "input", "hr"];

/// Checks that every tag in `doc` is closed in the right order, quotes in
/// tags are balanced and no raw `<` or `&` escapes into text or attribute
/// values unencoded.
pub fn check_balanced(doc: &str) -> Result<(), String> {
    let mut stack: Vec<String> = Vec::new();
    let mut rest = doc;
    let mut offset = 0;
    while let Some(open) = rest.find('<') {
        check_text(&rest[..open], offset)?;
        let after = &rest[open + 1..];
        let end = tag_end(after).ok_or_else(|| format!("unterminated tag at byte {}", offset + open))?;
        let inner = &after[..end];
        if let Some(decl) = inner.strip_prefix('!') {
            if !decl.eq_ignore_ascii_case("DOCTYPE html") {
                return Err(format!("unexpected declaration `<{inner}>`"));
            }
        } else if let Some(name) = inner.strip_prefix('/') {
            match stack.pop() {
                Some(top) if top == name => {}
                top => return Err(format!("`</{name}>` closes {top:?} at byte {}", offset + open)),
            }
        } else {
            let name: String = inner.chars().take_while(|c| !c.is_whitespace() && *c != '/').collect();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
                return Err(format!("bad tag name in `<{inner}>`"));
            }
            check_attributes(&inner[name.len()..])?;
            if !VOID_ELEMENTS.contains(&name.as_str()) && !inner.ends_with('/') {
                stack.push(name);
            }
        }
        let consumed = open + 1 + end + 1;
        offset += consumed;
        rest = &rest[consumed..];
    }
    check_text(rest, offset)?;
    if !stack.is_empty() {
        return Err(format!("unclosed tags {stack:?}"));
    }
    Ok(())
}

fn tag_end(s: &str) -> Option<usize> {
    let mut quoted = false;
    for (i, c) in s.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '>' if !quoted => return Some(i),
            _ => {}
        }
    }
    None
}

fn check_text(text: &str, offset: usize) -> Result<(), String> {
    if text.contains('>') {
        return Err(format!("stray `>` in text near byte {offset}"));
    }
    check_entities(text)
}

fn check_entities(s: &str) -> Result<(), String> {
    for (i, _) in s.match_indices('&') {
        let tail = &s[i..];
        if !["&amp;", "&lt;", "&gt;", "&quot;"].iter().any(|e| tail.starts_with(e)) {
            return Err(format!("unescaped `&` in `{s}`"));
        }
    }
    Ok(())
}

fn check_attributes(attrs: &str) -> Result<(), String> {
    let mut rest = attrs.trim_end_matches('/').trim();
    while !rest.is_empty() {
        let name_len = rest.find(|c: char| c == '=' || c.is_whitespace()).unwrap_or(rest.len());
        let name = &rest[..name_len];
        if name.is_empty() || name.contains(['"', '<', '>']) {
            return Err(format!("bad attribute name in `{attrs}`"));
        }
        rest = &rest[name_len..];
        if let Some(value) = rest.strip_prefix("=\"") {
            let close = value.find('"').ok_or_else(|| format!("unterminated value in `{attrs}`"))?;
            let v = &value[..close];
            if v.contains('<') {
                return Err(format!("raw `<` in attribute value `{v}`"));
            }
            check_entities(v)?;
            rest = &value[close + 1..];
            if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                return Err(format!("missing space after attribute in `{attrs}`"));
            }
        } else if rest.starts_with('=') {
            return Err(format!("unquoted attribute value in `{attrs}`"));
        }
        rest = rest.trim_start();
    }
    Ok(())
}
