//! In-memory content model.
//!
//! A [`ModuleDescriptor`] is one thematic learning unit. It belongs to one
//! [`ElementCategory`] and carries at most one resource of each
//! [`ResourceKind`]. Values here are plain data: construction never checks
//! the structural rules, that is the job of [`crate::validation`].

mod ids;
mod language;
mod resources;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use ids::{AssetId, CategoryId, ModuleId, PageId, PropositionId, QuestionId};
pub use language::{Language, LanguageCode, MalformedLanguageCode};
pub use resources::{
    AssociationCategory, AssociationGame, AssociationProposition, InteractiveRef, Lesson, LessonPage, MemoMode,
    MemoSet, MemoTriplet, PedagogicalSupport, PictureRef, Proposition, Question, Quiz, Resource, ResourceKind, Tag,
    UnknownResourceKind, VideoLink,
};

/// Upper bound on countable resources per module.
pub const MAX_PLAYABLE_RESOURCES: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementCategory {
    Water,
    Air,
    Earth,
    Energy,
}

impl ElementCategory {
    pub const ALL: [ElementCategory; 4] = [
        ElementCategory::Water,
        ElementCategory::Air,
        ElementCategory::Earth,
        ElementCategory::Energy,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            ElementCategory::Water => "water",
            ElementCategory::Air => "air",
            ElementCategory::Earth => "earth",
            ElementCategory::Energy => "energy",
        }
    }
}

impl fmt::Display for ElementCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElementCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ElementCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

/// The resources of one module, keyed by kind.
///
/// Serialized as a JSON object whose keys are the snake_case kind names and
/// whose values are the bare documents.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResourceSet(BTreeMap<ResourceKind, Resource>);

impl ResourceSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a resource, returning the previous one of the same kind.
    pub fn insert(&mut self, resource: Resource) -> Option<Resource> {
        self.0.insert(resource.kind(), resource)
    }

    pub fn remove(&mut self, kind: ResourceKind) -> Option<Resource> {
        self.0.remove(&kind)
    }

    pub fn get(&self, kind: ResourceKind) -> Option<&Resource> {
        self.0.get(&kind)
    }

    pub fn get_mut(&mut self, kind: ResourceKind) -> Option<&mut Resource> {
        self.0.get_mut(&kind)
    }

    pub fn contains(&self, kind: ResourceKind) -> bool {
        self.0.contains_key(&kind)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn kinds(&self) -> impl Iterator<Item = ResourceKind> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Resource> {
        self.0.values()
    }

    pub fn lesson(&self) -> Option<&Lesson> {
        match self.get(ResourceKind::Lesson) {
            Some(Resource::Lesson(doc)) => Some(doc),
            _ => None,
        }
    }

    pub fn quiz(&self) -> Option<&Quiz> {
        match self.get(ResourceKind::Quiz) {
            Some(Resource::Quiz(doc)) => Some(doc),
            _ => None,
        }
    }

    pub fn memo_set(&self) -> Option<&MemoSet> {
        match self.get(ResourceKind::MemoSet) {
            Some(Resource::MemoSet(doc)) => Some(doc),
            _ => None,
        }
    }

    pub fn association_game(&self) -> Option<&AssociationGame> {
        match self.get(ResourceKind::AssociationGame) {
            Some(Resource::AssociationGame(doc)) => Some(doc),
            _ => None,
        }
    }
}

impl FromIterator<Resource> for ResourceSet {
    fn from_iter<I: IntoIterator<Item = Resource>>(iter: I) -> Self {
        let mut set = ResourceSet::new();
        for resource in iter {
            set.insert(resource);
        }
        set
    }
}

impl Serialize for ResourceSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.0.iter())
    }
}

impl<'de> Deserialize<'de> for ResourceSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<ResourceKind, serde_json::Value>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|(kind, value)| Resource::from_value(kind, value).map_err(D::Error::custom))
            .collect()
    }
}

/// One learning module with its source-language resources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    pub module_id: ModuleId,
    pub category: ElementCategory,
    pub source_locale: LanguageCode,
    pub title: String,
    pub resources: ResourceSet,
}

impl ModuleDescriptor {
    pub fn new(
        module_id: impl Into<ModuleId>,
        category: ElementCategory,
        source_locale: LanguageCode,
        title: impl Into<String>,
    ) -> Self {
        Self {
            module_id: module_id.into(),
            category,
            source_locale,
            title: title.into(),
            resources: ResourceSet::new(),
        }
    }

    pub fn with(mut self, resource: Resource) -> Self {
        self.resources.insert(resource);
        self
    }
}

/// Number of learner-playable resources in a module.
///
/// Each present kind counts once, except the memo set which counts once per
/// enabled game mode. Pedagogical support is teacher material and is not
/// counted.
pub fn count_playable_resources(module: &ModuleDescriptor) -> usize {
    module
        .resources
        .iter()
        .map(|resource| match resource {
            Resource::MemoSet(memo) => memo.enabled_modes.len(),
            Resource::PedagogicalSupport(_) => 0,
            _ => 1,
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("lesson page links question {0} which is not in the quiz")]
pub struct UnresolvedLink(pub QuestionId);

/// The quiz questions a lesson page links to, in link order.
pub fn page_question_pool<'q>(page: &LessonPage, quiz: &'q Quiz) -> Result<Vec<&'q Question>, UnresolvedLink> {
    page.linked_question_ids
        .iter()
        .map(|id| quiz.question(id).ok_or_else(|| UnresolvedLink(id.clone())))
        .collect()
}
