//! Resource documents a module can hold.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ids::{AssetId, CategoryId, PageId, PropositionId, QuestionId};

/// The eight kinds of resource a module can carry, at most one of each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceKind {
    Lesson,
    Quiz,
    MemoSet,
    AssociationGame,
    CycleGameRef,
    ExperimentRef,
    VideoLink,
    PedagogicalSupport,
}

impl ResourceKind {
    pub const ALL: [ResourceKind; 8] = [
        ResourceKind::Lesson,
        ResourceKind::Quiz,
        ResourceKind::MemoSet,
        ResourceKind::AssociationGame,
        ResourceKind::CycleGameRef,
        ResourceKind::ExperimentRef,
        ResourceKind::VideoLink,
        ResourceKind::PedagogicalSupport,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            ResourceKind::Lesson => "lesson",
            ResourceKind::Quiz => "quiz",
            ResourceKind::MemoSet => "memo_set",
            ResourceKind::AssociationGame => "association_game",
            ResourceKind::CycleGameRef => "cycle_game_ref",
            ResourceKind::ExperimentRef => "experiment_ref",
            ResourceKind::VideoLink => "video_link",
            ResourceKind::PedagogicalSupport => "pedagogical_support",
        }
    }

    /// Teacher-only material is hidden from the learner surface.
    pub const fn is_teacher_only(self) -> bool {
        matches!(self, ResourceKind::PedagogicalSupport)
    }
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown resource kind {0:?}")]
pub struct UnknownResourceKind(pub String);

impl FromStr for ResourceKind {
    type Err = UnknownResourceKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ResourceKind::ALL
            .into_iter()
            .find(|kind| kind.as_str() == s)
            .ok_or_else(|| UnknownResourceKind(s.to_owned()))
    }
}

/// Reference to a stored picture, with the text read out by screen readers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PictureRef {
    pub asset_id: AssetId,
    pub alt_text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quiz {
    pub questions: Vec<Question>,
}

impl Quiz {
    pub fn question(&self, id: &QuestionId) -> Option<&Question> {
        self.questions.iter().find(|q| &q.question_id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    pub question_id: QuestionId,
    pub title: String,
    pub propositions: Vec<Proposition>,
    /// General feedback shown when the learner answers wrongly.
    #[serde(default)]
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposition {
    pub proposition_id: PropositionId,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub personalized_explanation: Option<String>,
    pub validity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lesson {
    pub pages: Vec<LessonPage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LessonPage {
    pub page_id: PageId,
    pub title: String,
    #[serde(default)]
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub picture: Option<PictureRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caption: Option<String>,
    #[serde(default)]
    pub tags: Vec<Tag>,
    /// Quiz questions offered as a self-test after reading this page.
    #[serde(default)]
    pub linked_question_ids: Vec<QuestionId>,
}

/// Numbered marker on a lesson picture. Coordinates are fractions of the
/// picture's width and height, so `(0.5, 0.5)` is the centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tag {
    pub number: u32,
    pub text: String,
    pub coord_h: f64,
    pub coord_v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoMode {
    /// Two identical pictures.
    Classical,
    /// Picture with its title.
    Easy,
    /// Title with its definition.
    Difficult,
}

impl MemoMode {
    pub const ALL: [MemoMode; 3] = [MemoMode::Classical, MemoMode::Easy, MemoMode::Difficult];

    pub const fn as_str(self) -> &'static str {
        match self {
            MemoMode::Classical => "classical",
            MemoMode::Easy => "easy",
            MemoMode::Difficult => "difficult",
        }
    }
}

impl FromStr for MemoMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MemoMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown memo mode {s:?}"))
    }
}

/// Source material for the memory games. One set feeds every enabled mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoSet {
    pub triplets: Vec<MemoTriplet>,
    pub enabled_modes: BTreeSet<MemoMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoTriplet {
    pub picture: PictureRef,
    pub title: String,
    pub definition: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationGame {
    pub categories: Vec<AssociationCategory>,
    pub propositions: Vec<AssociationProposition>,
}

impl AssociationGame {
    pub fn proposition(&self, id: &PropositionId) -> Option<&AssociationProposition> {
        self.propositions.iter().find(|p| &p.proposition_id == id)
    }

    pub fn category(&self, id: &CategoryId) -> Option<&AssociationCategory> {
        self.categories.iter().find(|c| &c.category_id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationCategory {
    pub category_id: CategoryId,
    pub title: String,
    pub picture: PictureRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationProposition {
    pub proposition_id: PropositionId,
    pub title: String,
    pub category_id: CategoryId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub personalized_explanation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VideoLink {
    pub url: String,
    pub title: String,
}

/// Opaque pointer to a built-in interactive (experiment or cycle game).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractiveRef {
    pub ref_id: String,
    #[serde(default)]
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PedagogicalSupport {
    pub body: String,
}

/// A resource document of any kind.
///
/// Serializes as the bare document; the kind travels out of band (map key,
/// file name or URL segment) and is required again to parse.
#[derive(Debug, Clone, PartialEq)]
pub enum Resource {
    Lesson(Lesson),
    Quiz(Quiz),
    MemoSet(MemoSet),
    AssociationGame(AssociationGame),
    CycleGameRef(InteractiveRef),
    ExperimentRef(InteractiveRef),
    VideoLink(VideoLink),
    PedagogicalSupport(PedagogicalSupport),
}

impl Resource {
    pub fn kind(&self) -> ResourceKind {
        match self {
            Resource::Lesson(_) => ResourceKind::Lesson,
            Resource::Quiz(_) => ResourceKind::Quiz,
            Resource::MemoSet(_) => ResourceKind::MemoSet,
            Resource::AssociationGame(_) => ResourceKind::AssociationGame,
            Resource::CycleGameRef(_) => ResourceKind::CycleGameRef,
            Resource::ExperimentRef(_) => ResourceKind::ExperimentRef,
            Resource::VideoLink(_) => ResourceKind::VideoLink,
            Resource::PedagogicalSupport(_) => ResourceKind::PedagogicalSupport,
        }
    }

    pub fn from_value(kind: ResourceKind, value: serde_json::Value) -> serde_json::Result<Self> {
        use serde_json::from_value;
        Ok(match kind {
            ResourceKind::Lesson => Resource::Lesson(from_value(value)?),
            ResourceKind::Quiz => Resource::Quiz(from_value(value)?),
            ResourceKind::MemoSet => Resource::MemoSet(from_value(value)?),
            ResourceKind::AssociationGame => Resource::AssociationGame(from_value(value)?),
            ResourceKind::CycleGameRef => Resource::CycleGameRef(from_value(value)?),
            ResourceKind::ExperimentRef => Resource::ExperimentRef(from_value(value)?),
            ResourceKind::VideoLink => Resource::VideoLink(from_value(value)?),
            ResourceKind::PedagogicalSupport => Resource::PedagogicalSupport(from_value(value)?),
        })
    }

    pub fn from_slice(kind: ResourceKind, bytes: &[u8]) -> serde_json::Result<Self> {
        Self::from_value(kind, serde_json::from_slice(bytes)?)
    }

    /// Every picture the document points at, in document order.
    pub fn pictures(&self) -> Vec<&PictureRef> {
        match self {
            Resource::Lesson(lesson) => lesson.pages.iter().filter_map(|p| p.picture.as_ref()).collect(),
            Resource::MemoSet(memo) => memo.triplets.iter().map(|t| &t.picture).collect(),
            Resource::AssociationGame(game) => game.categories.iter().map(|c| &c.picture).collect(),
            _ => Vec::new(),
        }
    }
}

impl Serialize for Resource {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Resource::Lesson(doc) => doc.serialize(serializer),
            Resource::Quiz(doc) => doc.serialize(serializer),
            Resource::MemoSet(doc) => doc.serialize(serializer),
            Resource::AssociationGame(doc) => doc.serialize(serializer),
            Resource::CycleGameRef(doc) | Resource::ExperimentRef(doc) => doc.serialize(serializer),
            Resource::VideoLink(doc) => doc.serialize(serializer),
            Resource::PedagogicalSupport(doc) => doc.serialize(serializer),
        }
    }
}
