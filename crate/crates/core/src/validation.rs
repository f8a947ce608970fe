//! Structural checks over modules and whole content packs.
//!
//! Every check collects all problems it finds into a [`ValidationReport`]
//! instead of stopping at the first one. Violation codes are stable strings
//! and part of the public API.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::VariantStatus;
use crate::model::{
    count_playable_resources, AssetId, AssociationGame, CategoryId, InteractiveRef, LanguageCode, Lesson, MemoSet,
    ModuleDescriptor, ModuleId, PageId, PictureRef, PropositionId, Question, QuestionId, Quiz, Resource, ResourceKind,
    MAX_PLAYABLE_RESOURCES,
};
use crate::pack::ContentPack;

pub const MIN_PROPOSITIONS: usize = 2;
pub const MAX_PROPOSITIONS: usize = 10;
pub const MEMO_TRIPLETS: usize = 6;
pub const ASSOCIATION_CATEGORIES: usize = 2;
pub const MIN_ASSOCIATION_PROPOSITIONS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    PropositionCount,
    NoValidProposition,
    MemoTripletCount,
    MemoModeCount,
    CategoryCount,
    AssociationPropositionCount,
    AssociationCategoryUnresolved,
    AssociationCategoryUnused,
    PageLinkUnresolved,
    PageLinkExceedsN,
    TagCoordRange,
    TagNumbering,
    CaptionWithoutPicture,
    EmptyField,
    EmptyModule,
    EmptyQuiz,
    EmptyLesson,
    ResourceCountExceeded,
    DuplicateId,
    InvalidId,
    InvalidUrl,
    AssetUnresolved,
    AssetHashMismatch,
    UnknownModule,
    UnknownResource,
    UndeclaredLanguage,
    VariantInSourceLocale,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::PropositionCount => "PROPOSITION_COUNT",
            ViolationCode::NoValidProposition => "NO_VALID_PROPOSITION",
            ViolationCode::MemoTripletCount => "MEMO_TRIPLET_COUNT",
            ViolationCode::MemoModeCount => "MEMO_MODE_COUNT",
            ViolationCode::CategoryCount => "CATEGORY_COUNT",
            ViolationCode::AssociationPropositionCount => "ASSOCIATION_PROPOSITION_COUNT",
            ViolationCode::AssociationCategoryUnresolved => "ASSOCIATION_CATEGORY_UNRESOLVED",
            ViolationCode::AssociationCategoryUnused => "ASSOCIATION_CATEGORY_UNUSED",
            ViolationCode::PageLinkUnresolved => "PAGE_LINK_UNRESOLVED",
            ViolationCode::PageLinkExceedsN => "PAGE_LINK_EXCEEDS_N",
            ViolationCode::TagCoordRange => "TAG_COORD_RANGE",
            ViolationCode::TagNumbering => "TAG_NUMBERING",
            ViolationCode::CaptionWithoutPicture => "CAPTION_WITHOUT_PICTURE",
            ViolationCode::EmptyField => "EMPTY_FIELD",
            ViolationCode::EmptyModule => "EMPTY_MODULE",
            ViolationCode::EmptyQuiz => "EMPTY_QUIZ",
            ViolationCode::EmptyLesson => "EMPTY_LESSON",
            ViolationCode::ResourceCountExceeded => "RESOURCE_COUNT_EXCEEDED",
            ViolationCode::DuplicateId => "DUPLICATE_ID",
            ViolationCode::InvalidId => "INVALID_ID",
            ViolationCode::InvalidUrl => "INVALID_URL",
            ViolationCode::AssetUnresolved => "ASSET_UNRESOLVED",
            ViolationCode::AssetHashMismatch => "ASSET_HASH_MISMATCH",
            ViolationCode::UnknownModule => "UNKNOWN_MODULE",
            ViolationCode::UnknownResource => "UNKNOWN_RESOURCE",
            ViolationCode::UndeclaredLanguage => "UNDECLARED_LANGUAGE",
            ViolationCode::VariantInSourceLocale => "VARIANT_IN_SOURCE_LOCALE",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One step of a [`Locator`].
///
/// Tags and other unnamed items are addressed by position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Segment {
    Module(ModuleId),
    Locale(LanguageCode),
    Kind(ResourceKind),
    Page(PageId),
    Question(QuestionId),
    Proposition(PropositionId),
    Tag(usize),
    Triplet(usize),
    Category(usize),
    Asset(AssetId),
    Field(String),
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Module(id) => write!(f, "module={id}"),
            Segment::Locale(code) => write!(f, "locale={code}"),
            Segment::Kind(kind) => write!(f, "kind={kind}"),
            Segment::Page(id) => write!(f, "page={id}"),
            Segment::Question(id) => write!(f, "question={id}"),
            Segment::Proposition(id) => write!(f, "proposition={id}"),
            Segment::Tag(i) => write!(f, "tag={i}"),
            Segment::Triplet(i) => write!(f, "triplet={i}"),
            Segment::Category(i) => write!(f, "category={i}"),
            Segment::Asset(id) => write!(f, "asset={id}"),
            Segment::Field(name) => write!(f, "field={name}"),
        }
    }
}

/// Structured path from the report subject down to an element.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Locator(Vec<Segment>);

impl Locator {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn of(segment: Segment) -> Self {
        Self(vec![segment])
    }

    pub fn child(&self, segment: Segment) -> Self {
        let mut segments = self.0.clone();
        segments.push(segment);
        Self(segments)
    }

    fn field(&self, name: &str) -> Self {
        self.child(Segment::Field(name.to_owned()))
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn contains(&self, segment: &Segment) -> bool {
        self.0.contains(segment)
    }

    pub fn starts_with(&self, prefix: &Locator) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl fmt::Display for Locator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for (i, segment) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{segment}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub path: Locator,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub subject: Locator,
    pub violations: Vec<Violation>,
    pub is_valid: bool,
}

impl ValidationReport {
    pub fn new(subject: Locator, violations: Vec<Violation>) -> Self {
        let is_valid = violations.is_empty();
        Self {
            subject,
            violations,
            is_valid,
        }
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }

    pub fn codes(&self) -> Vec<ViolationCode> {
        self.violations.iter().map(|v| v.code).collect()
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.is_valid = self.violations.is_empty();
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid {
            return write!(f, "{}: valid", self.subject);
        }
        write!(f, "{}: {} violation(s)", self.subject, self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {} at {}: {}", v.code, v.path, v.message)?;
        }
        Ok(())
    }
}

/// Accumulates violations while walking a document.
#[derive(Default)]
struct Checker {
    out: Vec<Violation>,
}

impl Checker {
    fn push(&mut self, code: ViolationCode, path: Locator, message: impl Into<String>) {
        self.out.push(Violation {
            code,
            path,
            message: message.into(),
        });
    }

    fn non_blank(&mut self, value: &str, at: &Locator, field: &str) {
        if is_blank(value) {
            self.push(
                ViolationCode::EmptyField,
                at.field(field),
                format!("{field} must not be empty"),
            );
        }
    }

    fn picture(&mut self, picture: &PictureRef, at: &Locator, field: &str) {
        if is_blank(picture.asset_id.as_str()) {
            self.push(
                ViolationCode::EmptyField,
                at.field(&format!("{field}.asset_id")),
                "picture has no asset",
            );
        }
        if is_blank(&picture.alt_text) {
            self.push(
                ViolationCode::EmptyField,
                at.field(&format!("{field}.alt_text")),
                "picture needs alternative text",
            );
        }
    }
}

/// Whitespace-only strings count as empty.
pub fn is_blank(value: &str) -> bool {
    value.trim().is_empty()
}

pub fn validate_question(question: &Question) -> ValidationReport {
    let subject = Locator::of(Segment::Question(question.question_id.clone()));
    let mut checker = Checker::default();
    check_question(question, &subject, &mut checker);
    ValidationReport::new(subject, checker.out)
}

fn check_question(question: &Question, at: &Locator, c: &mut Checker) {
    c.non_blank(question.question_id.as_str(), at, "question_id");
    c.non_blank(&question.title, at, "title");
    let m = question.propositions.len();
    if !(MIN_PROPOSITIONS..=MAX_PROPOSITIONS).contains(&m) {
        c.push(
            ViolationCode::PropositionCount,
            at.clone(),
            format!("question has {m} propositions, expected {MIN_PROPOSITIONS} to {MAX_PROPOSITIONS}"),
        );
    }
    if !question.propositions.iter().any(|p| p.validity) {
        c.push(
            ViolationCode::NoValidProposition,
            at.clone(),
            "no proposition is marked valid",
        );
    }
    let mut seen = HashSet::new();
    for prop in &question.propositions {
        let here = at.child(Segment::Proposition(prop.proposition_id.clone()));
        c.non_blank(prop.proposition_id.as_str(), &here, "proposition_id");
        c.non_blank(&prop.title, &here, "title");
        if !seen.insert(&prop.proposition_id) {
            c.push(
                ViolationCode::DuplicateId,
                here,
                format!("proposition id {} is repeated", prop.proposition_id),
            );
        }
    }
}

fn check_quiz(quiz: &Quiz, at: &Locator, c: &mut Checker) {
    if quiz.questions.is_empty() {
        c.push(ViolationCode::EmptyQuiz, at.clone(), "quiz has no questions");
    }
    let mut seen = HashSet::new();
    for question in &quiz.questions {
        let here = at.child(Segment::Question(question.question_id.clone()));
        if !seen.insert(&question.question_id) {
            c.push(
                ViolationCode::DuplicateId,
                here.clone(),
                format!("question id {} is repeated", question.question_id),
            );
        }
        check_question(question, &here, c);
    }
}

/// Checks a lesson against the module's quiz, if it has one.
pub fn validate_lesson(lesson: &Lesson, quiz: Option<&Quiz>) -> ValidationReport {
    let subject = Locator::of(Segment::Kind(ResourceKind::Lesson));
    let mut checker = Checker::default();
    check_lesson(lesson, quiz, &subject, &mut checker);
    ValidationReport::new(subject, checker.out)
}

fn check_lesson(lesson: &Lesson, quiz: Option<&Quiz>, at: &Locator, c: &mut Checker) {
    if lesson.pages.is_empty() {
        c.push(ViolationCode::EmptyLesson, at.clone(), "lesson has no pages");
    }
    let question_ids: Option<BTreeSet<&QuestionId>> =
        quiz.map(|q| q.questions.iter().map(|q| &q.question_id).collect());
    let n = quiz.map_or(0, |q| q.questions.len());
    let mut pages_seen = HashSet::new();
    for page in &lesson.pages {
        let here = at.child(Segment::Page(page.page_id.clone()));
        c.non_blank(page.page_id.as_str(), &here, "page_id");
        c.non_blank(&page.title, &here, "title");
        if !pages_seen.insert(&page.page_id) {
            c.push(
                ViolationCode::DuplicateId,
                here.clone(),
                format!("page id {} is repeated", page.page_id),
            );
        }

        match &page.picture {
            Some(picture) => c.picture(picture, &here, "picture"),
            None => {
                if page.caption.is_some() {
                    c.push(
                        ViolationCode::CaptionWithoutPicture,
                        here.field("caption"),
                        "caption given without a picture",
                    );
                }
                if !page.tags.is_empty() {
                    c.push(
                        ViolationCode::CaptionWithoutPicture,
                        here.field("tags"),
                        "tags given without a picture",
                    );
                }
            }
        }

        for (i, tag) in page.tags.iter().enumerate() {
            let tag_at = here.child(Segment::Tag(i));
            for (name, value) in [("coord_h", tag.coord_h), ("coord_v", tag.coord_v)] {
                if !(0.0..=1.0).contains(&value) {
                    c.push(
                        ViolationCode::TagCoordRange,
                        tag_at.field(name),
                        format!("{name} = {value} is outside [0, 1]"),
                    );
                }
            }
            c.non_blank(&tag.text, &tag_at, "text");
            let expected = i as u64 + 1;
            if u64::from(tag.number) != expected {
                c.push(
                    ViolationCode::TagNumbering,
                    tag_at.field("number"),
                    format!("tag number {} where {expected} was expected", tag.number),
                );
            }
        }

        let mut links_seen = HashSet::new();
        for link in &page.linked_question_ids {
            let link_at = here.child(Segment::Question(link.clone()));
            if !links_seen.insert(link) {
                c.push(
                    ViolationCode::DuplicateId,
                    link_at.clone(),
                    format!("question {link} linked twice"),
                );
            }
            let resolved = question_ids.as_ref().is_some_and(|ids| ids.contains(link));
            if !resolved {
                let why = if quiz.is_none() {
                    "the module has no quiz"
                } else {
                    "no such question in the quiz"
                };
                c.push(
                    ViolationCode::PageLinkUnresolved,
                    link_at,
                    format!("link to {link}: {why}"),
                );
            }
        }
        let q = page.linked_question_ids.len();
        if q > n {
            c.push(
                ViolationCode::PageLinkExceedsN,
                here.field("linked_question_ids"),
                format!("page links {q} questions but the quiz has {n}"),
            );
        }
    }
}

pub fn validate_memo_set(memo: &MemoSet) -> ValidationReport {
    let subject = Locator::of(Segment::Kind(ResourceKind::MemoSet));
    let mut checker = Checker::default();
    check_memo_set(memo, &subject, &mut checker);
    ValidationReport::new(subject, checker.out)
}

fn check_memo_set(memo: &MemoSet, at: &Locator, c: &mut Checker) {
    let count = memo.triplets.len();
    if count != MEMO_TRIPLETS {
        c.push(
            ViolationCode::MemoTripletCount,
            at.clone(),
            format!("memo set has {count} triplets, expected exactly {MEMO_TRIPLETS}"),
        );
    }
    if memo.enabled_modes.is_empty() {
        c.push(
            ViolationCode::MemoModeCount,
            at.field("enabled_modes"),
            "no memory game mode enabled",
        );
    }
    let mut titles = HashSet::new();
    for (i, triplet) in memo.triplets.iter().enumerate() {
        let here = at.child(Segment::Triplet(i));
        c.picture(&triplet.picture, &here, "picture");
        c.non_blank(&triplet.title, &here, "title");
        c.non_blank(&triplet.definition, &here, "definition");
        if !is_blank(&triplet.title) && !titles.insert(triplet.title.trim()) {
            c.push(
                ViolationCode::DuplicateId,
                here.field("title"),
                format!("title {:?} is repeated", triplet.title),
            );
        }
    }
}

pub fn validate_association(game: &AssociationGame) -> ValidationReport {
    let subject = Locator::of(Segment::Kind(ResourceKind::AssociationGame));
    let mut checker = Checker::default();
    check_association(game, &subject, &mut checker);
    ValidationReport::new(subject, checker.out)
}

fn check_association(game: &AssociationGame, at: &Locator, c: &mut Checker) {
    let count = game.categories.len();
    if count != ASSOCIATION_CATEGORIES {
        c.push(
            ViolationCode::CategoryCount,
            at.clone(),
            format!("association game has {count} categories, expected exactly {ASSOCIATION_CATEGORIES}"),
        );
    }
    let mut category_ids: BTreeMap<&CategoryId, usize> = BTreeMap::new();
    for (i, category) in game.categories.iter().enumerate() {
        let here = at.child(Segment::Category(i));
        c.non_blank(category.category_id.as_str(), &here, "category_id");
        c.non_blank(&category.title, &here, "title");
        c.picture(&category.picture, &here, "picture");
        if category_ids.insert(&category.category_id, i).is_some() {
            c.push(
                ViolationCode::DuplicateId,
                here.field("category_id"),
                format!("category id {} is repeated", category.category_id),
            );
        }
    }

    let t = game.propositions.len();
    if t < MIN_ASSOCIATION_PROPOSITIONS {
        c.push(
            ViolationCode::AssociationPropositionCount,
            at.clone(),
            format!("association game has {t} propositions, expected at least {MIN_ASSOCIATION_PROPOSITIONS}"),
        );
    }
    let mut used = BTreeSet::new();
    let mut seen = HashSet::new();
    for prop in &game.propositions {
        let here = at.child(Segment::Proposition(prop.proposition_id.clone()));
        c.non_blank(prop.proposition_id.as_str(), &here, "proposition_id");
        c.non_blank(&prop.title, &here, "title");
        if !seen.insert(&prop.proposition_id) {
            c.push(
                ViolationCode::DuplicateId,
                here.clone(),
                format!("proposition id {} is repeated", prop.proposition_id),
            );
        }
        match category_ids.get(&prop.category_id) {
            Some(&index) => {
                used.insert(index);
            }
            None => c.push(
                ViolationCode::AssociationCategoryUnresolved,
                here.field("category_id"),
                format!("category {} is not part of this game", prop.category_id),
            ),
        }
    }
    for (i, category) in game.categories.iter().enumerate() {
        if !used.contains(&i) {
            c.push(
                ViolationCode::AssociationCategoryUnused,
                at.child(Segment::Category(i)),
                format!("no proposition belongs to category {}", category.category_id),
            );
        }
    }
}

fn check_interactive(doc: &InteractiveRef, at: &Locator, c: &mut Checker) {
    c.non_blank(&doc.ref_id, at, "ref_id");
}

pub fn validate_module(module: &ModuleDescriptor) -> ValidationReport {
    let subject = Locator::of(Segment::Module(module.module_id.clone()));
    let mut checker = Checker::default();
    check_module(module, &subject, &mut checker);
    ValidationReport::new(subject, checker.out)
}

fn check_module(module: &ModuleDescriptor, at: &Locator, c: &mut Checker) {
    if is_blank(module.module_id.as_str()) {
        c.non_blank(module.module_id.as_str(), at, "module_id");
    } else if !module.module_id.is_path_safe() {
        c.push(
            ViolationCode::InvalidId,
            at.field("module_id"),
            "module ids may only contain ASCII letters, digits, '-' and '_'",
        );
    }
    c.non_blank(&module.title, at, "title");
    if module.resources.is_empty() {
        c.push(ViolationCode::EmptyModule, at.clone(), "module holds no resources");
    }

    let quiz = module.resources.quiz();
    for resource in module.resources.iter() {
        let here = at.child(Segment::Kind(resource.kind()));
        match resource {
            Resource::Lesson(lesson) => check_lesson(lesson, quiz, &here, c),
            Resource::Quiz(quiz) => check_quiz(quiz, &here, c),
            Resource::MemoSet(memo) => check_memo_set(memo, &here, c),
            Resource::AssociationGame(game) => check_association(game, &here, c),
            Resource::CycleGameRef(doc) | Resource::ExperimentRef(doc) => check_interactive(doc, &here, c),
            Resource::VideoLink(video) => {
                c.non_blank(&video.title, &here, "title");
                if url::Url::parse(&video.url).is_err() {
                    c.push(
                        ViolationCode::InvalidUrl,
                        here.field("url"),
                        format!("{:?} is not an absolute URL", video.url),
                    );
                }
            }
            Resource::PedagogicalSupport(support) => c.non_blank(&support.body, &here, "body"),
        }
    }

    let count = count_playable_resources(module);
    if count > MAX_PLAYABLE_RESOURCES {
        c.push(
            ViolationCode::ResourceCountExceeded,
            at.clone(),
            format!("module counts {count} resources, at most {MAX_PLAYABLE_RESOURCES} allowed"),
        );
    }
}

/// Validates `module` with `variant` substituted for the resource of the
/// same kind. Paths carry the variant's locale after the module segment.
pub fn validate_variant_overlay(
    module: &ModuleDescriptor,
    locale: &LanguageCode,
    variant: &Resource,
) -> ValidationReport {
    let mut overlay = module.clone();
    overlay.resources.insert(variant.clone());
    let subject = Locator::of(Segment::Module(module.module_id.clone())).child(Segment::Locale(locale.clone()));
    let mut checker = Checker::default();
    check_module(&overlay, &subject, &mut checker);
    ValidationReport::new(subject, checker.out)
}

/// Reports pictures whose asset is not in `assets`.
pub fn check_asset_refs(resource: &Resource, at: &Locator, assets: &BTreeSet<&AssetId>) -> Vec<Violation> {
    resource
        .pictures()
        .into_iter()
        .filter(|p| !is_blank(p.asset_id.as_str()) && !assets.contains(&p.asset_id))
        .map(|p| Violation {
            code: ViolationCode::AssetUnresolved,
            path: at.child(Segment::Asset(p.asset_id.clone())),
            message: format!("asset {} is not stored", p.asset_id),
        })
        .collect()
}

pub fn validate_pack(pack: &ContentPack) -> ValidationReport {
    let subject = Locator::root();
    let mut c = Checker::default();

    let mut languages = BTreeSet::new();
    for language in &pack.languages {
        if !languages.insert(&language.code) {
            c.push(
                ViolationCode::DuplicateId,
                Locator::of(Segment::Locale(language.code.clone())),
                format!("language {} declared twice", language.code),
            );
        }
    }

    let mut assets = BTreeSet::new();
    for asset in &pack.assets {
        let at = Locator::of(Segment::Asset(asset.asset_id.clone()));
        if !assets.insert(&asset.asset_id) {
            c.push(
                ViolationCode::DuplicateId,
                at.clone(),
                format!("asset {} listed twice", asset.asset_id),
            );
        }
        if AssetId::for_bytes(&asset.bytes) != asset.asset_id {
            c.push(
                ViolationCode::AssetHashMismatch,
                at,
                "asset bytes do not match their content hash",
            );
        }
    }

    let mut modules: BTreeMap<&ModuleId, &ModuleDescriptor> = BTreeMap::new();
    for entry in &pack.modules {
        let module = &entry.descriptor;
        let at = Locator::of(Segment::Module(module.module_id.clone()));
        if modules.insert(&module.module_id, module).is_some() {
            c.push(
                ViolationCode::DuplicateId,
                at.clone(),
                format!("module {} listed twice", module.module_id),
            );
        }
        if !languages.contains(&module.source_locale) {
            c.push(
                ViolationCode::UndeclaredLanguage,
                at.field("source_locale"),
                format!("source locale {} is not declared", module.source_locale),
            );
        }
        for locale in entry.titles.keys() {
            if !languages.contains(locale) {
                c.push(
                    ViolationCode::UndeclaredLanguage,
                    at.child(Segment::Locale(locale.clone())).field("title"),
                    format!("title translation in undeclared language {locale}"),
                );
            }
        }
        check_module(module, &at, &mut c);
        for resource in module.resources.iter() {
            c.out.extend(check_asset_refs(
                resource,
                &at.child(Segment::Kind(resource.kind())),
                &assets,
            ));
        }
    }

    let mut variants_seen = HashSet::new();
    for variant in &pack.variants {
        let at = Locator::of(Segment::Module(variant.module_id.clone()))
            .child(Segment::Locale(variant.locale.clone()))
            .child(Segment::Kind(variant.kind()));
        if !variants_seen.insert(variant.key()) {
            c.push(ViolationCode::DuplicateId, at.clone(), "variant listed twice");
        }
        if !languages.contains(&variant.locale) {
            c.push(
                ViolationCode::UndeclaredLanguage,
                at.clone(),
                format!("variant language {} is not declared", variant.locale),
            );
        }
        let Some(module) = modules.get(&variant.module_id) else {
            c.push(
                ViolationCode::UnknownModule,
                at,
                format!("no module {}", variant.module_id),
            );
            continue;
        };
        if !module.resources.contains(variant.kind()) {
            c.push(
                ViolationCode::UnknownResource,
                at,
                format!("module {} has no {} to translate", variant.module_id, variant.kind()),
            );
            continue;
        }
        if variant.locale == module.source_locale {
            c.push(
                ViolationCode::VariantInSourceLocale,
                at.clone(),
                "variant uses the module's source locale",
            );
        }
        c.out.extend(check_asset_refs(&variant.document, &at, &assets));
        if variant.status == VariantStatus::Complete {
            let overlay = validate_variant_overlay(module, &variant.locale, &variant.document);
            c.out.extend(overlay.violations);
        }
    }

    ValidationReport::new(subject, c.out)
}
