//! Random content and brute-force oracles for tests and benchmarks.
//!
//! Everything is driven by [`SeededRng`], so a seed fully determines the
//! generated content.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::catalog::{Catalog, VariantStatus};
use crate::model::{
    AssociationCategory, AssociationGame, AssociationProposition, CategoryId, ElementCategory, InteractiveRef,
    LanguageCode, Lesson, LessonPage, MemoMode, MemoSet, MemoTriplet, ModuleDescriptor, PageId, PedagogicalSupport,
    PictureRef, Proposition, PropositionId, Question, QuestionId, Quiz, Resource, ResourceKind, Tag, VideoLink,
};
use crate::play::{
    derive_memo_deck, generate_quiz_session, pick_page_question, proposition_order, PageLinks, QuizSession,
    SessionRequest,
};
use crate::rng::SeededRng;
use crate::sample::placeholder_translation;
use crate::validation::{Locator, Segment, ViolationCode};

const WORDS: [&str; 16] = [
    "river", "cloud", "soil", "forest", "sun", "wind", "rain", "seed", "ocean", "glacier", "bee", "compost", "énergie",
    "水", "lluvia", "árvore",
];

fn words(rng: &mut SeededRng, count: usize) -> String {
    (0..count)
        .map(|_| *rng.choose(&WORDS).expect("non-empty"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn sentence(rng: &mut SeededRng) -> String {
    let n = 1 + rng.index(6);
    words(rng, n)
}

fn chance(rng: &mut SeededRng, percent: u64) -> bool {
    rng.below(100) < percent
}

/// Uniform float in [0, 1], endpoints included now and then.
pub fn unit_float(rng: &mut SeededRng) -> f64 {
    match rng.below(20) {
        0 => 0.0,
        1 => 1.0,
        2 => 0.5,
        _ => (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64,
    }
}

/// Bytes of a fake asset; distinct labels give distinct assets.
pub fn asset_bytes(label: &str) -> Vec<u8> {
    format!("test-asset:{label}").into_bytes()
}

/// Creates pictures and remembers their bytes so a catalog can store them.
#[derive(Default)]
pub struct PictureFactory {
    pub assets: BTreeMap<String, Vec<u8>>,
    counter: usize,
}

impl PictureFactory {
    pub fn picture(&mut self, rng: &mut SeededRng) -> PictureRef {
        self.counter += 1;
        // Small shared pool; assets repeat across documents.
        let label = format!("img{}", rng.below(24));
        let bytes = asset_bytes(&label);
        let asset_id = crate::model::AssetId::for_bytes(&bytes);
        self.assets.insert(label, bytes);
        PictureRef {
            asset_id,
            alt_text: sentence(rng),
        }
    }
}

pub fn random_question(rng: &mut SeededRng, id: QuestionId, propositions: usize) -> Question {
    let valid_mask = loop {
        let mask: Vec<bool> = (0..propositions).map(|_| chance(rng, 35)).collect();
        if mask.iter().any(|v| *v) || propositions == 0 {
            break mask;
        }
    };
    Question {
        title: sentence(rng),
        propositions: valid_mask
            .into_iter()
            .enumerate()
            .map(|(j, validity)| Proposition {
                proposition_id: PropositionId::new(format!("{id}-p{j}")),
                title: sentence(rng),
                personalized_explanation: chance(rng, 40).then(|| sentence(rng)),
                validity,
            })
            .collect(),
        explanation: sentence(rng),
        question_id: id,
    }
}

pub fn random_quiz(rng: &mut SeededRng, n: usize) -> Quiz {
    Quiz {
        questions: (0..n)
            .map(|i| {
                let m = 2 + rng.index(9);
                random_question(rng, QuestionId::new(format!("q{i}")), m)
            })
            .collect(),
    }
}

/// Splits the quiz's questions over `pages` pages with disjoint links; some
/// questions stay unlinked.
pub fn disjoint_page_links(rng: &mut SeededRng, quiz: &Quiz, pages: usize) -> Vec<Vec<QuestionId>> {
    let mut ids: Vec<QuestionId> = quiz.questions.iter().map(|q| q.question_id.clone()).collect();
    rng.shuffle(&mut ids);
    let mut out = vec![Vec::new(); pages];
    for id in ids {
        let slot = rng.index(pages + 1);
        if slot < pages {
            out[slot].push(id);
        }
    }
    out
}

fn random_tags(rng: &mut SeededRng) -> Vec<Tag> {
    (0..rng.index(5))
        .map(|i| Tag {
            number: i as u32 + 1,
            text: sentence(rng),
            coord_h: unit_float(rng),
            coord_v: unit_float(rng),
        })
        .collect()
}

pub fn random_lesson(rng: &mut SeededRng, pictures: &mut PictureFactory, quiz: Option<&Quiz>) -> Lesson {
    let page_count = 1 + rng.index(6);
    let links = match quiz {
        Some(q) => disjoint_page_links(rng, q, page_count),
        None => vec![Vec::new(); page_count],
    };
    Lesson {
        pages: links
            .into_iter()
            .enumerate()
            .map(|(i, linked_question_ids)| {
                let picture = chance(rng, 70).then(|| pictures.picture(rng));
                let has_picture = picture.is_some();
                LessonPage {
                    page_id: PageId::new(format!("page{i}")),
                    title: sentence(rng),
                    text: format!("{}\n{}", sentence(rng), sentence(rng)),
                    caption: (has_picture && chance(rng, 50)).then(|| sentence(rng)),
                    tags: if has_picture { random_tags(rng) } else { Vec::new() },
                    picture,
                    linked_question_ids,
                }
            })
            .collect(),
    }
}

fn memo_triplet(rng: &mut SeededRng, pictures: &mut PictureFactory, i: usize) -> MemoTriplet {
    MemoTriplet {
        picture: pictures.picture(rng),
        title: format!("{} {i}", words(rng, 1)),
        definition: sentence(rng),
    }
}

pub fn random_memo_set(rng: &mut SeededRng, pictures: &mut PictureFactory) -> MemoSet {
    let enabled_modes = loop {
        let modes: BTreeSet<MemoMode> = MemoMode::ALL.into_iter().filter(|_| chance(rng, 60)).collect();
        if !modes.is_empty() {
            break modes;
        }
    };
    MemoSet {
        triplets: (0..6).map(|i| memo_triplet(rng, pictures, i)).collect(),
        enabled_modes,
    }
}

fn association_category(rng: &mut SeededRng, pictures: &mut PictureFactory, i: usize) -> AssociationCategory {
    AssociationCategory {
        category_id: CategoryId::new(format!("cat{i}")),
        title: sentence(rng),
        picture: pictures.picture(rng),
    }
}

pub fn random_association(rng: &mut SeededRng, pictures: &mut PictureFactory) -> AssociationGame {
    let categories: Vec<AssociationCategory> = (0..2).map(|i| association_category(rng, pictures, i)).collect();
    let count = 2 + rng.index(7);
    let propositions = (0..count)
        .map(|i| {
            // The first two cover both categories.
            let side = if i < 2 { i } else { rng.index(2) };
            AssociationProposition {
                proposition_id: PropositionId::new(format!("ap{i}")),
                title: sentence(rng),
                category_id: categories[side].category_id.clone(),
                personalized_explanation: chance(rng, 50).then(|| sentence(rng)),
            }
        })
        .collect();
    AssociationGame {
        categories,
        propositions,
    }
}

/// A structurally valid module. Every picture's bytes end up in `pictures`.
pub fn random_module(rng: &mut SeededRng, pictures: &mut PictureFactory, module_id: &str) -> ModuleDescriptor {
    let category = *rng.choose(&ElementCategory::ALL).expect("non-empty");
    let mut module = ModuleDescriptor::new(
        module_id,
        category,
        LanguageCode::parse("en").expect("valid"),
        sentence(rng),
    );
    let quiz = chance(rng, 80).then(|| {
        let n = 1 + rng.index(12);
        random_quiz(rng, n)
    });
    if chance(rng, 75) {
        module = module.with(Resource::Lesson(random_lesson(rng, pictures, quiz.as_ref())));
    }
    if let Some(quiz) = quiz {
        module = module.with(Resource::Quiz(quiz));
    }
    if chance(rng, 50) {
        module = module.with(Resource::MemoSet(random_memo_set(rng, pictures)));
    }
    if chance(rng, 50) {
        module = module.with(Resource::AssociationGame(random_association(rng, pictures)));
    }
    if chance(rng, 30) {
        module = module.with(Resource::CycleGameRef(InteractiveRef {
            ref_id: format!("{module_id}-cycle"),
            title: sentence(rng),
        }));
    }
    if chance(rng, 30) {
        module = module.with(Resource::ExperimentRef(InteractiveRef {
            ref_id: format!("{module_id}-exp"),
            title: sentence(rng),
        }));
    }
    if chance(rng, 30) {
        module = module.with(Resource::VideoLink(VideoLink {
            url: format!("https://video.example.org/{module_id}/{}", rng.below(1000)),
            title: sentence(rng),
        }));
    }
    if chance(rng, 50) || module.resources.is_empty() {
        module = module.with(Resource::PedagogicalSupport(PedagogicalSupport { body: sentence(rng) }));
    }
    module
}

/// Any document of a random valid module, for serialization tests.
pub fn random_document(rng: &mut SeededRng) -> Resource {
    let mut pictures = PictureFactory::default();
    loop {
        let module = random_module(rng, &mut pictures, "doc");
        let docs: Vec<&Resource> = module.resources.iter().collect();
        if let Some(doc) = rng.choose(&docs) {
            return (*doc).clone();
        }
    }
}

/// A repository with a handful of modules, languages, title translations,
/// variants in every status and the assets they reference.
pub fn random_catalog(rng: &mut SeededRng) -> Catalog {
    let mut catalog = Catalog::new();
    catalog.add_language("en", "English").expect("fresh catalog");
    let extra = ["fr", "es", "zh", "pt-BR", "de"];
    for code in extra.iter().take(rng.index(extra.len() + 1)) {
        catalog
            .add_language(code, &format!("lang {code}"))
            .expect("distinct codes");
    }
    let locales: Vec<LanguageCode> = catalog.languages().iter().skip(1).map(|l| l.code.clone()).collect();

    let mut pictures = PictureFactory::default();
    let modules: Vec<ModuleDescriptor> = (0..1 + rng.index(4))
        .map(|i| random_module(rng, &mut pictures, &format!("m{i}")))
        .collect();
    for bytes in pictures.assets.into_values() {
        catalog.put_asset("application/octet-stream", bytes);
    }
    for module in modules {
        let id = module.module_id.clone();
        catalog.put_module(module.clone()).expect("generated modules are valid");
        for locale in &locales {
            if chance(rng, 50) {
                catalog
                    .set_title_translation(&id, locale, &sentence(rng))
                    .expect("registered locale");
            }
            for doc in module.resources.iter() {
                let status = match rng.below(4) {
                    0 => continue,
                    1 => VariantStatus::Draft,
                    _ => VariantStatus::Complete,
                };
                catalog
                    .upsert_variant(&id, locale, placeholder_translation(doc, locale.as_str()), status)
                    .expect("translations keep the source structure");
            }
        }
        // Revise a source now and then so some variants go stale.
        if chance(rng, 30) {
            if let Some(kind) = catalog.module(&id).and_then(|r| r.descriptor.resources.kinds().next()) {
                catalog.touch_source(&id, kind).expect("kind exists");
            }
        }
    }
    catalog
}

/// Constraint classes covered by the single-mutation suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintClass {
    PropositionCount,
    MemoTripletCount,
    CategoryCount,
    PageLinksExceedQuiz,
    TagRange,
}

impl ConstraintClass {
    pub const ALL: [ConstraintClass; 5] = [
        ConstraintClass::PropositionCount,
        ConstraintClass::MemoTripletCount,
        ConstraintClass::CategoryCount,
        ConstraintClass::PageLinksExceedQuiz,
        ConstraintClass::TagRange,
    ];

    pub fn code(self) -> ViolationCode {
        match self {
            ConstraintClass::PropositionCount => ViolationCode::PropositionCount,
            ConstraintClass::MemoTripletCount => ViolationCode::MemoTripletCount,
            ConstraintClass::CategoryCount => ViolationCode::CategoryCount,
            ConstraintClass::PageLinksExceedQuiz => ViolationCode::PageLinkExceedsN,
            ConstraintClass::TagRange => ViolationCode::TagCoordRange,
        }
    }
}

/// A corrupted module with the violation it must produce.
#[derive(Debug, Clone)]
pub struct Mutation {
    pub module: ModuleDescriptor,
    pub code: ViolationCode,
    pub path: Locator,
}

fn resource_mut(module: &mut ModuleDescriptor, kind: ResourceKind) -> &mut Resource {
    module.resources.get_mut(kind).expect("ensured before mutating")
}

fn ensure(module: &mut ModuleDescriptor, rng: &mut SeededRng, pictures: &mut PictureFactory, kind: ResourceKind) {
    if module.resources.contains(kind) {
        return;
    }
    let doc = match kind {
        ResourceKind::Quiz => {
            let n = 1 + rng.index(12);
            Resource::Quiz(random_quiz(rng, n))
        }
        ResourceKind::MemoSet => Resource::MemoSet(random_memo_set(rng, pictures)),
        ResourceKind::AssociationGame => Resource::AssociationGame(random_association(rng, pictures)),
        ResourceKind::Lesson => {
            let quiz = module.resources.quiz().cloned();
            Resource::Lesson(random_lesson(rng, pictures, quiz.as_ref()))
        }
        other => unreachable!("no generator needed for {other}"),
    };
    module.resources.insert(doc);
}

/// Applies one corruption of `class` to a copy of `module`.
pub fn mutate(rng: &mut SeededRng, module: &ModuleDescriptor, class: ConstraintClass) -> Mutation {
    let mut pictures = PictureFactory::default();
    let mut m = module.clone();
    let root = Locator::of(Segment::Module(m.module_id.clone()));
    let path = match class {
        ConstraintClass::PropositionCount => {
            ensure(&mut m, rng, &mut pictures, ResourceKind::Quiz);
            let Resource::Quiz(quiz) = resource_mut(&mut m, ResourceKind::Quiz) else {
                unreachable!()
            };
            let i = rng.index(quiz.questions.len());
            let id = quiz.questions[i].question_id.clone();
            let count = *rng.choose(&[0usize, 1, 11, 12, 15, 20]).expect("non-empty");
            let replacement = random_question(rng, id.clone(), count);
            quiz.questions[i].propositions = replacement.propositions;
            root.child(Segment::Kind(ResourceKind::Quiz))
                .child(Segment::Question(id))
        }
        ConstraintClass::MemoTripletCount => {
            ensure(&mut m, rng, &mut pictures, ResourceKind::MemoSet);
            let Resource::MemoSet(memo) = resource_mut(&mut m, ResourceKind::MemoSet) else {
                unreachable!()
            };
            let target = *rng.choose(&[0usize, 1, 3, 5, 7, 8, 12]).expect("non-empty");
            if target < memo.triplets.len() {
                memo.triplets.truncate(target);
            } else {
                let start = memo.triplets.len();
                for i in start..target {
                    let t = memo_triplet(rng, &mut pictures, 100 + i);
                    memo.triplets.push(t);
                }
            }
            root.child(Segment::Kind(ResourceKind::MemoSet))
        }
        ConstraintClass::CategoryCount => {
            ensure(&mut m, rng, &mut pictures, ResourceKind::AssociationGame);
            let Resource::AssociationGame(game) = resource_mut(&mut m, ResourceKind::AssociationGame) else {
                unreachable!()
            };
            let target = *rng.choose(&[0usize, 1, 3, 4, 6]).expect("non-empty");
            if target < game.categories.len() {
                game.categories.truncate(target);
            } else {
                for i in game.categories.len()..target {
                    let c = association_category(rng, &mut pictures, 10 + i);
                    game.categories.push(c);
                }
            }
            root.child(Segment::Kind(ResourceKind::AssociationGame))
        }
        ConstraintClass::PageLinksExceedQuiz => {
            ensure(&mut m, rng, &mut pictures, ResourceKind::Quiz);
            ensure(&mut m, rng, &mut pictures, ResourceKind::Lesson);
            let n = m.resources.quiz().map_or(0, |q| q.questions.len());
            let ids: Vec<QuestionId> = m
                .resources
                .quiz()
                .map(|q| q.questions.iter().map(|q| q.question_id.clone()).collect())
                .unwrap_or_default();
            let Resource::Lesson(lesson) = resource_mut(&mut m, ResourceKind::Lesson) else {
                unreachable!()
            };
            let p = rng.index(lesson.pages.len());
            let page = &mut lesson.pages[p];
            let mut links = ids;
            for extra in 0..1 + rng.index(3) {
                links.push(QuestionId::new(format!("ghost{extra}")));
            }
            rng.shuffle(&mut links);
            debug_assert!(links.len() > n);
            page.linked_question_ids = links;
            root.child(Segment::Kind(ResourceKind::Lesson))
                .child(Segment::Page(page.page_id.clone()))
                .child(Segment::Field("linked_question_ids".into()))
        }
        ConstraintClass::TagRange => {
            ensure(&mut m, rng, &mut pictures, ResourceKind::Lesson);
            let Resource::Lesson(lesson) = resource_mut(&mut m, ResourceKind::Lesson) else {
                unreachable!()
            };
            let p = rng.index(lesson.pages.len());
            let page = &mut lesson.pages[p];
            if page.picture.is_none() {
                page.picture = Some(pictures.picture(rng));
            }
            if page.tags.is_empty() {
                page.tags.push(Tag {
                    number: 1,
                    text: sentence(rng),
                    coord_h: 0.5,
                    coord_v: 0.5,
                });
            }
            let t = rng.index(page.tags.len());
            let bad = *rng
                .choose(&[
                    -0.001,
                    -1.0,
                    1.0000001,
                    1.5,
                    42.0,
                    f64::NAN,
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                ])
                .expect("non-empty");
            let field = if chance(rng, 50) {
                page.tags[t].coord_h = bad;
                "coord_h"
            } else {
                page.tags[t].coord_v = bad;
                "coord_v"
            };
            root.child(Segment::Kind(ResourceKind::Lesson))
                .child(Segment::Page(page.page_id.clone()))
                .child(Segment::Tag(t))
                .child(Segment::Field(field.into()))
        }
    };
    Mutation {
        module: m,
        code: class.code(),
        path,
    }
}

/// A session-generator instance: quiz, lesson-ordered disjoint page links
/// and answered questions.
pub fn random_session_request(
    rng: &mut SeededRng,
    max_questions: usize,
    max_pages: usize,
    seed: u64,
) -> SessionRequest {
    let n = 1 + rng.index(max_questions);
    let quiz = random_quiz(rng, n);
    let pages = rng.index(max_pages + 1);
    let links = disjoint_page_links(rng, &quiz, pages);
    let answered_rate = rng.below(101);
    let answered = quiz
        .questions
        .iter()
        .filter(|_| rng.below(100) < answered_rate)
        .map(|q| q.question_id.clone())
        .collect::<Vec<_>>();
    let mut req = SessionRequest::new(quiz, seed).with_answered(answered);
    req.page_links = links
        .into_iter()
        .enumerate()
        .map(|(i, question_ids)| PageLinks {
            page_id: PageId::new(format!("page{i}")),
            question_ids,
        })
        .collect();
    req
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, buf: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if buf.len() == k {
            visit(buf);
            return;
        }
        for i in start..n {
            if n - i < k - buf.len() {
                break;
            }
            buf.push(i);
            rec(i + 1, n, k, buf, visit);
            buf.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut visit);
}

/// Outcome of checking one session against exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub size_ok: bool,
    pub coverage_ok: bool,
    pub answered_ok: bool,
    pub best_coverage: usize,
    pub achieved_coverage: usize,
}

impl OracleVerdict {
    pub fn holds(&self) -> bool {
        self.size_ok && self.coverage_ok && self.answered_ok
    }
}

/// Enumerates every subset of size `min(target, n)` to find the best page
/// coverage reachable without taking answered questions (or, when fewer
/// unanswered questions exist than slots, while taking all of them), then
/// compares the session against it.
pub fn session_oracle(req: &SessionRequest, session: &QuizSession) -> OracleVerdict {
    let ids: Vec<&QuestionId> = req.quiz.questions.iter().map(|q| &q.question_id).collect();
    let n = ids.len();
    let k = req.target_count.min(n);
    let unanswered: BTreeSet<&QuestionId> = ids
        .iter()
        .copied()
        .filter(|id| !req.answered_ids.contains(*id))
        .collect();

    let coverage = |chosen: &BTreeSet<&QuestionId>| {
        req.page_links
            .iter()
            .filter(|p| p.question_ids.iter().any(|q| chosen.contains(q)))
            .count()
    };
    let admissible = |chosen: &BTreeSet<&QuestionId>| {
        if unanswered.len() >= k {
            chosen.iter().all(|id| unanswered.contains(id))
        } else {
            unanswered.iter().all(|id| chosen.contains(id))
        }
    };

    let mut best = 0;
    combinations(n, k, |idx| {
        let chosen: BTreeSet<&QuestionId> = idx.iter().map(|&i| ids[i]).collect();
        if admissible(&chosen) {
            best = best.max(coverage(&chosen));
        }
    });

    let chosen: BTreeSet<&QuestionId> = session.question_ids.iter().collect();
    let distinct_known = chosen.len() == session.question_ids.len() && chosen.iter().all(|id| ids.contains(id));
    let achieved = coverage(&chosen);
    let reported_ok = session.covered_page_ids.len() == achieved;
    let answered_ok = if unanswered.len() >= k {
        chosen.iter().all(|id| !req.answered_ids.contains(*id))
    } else {
        unanswered.iter().all(|id| chosen.contains(id))
    };
    OracleVerdict {
        size_ok: distinct_known && session.question_ids.len() == k,
        coverage_ok: achieved == best && reported_ok,
        answered_ok,
        best_coverage: best,
        achieved_coverage: achieved,
    }
}

fn session_vector(index: u64) -> Value {
    let mut rng = SeededRng::new(0x601d_0000 + index);
    let seed = rng.next_u64();
    let mut req = random_session_request(&mut rng, 12, 6, seed);
    if index % 10 == 9 {
        req.target_count = 1 + rng.index(8);
    }
    let session = generate_quiz_session(&req).expect("generated instances are well formed");
    let proposition_orders: Vec<Vec<usize>> = session
        .question_ids
        .iter()
        .enumerate()
        .map(|(position, id)| {
            let count = req.quiz.question(id).map_or(0, |q| q.propositions.len());
            proposition_order(count, req.seed, position)
        })
        .collect();
    json!({
        "proposition_orders": proposition_orders,
        "seed": req.seed.to_string(),
        "target_count": req.target_count,
        "quiz": req.quiz,
        "page_links": req.page_links,
        "answered_ids": req.answered_ids,
        "expected": session,
    })
}

fn page_pick_vector(index: u64) -> Value {
    let mut rng = SeededRng::new(0x9a9e_0000 + index);
    let n = 1 + rng.index(10);
    let quiz = random_quiz(&mut rng, n);
    let pool: Vec<&Question> = quiz.questions.iter().filter(|_| chance(&mut rng, 60)).collect();
    let pool = if pool.is_empty() {
        vec![&quiz.questions[0]]
    } else {
        pool
    };
    let answered: BTreeSet<QuestionId> = pool
        .iter()
        .filter(|_| chance(&mut rng, 50))
        .map(|q| q.question_id.clone())
        .collect();
    let seed = rng.next_u64();
    let picked = pick_page_question(&pool, &answered, seed).expect("pool is non-empty");
    let pool_ids: Vec<&QuestionId> = pool.iter().map(|q| &q.question_id).collect();
    json!({
        "seed": seed.to_string(),
        "pool": pool_ids,
        "answered_ids": answered,
        "expected": picked.question_id,
    })
}

fn memo_vector(index: u64) -> Value {
    let mut rng = SeededRng::new(0x3e30_0000 + index);
    let mut pictures = PictureFactory::default();
    let memo = random_memo_set(&mut rng, &mut pictures);
    let mode = *rng
        .choose(&memo.enabled_modes.iter().copied().collect::<Vec<_>>())
        .expect("non-empty");
    let seed = rng.next_u64();
    let deck = derive_memo_deck(&memo, mode, seed).expect("mode is enabled");
    json!({
        "seed": seed.to_string(),
        "mode": mode,
        "memo_set": memo,
        "expected": deck,
    })
}

/// Reference vectors for reimplementations of the seeded operations.
/// Seeds are decimal strings.
pub fn golden_vectors() -> Value {
    json!({
        "format_version": 1,
        "rng": "chacha8, seed_from_u64, 64-bit multiply-and-reject bounded sampling",
        "sessions": (0..100).map(session_vector).collect::<Vec<_>>(),
        "page_picks": (0..30).map(page_pick_vector).collect::<Vec<_>>(),
        "memo_decks": (0..30).map(memo_vector).collect::<Vec<_>>(),
    })
}
