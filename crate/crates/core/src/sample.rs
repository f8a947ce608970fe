//! Deterministic demonstration catalog.
//!
//! Six modules across the four element categories, 43 playable resources in
//! total and five languages. Texts are placeholders and pictures are
//! generated SVG cards; only the shape of the catalog is meant to be
//! realistic.

use serde_json::Value;

use crate::catalog::{Catalog, CatalogError, VariantStatus};
use crate::model::{
    count_playable_resources, AssetId, AssociationCategory, AssociationGame, AssociationProposition, CategoryId,
    ElementCategory, InteractiveRef, LanguageCode, Lesson, LessonPage, MemoMode, MemoSet, MemoTriplet,
    ModuleDescriptor, ModuleId, PageId, PedagogicalSupport, PictureRef, Proposition, PropositionId, Question,
    QuestionId, Quiz, Resource, ResourceKind, Tag, VideoLink,
};

pub const SOURCE_LOCALE: &str = "en";

pub const LANGUAGES: [(&str, &str); 5] = [
    ("en", "English"),
    ("fr", "Français"),
    ("zh", "中文"),
    ("es", "Español"),
    ("pt-BR", "Português (Brasil)"),
];

struct Extras {
    memo_modes: &'static [MemoMode],
    association: bool,
    cycle_game: bool,
    experiment: bool,
    video: bool,
}

struct ModuleShape {
    id: &'static str,
    category: ElementCategory,
    title: &'static str,
    pages: &'static [&'static str],
    questions: usize,
    extras: Extras,
    sides: [&'static str; 2],
}

const ALL_MODES: &[MemoMode] = &[MemoMode::Classical, MemoMode::Easy, MemoMode::Difficult];

const MODULES: [ModuleShape; 6] = [
    ModuleShape {
        id: "water-filtration",
        category: ElementCategory::Water,
        title: "Water filtration",
        pages: &[
            "Why water needs cleaning",
            "Gravel and sand layers",
            "Charcoal and fine filters",
            "Checking the result",
        ],
        questions: 10,
        extras: Extras {
            memo_modes: ALL_MODES,
            association: true,
            cycle_game: true,
            experiment: true,
            video: true,
        },
        sides: ["Clean water", "Polluted water"],
    },
    ModuleShape {
        id: "urban-water-cycle",
        category: ElementCategory::Water,
        title: "The urban water cycle",
        pages: &["From river to tap", "Treatment plants", "Sewers and wastewater"],
        questions: 8,
        extras: Extras {
            memo_modes: ALL_MODES,
            association: true,
            cycle_game: true,
            experiment: false,
            video: true,
        },
        sides: ["Saves water", "Wastes water"],
    },
    ModuleShape {
        id: "natural-water-cycle",
        category: ElementCategory::Water,
        title: "The natural water cycle",
        pages: &["Evaporation", "Condensation and clouds", "Precipitation and runoff"],
        questions: 7,
        extras: Extras {
            memo_modes: &[MemoMode::Classical, MemoMode::Easy],
            association: true,
            cycle_game: true,
            experiment: true,
            video: false,
        },
        sides: ["Liquid water", "Water vapour"],
    },
    ModuleShape {
        id: "greenhouse-effect",
        category: ElementCategory::Energy,
        title: "Energy and the greenhouse effect",
        pages: &[
            "Where our energy comes from",
            "Burning fossil fuels",
            "Renewable sources",
        ],
        questions: 9,
        extras: Extras {
            memo_modes: ALL_MODES,
            association: true,
            cycle_game: false,
            experiment: false,
            video: true,
        },
        sides: ["Renewable", "Fossil"],
    },
    ModuleShape {
        id: "natural-greenhouse-effect",
        category: ElementCategory::Air,
        title: "The natural greenhouse effect",
        pages: &["The atmosphere as a blanket", "Greenhouse gases"],
        questions: 6,
        extras: Extras {
            memo_modes: &[MemoMode::Easy, MemoMode::Difficult],
            association: true,
            cycle_game: false,
            experiment: true,
            video: false,
        },
        sides: ["Greenhouse gas", "Not a greenhouse gas"],
    },
    ModuleShape {
        id: "biodiversity",
        category: ElementCategory::Earth,
        title: "Biodiversity",
        pages: &["Living together", "Food chains", "Protecting habitats"],
        questions: 6,
        extras: Extras {
            memo_modes: &[MemoMode::Classical],
            association: true,
            cycle_game: true,
            experiment: false,
            video: true,
        },
        sides: ["Helps biodiversity", "Harms biodiversity"],
    },
];

const PALETTE: [&str; 6] = ["#2b7bb9", "#4caf50", "#f4a83a", "#8e5ea2", "#d9534f", "#5bc0de"];

fn svg_card(label: &str, index: usize) -> Vec<u8> {
    let fill = PALETTE[index % PALETTE.len()];
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\
<rect width=\"640\" height=\"400\" fill=\"{fill}\"/>\
<text x=\"320\" y=\"210\" font-family=\"sans-serif\" font-size=\"28\" fill=\"#ffffff\" text-anchor=\"middle\">{label}</text>\
</svg>\n"
    )
    .into_bytes()
}

fn picture(catalog: &mut Catalog, label: &str, index: usize) -> PictureRef {
    let asset_id: AssetId = catalog.put_asset("image/svg+xml", svg_card(label, index));
    PictureRef {
        asset_id,
        alt_text: format!("Illustration: {label}"),
    }
}

fn quiz(shape: &ModuleShape) -> Quiz {
    let questions = (1..=shape.questions)
        .map(|i| {
            let count = 2 + (i % 3);
            let correct = i % count;
            let propositions = (0..count)
                .map(|j| Proposition {
                    proposition_id: PropositionId::new(format!("q{i}-p{}", j + 1)),
                    title: format!("Answer {} to question {i} about {}", j + 1, shape.title.to_lowercase()),
                    personalized_explanation: (j != correct && j % 2 == 0)
                        .then(|| format!("Answer {} mixes up two ideas from the lesson.", j + 1)),
                    validity: j == correct,
                })
                .collect();
            Question {
                question_id: QuestionId::new(format!("q{i}")),
                title: format!("Question {i}: {}?", shape.title),
                propositions,
                explanation: format!(
                    "Look again at the lesson on {} for the key idea.",
                    shape.title.to_lowercase()
                ),
            }
        })
        .collect();
    Quiz { questions }
}

fn lesson(catalog: &mut Catalog, shape: &ModuleShape) -> Lesson {
    // Questions are dealt to pages in turn; page links stay disjoint.
    let page_count = shape.pages.len();
    let pages = shape
        .pages
        .iter()
        .enumerate()
        .map(|(p, title)| {
            let linked_question_ids = (1..=shape.questions)
                .filter(|i| (i - 1) % page_count == p)
                .take(2)
                .map(|i| QuestionId::new(format!("q{i}")))
                .collect();
            let illustrated = p % 3 != 2;
            let tags = if illustrated {
                (0..=p % 3)
                    .map(|t| Tag {
                        number: t as u32 + 1,
                        text: format!("Detail {} of \"{title}\"", t + 1),
                        coord_h: [0.25, 0.5, 0.75][t],
                        coord_v: [0.3, 0.6, 0.45][t],
                    })
                    .collect()
            } else {
                Vec::new()
            };
            LessonPage {
                page_id: PageId::new(format!("page-{}", p + 1)),
                title: (*title).to_owned(),
                text: format!(
                    "{title}. This page explains one step of {}.\nRead it, then look at the picture.",
                    shape.title.to_lowercase()
                ),
                picture: illustrated.then(|| picture(catalog, title, p)),
                caption: illustrated.then(|| format!("Figure {}: {title}", p + 1)),
                tags,
                linked_question_ids,
            }
        })
        .collect();
    Lesson { pages }
}

fn memo_set(catalog: &mut Catalog, shape: &ModuleShape) -> MemoSet {
    let triplets = (1..=6)
        .map(|i| {
            let label = format!("{} card {i}", shape.title);
            MemoTriplet {
                picture: picture(catalog, &label, i),
                title: format!("Term {i}"),
                definition: format!("Definition of term {i} in {}", shape.title.to_lowercase()),
            }
        })
        .collect();
    MemoSet {
        triplets,
        enabled_modes: shape.extras.memo_modes.iter().copied().collect(),
    }
}

fn association(catalog: &mut Catalog, shape: &ModuleShape) -> AssociationGame {
    let categories: Vec<AssociationCategory> = shape
        .sides
        .iter()
        .enumerate()
        .map(|(i, side)| AssociationCategory {
            category_id: CategoryId::new(format!("c{}", i + 1)),
            title: (*side).to_owned(),
            picture: picture(catalog, side, i + 3),
        })
        .collect();
    let propositions = (1..=6)
        .map(|i| AssociationProposition {
            proposition_id: PropositionId::new(format!("a{i}")),
            title: format!("Situation {i}"),
            category_id: categories[i % 2].category_id.clone(),
            personalized_explanation: Some(format!("Situation {i} belongs to \"{}\".", shape.sides[i % 2])),
        })
        .collect();
    AssociationGame {
        categories,
        propositions,
    }
}

fn descriptor(catalog: &mut Catalog, shape: &ModuleShape) -> ModuleDescriptor {
    let source = LanguageCode::parse(SOURCE_LOCALE).expect("static code");
    let mut module = ModuleDescriptor::new(shape.id, shape.category, source, shape.title)
        .with(Resource::Lesson(lesson(catalog, shape)))
        .with(Resource::Quiz(quiz(shape)))
        .with(Resource::MemoSet(memo_set(catalog, shape)))
        .with(Resource::PedagogicalSupport(PedagogicalSupport {
            body: format!(
                "Suggested classroom use for {}: read the lesson together, then let pupils play in pairs.",
                shape.title.to_lowercase()
            ),
        }));
    let x = &shape.extras;
    if x.association {
        module = module.with(Resource::AssociationGame(association(catalog, shape)));
    }
    if x.cycle_game {
        module = module.with(Resource::CycleGameRef(InteractiveRef {
            ref_id: format!("{}-cycle", shape.id),
            title: format!("{}: put the steps in order", shape.title),
        }));
    }
    if x.experiment {
        module = module.with(Resource::ExperimentRef(InteractiveRef {
            ref_id: format!("{}-experiment", shape.id),
            title: format!("{}: a hands-on experiment", shape.title),
        }));
    }
    if x.video {
        module = module.with(Resource::VideoLink(VideoLink {
            url: format!("https://videos.example.org/{}", shape.id),
            title: format!("{} in two minutes", shape.title),
        }));
    }
    module
}

const TEXT_FIELDS: [&str; 9] = [
    "title",
    "text",
    "alt_text",
    "caption",
    "explanation",
    "personalized_explanation",
    "definition",
    "body",
    "url",
];

/// Marks every human-readable string of a document as translated into `locale`.
pub fn placeholder_translation(document: &Resource, locale: &str) -> Resource {
    fn walk(value: &mut Value, locale: &str) {
        match value {
            Value::Object(map) => {
                for (key, v) in map.iter_mut() {
                    match v {
                        Value::String(s) if TEXT_FIELDS.contains(&key.as_str()) => {
                            if key == "url" {
                                s.push_str(&format!("?hl={locale}"));
                            } else {
                                *s = format!("[{locale}] {s}");
                            }
                        }
                        other => walk(other, locale),
                    }
                }
            }
            Value::Array(items) => items.iter_mut().for_each(|v| walk(v, locale)),
            _ => {}
        }
    }
    let mut value = serde_json::to_value(document).expect("documents serialize");
    walk(&mut value, locale);
    Resource::from_value(document.kind(), value).expect("same shape")
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SampleSummary {
    pub modules: usize,
    pub resources: usize,
    pub languages: usize,
    pub variants: usize,
}

/// Adds the sample content to `catalog`.
/// Languages already registered are kept; modules with the sample ids are
/// replaced.
pub fn seed_sample(catalog: &mut Catalog) -> Result<SampleSummary, CatalogError> {
    for (code, name) in LANGUAGES {
        let code_parsed = LanguageCode::parse(code)?;
        if !catalog.is_registered(&code_parsed) {
            catalog.add_language(code, name)?;
        }
    }
    let fr = LanguageCode::parse("fr")?;
    let es = LanguageCode::parse("es")?;
    let pt = LanguageCode::parse("pt-BR")?;
    let mut resources = 0;
    let mut variants = 0;
    for shape in &MODULES {
        let module = descriptor(catalog, shape);
        resources += count_playable_resources(&module);
        let id = ModuleId::new(shape.id);
        catalog.put_module(module.clone())?;

        catalog.set_title_translation(&id, &fr, &format!("[fr] {}", shape.title))?;
        catalog.set_title_translation(&id, &es, &format!("[es] {}", shape.title))?;
        // French is fully translated, Spanish covers the lesson and drafts the quiz.
        for doc in module.resources.iter() {
            catalog.upsert_variant(&id, &fr, placeholder_translation(doc, "fr"), VariantStatus::Complete)?;
            variants += 1;
        }
        if let (Some(lesson), Some(quiz)) = (
            module.resources.get(ResourceKind::Lesson),
            module.resources.get(ResourceKind::Quiz),
        ) {
            catalog.upsert_variant(&id, &es, placeholder_translation(lesson, "es"), VariantStatus::Complete)?;
            catalog.upsert_variant(&id, &es, placeholder_translation(quiz, "es"), VariantStatus::Draft)?;
            variants += 2;
        }
        if shape.category == ElementCategory::Water {
            if let Some(lesson) = module.resources.get(ResourceKind::Lesson) {
                catalog.upsert_variant(&id, &pt, placeholder_translation(lesson, "pt-BR"), VariantStatus::Draft)?;
                variants += 1;
            }
        }
    }
    Ok(SampleSummary {
        modules: MODULES.len(),
        resources,
        languages: catalog.languages().len(),
        variants,
    })
}
