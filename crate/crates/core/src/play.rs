//! Learner-facing mechanics such as quiz sessions and answer checking.
//!
//! Everything here is a pure function of its inputs and seed.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::model::{
    AssociationGame, CategoryId, Lesson, MemoMode, MemoSet, PageId, PictureRef, PropositionId, Question, QuestionId,
    Quiz,
};
use crate::rng::SeededRng;

pub const DEFAULT_SESSION_SIZE: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlayError {
    #[error("the quiz has no questions")]
    EmptyQuiz,
    #[error("target count must be positive")]
    ZeroTarget,
    #[error("unknown question {0}")]
    UnknownQuestion(QuestionId),
    #[error("the question pool is empty")]
    EmptyPool,
    #[error("unknown proposition {0}")]
    UnknownProposition(PropositionId),
    #[error("memory game mode {0:?} is not enabled")]
    ModeNotEnabled(MemoMode),
    #[error("unknown card {0}")]
    UnknownCard(usize),
    #[error("a card cannot match itself")]
    SameCard,
    #[error("unknown category {0}")]
    UnknownCategory(CategoryId),
}

/// Links of one lesson page, in lesson order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageLinks {
    pub page_id: PageId,
    pub question_ids: Vec<QuestionId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRequest {
    pub quiz: Quiz,
    pub page_links: Vec<PageLinks>,
    pub answered_ids: BTreeSet<QuestionId>,
    pub seed: u64,
    pub target_count: usize,
}

impl SessionRequest {
    pub fn new(quiz: Quiz, seed: u64) -> Self {
        Self {
            quiz,
            page_links: Vec::new(),
            answered_ids: BTreeSet::new(),
            seed,
            target_count: DEFAULT_SESSION_SIZE,
        }
    }

    /// Takes page links from a lesson, dropping links that do not resolve in
    /// the quiz (possible when lesson and quiz come from different locales).
    pub fn with_lesson(mut self, lesson: &Lesson) -> Self {
        self.page_links = lesson
            .pages
            .iter()
            .map(|page| PageLinks {
                page_id: page.page_id.clone(),
                question_ids: page
                    .linked_question_ids
                    .iter()
                    .filter(|id| self.quiz.question(id).is_some())
                    .cloned()
                    .collect(),
            })
            .collect();
        self
    }

    pub fn with_answered(mut self, answered: impl IntoIterator<Item = QuestionId>) -> Self {
        self.answered_ids = answered.into_iter().collect();
        self
    }

    pub fn with_target_count(mut self, target_count: usize) -> Self {
        self.target_count = target_count;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuizSession {
    pub question_ids: Vec<QuestionId>,
    /// Pages with at least one linked question in the session, in lesson order.
    pub covered_page_ids: Vec<PageId>,
}

/// Picks `min(target_count, n)` questions.
///
/// Pages are visited round-robin in lesson order, one pick per page per
/// pass, with questions linked to no page forming a last stratum. Only
/// unanswered questions are drawn in these passes. Once they run out, the
/// remaining slots go first to one answered question for each page still
/// uncovered, then to uniform draws from the other answered questions.
/// Ties are broken by the seeded generator.
pub fn generate_quiz_session(req: &SessionRequest) -> Result<QuizSession, PlayError> {
    let quiz = &req.quiz;
    if quiz.questions.is_empty() {
        return Err(PlayError::EmptyQuiz);
    }
    if req.target_count == 0 {
        return Err(PlayError::ZeroTarget);
    }
    let known: HashSet<&QuestionId> = quiz.questions.iter().map(|q| &q.question_id).collect();
    for id in req
        .page_links
        .iter()
        .flat_map(|p| &p.question_ids)
        .chain(&req.answered_ids)
    {
        if !known.contains(id) {
            return Err(PlayError::UnknownQuestion(id.clone()));
        }
    }

    let k = req.target_count.min(quiz.questions.len());
    let mut rng = SeededRng::new(req.seed);
    let mut selected: Vec<&QuestionId> = Vec::with_capacity(k);
    let mut taken: HashSet<&QuestionId> = HashSet::new();

    // Page strata keep link order with duplicates dropped; the unlinked
    // stratum keeps quiz order.
    let mut strata: Vec<Vec<&QuestionId>> = req
        .page_links
        .iter()
        .map(|page| {
            let mut seen = HashSet::new();
            page.question_ids.iter().filter(|id| seen.insert(*id)).collect()
        })
        .collect();
    let linked: HashSet<&QuestionId> = strata.iter().flatten().copied().collect();
    strata.push(
        quiz.questions
            .iter()
            .map(|q| &q.question_id)
            .filter(|id| !linked.contains(id))
            .collect(),
    );

    let answered = &req.answered_ids;
    'passes: loop {
        let mut progressed = false;
        for stratum in &strata {
            if selected.len() == k {
                break 'passes;
            }
            let candidates: Vec<&QuestionId> = stratum
                .iter()
                .copied()
                .filter(|id| !taken.contains(id) && !answered.contains(*id))
                .collect();
            if let Some(&pick) = rng.choose(&candidates) {
                taken.insert(pick);
                selected.push(pick);
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }

    if selected.len() < k {
        let pages = &strata[..strata.len() - 1];
        for stratum in pages {
            if selected.len() == k {
                break;
            }
            if stratum.iter().any(|id| taken.contains(id)) {
                continue;
            }
            let candidates: Vec<&QuestionId> = stratum.iter().copied().filter(|id| !taken.contains(id)).collect();
            if let Some(&pick) = rng.choose(&candidates) {
                taken.insert(pick);
                selected.push(pick);
            }
        }
        while selected.len() < k {
            let remaining: Vec<&QuestionId> = quiz
                .questions
                .iter()
                .map(|q| &q.question_id)
                .filter(|id| !taken.contains(id))
                .collect();
            let pick = *rng.choose(&remaining).expect("k <= n leaves questions to draw");
            taken.insert(pick);
            selected.push(pick);
        }
    }

    let covered_page_ids = req
        .page_links
        .iter()
        .filter(|page| page.question_ids.iter().any(|id| taken.contains(id)))
        .map(|page| page.page_id.clone())
        .collect();
    Ok(QuizSession {
        question_ids: selected.into_iter().cloned().collect(),
        covered_page_ids,
    })
}

/// Self-test question shown after a lesson page: an unanswered one when
/// possible, otherwise any question of the pool.
pub fn pick_page_question<'q>(
    pool: &[&'q Question],
    answered: &BTreeSet<QuestionId>,
    seed: u64,
) -> Result<&'q Question, PlayError> {
    if pool.is_empty() {
        return Err(PlayError::EmptyPool);
    }
    let mut rng = SeededRng::new(seed);
    let fresh: Vec<&'q Question> = pool
        .iter()
        .copied()
        .filter(|q| !answered.contains(&q.question_id))
        .collect();
    let from = if fresh.is_empty() { pool } else { &fresh[..] };
    Ok(from[rng.index(from.len())])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionFeedback {
    pub proposition_id: PropositionId,
    pub personalized_explanation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerFeedback {
    pub correct: bool,
    pub per_proposition_feedback: Vec<PropositionFeedback>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub general_explanation: Option<String>,
}

/// The answer is correct when the selection equals the set of valid
/// propositions. On a wrong answer, every wrongly selected or wrongly
/// omitted proposition that has a personalized explanation contributes it,
/// in proposition order, followed by the question's general explanation.
pub fn evaluate_answer(question: &Question, selected: &BTreeSet<PropositionId>) -> Result<AnswerFeedback, PlayError> {
    for id in selected {
        if !question.propositions.iter().any(|p| &p.proposition_id == id) {
            return Err(PlayError::UnknownProposition(id.clone()));
        }
    }
    let mistaken: Vec<_> = question
        .propositions
        .iter()
        .filter(|p| p.validity != selected.contains(&p.proposition_id))
        .collect();
    if mistaken.is_empty() {
        return Ok(AnswerFeedback {
            correct: true,
            per_proposition_feedback: Vec::new(),
            general_explanation: None,
        });
    }
    Ok(AnswerFeedback {
        correct: false,
        per_proposition_feedback: mistaken
            .into_iter()
            .filter_map(|p| {
                p.personalized_explanation.as_ref().map(|text| PropositionFeedback {
                    proposition_id: p.proposition_id.clone(),
                    personalized_explanation: text.clone(),
                })
            })
            .collect(),
        general_explanation: Some(question.explanation.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum CardFace {
    Picture(PictureRef),
    Title(String),
    Definition(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoCard {
    /// Position in the dealt deck.
    pub card_id: usize,
    pub face: CardFace,
    /// Index of the triplet this card came from; two cards match when equal.
    pub pair_key: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoDeck {
    pub mode: MemoMode,
    pub cards: Vec<MemoCard>,
}

/// Deals the two cards of every triplet for `mode` and shuffles them.
pub fn derive_memo_deck(memo: &MemoSet, mode: MemoMode, seed: u64) -> Result<MemoDeck, PlayError> {
    if !memo.enabled_modes.contains(&mode) {
        return Err(PlayError::ModeNotEnabled(mode));
    }
    let mut faces: Vec<(CardFace, usize)> = Vec::with_capacity(memo.triplets.len() * 2);
    for (pair_key, triplet) in memo.triplets.iter().enumerate() {
        let (first, second) = match mode {
            MemoMode::Classical => (
                CardFace::Picture(triplet.picture.clone()),
                CardFace::Picture(triplet.picture.clone()),
            ),
            MemoMode::Easy => (
                CardFace::Picture(triplet.picture.clone()),
                CardFace::Title(triplet.title.clone()),
            ),
            MemoMode::Difficult => (
                CardFace::Title(triplet.title.clone()),
                CardFace::Definition(triplet.definition.clone()),
            ),
        };
        faces.push((first, pair_key));
        faces.push((second, pair_key));
    }
    SeededRng::new(seed).shuffle(&mut faces);
    let cards = faces
        .into_iter()
        .enumerate()
        .map(|(card_id, (face, pair_key))| MemoCard {
            card_id,
            face,
            pair_key,
        })
        .collect();
    Ok(MemoDeck { mode, cards })
}

pub fn check_memo_match(deck: &MemoDeck, a: usize, b: usize) -> Result<bool, PlayError> {
    let find = |id: usize| {
        deck.cards
            .iter()
            .find(|c| c.card_id == id)
            .ok_or(PlayError::UnknownCard(id))
    };
    let first = find(a)?;
    let second = find(b)?;
    if a == b {
        return Err(PlayError::SameCard);
    }
    Ok(first.pair_key == second.pair_key)
}

/// Display order of the propositions of the question at `position` in a
/// session: a permutation of `0..count` derived from the session seed.
pub fn proposition_order(count: usize, session_seed: u64, position: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..count).collect();
    let stream = session_seed ^ (position as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    SeededRng::new(stream).shuffle(&mut order);
    order
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociationFeedback {
    pub correct: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explanation: Option<String>,
}

pub fn check_association(
    game: &AssociationGame,
    proposition_id: &PropositionId,
    chosen: &CategoryId,
) -> Result<AssociationFeedback, PlayError> {
    let proposition = game
        .proposition(proposition_id)
        .ok_or_else(|| PlayError::UnknownProposition(proposition_id.clone()))?;
    if game.category(chosen).is_none() {
        return Err(PlayError::UnknownCategory(chosen.clone()));
    }
    let correct = &proposition.category_id == chosen;
    Ok(AssociationFeedback {
        correct,
        explanation: if correct {
            None
        } else {
            proposition.personalized_explanation.clone()
        },
    })
}
