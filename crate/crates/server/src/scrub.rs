//! Learner payloads never carry answers: validity flags, explanations and
//! association categories stay on the server until an answer is checked.

use edupack_core::play::proposition_order;
use edupack_core::{AssociationGame, Question, Resource};
use serde_json::{json, Value};

pub fn question(question: &Question, order: Option<&[usize]>) -> Value {
    let indices: Vec<usize> = match order {
        Some(order) => order.to_vec(),
        None => (0..question.propositions.len()).collect(),
    };
    let propositions: Vec<Value> = indices
        .into_iter()
        .map(|i| &question.propositions[i])
        .map(|p| json!({ "proposition_id": p.proposition_id, "title": p.title }))
        .collect();
    json!({
        "question_id": question.question_id,
        "title": question.title,
        "propositions": propositions,
    })
}

/// A session's questions with propositions in their seeded display order.
pub fn session_question(q: &Question, seed: u64, position: usize, shuffle: bool) -> Value {
    if shuffle {
        question(q, Some(&proposition_order(q.propositions.len(), seed, position)))
    } else {
        question(q, None)
    }
}

fn association(game: &AssociationGame) -> Value {
    json!({
        "categories": game.categories,
        "propositions": game
            .propositions
            .iter()
            .map(|p| json!({ "proposition_id": p.proposition_id, "title": p.title }))
            .collect::<Vec<_>>(),
    })
}

/// The learner view of a document.
pub fn document(doc: &Resource) -> Value {
    match doc {
        Resource::Quiz(quiz) => json!({
            "questions": quiz.questions.iter().map(|q| question(q, None)).collect::<Vec<_>>(),
        }),
        Resource::AssociationGame(game) => association(game),
        other => serde_json::to_value(other).unwrap_or(Value::Null),
    }
}

/// Keys that must not appear in any learner payload.
pub const FORBIDDEN_KEYS: [&str; 3] = ["validity", "personalized_explanation", "explanation"];

/// Paths of forbidden keys found anywhere inside `value`.
pub fn leaks(value: &Value) -> Vec<String> {
    fn walk(value: &Value, path: &str, out: &mut Vec<String>) {
        match value {
            Value::Object(map) => {
                for (k, v) in map {
                    let here = format!("{path}/{k}");
                    if FORBIDDEN_KEYS.contains(&k.as_str()) {
                        out.push(here.clone());
                    }
                    walk(v, &here, out);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(v, &format!("{path}/{i}"), out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(value, "", &mut out);
    out
}
