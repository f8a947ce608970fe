use std::collections::BTreeSet;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use edupack_core::sample::placeholder_translation;
use edupack_core::store::{Repository, Role};
use edupack_core::{LanguageCode, ModuleId, ResourceKind};
use edupack_server::scrub::leaks;
use edupack_server::{router, AppState, TokenSigner, TEACHER_MODE_HEADER};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tempfile::TempDir;
use tower::ServiceExt;

const NOW: u64 = 1_700_000_000;
const PASSWORD: &str = "correct horse";

fn fixed_clock() -> u64 {
    NOW
}

fn lang(code: &str) -> LanguageCode {
    LanguageCode::parse(code).unwrap()
}

struct Fixture {
    _dir: TempDir,
    app: Router,
    state: AppState,
}

fn fixture() -> Fixture {
    let dir = TempDir::new().unwrap();
    let repo = Repository::open(dir.path()).unwrap();
    repo.seed_sample().unwrap();
    repo.create_user("admin", PASSWORD, Role::Admin, BTreeSet::new())
        .unwrap();
    repo.create_user("designer", PASSWORD, Role::Designer, BTreeSet::new())
        .unwrap();
    repo.create_user("translator", PASSWORD, Role::Translator, BTreeSet::from([lang("es")]))
        .unwrap();
    let state = AppState::with_clock(repo, TokenSigner::new(b"test-secret".to_vec(), 3600), fixed_clock);
    Fixture {
        _dir: dir,
        app: router(state.clone()),
        state,
    }
}

struct Reply {
    status: StatusCode,
    content_type: Option<String>,
    bytes: Vec<u8>,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.bytes)))
    }

    fn error_code(&self) -> String {
        self.json()["error"]["code"].as_str().unwrap().to_owned()
    }
}

impl Fixture {
    fn token(&self, login: &str) -> String {
        let identity = self.state.repo().verify_credentials(login, PASSWORD).unwrap();
        self.state.signer().issue(&identity, NOW).0
    }

    async fn send(&self, method: Method, uri: &str, headers: &[(&str, String)], body: Body) -> Reply {
        let mut req = Request::builder().method(method).uri(uri);
        for (name, value) in headers {
            req = req.header(*name, value);
        }
        let res = self.app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
        let status = res.status();
        let content_type = res
            .headers()
            .get(header::CONTENT_TYPE)
            .map(|v| v.to_str().unwrap().to_owned());
        let bytes = res.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply {
            status,
            content_type,
            bytes,
        }
    }

    async fn get(&self, uri: &str) -> Reply {
        self.send(Method::GET, uri, &[], Body::empty()).await
    }

    async fn get_as(&self, uri: &str, login: &str) -> Reply {
        self.send(Method::GET, uri, &[bearer(&self.token(login))], Body::empty())
            .await
    }

    async fn post(&self, uri: &str, body: Value) -> Reply {
        self.send(Method::POST, uri, &[json_type()], Body::from(body.to_string()))
            .await
    }

    async fn write_as(&self, method: Method, uri: &str, login: &str, body: Value) -> Reply {
        self.send(
            method,
            uri,
            &[json_type(), bearer(&self.token(login))],
            Body::from(body.to_string()),
        )
        .await
    }
}

fn bearer(token: &str) -> (&'static str, String) {
    ("authorization", format!("Bearer {token}"))
}

fn json_type() -> (&'static str, String) {
    ("content-type", "application/json".to_owned())
}

#[tokio::test]
async fn catalog_listing_resolves_titles_per_language() {
    let fx = fixture();
    let langs = fx.get("/api/v1/languages").await.json();
    assert_eq!(langs.as_array().unwrap().len(), 5);

    let modules = fx.get("/api/v1/modules?lang=fr").await.json();
    let modules = modules.as_array().unwrap();
    assert_eq!(modules.len(), 6);
    for m in modules {
        assert_eq!(m["resolved_locale"], "fr");
        assert_eq!(m["fallback_used"], false);
        assert!(!m["resource_kinds"]
            .as_array()
            .unwrap()
            .contains(&json!("pedagogical_support")));
    }
    let zh = fx.get("/api/v1/modules?lang=zh").await.json();
    assert!(zh
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m["resolved_locale"] == "en" && m["fallback_used"] == true));

    let bad = fx.get("/api/v1/modules?lang=not_a_code!").await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn learner_documents_are_scrubbed() {
    let fx = fixture();
    for kind in ["quiz", "association_game", "lesson", "memo_set"] {
        let reply = fx
            .get(&format!("/api/v1/modules/water-filtration/resources/{kind}?lang=fr"))
            .await;
        assert_eq!(reply.status, StatusCode::OK, "{kind}");
        let body = reply.json();
        assert_eq!(body["resolved_locale"], "fr");
        assert!(leaks(&body).is_empty(), "{kind}: {:?}", leaks(&body));
    }
    let quiz = fx.get("/api/v1/modules/water-filtration/resources/quiz").await.json();
    assert_eq!(quiz["document"]["questions"].as_array().unwrap().len(), 10);
}

#[tokio::test]
async fn pedagogical_support_needs_teacher_mode() {
    let fx = fixture();
    let uri = "/api/v1/modules/biodiversity/resources/pedagogical_support";
    assert_eq!(fx.get(uri).await.status, StatusCode::FORBIDDEN);
    let teacher = fx
        .send(Method::GET, uri, &[(TEACHER_MODE_HEADER, "true".into())], Body::empty())
        .await;
    assert_eq!(teacher.status, StatusCode::OK);
    assert_eq!(fx.get_as(uri, "translator").await.status, StatusCode::OK);
}

#[tokio::test]
async fn sessions_are_reproducible_from_the_returned_seed() {
    let fx = fixture();
    let uri = "/api/v1/modules/water-filtration/quiz-session";
    let first = fx.post(uri, json!({ "answered_ids": ["q1", "q2"] })).await;
    assert_eq!(first.status, StatusCode::OK);
    let first = first.json();
    let seed = first["seed"].as_str().unwrap().to_owned();
    let again = fx
        .post(uri, json!({ "answered_ids": ["q1", "q2"], "seed": seed }))
        .await
        .json();
    assert_eq!(first, again);
    let numeric = fx
        .post(
            uri,
            json!({ "answered_ids": ["q1", "q2"], "seed": seed.parse::<u64>().unwrap() }),
        )
        .await;
    assert_eq!(numeric.json(), first);

    let ids: Vec<&str> = first["session"]["question_ids"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(ids.len(), 5);
    assert_eq!(ids.iter().collect::<BTreeSet<_>>().len(), 5);
    assert!(!ids.contains(&"q1") && !ids.contains(&"q2"));
    assert!(leaks(&first).is_empty());
    let shown: Vec<&str> = first["questions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|q| q["question_id"].as_str().unwrap())
        .collect();
    assert_eq!(shown, ids);
}

#[tokio::test]
async fn session_errors_are_typed() {
    let fx = fixture();
    let unknown = fx.post("/api/v1/modules/nope/quiz-session", json!({})).await;
    assert_eq!(unknown.status, StatusCode::NOT_FOUND);
    assert_eq!(unknown.error_code(), "NOT_FOUND");

    let bad_seed = fx
        .post("/api/v1/modules/biodiversity/quiz-session", json!({ "seed": "x" }))
        .await;
    assert_eq!(bad_seed.status, StatusCode::BAD_REQUEST);

    let not_json = fx
        .send(
            Method::POST,
            "/api/v1/modules/biodiversity/quiz-session",
            &[json_type()],
            Body::from("{"),
        )
        .await;
    assert_eq!(not_json.status, StatusCode::BAD_REQUEST);
    assert_eq!(not_json.error_code(), "BAD_REQUEST");

    for kind in ["lesson", "quiz"] {
        let removed = fx
            .send(
                Method::DELETE,
                &format!("/api/v1/authoring/modules/biodiversity/resources/{kind}"),
                &[bearer(&fx.token("designer"))],
                Body::empty(),
            )
            .await;
        assert_eq!(
            removed.status,
            StatusCode::OK,
            "{}",
            String::from_utf8_lossy(&removed.bytes)
        );
    }
    let no_quiz = fx.post("/api/v1/modules/biodiversity/quiz-session", json!({})).await;
    assert_eq!(no_quiz.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(no_quiz.error_code(), "NO_QUIZ");
}

#[tokio::test]
async fn answers_reveal_feedback_after_submission() {
    let fx = fixture();
    let quiz = fx
        .state
        .repo()
        .get_resource(&ModuleId::new("water-filtration"), ResourceKind::Quiz)
        .unwrap();
    let edupack_core::Resource::Quiz(quiz) = quiz else {
        unreachable!()
    };
    let question = &quiz.questions[0];
    let valid: Vec<&str> = question
        .propositions
        .iter()
        .filter(|p| p.validity)
        .map(|p| p.proposition_id.as_str())
        .collect();
    let uri = "/api/v1/modules/water-filtration/answers";
    let right = fx
        .post(
            uri,
            json!({ "question_id": question.question_id, "selected_ids": valid }),
        )
        .await
        .json();
    assert_eq!(right["correct"], true);
    let wrong = fx
        .post(uri, json!({ "question_id": question.question_id, "selected_ids": [] }))
        .await
        .json();
    assert_eq!(wrong["correct"], false);
    assert!(wrong["general_explanation"].is_string());

    let missing = fx.post(uri, json!({ "question_id": "q999", "selected_ids": [] })).await;
    assert_eq!(missing.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn association_page_and_memo_endpoints() {
    let fx = fixture();
    let check = fx
        .post(
            "/api/v1/modules/biodiversity/association-check",
            json!({ "proposition_id": "a1", "category_id": "c2" }),
        )
        .await
        .json();
    assert_eq!(check["correct"], true);

    let page = fx
        .post(
            "/api/v1/modules/water-filtration/page-question",
            json!({ "page_id": "page-1", "seed": 4 }),
        )
        .await;
    assert_eq!(page.status, StatusCode::OK);
    let page = page.json();
    assert!(["q1", "q5"].contains(&page["question"]["question_id"].as_str().unwrap()));
    assert!(leaks(&page).is_empty());

    let deck = fx
        .get("/api/v1/modules/water-filtration/memo-deck?mode=easy&seed=9")
        .await;
    assert_eq!(deck.status, StatusCode::OK);
    assert_eq!(deck.json()["seed"], "9");
    let disabled = fx.get("/api/v1/modules/biodiversity/memo-deck?mode=difficult").await;
    assert_eq!(disabled.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn assets_are_served_with_their_media_type() {
    let fx = fixture();
    let snap = fx.state.repo().snapshot();
    let asset_id = snap.assets().next().unwrap().asset_id.clone();
    drop(snap);
    let reply = fx.get(&format!("/api/v1/assets/{asset_id}")).await;
    assert_eq!(reply.status, StatusCode::OK);
    assert_eq!(reply.content_type.as_deref(), Some("image/svg+xml"));
    assert!(reply.bytes.starts_with(b"<svg"));
    assert_eq!(fx.get("/api/v1/assets/0000").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn login_issues_tokens() {
    let fx = fixture();
    let ok = fx
        .post(
            "/api/v1/auth/login",
            json!({ "login": "designer", "password": PASSWORD }),
        )
        .await;
    assert_eq!(ok.status, StatusCode::OK);
    let ok = ok.json();
    assert_eq!(ok["role"], "designer");
    assert_eq!(ok["expires_at"], NOW + 3600);
    let token = ok["token"].as_str().unwrap();
    let listed = fx
        .send(
            Method::GET,
            "/api/v1/authoring/modules",
            &[bearer(token)],
            Body::empty(),
        )
        .await;
    assert_eq!(listed.status, StatusCode::OK);

    for (login, password) in [("designer", "wrong password"), ("ghost", PASSWORD)] {
        let denied = fx
            .post("/api/v1/auth/login", json!({ "login": login, "password": password }))
            .await;
        assert_eq!(denied.status, StatusCode::UNAUTHORIZED);
        assert_eq!(denied.error_code(), "INVALID_CREDENTIALS");
    }
}

#[tokio::test]
async fn bad_tokens_are_rejected_everywhere() {
    let fx = fixture();
    let forged = fx
        .send(Method::GET, "/api/v1/modules", &[bearer("e30.AAAA")], Body::empty())
        .await;
    assert_eq!(forged.status, StatusCode::UNAUTHORIZED);

    let identity = fx.state.repo().verify_credentials("admin", PASSWORD).unwrap();
    let (expired, _) = fx.state.signer().issue(&identity, NOW - 7200);
    let reply = fx
        .send(
            Method::GET,
            "/api/v1/authoring/modules",
            &[bearer(&expired)],
            Body::empty(),
        )
        .await;
    assert_eq!(reply.status, StatusCode::UNAUTHORIZED);
    assert_eq!(reply.error_code(), "UNAUTHENTICATED");

    let other = TokenSigner::new(b"other".to_vec(), 3600).issue(&identity, NOW).0;
    let reply = fx
        .send(
            Method::GET,
            "/api/v1/authoring/modules",
            &[bearer(&other)],
            Body::empty(),
        )
        .await;
    assert_eq!(reply.status, StatusCode::UNAUTHORIZED);

    assert_eq!(
        fx.get("/api/v1/authoring/modules").await.status,
        StatusCode::UNAUTHORIZED
    );
}

#[tokio::test]
async fn translators_write_only_granted_locales() {
    let fx = fixture();
    let lesson = fx
        .state
        .repo()
        .get_resource(&ModuleId::new("biodiversity"), ResourceKind::Lesson)
        .unwrap();
    let body = |locale: &str| {
        json!({
            "document": serde_json::to_value(placeholder_translation(&lesson, locale)).unwrap(),
            "status": "complete",
        })
    };
    let es = fx
        .write_as(
            Method::PUT,
            "/api/v1/authoring/modules/biodiversity/variants/lesson/es",
            "translator",
            body("es"),
        )
        .await;
    assert_eq!(es.status, StatusCode::OK, "{}", String::from_utf8_lossy(&es.bytes));
    assert_eq!(es.json()["status"], "complete");

    let fr = fx
        .write_as(
            Method::PUT,
            "/api/v1/authoring/modules/biodiversity/variants/lesson/fr",
            "translator",
            body("fr"),
        )
        .await;
    assert_eq!(fr.status, StatusCode::FORBIDDEN);

    let source = fx
        .write_as(
            Method::PUT,
            "/api/v1/authoring/modules/biodiversity/resources/lesson",
            "translator",
            json!({}),
        )
        .await;
    assert_eq!(source.status, StatusCode::FORBIDDEN);

    let resolved = fx
        .get("/api/v1/modules/biodiversity/resources/lesson?lang=es")
        .await
        .json();
    assert_eq!(resolved["resolved_locale"], "es");
}

#[tokio::test]
async fn invalid_source_writes_return_the_report() {
    let fx = fixture();
    let quiz = json!({ "questions": [{
        "question_id": "q1",
        "title": "Only one proposition",
        "explanation": "x",
        "propositions": [{ "proposition_id": "p1", "title": "a", "validity": true }],
    }]});
    let reply = fx
        .write_as(
            Method::PUT,
            "/api/v1/authoring/modules/biodiversity/resources/quiz",
            "designer",
            quiz,
        )
        .await;
    assert_eq!(reply.status, StatusCode::UNPROCESSABLE_ENTITY);
    let body = reply.json();
    assert_eq!(body["error"]["code"], "VALIDATION_FAILED");
    assert!(!body["error"]["report"]["violations"].as_array().unwrap().is_empty());

    let bad_kind = fx
        .write_as(
            Method::PUT,
            "/api/v1/authoring/modules/biodiversity/resources/comic",
            "designer",
            json!({}),
        )
        .await;
    assert_eq!(bad_kind.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn packs_travel_between_servers() {
    let fx = fixture();
    let export = fx.get_as("/api/v1/export/pack", "designer").await;
    assert_eq!(export.status, StatusCode::OK);
    assert_eq!(export.content_type.as_deref(), Some("application/x-tar"));

    let target = {
        let dir = TempDir::new().unwrap();
        let repo = Repository::open(dir.path()).unwrap();
        repo.create_user("admin", PASSWORD, Role::Admin, BTreeSet::new())
            .unwrap();
        let state = AppState::with_clock(repo, TokenSigner::new(b"k".to_vec(), 60), fixed_clock);
        Fixture {
            _dir: dir,
            app: router(state.clone()),
            state,
        }
    };
    let token = target.token("admin");
    let imported = target
        .send(
            Method::POST,
            "/api/v1/authoring/import",
            &[bearer(&token)],
            Body::from(export.bytes.clone()),
        )
        .await;
    assert_eq!(
        imported.status,
        StatusCode::OK,
        "{}",
        String::from_utf8_lossy(&imported.bytes)
    );
    let report = imported.json();
    assert!(report["created"].as_u64().unwrap() >= 43, "{report}");
    assert_eq!(report["updated"], 0);
    let replay = target
        .send(
            Method::POST,
            "/api/v1/authoring/import",
            &[bearer(&token)],
            Body::from(export.bytes.clone()),
        )
        .await
        .json();
    assert_eq!(replay["created"], 0);
    assert_eq!(replay["updated"], 0);
    let stats = target.get("/api/v1/stats").await.json();
    assert_eq!(stats, fx.get("/api/v1/stats").await.json());

    let again = target.get_as("/api/v1/export/pack", "admin").await;
    assert_eq!(again.bytes, export.bytes);

    let garbage = target
        .send(
            Method::POST,
            "/api/v1/authoring/import",
            &[bearer(&token)],
            Body::from("not a tar"),
        )
        .await;
    assert_eq!(garbage.status, StatusCode::BAD_REQUEST);
    assert_eq!(garbage.error_code(), "MALFORMED_PACK");

    let filtered = fx.get_as("/api/v1/export/pack?langs=fr", "admin").await;
    assert!(filtered.bytes.len() < export.bytes.len());
}

#[tokio::test]
async fn reports_and_admin_actions() {
    let fx = fixture();
    let report = fx.get_as("/api/v1/reports/translations", "translator").await;
    assert_eq!(report.status, StatusCode::OK);

    let lang = fx
        .write_as(
            Method::POST,
            "/api/v1/authoring/languages",
            "admin",
            json!({ "code": "de", "display_name": "Deutsch" }),
        )
        .await;
    assert_eq!(lang.status, StatusCode::CREATED);
    let denied = fx
        .write_as(
            Method::POST,
            "/api/v1/authoring/languages",
            "designer",
            json!({ "code": "it", "display_name": "Italiano" }),
        )
        .await;
    assert_eq!(denied.status, StatusCode::FORBIDDEN);

    let user = fx
        .write_as(
            Method::POST,
            "/api/v1/authoring/users",
            "admin",
            json!({ "login": "dora", "password": "long enough", "role": "translator", "locale_grants": ["de"] }),
        )
        .await;
    assert_eq!(
        user.status,
        StatusCode::CREATED,
        "{}",
        String::from_utf8_lossy(&user.bytes)
    );
    let dup = fx
        .write_as(
            Method::POST,
            "/api/v1/authoring/users",
            "admin",
            json!({ "login": "dora", "password": "long enough", "role": "designer" }),
        )
        .await;
    assert_eq!(dup.status, StatusCode::CONFLICT);
    let users = fx.get_as("/api/v1/authoring/users", "admin").await.json();
    assert_eq!(users.as_array().unwrap().len(), 4);
    assert!(users.to_string().find("password").is_none());
}

#[tokio::test]
async fn unknown_routes_and_methods_use_the_error_envelope() {
    let fx = fixture();
    let missing = fx.get("/api/v1/nothing").await;
    assert_eq!(missing.status, StatusCode::NOT_FOUND);
    assert_eq!(missing.error_code(), "NOT_FOUND");
    let wrong = fx.send(Method::DELETE, "/api/v1/languages", &[], Body::empty()).await;
    assert_eq!(wrong.status, StatusCode::METHOD_NOT_ALLOWED);
    assert_eq!(wrong.error_code(), "METHOD_NOT_ALLOWED");
}

#[tokio::test]
async fn read_only_repositories_refuse_writes() {
    let fx = fixture();
    let ro = Repository::open_read_only(fx.state.repo().root()).unwrap();
    let state = AppState::with_clock(ro, TokenSigner::new(b"test-secret".to_vec(), 3600), fixed_clock);
    let app = router(state);
    let token = fx.token("admin");
    let req = Request::builder()
        .method(Method::POST)
        .uri("/api/v1/authoring/languages")
        .header("content-type", "application/json")
        .header("authorization", format!("Bearer {token}"))
        .body(Body::from(
            json!({ "code": "de", "display_name": "Deutsch" }).to_string(),
        ))
        .unwrap();
    let res = app.oneshot(req).await.unwrap();
    assert_eq!(res.status(), StatusCode::SERVICE_UNAVAILABLE);
}

#[tokio::test]
async fn empty_repository_lists_nothing() {
    let dir = TempDir::new().unwrap();
    let repo = Repository::open(dir.path()).unwrap();
    let state = AppState::with_clock(repo, TokenSigner::new(b"k".to_vec(), 60), fixed_clock);
    let fx = Fixture {
        _dir: dir,
        app: router(state.clone()),
        state,
    };
    let reply = fx.get("/api/v1/modules?lang=zh").await;
    assert_eq!(reply.status, StatusCode::OK);
    assert_eq!(reply.json(), json!([]));
}

#[tokio::test]
async fn eleven_propositions_are_rejected() {
    let fx = fixture();
    let propositions: Vec<Value> = (1..=11)
        .map(|i| json!({ "proposition_id": format!("p{i}"), "title": format!("choice {i}"), "validity": i == 1 }))
        .collect();
    let mut quiz = serde_json::to_value(
        fx.state
            .repo()
            .get_resource(&ModuleId::new("biodiversity"), ResourceKind::Quiz)
            .unwrap(),
    )
    .unwrap();
    quiz["questions"][0]["propositions"] = Value::Array(propositions);
    let reply = fx
        .write_as(
            Method::PUT,
            "/api/v1/authoring/modules/biodiversity/resources/quiz",
            "designer",
            quiz,
        )
        .await;
    assert_eq!(reply.status, StatusCode::UNPROCESSABLE_ENTITY);
    let violations = reply.json()["error"]["report"]["violations"].clone();
    assert!(
        violations
            .as_array()
            .unwrap()
            .iter()
            .any(|v| v["code"] == "PROPOSITION_COUNT"),
        "{violations}"
    );
}
