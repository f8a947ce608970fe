use std::collections::{BTreeSet, HashSet};
use std::hash::{BuildHasher, RandomState};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, FromRequest, FromRequestParts, Request, State};
use axum::http::header::{AUTHORIZATION, CONTENT_DISPOSITION, CONTENT_TYPE};
use axum::http::request::Parts;
use axum::http::{HeaderMap, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use edupack_core::play::{
    check_association, derive_memo_deck, evaluate_answer, generate_quiz_session, pick_page_question, SessionRequest,
};
use edupack_core::store::{Repository, Role};
use edupack_core::{
    page_question_pool, AssetId, CatalogError, CategoryId, LanguageCode, MemoMode, ModuleDescriptor, ModuleId, PageId,
    PropositionId, QuestionId, Resource, ResourceKind, VariantKey, VariantStatus,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::access::{Action, Decision, Principal, RoleMatrix};
use crate::error::{ApiError, ErrorCode};
use crate::scrub;
use crate::token::TokenSigner;

pub const TEACHER_MODE_HEADER: &str = "x-teacher-mode";
const MAX_BODY_BYTES: usize = 256 * 1024 * 1024;

pub struct Shared {
    pub repo: Repository,
    pub signer: TokenSigner,
    pub clock: fn() -> u64,
}

#[derive(Clone)]
pub struct AppState(pub Arc<Shared>);

fn system_clock() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or_default()
}

impl AppState {
    pub fn new(repo: Repository, signer: TokenSigner) -> Self {
        Self::with_clock(repo, signer, system_clock)
    }

    pub fn with_clock(repo: Repository, signer: TokenSigner, clock: fn() -> u64) -> Self {
        Self(Arc::new(Shared { repo, signer, clock }))
    }

    pub fn repo(&self) -> &Repository {
        &self.0.repo
    }

    pub fn signer(&self) -> &TokenSigner {
        &self.0.signer
    }

    fn now(&self) -> u64 {
        (self.0.clock)()
    }
}

#[derive(FromRequest)]
#[from_request(via(axum::Json), rejection(ApiError))]
pub struct ApiJson<T>(pub T);

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Query), rejection(ApiError))]
pub struct ApiQuery<T>(pub T);

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Path), rejection(ApiError))]
pub struct ApiPath<T>(pub T);

impl FromRequestParts<AppState> for Principal {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &AppState) -> Result<Self, Self::Rejection> {
        if let Some(value) = parts.headers.get(AUTHORIZATION) {
            let token = value
                .to_str()
                .ok()
                .and_then(|v| v.strip_prefix("Bearer "))
                .ok_or_else(|| ApiError::new(ErrorCode::Unauthenticated, "expected a Bearer token"))?;
            let claims = state
                .signer()
                .verify(token.trim(), state.now())
                .map_err(|e| ApiError::new(ErrorCode::Unauthenticated, format!("token rejected: {e:?}")))?;
            return Ok(Principal::Authenticated(claims));
        }
        let teacher = parts
            .headers
            .get(TEACHER_MODE_HEADER)
            .and_then(|v| v.to_str().ok())
            .is_some_and(|v| v.trim().eq_ignore_ascii_case("true"));
        Ok(if teacher {
            Principal::TeacherMode
        } else {
            Principal::Anonymous
        })
    }
}

/// A presented but unusable token fails the request even on open endpoints.
async fn reject_bad_tokens(State(state): State<AppState>, req: Request, next: Next) -> Response {
    let (mut parts, body) = req.into_parts();
    if let Err(e) = Principal::from_request_parts(&mut parts, &state).await {
        return e.into_response();
    }
    next.run(Request::from_parts(parts, body)).await
}

fn authorize(principal: &Principal, action: Action, locale: Option<&LanguageCode>) -> Result<(), ApiError> {
    match RoleMatrix::decide(principal, action, locale) {
        Decision::Allow => Ok(()),
        Decision::Unauthenticated => Err(ApiError::new(ErrorCode::Unauthenticated, "log in to do this")),
        Decision::Forbidden => Err(ApiError::new(
            ErrorCode::Forbidden,
            format!("not allowed to {action:?}"),
        )),
    }
}

fn parse_kind(raw: &str) -> Result<ResourceKind, ApiError> {
    raw.parse()
        .map_err(|_| ApiError::not_found(format!("unknown resource kind {raw:?}")))
}

fn parse_locale(raw: &str) -> Result<LanguageCode, ApiError> {
    LanguageCode::parse(raw).map_err(|e| ApiError::bad_request(e.to_string()))
}

/// The requested language, or the module's source locale when absent.
fn requested(lang: &Option<String>, source: &LanguageCode) -> Result<LanguageCode, ApiError> {
    match lang {
        Some(raw) => parse_locale(raw),
        None => Ok(source.clone()),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum SeedValue {
    Number(u64),
    Text(String),
}

fn seed_or_fresh(seed: Option<SeedValue>) -> Result<u64, ApiError> {
    match seed {
        Some(SeedValue::Number(n)) => Ok(n),
        Some(SeedValue::Text(s)) => s
            .trim()
            .parse()
            .map_err(|_| ApiError::bad_request(format!("seed {s:?} is not a u64"))),
        None => Ok(RandomState::new().hash_one(SystemTime::now())),
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/v1/languages", get(languages))
        .route("/api/v1/stats", get(stats))
        .route("/api/v1/modules", get(list_modules))
        .route("/api/v1/modules/{id}/resources/{kind}", get(get_resource))
        .route("/api/v1/modules/{id}/quiz-session", post(quiz_session))
        .route("/api/v1/modules/{id}/answers", post(answers))
        .route("/api/v1/modules/{id}/association-check", post(association_check))
        .route("/api/v1/modules/{id}/page-question", post(page_question))
        .route("/api/v1/modules/{id}/memo-deck", get(memo_deck))
        .route("/api/v1/assets/{asset_id}", get(asset))
        .route("/api/v1/auth/login", post(login))
        .route("/api/v1/authoring/modules", get(authoring_modules))
        .route(
            "/api/v1/authoring/modules/{id}",
            get(authoring_module).put(put_module).delete(delete_module),
        )
        .route(
            "/api/v1/authoring/modules/{id}/resources/{kind}",
            get(get_source).put(put_source).delete(delete_source),
        )
        .route(
            "/api/v1/authoring/modules/{id}/variants/{kind}/{locale}",
            get(get_variant).put(put_variant),
        )
        .route("/api/v1/authoring/modules/{id}/titles/{locale}", put(put_title))
        .route("/api/v1/authoring/assets", post(post_asset))
        .route("/api/v1/authoring/languages", post(post_language))
        .route("/api/v1/authoring/users", get(list_users).post(create_user))
        .route("/api/v1/authoring/users/{login}", axum::routing::delete(delete_user))
        .route("/api/v1/authoring/import", post(import_pack))
        .route("/api/v1/export/pack", get(export_pack))
        .route("/api/v1/reports/translations", get(translation_report))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .method_not_allowed_fallback(|| async {
            ApiError::new(ErrorCode::MethodNotAllowed, "method not allowed on this endpoint")
        })
        .layer(middleware::from_fn_with_state(state.clone(), reject_bad_tokens))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(state)
}

// ---- learner and teacher surface -------------------------------------

async fn languages(State(state): State<AppState>) -> Json<Value> {
    Json(json!(state.repo().snapshot().languages()))
}

async fn stats(State(state): State<AppState>) -> Json<Value> {
    Json(json!(state.repo().pack_stats()))
}

#[derive(Deserialize)]
struct LangQuery {
    lang: Option<String>,
}

async fn list_modules(
    State(state): State<AppState>,
    ApiQuery(q): ApiQuery<LangQuery>,
) -> Result<Json<Value>, ApiError> {
    let snap = state.repo().snapshot();
    let mut out = Vec::new();
    for record in snap.modules() {
        let d = &record.descriptor;
        let lang = requested(&q.lang, &d.source_locale)?;
        let title = snap.resolve_title(&d.module_id, &lang)?;
        let kinds: Vec<ResourceKind> = d.resources.kinds().filter(|k| !k.is_teacher_only()).collect();
        out.push(json!({
            "module_id": d.module_id,
            "category": d.category,
            "title": title.title,
            "requested_locale": lang,
            "resolved_locale": title.resolved_locale,
            "fallback_used": title.fallback_used,
            "resource_kinds": kinds,
        }));
    }
    Ok(Json(Value::Array(out)))
}

async fn get_resource(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath((id, kind)): ApiPath<(String, String)>,
    ApiQuery(q): ApiQuery<LangQuery>,
) -> Result<Json<Value>, ApiError> {
    let kind = parse_kind(&kind)?;
    let action = if kind.is_teacher_only() {
        Action::ReadPedagogicalSupport
    } else {
        Action::ReadLearnerContent
    };
    authorize(&principal, action, None)?;
    let snap = state.repo().snapshot();
    let id = ModuleId::new(id);
    let record = snap
        .module(&id)
        .ok_or_else(|| ApiError::from(CatalogError::UnknownModule(id.clone())))?;
    let lang = requested(&q.lang, &record.descriptor.source_locale)?;
    let resolved = snap.resolve(&id, kind, &lang)?;
    Ok(Json(json!({
        "module_id": id,
        "kind": kind,
        "requested_locale": lang,
        "resolved_locale": resolved.resolved_locale,
        "fallback_used": resolved.fallback_used,
        "document": scrub::document(resolved.document),
    })))
}

fn no_quiz(e: CatalogError) -> ApiError {
    match e {
        CatalogError::UnknownResource { module_id, .. } => {
            ApiError::new(ErrorCode::NoQuiz, format!("module {module_id} has no quiz"))
        }
        other => other.into(),
    }
}

#[derive(Deserialize)]
struct SessionBody {
    #[serde(default)]
    answered_ids: Vec<QuestionId>,
    seed: Option<SeedValue>,
    lang: Option<String>,
    target_count: Option<usize>,
    shuffle_propositions: Option<bool>,
}

async fn quiz_session(
    State(state): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(body): ApiJson<SessionBody>,
) -> Result<Json<Value>, ApiError> {
    let seed = seed_or_fresh(body.seed)?;
    let snap = state.repo().snapshot();
    let id = ModuleId::new(id);
    let record = snap
        .module(&id)
        .ok_or_else(|| ApiError::from(CatalogError::UnknownModule(id.clone())))?;
    let lang = requested(&body.lang, &record.descriptor.source_locale)?;
    let resolved = snap.resolve(&id, ResourceKind::Quiz, &lang).map_err(no_quiz)?;
    let Resource::Quiz(quiz) = resolved.document else {
        return Err(ApiError::new(ErrorCode::Internal, "quiz slot holds another kind"));
    };
    let known: HashSet<&QuestionId> = quiz.questions.iter().map(|q| &q.question_id).collect();
    let answered: Vec<QuestionId> = body.answered_ids.into_iter().filter(|q| known.contains(q)).collect();
    let mut req = SessionRequest::new(quiz.clone(), seed).with_answered(answered);
    if let Some(target) = body.target_count {
        req = req.with_target_count(target);
    }
    if let Ok(lesson) = snap.resolve(&id, ResourceKind::Lesson, &lang) {
        if let Resource::Lesson(lesson) = lesson.document {
            req = req.with_lesson(lesson);
        }
    }
    let session = generate_quiz_session(&req)?;
    let shuffle = body.shuffle_propositions.unwrap_or(true);
    let questions: Vec<Value> = session
        .question_ids
        .iter()
        .enumerate()
        .filter_map(|(position, qid)| {
            quiz.question(qid)
                .map(|q| scrub::session_question(q, seed, position, shuffle))
        })
        .collect();
    Ok(Json(json!({
        "module_id": id,
        "seed": seed.to_string(),
        "resolved_locale": resolved.resolved_locale,
        "fallback_used": resolved.fallback_used,
        "shuffle_propositions": shuffle,
        "session": session,
        "questions": questions,
    })))
}

#[derive(Deserialize)]
struct AnswerBody {
    question_id: QuestionId,
    #[serde(default)]
    selected_ids: BTreeSet<PropositionId>,
    lang: Option<String>,
}

async fn answers(
    State(state): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(body): ApiJson<AnswerBody>,
) -> Result<Json<Value>, ApiError> {
    let snap = state.repo().snapshot();
    let id = ModuleId::new(id);
    let record = snap
        .module(&id)
        .ok_or_else(|| ApiError::from(CatalogError::UnknownModule(id.clone())))?;
    let lang = requested(&body.lang, &record.descriptor.source_locale)?;
    let resolved = snap.resolve(&id, ResourceKind::Quiz, &lang).map_err(no_quiz)?;
    let Resource::Quiz(quiz) = resolved.document else {
        return Err(ApiError::new(ErrorCode::Internal, "quiz slot holds another kind"));
    };
    let question = quiz
        .question(&body.question_id)
        .ok_or_else(|| ApiError::not_found(format!("unknown question {}", body.question_id)))?;
    Ok(Json(json!(evaluate_answer(question, &body.selected_ids)?)))
}

#[derive(Deserialize)]
struct AssociationBody {
    proposition_id: PropositionId,
    category_id: CategoryId,
    lang: Option<String>,
}

async fn association_check(
    State(state): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(body): ApiJson<AssociationBody>,
) -> Result<Json<Value>, ApiError> {
    let snap = state.repo().snapshot();
    let id = ModuleId::new(id);
    let record = snap
        .module(&id)
        .ok_or_else(|| ApiError::from(CatalogError::UnknownModule(id.clone())))?;
    let lang = requested(&body.lang, &record.descriptor.source_locale)?;
    let resolved = snap.resolve(&id, ResourceKind::AssociationGame, &lang)?;
    let Resource::AssociationGame(game) = resolved.document else {
        return Err(ApiError::new(
            ErrorCode::Internal,
            "association slot holds another kind",
        ));
    };
    Ok(Json(json!(check_association(
        game,
        &body.proposition_id,
        &body.category_id
    )?)))
}

#[derive(Deserialize)]
struct PageQuestionBody {
    page_id: PageId,
    #[serde(default)]
    answered_ids: BTreeSet<QuestionId>,
    seed: Option<SeedValue>,
    lang: Option<String>,
}

async fn page_question(
    State(state): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiJson(body): ApiJson<PageQuestionBody>,
) -> Result<Json<Value>, ApiError> {
    let seed = seed_or_fresh(body.seed)?;
    let snap = state.repo().snapshot();
    let id = ModuleId::new(id);
    let record = snap
        .module(&id)
        .ok_or_else(|| ApiError::from(CatalogError::UnknownModule(id.clone())))?;
    let lang = requested(&body.lang, &record.descriptor.source_locale)?;
    let lesson = snap.resolve(&id, ResourceKind::Lesson, &lang)?;
    let Resource::Lesson(lesson) = lesson.document else {
        return Err(ApiError::new(ErrorCode::Internal, "lesson slot holds another kind"));
    };
    let page = lesson
        .pages
        .iter()
        .find(|p| p.page_id == body.page_id)
        .ok_or_else(|| ApiError::not_found(format!("unknown page {}", body.page_id)))?;
    let quiz = snap.resolve(&id, ResourceKind::Quiz, &lang).map_err(no_quiz)?;
    let Resource::Quiz(quiz) = quiz.document else {
        return Err(ApiError::new(ErrorCode::Internal, "quiz slot holds another kind"));
    };
    let pool = page_question_pool(page, quiz)
        .map_err(|e| ApiError::not_found(format!("page links unknown question {}", e.0)))?;
    if pool.is_empty() {
        return Err(ApiError::not_found(format!(
            "page {} has no linked question",
            page.page_id
        )));
    }
    let picked = pick_page_question(&pool, &body.answered_ids, seed)?;
    Ok(Json(json!({
        "module_id": id,
        "page_id": page.page_id,
        "seed": seed.to_string(),
        "question": scrub::question(picked, None),
    })))
}

#[derive(Deserialize)]
struct MemoQuery {
    mode: MemoMode,
    seed: Option<String>,
    lang: Option<String>,
}

async fn memo_deck(
    State(state): State<AppState>,
    ApiPath(id): ApiPath<String>,
    ApiQuery(q): ApiQuery<MemoQuery>,
) -> Result<Json<Value>, ApiError> {
    let seed = seed_or_fresh(q.seed.map(SeedValue::Text))?;
    let snap = state.repo().snapshot();
    let id = ModuleId::new(id);
    let record = snap
        .module(&id)
        .ok_or_else(|| ApiError::from(CatalogError::UnknownModule(id.clone())))?;
    let lang = requested(&q.lang, &record.descriptor.source_locale)?;
    let resolved = snap.resolve(&id, ResourceKind::MemoSet, &lang)?;
    let Resource::MemoSet(memo) = resolved.document else {
        return Err(ApiError::new(ErrorCode::Internal, "memo slot holds another kind"));
    };
    let deck = derive_memo_deck(memo, q.mode, seed)?;
    Ok(Json(json!({ "module_id": id, "seed": seed.to_string(), "deck": deck })))
}

async fn asset(State(state): State<AppState>, ApiPath(asset_id): ApiPath<String>) -> Result<Response, ApiError> {
    let snap = state.repo().snapshot();
    let asset = snap
        .asset(&AssetId::new(asset_id.clone()))
        .ok_or_else(|| ApiError::not_found(format!("unknown asset {asset_id}")))?;
    Ok(([(CONTENT_TYPE, asset.media_type.clone())], asset.bytes.clone()).into_response())
}

// ---- authentication ---------------------------------------------------

#[derive(Deserialize)]
struct LoginBody {
    login: String,
    password: String,
}

async fn login(State(state): State<AppState>, ApiJson(body): ApiJson<LoginBody>) -> Result<Json<Value>, ApiError> {
    let verifier = state.clone();
    let identity = tokio::task::spawn_blocking(move || verifier.repo().verify_credentials(&body.login, &body.password))
        .await
        .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))?
        .ok_or_else(|| ApiError::new(ErrorCode::InvalidCredentials, "wrong login or password"))?;
    let (token, claims) = state.signer().issue(&identity, state.now());
    Ok(Json(json!({
        "token": token,
        "login": claims.sub,
        "role": claims.role,
        "locale_grants": claims.grants,
        "expires_at": claims.exp,
    })))
}

// ---- authoring --------------------------------------------------------

fn module_summary(snap: &edupack_core::Catalog, id: &ModuleId) -> Result<Value, ApiError> {
    let record = snap
        .module(id)
        .ok_or_else(|| ApiError::from(CatalogError::UnknownModule(id.clone())))?;
    let variants: Vec<Value> = snap
        .variants()
        .filter(|v| &v.module_id == id)
        .map(|v| {
            json!({
                "kind": v.kind(),
                "locale": v.locale,
                "status": v.status,
                "source_revision": v.source_revision,
            })
        })
        .collect();
    Ok(json!({
        "module_id": id,
        "category": record.descriptor.category,
        "source_locale": record.descriptor.source_locale,
        "title": record.descriptor.title,
        "titles": record.titles,
        "revisions": record.revisions,
        "resource_kinds": record.descriptor.resources.kinds().collect::<Vec<_>>(),
        "variants": variants,
    }))
}

async fn authoring_modules(State(state): State<AppState>, principal: Principal) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::ReadAuthoring, None)?;
    let snap = state.repo().snapshot();
    let ids: Vec<ModuleId> = snap.modules().map(|r| r.descriptor.module_id.clone()).collect();
    let list = ids
        .iter()
        .map(|id| module_summary(&snap, id))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Json(Value::Array(list)))
}

async fn authoring_module(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath(id): ApiPath<String>,
) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::ReadAuthoring, None)?;
    let snap = state.repo().snapshot();
    let id = ModuleId::new(id);
    let mut summary = module_summary(&snap, &id)?;
    summary["descriptor"] = json!(snap.module(&id).map(|r| &r.descriptor));
    Ok(Json(summary))
}

async fn put_module(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath(id): ApiPath<String>,
    ApiJson(descriptor): ApiJson<ModuleDescriptor>,
) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::WriteSource, None)?;
    if descriptor.module_id.as_str() != id {
        return Err(ApiError::bad_request(format!(
            "body module_id {} does not match the path {id}",
            descriptor.module_id
        )));
    }
    Ok(Json(json!(state.repo().put_module(descriptor)?)))
}

async fn delete_module(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath(id): ApiPath<String>,
) -> Result<StatusCode, ApiError> {
    authorize(&principal, Action::WriteSource, None)?;
    state.repo().delete_module(&ModuleId::new(id))?;
    Ok(StatusCode::NO_CONTENT)
}

async fn get_source(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath((id, kind)): ApiPath<(String, String)>,
) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::ReadAuthoring, None)?;
    let kind = parse_kind(&kind)?;
    let snap = state.repo().snapshot();
    let id = ModuleId::new(id);
    let document = snap.source(&id, kind)?;
    let revision = snap.module(&id).and_then(|r| r.revisions.get(&kind).copied());
    Ok(Json(
        json!({ "module_id": id, "kind": kind, "revision": revision, "document": document }),
    ))
}

fn parse_document(kind: ResourceKind, body: Value) -> Result<Resource, ApiError> {
    Resource::from_value(kind, body).map_err(|e| ApiError::bad_request(format!("not a valid {kind} document: {e}")))
}

async fn put_source(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath((id, kind)): ApiPath<(String, String)>,
    ApiJson(body): ApiJson<Value>,
) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::WriteSource, None)?;
    let kind = parse_kind(&kind)?;
    let document = parse_document(kind, body)?;
    Ok(Json(json!(state.repo().put_resource(&ModuleId::new(id), document)?)))
}

async fn delete_source(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath((id, kind)): ApiPath<(String, String)>,
) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::WriteSource, None)?;
    let kind = parse_kind(&kind)?;
    let removed = state.repo().delete_resource(&ModuleId::new(id), kind)?;
    Ok(Json(json!({ "removed_variants": removed })))
}

async fn get_variant(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath((id, kind, locale)): ApiPath<(String, String, String)>,
) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::ReadAuthoring, None)?;
    let kind = parse_kind(&kind)?;
    let locale = parse_locale(&locale)?;
    let snap = state.repo().snapshot();
    let key = VariantKey::new(id, kind, locale);
    let variant = snap
        .variant(&key)
        .ok_or_else(|| ApiError::not_found(format!("no variant {key}")))?;
    Ok(Json(json!({
        "module_id": variant.module_id,
        "kind": kind,
        "locale": variant.locale,
        "status": variant.status,
        "source_revision": variant.source_revision,
        "document": variant.document,
    })))
}

#[derive(Deserialize)]
struct VariantBody {
    document: Value,
    status: VariantStatus,
}

async fn put_variant(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath((id, kind, locale)): ApiPath<(String, String, String)>,
    ApiJson(body): ApiJson<VariantBody>,
) -> Result<Json<Value>, ApiError> {
    let locale = parse_locale(&locale)?;
    authorize(&principal, Action::WriteVariant, Some(&locale))?;
    let kind = parse_kind(&kind)?;
    let document = parse_document(kind, body.document)?;
    let variant = state
        .repo()
        .upsert_variant(&ModuleId::new(id), &locale, document, body.status)?;
    Ok(Json(json!({
        "module_id": variant.module_id,
        "kind": kind,
        "locale": variant.locale,
        "status": variant.status,
        "source_revision": variant.source_revision,
    })))
}

#[derive(Deserialize)]
struct TitleBody {
    title: String,
}

async fn put_title(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath((id, locale)): ApiPath<(String, String)>,
    ApiJson(body): ApiJson<TitleBody>,
) -> Result<StatusCode, ApiError> {
    let locale = parse_locale(&locale)?;
    authorize(&principal, Action::WriteVariant, Some(&locale))?;
    state
        .repo()
        .set_title_translation(&ModuleId::new(id), &locale, &body.title)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn post_asset(
    State(state): State<AppState>,
    principal: Principal,
    headers: HeaderMap,
    body: Bytes,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    authorize(&principal, Action::WriteSource, None)?;
    if body.is_empty() {
        return Err(ApiError::bad_request("empty asset"));
    }
    let media_type = headers
        .get(CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .unwrap_or("application/octet-stream")
        .to_owned();
    let size = body.len();
    let asset_id = state.repo().put_asset(&media_type, body.to_vec())?;
    Ok((
        StatusCode::CREATED,
        Json(json!({ "asset_id": asset_id, "media_type": media_type, "size": size })),
    ))
}

#[derive(Deserialize)]
struct LanguageBody {
    code: String,
    display_name: String,
}

async fn post_language(
    State(state): State<AppState>,
    principal: Principal,
    ApiJson(body): ApiJson<LanguageBody>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    authorize(&principal, Action::AddLanguage, None)?;
    let language = state.repo().add_language(&body.code, &body.display_name)?;
    Ok((StatusCode::CREATED, Json(json!(language))))
}

async fn list_users(State(state): State<AppState>, principal: Principal) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::ManageUsers, None)?;
    Ok(Json(json!(state.repo().list_users())))
}

#[derive(Deserialize)]
struct UserBody {
    login: String,
    password: String,
    role: Role,
    #[serde(default)]
    locale_grants: BTreeSet<LanguageCode>,
}

async fn create_user(
    State(state): State<AppState>,
    principal: Principal,
    ApiJson(body): ApiJson<UserBody>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    authorize(&principal, Action::ManageUsers, None)?;
    let worker = state.clone();
    let identity = tokio::task::spawn_blocking(move || {
        worker
            .repo()
            .create_user(&body.login, &body.password, body.role, body.locale_grants)
    })
    .await
    .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))??;
    Ok((StatusCode::CREATED, Json(json!(identity))))
}

async fn delete_user(
    State(state): State<AppState>,
    principal: Principal,
    ApiPath(login): ApiPath<String>,
) -> Result<StatusCode, ApiError> {
    authorize(&principal, Action::ManageUsers, None)?;
    state.repo().delete_user(&login)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn import_pack(
    State(state): State<AppState>,
    principal: Principal,
    body: Bytes,
) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::ImportPack, None)?;
    Ok(Json(json!(state.repo().import_pack(&body)?)))
}

#[derive(Deserialize)]
struct ExportQuery {
    langs: Option<String>,
}

async fn export_pack(
    State(state): State<AppState>,
    principal: Principal,
    ApiQuery(q): ApiQuery<ExportQuery>,
) -> Result<Response, ApiError> {
    authorize(&principal, Action::ExportPack, None)?;
    let locales = match q.langs.as_deref().map(str::trim).filter(|s| !s.is_empty()) {
        None => None,
        Some(raw) => Some(
            raw.split(',')
                .map(|c| parse_locale(c.trim()))
                .collect::<Result<BTreeSet<_>, _>>()?,
        ),
    };
    let bytes = state.repo().export_pack(locales.as_ref());
    Ok((
        [
            (CONTENT_TYPE, "application/x-tar"),
            (CONTENT_DISPOSITION, "attachment; filename=\"content.pack\""),
        ],
        bytes,
    )
        .into_response())
}

async fn translation_report(State(state): State<AppState>, principal: Principal) -> Result<Json<Value>, ApiError> {
    authorize(&principal, Action::ReadReports, None)?;
    Ok(Json(json!(state.repo().completeness_report())))
}
