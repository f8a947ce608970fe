//! One check per acceptance criterion. Each prints a PASS or FAIL line to
//! stderr (bypassing the test harness capture) and the test fails if any
//! check fails.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use edupack_core::canonical::canonical_serialize;
use edupack_core::pack::decode_pack;
use edupack_core::play::{derive_memo_deck, generate_quiz_session, pick_page_question};
use edupack_core::rng::SeededRng;
use edupack_core::sample::placeholder_translation;
use edupack_core::store::{Repository, Role};
use edupack_core::testkit::{
    golden_vectors, mutate, random_catalog, random_document, random_memo_set, random_module, random_quiz,
    random_session_request, session_oracle, ConstraintClass, PictureFactory,
};
use edupack_core::{
    validate_module, LanguageCode, MemoMode, ModuleDescriptor, ModuleId, QuestionId, Resource, ResourceKind,
};
use edupack_server::{router, Action, AppState, Claims, Decision, Principal, RoleMatrix, TokenSigner};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- model constraints -------------------------------------------------

fn model_constraints() -> Check {
    let mut pictures = PictureFactory::default();
    for i in 0..1000u64 {
        let module = random_module(&mut SeededRng::new(i), &mut pictures, &format!("gen{i}"));
        let report = validate_module(&module);
        ensure(report.is_valid, || format!("valid module {i} rejected: {report}"))?;
    }
    let mut mutants = 0;
    for class in ConstraintClass::ALL {
        for i in 0..20u64 {
            let mut rng = SeededRng::new(7_000_000 + i);
            let module = random_module(&mut rng, &mut pictures, "mutant");
            let mutation = mutate(&mut rng, &module, class);
            let report = validate_module(&mutation.module);
            ensure(!report.is_valid, || format!("{class:?} mutant {i} accepted"))?;
            ensure(
                report
                    .violations
                    .iter()
                    .any(|v| v.code == mutation.code && v.path == mutation.path),
                || {
                    format!(
                        "{class:?} mutant {i}: no {:?} at {} in {report}",
                        mutation.code, mutation.path
                    )
                },
            )?;
            mutants += 1;
        }
    }
    Ok(format!(
        "1000 valid modules accepted, {mutants} mutants rejected at the mutated path"
    ))
}

// ---- session oracle ------------------------------------------------------

fn session_generator() -> Check {
    let mut checked = 0;
    for instance in 0..500u64 {
        let base = random_session_request(&mut SeededRng::new(instance), 12, 6, 0);
        for seed in 0..20u64 {
            let mut req = base.clone();
            req.seed = seed;
            let session = generate_quiz_session(&req).map_err(|e| format!("instance {instance}: {e}"))?;
            let verdict = session_oracle(&req, &session);
            ensure(verdict.holds(), || {
                format!("instance {instance} seed {seed}: {verdict:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} sessions checked against brute-force enumeration, 0 violations"
    ))
}

// ---- determinism -------------------------------------------------------

fn seeded_outputs(seed: u64) -> Vec<u8> {
    let mut out = Vec::new();
    let mut rng = SeededRng::new(seed);
    let req = random_session_request(&mut rng, 12, 6, seed);
    out.extend(canonical_serialize(&generate_quiz_session(&req).unwrap()));
    let quiz = random_quiz(&mut rng, 7);
    let pool: Vec<_> = quiz.questions.iter().collect();
    let answered: BTreeSet<QuestionId> = quiz
        .questions
        .iter()
        .step_by(3)
        .map(|q| q.question_id.clone())
        .collect();
    out.extend(canonical_serialize(
        &pick_page_question(&pool, &answered, seed).unwrap().question_id,
    ));
    let mut memo = random_memo_set(&mut rng, &mut PictureFactory::default());
    memo.enabled_modes = MemoMode::ALL.into_iter().collect();
    for mode in MemoMode::ALL {
        out.extend(canonical_serialize(&derive_memo_deck(&memo, mode, seed).unwrap()));
    }
    out
}

fn determinism(http: &Http) -> Check {
    for seed in 0..200u64 {
        let runs: Vec<Vec<u8>> = (0..3).map(|_| seeded_outputs(seed)).collect();
        ensure(runs[0] == runs[1] && runs[1] == runs[2], || {
            format!("seed {seed} differs between runs")
        })?;
    }
    for seed in ["0", "18446744073709551615", "12345"] {
        let body = json!({ "answered_ids": ["q2"], "seed": seed });
        let runs: Vec<Vec<u8>> = (0..3)
            .map(|_| {
                http.call(
                    Method::POST,
                    "/api/v1/modules/water-filtration/quiz-session",
                    &[],
                    Some(&body),
                )
                .2
            })
            .collect();
        ensure(runs[0] == runs[1] && runs[1] == runs[2], || {
            format!("HTTP session for seed {seed} differs")
        })?;
    }
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/seeded_vectors.json");
    let stored: Value =
        serde_json::from_slice(&std::fs::read(&golden_path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(stored == golden_vectors(), || {
        "golden vectors drifted from the committed file".into()
    })?;
    Ok(format!(
        "200 seeds x 3 runs identical, HTTP sessions identical, committed golden vectors reproduced on {}-{} \
         (no second platform available in this run)",
        std::env::consts::ARCH,
        std::env::consts::OS
    ))
}

// ---- round trips ---------------------------------------------------------

fn round_trips() -> Check {
    for seed in 0..1000u64 {
        let doc = random_document(&mut SeededRng::new(seed));
        let once = canonical_serialize(&doc);
        let back = Resource::from_slice(doc.kind(), &once).map_err(|e| format!("doc {seed}: {e}"))?;
        ensure(canonical_serialize(&back) == once && back == doc, || {
            format!("doc {seed} is not a fixpoint")
        })?;
    }
    for seed in 0..50u64 {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let source = Repository::open(a.path()).unwrap();
        let catalog = random_catalog(&mut SeededRng::new(seed));
        source
            .mutate(|c| {
                *c = catalog;
                Ok(())
            })
            .unwrap();
        let first = source.export_pack(None);
        let fresh = Repository::open(b.path()).unwrap();
        fresh.import_pack(&first).map_err(|e| format!("repo {seed}: {e}"))?;
        ensure(fresh.export_pack(None) == first, || {
            format!("repo {seed}: second export differs")
        })?;
    }
    Ok("1000 documents are canonical fixpoints, 50 repositories export-import-export byte-identical".into())
}

// ---- sample fixture through the binary ----------------------------------

fn edupack(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_edupack"))
        .arg("--data-dir")
        .arg(dir)
        .args(args)
        .env_remove("SAPHIR_DATA_DIR")
        .output()
        .expect("run edupack")
}

/// Independent count: one per present kind, memo sets one per mode,
/// pedagogical support not counted.
fn count_resources(module: &ModuleDescriptor) -> usize {
    module
        .resources
        .iter()
        .map(|r| match r {
            Resource::MemoSet(m) => m.enabled_modes.len(),
            Resource::PedagogicalSupport(_) => 0,
            _ => 1,
        })
        .sum()
}

fn sample_fixture(work: &Path) -> Check {
    let dir = work.join("fixture");
    let init = Command::new(env!("CARGO_BIN_EXE_edupack"))
        .arg("init")
        .arg(&dir)
        .output()
        .unwrap();
    ensure(init.status.success(), || {
        format!("init: {}", String::from_utf8_lossy(&init.stderr))
    })?;
    let seeded = edupack(&dir, &["seed-sample"]);
    ensure(seeded.status.success(), || {
        format!("seed-sample: {}", String::from_utf8_lossy(&seeded.stderr))
    })?;

    let stats = edupack(&dir, &["--format", "json", "stats"]);
    ensure(stats.status.success(), || "stats failed".into())?;
    let stats: Value = serde_json::from_slice(&stats.stdout).map_err(|e| e.to_string())?;
    let validate = edupack(&dir, &["validate"]);
    ensure(validate.status.code() == Some(0), || {
        format!("validate exit {:?}", validate.status.code())
    })?;

    let pack_path = dir.with_extension("pack");
    let export = edupack(&dir, &["export", "--out", pack_path.to_str().unwrap()]);
    ensure(export.status.success(), || "export failed".into())?;
    let pack = decode_pack(&std::fs::read(&pack_path).unwrap()).map_err(|e| e.to_string())?;
    let categories: BTreeSet<_> = pack.modules.iter().map(|m| m.descriptor.category).collect();
    let resources: usize = pack.modules.iter().map(|m| count_resources(&m.descriptor)).sum();

    ensure(stats["module_count"] == 6 && pack.modules.len() == 6, || {
        format!("module count {stats}")
    })?;
    ensure(
        stats["per_category"].as_object().map(|o| o.len()) == Some(4) && categories.len() == 4,
        || format!("categories {stats}"),
    )?;
    ensure(stats["language_count"] == 5 && pack.languages.len() == 5, || {
        format!("languages {stats}")
    })?;
    let reported = stats["resource_count"].as_u64().unwrap_or(0) as usize;
    ensure(reported >= 43 && reported == resources, || {
        format!("resources {reported} vs counted {resources}")
    })?;

    let copy = work.join("copy");
    Command::new(env!("CARGO_BIN_EXE_edupack"))
        .arg("init")
        .arg(&copy)
        .output()
        .unwrap();
    let import = edupack(&copy, &["import", pack_path.to_str().unwrap()]);
    ensure(import.status.success(), || "import failed".into())?;
    let again = work.join("again.pack");
    edupack(&copy, &["export", "--out", again.to_str().unwrap()]);
    ensure(
        std::fs::read(&again).unwrap() == std::fs::read(&pack_path).unwrap(),
        || "CLI export-import-export differs".into(),
    )?;
    Ok(format!(
        "6 modules, 4 categories, {resources} resources, 5 languages; validate exits 0; CLI pack round trip identical"
    ))
}

// ---- HTTP harness --------------------------------------------------------

const PASSWORD: &str = "acceptance pw";
const NOW: u64 = 1_800_000_000;

fn clock() -> u64 {
    NOW
}

struct Http {
    app: Router,
    state: AppState,
    runtime: tokio::runtime::Runtime,
}

impl Http {
    fn new(dir: &Path) -> Self {
        let repo = Repository::open(dir).unwrap();
        repo.seed_sample().unwrap();
        let es = BTreeSet::from([LanguageCode::parse("es").unwrap()]);
        repo.create_user("admin", PASSWORD, Role::Admin, BTreeSet::new())
            .unwrap();
        repo.create_user("designer", PASSWORD, Role::Designer, BTreeSet::new())
            .unwrap();
        repo.create_user("translator", PASSWORD, Role::Translator, es).unwrap();
        let state = AppState::with_clock(repo, TokenSigner::new(b"acceptance".to_vec(), 600), clock);
        let runtime = tokio::runtime::Builder::new_multi_thread()
            .enable_all()
            .build()
            .unwrap();
        Http {
            app: router(state.clone()),
            state,
            runtime,
        }
    }

    fn token(&self, login: &str) -> String {
        let identity = self.state.repo().verify_credentials(login, PASSWORD).unwrap();
        self.state.signer().issue(&identity, NOW).0
    }

    fn call(
        &self,
        method: Method,
        uri: &str,
        headers: &[(&str, String)],
        body: Option<&Value>,
    ) -> (StatusCode, String, Vec<u8>) {
        self.raw(method, uri, headers, body.map(|b| b.to_string().into_bytes()))
    }

    fn raw(
        &self,
        method: Method,
        uri: &str,
        headers: &[(&str, String)],
        body: Option<Vec<u8>>,
    ) -> (StatusCode, String, Vec<u8>) {
        let mut req = Request::builder()
            .method(method)
            .uri(uri)
            .header("content-type", "application/json");
        for (k, v) in headers {
            req = req.header(*k, v);
        }
        let req = req.body(body.map(Body::from).unwrap_or_else(Body::empty)).unwrap();
        self.runtime.block_on(async {
            let res = self.app.clone().oneshot(req).await.unwrap();
            let status = res.status();
            let ct = res
                .headers()
                .get("content-type")
                .and_then(|v| v.to_str().ok())
                .unwrap_or_default()
                .to_owned();
            (status, ct, res.into_body().collect().await.unwrap().to_bytes().to_vec())
        })
    }
}

// ---- role matrix ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Want {
    Allow,
    Unauth,
    Deny,
}

use Want::{Allow as A, Deny as D, Unauth as U};

const CALLERS: [&str; 5] = ["anonymous", "teacher", "admin", "designer", "translator"];

/// Expected outcome per action and caller, written out by hand. The
/// translator holds a grant for "es" only.
const TABLE: [(&str, [Want; 5]); 11] = [
    ("read-learner-content", [A, A, A, A, A]),
    ("read-pedagogical-support", [D, A, A, A, A]),
    ("read-authoring", [U, U, A, A, A]),
    ("write-source", [U, U, A, A, D]),
    ("write-variant:es", [U, U, A, A, A]),
    ("write-variant:fr", [U, U, A, A, D]),
    ("add-language", [U, U, A, D, D]),
    ("manage-users", [U, U, A, D, D]),
    ("import-pack", [U, U, A, D, D]),
    ("export-pack", [U, U, A, A, A]),
    ("read-reports", [U, U, A, A, A]),
];

fn principal(caller: &str) -> Principal {
    let role = match caller {
        "anonymous" => return Principal::Anonymous,
        "teacher" => return Principal::TeacherMode,
        "admin" => Role::Admin,
        "designer" => Role::Designer,
        _ => Role::Translator,
    };
    let grants = if role == Role::Translator {
        BTreeSet::from([LanguageCode::parse("es").unwrap()])
    } else {
        BTreeSet::new()
    };
    Principal::Authenticated(Claims {
        sub: caller.into(),
        role,
        grants,
        exp: u64::MAX,
    })
}

fn table_action(name: &str) -> (Action, Option<LanguageCode>) {
    let action = match name.split(':').next().unwrap() {
        "read-learner-content" => Action::ReadLearnerContent,
        "read-pedagogical-support" => Action::ReadPedagogicalSupport,
        "read-authoring" => Action::ReadAuthoring,
        "write-source" => Action::WriteSource,
        "write-variant" => Action::WriteVariant,
        "add-language" => Action::AddLanguage,
        "manage-users" => Action::ManageUsers,
        "import-pack" => Action::ImportPack,
        "export-pack" => Action::ExportPack,
        "read-reports" => Action::ReadReports,
        other => unreachable!("{other}"),
    };
    (
        action,
        name.split_once(':').map(|(_, l)| LanguageCode::parse(l).unwrap()),
    )
}

fn role_matrix(http: &Http) -> Check {
    let covered: BTreeSet<Action> = TABLE.iter().map(|(name, _)| table_action(name).0).collect();
    ensure(covered.len() == Action::ALL.len(), || {
        "table does not cover every action".into()
    })?;
    for (name, row) in TABLE {
        let (action, locale) = table_action(name);
        for (caller, want) in CALLERS.iter().zip(row) {
            let decided = match RoleMatrix::decide(&principal(caller), action, locale.as_ref()) {
                Decision::Allow => A,
                Decision::Unauthenticated => U,
                Decision::Forbidden => D,
            };
            ensure(decided == want, || {
                format!("RoleMatrix {name} as {caller}: {decided:?}, want {want:?}")
            })?;
        }
    }

    let module = ModuleId::new("water-filtration");
    let lesson = http.state.repo().get_resource(&module, ResourceKind::Lesson).unwrap();
    let video = serde_json::to_value(
        http.state
            .repo()
            .get_resource(&module, ResourceKind::VideoLink)
            .unwrap(),
    )
    .unwrap();
    let pack = http.state.repo().export_pack(None);
    let mut fresh = 0u32;
    let mut checked = 0;

    for (action, row) in TABLE {
        for (caller, want) in CALLERS.iter().zip(row) {
            let mut headers = Vec::new();
            match *caller {
                "anonymous" => {}
                "teacher" => headers.push(("x-teacher-mode", "true".to_owned())),
                login => headers.push(("authorization", format!("Bearer {}", http.token(login)))),
            }
            fresh += 1;
            let letter = char::from(b'a' + (fresh % 26) as u8);
            let second = char::from(b'a' + ((fresh / 26) % 26) as u8);
            let (status, _, body) = match action {
                "read-learner-content" => http.call(
                    Method::GET,
                    "/api/v1/modules/water-filtration/resources/lesson",
                    &headers,
                    None,
                ),
                "read-pedagogical-support" => http.call(
                    Method::GET,
                    "/api/v1/modules/water-filtration/resources/pedagogical_support",
                    &headers,
                    None,
                ),
                "read-authoring" => http.call(
                    Method::GET,
                    "/api/v1/authoring/modules/water-filtration",
                    &headers,
                    None,
                ),
                "write-source" => http.call(
                    Method::PUT,
                    "/api/v1/authoring/modules/water-filtration/resources/video_link",
                    &headers,
                    Some(&video),
                ),
                "write-variant:es" | "write-variant:fr" => {
                    let locale = &action[action.len() - 2..];
                    let doc = serde_json::to_value(placeholder_translation(&lesson, locale)).unwrap();
                    http.call(
                        Method::PUT,
                        &format!("/api/v1/authoring/modules/water-filtration/variants/lesson/{locale}"),
                        &headers,
                        Some(&json!({ "document": doc, "status": "complete" })),
                    )
                }
                "add-language" => http.call(
                    Method::POST,
                    "/api/v1/authoring/languages",
                    &headers,
                    Some(&json!({ "code": format!("q{second}{letter}"), "display_name": "Test" })),
                ),
                "manage-users" => http.call(
                    Method::POST,
                    "/api/v1/authoring/users",
                    &headers,
                    Some(&json!({ "login": format!("user{fresh}"), "password": PASSWORD, "role": "designer" })),
                ),
                "import-pack" => http.raw(Method::POST, "/api/v1/authoring/import", &headers, Some(pack.clone())),
                "export-pack" => http.call(Method::GET, "/api/v1/export/pack", &headers, None),
                "read-reports" => http.call(Method::GET, "/api/v1/reports/translations", &headers, None),
                other => unreachable!("{other}"),
            };
            let got = match status.as_u16() {
                200..=299 => A,
                401 => U,
                403 => D,
                other => {
                    return Err(format!(
                        "{action} as {caller}: unexpected {other}: {}",
                        String::from_utf8_lossy(&body)
                    ))
                }
            };
            ensure(got == want, || {
                format!("{action} as {caller}: got {got:?}, want {want:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} (action, caller) cells match the table in RoleMatrix and over HTTP"
    ))
}

// ---- scrub ---------------------------------------------------------------

/// Paths of keys that must not appear before an answer is submitted.
fn forbidden(value: &Value, at: &str, out: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if matches!(
                    k.as_str(),
                    "validity" | "personalized_explanation" | "explanation" | "is_valid"
                ) {
                    out.push(format!("{at}/{k}"));
                }
                forbidden(v, &format!("{at}/{k}"), out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                forbidden(v, &format!("{at}/{i}"), out);
            }
        }
        _ => {}
    }
}

fn scrub(http: &Http) -> Check {
    let snap = http.state.repo().snapshot();
    let mut langs: Vec<Option<String>> = snap.languages().iter().map(|l| Some(l.code.to_string())).collect();
    langs.push(None);
    let modules: Vec<ModuleDescriptor> = snap.modules().map(|r| r.descriptor.clone()).collect();
    drop(snap);

    let teacher = [("x-teacher-mode", "true".to_owned())];
    let mut requests: Vec<(Method, String, Option<Value>, bool)> = vec![
        (Method::GET, "/api/v1/languages".into(), None, false),
        (Method::GET, "/api/v1/stats".into(), None, false),
    ];
    for lang in &langs {
        let q = lang.as_ref().map(|l| format!("?lang={l}")).unwrap_or_default();
        let amp = lang.as_ref().map(|l| format!("&lang={l}")).unwrap_or_default();
        requests.push((Method::GET, format!("/api/v1/modules{q}"), None, false));
        for m in &modules {
            let id = &m.module_id;
            for kind in m.resources.kinds() {
                requests.push((
                    Method::GET,
                    format!("/api/v1/modules/{id}/resources/{kind}{q}"),
                    None,
                    kind.is_teacher_only(),
                ));
            }
            if let Some(quiz) = m.resources.quiz() {
                let all: Vec<&str> = quiz.questions.iter().map(|q| q.question_id.as_str()).collect();
                for (i, answered) in [&all[..0], &all[..2], &all[..all.len() - 1], &all[..]]
                    .iter()
                    .enumerate()
                {
                    for seed in 0..5u64 {
                        let body = json!({
                            "answered_ids": answered,
                            "seed": seed * 31 + i as u64,
                            "lang": lang,
                            "shuffle_propositions": seed % 2 == 0,
                        });
                        requests.push((
                            Method::POST,
                            format!("/api/v1/modules/{id}/quiz-session"),
                            Some(body),
                            false,
                        ));
                    }
                }
            }
            if let Some(lesson) = m.resources.lesson() {
                for page in lesson.pages.iter().filter(|p| !p.linked_question_ids.is_empty()) {
                    for seed in 0..3u64 {
                        let body = json!({ "page_id": page.page_id, "seed": seed, "lang": lang });
                        requests.push((
                            Method::POST,
                            format!("/api/v1/modules/{id}/page-question"),
                            Some(body),
                            false,
                        ));
                    }
                }
            }
            if let Some(memo) = m.resources.memo_set() {
                for mode in &memo.enabled_modes {
                    let mode = serde_json::to_value(mode).unwrap();
                    let mode = mode.as_str().unwrap();
                    requests.push((
                        Method::GET,
                        format!("/api/v1/modules/{id}/memo-deck?mode={mode}&seed=3{amp}"),
                        None,
                        false,
                    ));
                }
            }
        }
    }

    let mut scanned = 0;
    for (method, uri, body, as_teacher) in requests {
        let headers: &[(&str, String)] = if as_teacher { &teacher } else { &[] };
        let (status, ct, bytes) = http.call(method.clone(), &uri, headers, body.as_ref());
        ensure(status == StatusCode::OK, || format!("{method} {uri}: {status}"))?;
        if !ct.starts_with("application/json") {
            continue;
        }
        let value: Value = serde_json::from_slice(&bytes).map_err(|e| format!("{uri}: {e}"))?;
        let mut found = Vec::new();
        forbidden(&value, "", &mut found);
        ensure(found.is_empty(), || format!("{method} {uri} leaks {found:?}"))?;
        scanned += 1;
    }
    ensure(scanned > 500, || format!("only {scanned} responses scanned"))?;
    Ok(format!("{scanned} open-endpoint responses scanned, 0 forbidden keys"))
}

// ---- driver --------------------------------------------------------------

fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance() {
    let work = tempfile::tempdir().unwrap();
    let work_path: PathBuf = work.path().to_path_buf();
    let http_dir = work_path.join("http");
    let http = Http::new(&http_dir);

    let checks: Vec<Criterion<'_>> = vec![
        ("model-constraint suite", Box::new(model_constraints)),
        ("quiz-generator oracle", Box::new(session_generator)),
        ("determinism", Box::new(|| determinism(&http))),
        ("round-trip fixpoints", Box::new(round_trips)),
        ("sample catalog fixture", Box::new(|| sample_fixture(&work_path))),
        ("role matrix", Box::new(|| role_matrix(&http))),
        ("scrub property", Box::new(|| scrub(&http))),
    ];

    let mut failures = BTreeMap::new();
    for (name, check) in &checks {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => report(&format!("ACCEPTANCE PASS  {name}: {detail}")),
            Err(why) => {
                report(&format!("ACCEPTANCE FAIL  {name}: {why}"));
                failures.insert(*name, why);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:#?}");
}
