//! File-backed repository.
//!
//! Layout of a repository directory:
//!
//! ```text
//! index.json                               modules, revisions, variant index, asset media types
//! languages.json                           registered languages
//! users.json                               logins with password hashes
//! modules/<module_id>/<kind>.json          source documents
//! variants/<module_id>/<kind>/<locale>.json
//! assets/<sha256>
//! .lock                                    held exclusively by the writing process
//! ```
//!
//! Every file is canonical JSON. Readers share a snapshot; writers are
//! serialized, work on a copy and only publish it once the files are on
//! disk, so a failed write leaves both memory and disk unchanged.

mod users;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions, TryLockError};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{RwLock, RwLockReadGuard};

use serde::{Deserialize, Serialize};

pub use users::{Identity, Role, UserRecord, MIN_PASSWORD_LEN};

use crate::canonical::canonical_serialize;
use crate::catalog::{
    Asset, Catalog, CatalogError, LocaleVariant, ModuleRecord, Revision, SourceWrite, VariantKey, VariantStatus,
};
use crate::localization::CompletenessReport;
use crate::model::{
    AssetId, ElementCategory, Language, LanguageCode, ModuleDescriptor, ModuleId, Resource, ResourceKind, ResourceSet,
};
use crate::pack::{decode_pack, encode_pack, ImportReport, PackError, PackStats};
use crate::validation::{validate_pack, ValidationReport};

pub const STORE_FORMAT_VERSION: u32 = 1;

const INDEX: &str = "index.json";
const LANGUAGES: &str = "languages.json";
const USERS: &str = "users.json";
const LOCK: &str = ".lock";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("corrupt repository, {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("repository {0} is locked by another process")]
    Locked(PathBuf),
    #[error("repository was opened read-only")]
    ReadOnly,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Pack(#[from] PackError),
    #[error("pack failed validation: {0}")]
    InvalidPack(Box<ValidationReport>),
    #[error("login {0:?} already exists")]
    DuplicateLogin(String),
    #[error("password must have at least {MIN_PASSWORD_LEN} characters")]
    WeakPassword,
    #[error("login must not be blank")]
    BlankLogin,
    #[error("translators need at least one locale grant")]
    MissingGrants,
    #[error("only translators carry locale grants")]
    UnexpectedGrants,
    #[error("unknown user {0:?}")]
    UnknownUser(String),
    #[error("password hashing failed: {0}")]
    Hash(String),
}

impl StoreError {
    fn io(path: &Path, source: io::Error) -> Self {
        StoreError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn corrupt(path: &Path, reason: impl ToString) -> Self {
        StoreError::Corrupt {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        }
    }

    /// The validation report behind this error, if any.
    pub fn report(&self) -> Option<&ValidationReport> {
        match self {
            StoreError::Catalog(CatalogError::Validation(r)) | StoreError::InvalidPack(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Index {
    format_version: u32,
    modules: Vec<IndexModule>,
    variants: Vec<IndexVariant>,
    assets: BTreeMap<AssetId, String>,
}

#[derive(Serialize, Deserialize)]
struct IndexModule {
    module_id: ModuleId,
    category: ElementCategory,
    source_locale: LanguageCode,
    title: String,
    #[serde(default)]
    titles: BTreeMap<LanguageCode, String>,
    revisions: BTreeMap<ResourceKind, Revision>,
}

#[derive(Serialize, Deserialize)]
struct IndexVariant {
    module_id: ModuleId,
    kind: ResourceKind,
    locale: LanguageCode,
    status: VariantStatus,
    source_revision: u64,
}

#[derive(Clone)]
struct State {
    catalog: Catalog,
    users: BTreeMap<String, UserRecord>,
    /// Relative path to bytes, as last written.
    files: BTreeMap<String, Vec<u8>>,
}

pub struct Repository {
    root: PathBuf,
    state: RwLock<State>,
    /// Present for writable handles; holds the exclusive lock while open.
    lock: Option<File>,
}

/// A consistent read view of the repository.
pub struct Snapshot<'a>(RwLockReadGuard<'a, State>);

impl Snapshot<'_> {
    pub fn catalog(&self) -> &Catalog {
        &self.0.catalog
    }

    pub fn users(&self) -> impl Iterator<Item = &UserRecord> {
        self.0.users.values()
    }
}

impl std::ops::Deref for Snapshot<'_> {
    type Target = Catalog;

    fn deref(&self) -> &Catalog {
        &self.0.catalog
    }
}

impl Repository {
    /// True when `path` holds an initialized repository.
    pub fn is_initialized(path: impl AsRef<Path>) -> bool {
        path.as_ref().join(INDEX).is_file()
    }

    /// Opens a repository for writing, creating the layout when `path` is
    /// empty or missing. Fails with [`StoreError::Locked`] while another
    /// writer holds it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let root = path.as_ref().to_path_buf();
        fs::create_dir_all(&root).map_err(|e| StoreError::io(&root, e))?;
        let lock_path = root.join(LOCK);
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)
            .map_err(|e| StoreError::io(&lock_path, e))?;
        match lock.try_lock() {
            Ok(()) => {}
            Err(TryLockError::WouldBlock) => return Err(StoreError::Locked(root)),
            Err(TryLockError::Error(e)) => return Err(StoreError::io(&lock_path, e)),
        }
        let repo = if root.join(INDEX).exists() {
            Self::load(root, Some(lock))?
        } else {
            let empty = State {
                catalog: Catalog::new(),
                users: BTreeMap::new(),
                files: BTreeMap::new(),
            };
            let repo = Self {
                root,
                state: RwLock::new(empty.clone()),
                lock: Some(lock),
            };
            let synced = repo.sync(empty)?;
            *repo.state.write().unwrap_or_else(|p| p.into_inner()) = synced;
            repo
        };
        Ok(repo)
    }

    /// Opens an existing repository without taking the writer lock. All
    /// mutations fail with [`StoreError::ReadOnly`].
    pub fn open_read_only(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let root = path.as_ref().to_path_buf();
        if !root.join(INDEX).exists() {
            return Err(StoreError::io(
                &root.join(INDEX),
                io::Error::new(io::ErrorKind::NotFound, "not a repository (run init first)"),
            ));
        }
        Self::load(root, None)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn is_writable(&self) -> bool {
        self.lock.is_some()
    }

    pub fn snapshot(&self) -> Snapshot<'_> {
        Snapshot(self.state.read().unwrap_or_else(|p| p.into_inner()))
    }

    fn load(root: PathBuf, lock: Option<File>) -> Result<Self, StoreError> {
        let mut files = BTreeMap::new();
        let mut read = |rel: &str| -> Result<Vec<u8>, StoreError> {
            let path = root.join(rel);
            let bytes = fs::read(&path).map_err(|e| match e.kind() {
                io::ErrorKind::NotFound => StoreError::corrupt(&path, "missing file"),
                _ => StoreError::io(&path, e),
            })?;
            files.insert(rel.to_owned(), bytes.clone());
            Ok(bytes)
        };

        let index: Index =
            serde_json::from_slice(&read(INDEX)?).map_err(|e| StoreError::corrupt(&root.join(INDEX), e))?;
        if index.format_version != STORE_FORMAT_VERSION {
            return Err(StoreError::corrupt(
                &root.join(INDEX),
                format!("unsupported format_version {}", index.format_version),
            ));
        }
        let languages: Vec<Language> =
            serde_json::from_slice(&read(LANGUAGES)?).map_err(|e| StoreError::corrupt(&root.join(LANGUAGES), e))?;
        let users: Vec<UserRecord> =
            serde_json::from_slice(&read(USERS)?).map_err(|e| StoreError::corrupt(&root.join(USERS), e))?;

        let mut catalog = Catalog::new();
        catalog.languages = languages;
        for m in index.modules {
            let mut resources = ResourceSet::new();
            for kind in m.revisions.keys() {
                let rel = module_file(&m.module_id, *kind);
                let doc =
                    Resource::from_slice(*kind, &read(&rel)?).map_err(|e| StoreError::corrupt(&root.join(&rel), e))?;
                resources.insert(doc);
            }
            let descriptor = ModuleDescriptor {
                module_id: m.module_id.clone(),
                category: m.category,
                source_locale: m.source_locale,
                title: m.title,
                resources,
            };
            catalog.modules.insert(
                m.module_id,
                ModuleRecord {
                    descriptor,
                    revisions: m.revisions,
                    titles: m.titles,
                },
            );
        }
        for v in index.variants {
            let rel = variant_file(&v.module_id, v.kind, &v.locale);
            let document =
                Resource::from_slice(v.kind, &read(&rel)?).map_err(|e| StoreError::corrupt(&root.join(&rel), e))?;
            let variant = LocaleVariant {
                module_id: v.module_id,
                locale: v.locale,
                document,
                status: v.status,
                source_revision: v.source_revision,
            };
            catalog.variants.insert(variant.key(), variant);
        }
        for (asset_id, media_type) in index.assets {
            let rel = asset_file(&asset_id);
            let bytes = read(&rel)?;
            if AssetId::for_bytes(&bytes) != asset_id {
                return Err(StoreError::corrupt(&root.join(&rel), "content does not match its hash"));
            }
            catalog.assets.insert(
                asset_id.clone(),
                Asset {
                    asset_id,
                    media_type,
                    bytes,
                },
            );
        }
        let users = users.into_iter().map(|u| (u.login.clone(), u)).collect();
        Ok(Self {
            root,
            state: RwLock::new(State { catalog, users, files }),
            lock,
        })
    }

    /// Applies `f` to a copy of the state and publishes it once persisted.
    fn transact<R, E>(&self, f: impl FnOnce(&mut State) -> Result<R, E>) -> Result<R, StoreError>
    where
        StoreError: From<E>,
    {
        if self.lock.is_none() {
            return Err(StoreError::ReadOnly);
        }
        let mut guard = self.state.write().unwrap_or_else(|p| p.into_inner());
        let mut draft = guard.clone();
        let out = f(&mut draft)?;
        *guard = self.sync(draft)?;
        Ok(out)
    }

    /// Runs a catalog mutation under the writer lock and persists it.
    pub fn mutate<R>(&self, f: impl FnOnce(&mut Catalog) -> Result<R, CatalogError>) -> Result<R, StoreError> {
        self.transact(|state| f(&mut state.catalog))
    }

    fn sync(&self, mut state: State) -> Result<State, StoreError> {
        let rendered = render(&state);
        for (rel, bytes) in &rendered {
            if rel != INDEX && state.files.get(rel) != Some(bytes) {
                write_atomic(&self.root, rel, bytes)?;
            }
        }
        if state.files.get(INDEX) != rendered.get(INDEX) {
            write_atomic(&self.root, INDEX, &rendered[INDEX])?;
        }
        for rel in state.files.keys().filter(|rel| !rendered.contains_key(*rel)) {
            let path = self.root.join(rel);
            match fs::remove_file(&path) {
                Ok(()) => {}
                Err(e) if e.kind() == io::ErrorKind::NotFound => {}
                Err(e) => return Err(StoreError::io(&path, e)),
            }
        }
        state.files = rendered;
        Ok(state)
    }

    pub fn add_language(&self, code: &str, display_name: &str) -> Result<Language, StoreError> {
        self.mutate(|c| {
            c.add_language(code, display_name)
                .map(|langs| langs[langs.len() - 1].clone())
        })
    }

    pub fn put_asset(&self, media_type: &str, bytes: Vec<u8>) -> Result<AssetId, StoreError> {
        self.mutate(|c| Ok(c.put_asset(media_type, bytes)))
    }

    pub fn put_module(&self, descriptor: ModuleDescriptor) -> Result<SourceWrite, StoreError> {
        self.mutate(|c| c.put_module(descriptor))
    }

    pub fn put_resource(&self, module_id: &ModuleId, document: Resource) -> Result<SourceWrite, StoreError> {
        self.mutate(|c| c.put_resource(module_id, document))
    }

    pub fn get_resource(&self, module_id: &ModuleId, kind: ResourceKind) -> Result<Resource, StoreError> {
        Ok(self.snapshot().source(module_id, kind)?.clone())
    }

    pub fn delete_resource(&self, module_id: &ModuleId, kind: ResourceKind) -> Result<Vec<VariantKey>, StoreError> {
        self.mutate(|c| c.delete_resource(module_id, kind))
    }

    pub fn delete_module(&self, module_id: &ModuleId) -> Result<(), StoreError> {
        self.mutate(|c| c.delete_module(module_id).map(drop))
    }

    pub fn upsert_variant(
        &self,
        module_id: &ModuleId,
        locale: &LanguageCode,
        document: Resource,
        status: VariantStatus,
    ) -> Result<LocaleVariant, StoreError> {
        self.mutate(|c| c.upsert_variant(module_id, locale, document, status).cloned())
    }

    pub fn set_title_translation(
        &self,
        module_id: &ModuleId,
        locale: &LanguageCode,
        title: &str,
    ) -> Result<(), StoreError> {
        self.mutate(|c| c.set_title_translation(module_id, locale, title))
    }

    /// Writes the demonstration catalog (see [`crate::sample`]).
    pub fn seed_sample(&self) -> Result<crate::sample::SampleSummary, StoreError> {
        self.mutate(crate::sample::seed_sample)
    }

    pub fn completeness_report(&self) -> CompletenessReport {
        self.snapshot().completeness_report()
    }

    pub fn pack_stats(&self) -> PackStats {
        let snap = self.snapshot();
        PackStats::compute(snap.modules().map(|r| &r.descriptor), snap.languages().len())
    }

    /// Encodes the current content as a pack. Byte-identical for identical
    /// repository content.
    pub fn export_pack(&self, locales: Option<&BTreeSet<LanguageCode>>) -> Vec<u8> {
        encode_pack(&self.snapshot().to_pack(locales))
    }

    pub fn import_pack(&self, bytes: &[u8]) -> Result<ImportReport, StoreError> {
        let pack = decode_pack(bytes)?;
        let report = validate_pack(&pack);
        if !report.is_valid {
            return Err(StoreError::InvalidPack(Box::new(report)));
        }
        self.mutate(|c| Ok(c.import_pack(&pack)))
    }

    pub fn create_user(
        &self,
        login: &str,
        password: &str,
        role: Role,
        locale_grants: BTreeSet<LanguageCode>,
    ) -> Result<Identity, StoreError> {
        if login.trim().is_empty() {
            return Err(StoreError::BlankLogin);
        }
        if password.chars().count() < MIN_PASSWORD_LEN {
            return Err(StoreError::WeakPassword);
        }
        match role {
            Role::Translator if locale_grants.is_empty() => return Err(StoreError::MissingGrants),
            Role::Admin | Role::Designer if !locale_grants.is_empty() => return Err(StoreError::UnexpectedGrants),
            _ => {}
        }
        {
            let snap = self.snapshot();
            if snap.0.users.contains_key(login) {
                return Err(StoreError::DuplicateLogin(login.to_owned()));
            }
            if let Some(code) = locale_grants.iter().find(|c| !snap.is_registered(c)) {
                return Err(CatalogError::UnknownLocale(code.clone()).into());
            }
        }
        let password_hash = users::hash_password(password).map_err(|e| StoreError::Hash(e.to_string()))?;
        let record = UserRecord {
            login: login.to_owned(),
            password_hash,
            role,
            locale_grants,
        };
        let identity = Identity::from(&record);
        self.transact(|state| {
            if state.users.contains_key(login) {
                return Err(StoreError::DuplicateLogin(login.to_owned()));
            }
            state.users.insert(record.login.clone(), record);
            Ok(())
        })?;
        Ok(identity)
    }

    pub fn delete_user(&self, login: &str) -> Result<(), StoreError> {
        self.transact(|state| {
            state
                .users
                .remove(login)
                .map(drop)
                .ok_or_else(|| StoreError::UnknownUser(login.to_owned()))
        })
    }

    pub fn list_users(&self) -> Vec<Identity> {
        self.snapshot().users().map(Identity::from).collect()
    }

    /// Returns the identity when `password` matches. Unknown logins cost the
    /// same hash work as wrong passwords.
    pub fn verify_credentials(&self, login: &str, password: &str) -> Option<Identity> {
        let record = self.snapshot().0.users.get(login).cloned();
        match record {
            Some(u) if users::verify_password(password, &u.password_hash) => Some(Identity::from(&u)),
            Some(_) => None,
            None => {
                users::burn_verification(password);
                None
            }
        }
    }
}

fn module_file(module_id: &ModuleId, kind: ResourceKind) -> String {
    format!("modules/{module_id}/{kind}.json")
}

fn variant_file(module_id: &ModuleId, kind: ResourceKind, locale: &LanguageCode) -> String {
    format!("variants/{module_id}/{kind}/{locale}.json")
}

fn asset_file(asset_id: &AssetId) -> String {
    format!("assets/{asset_id}")
}

fn render(state: &State) -> BTreeMap<String, Vec<u8>> {
    let catalog = &state.catalog;
    let mut out = BTreeMap::new();
    let mut index = Index {
        format_version: STORE_FORMAT_VERSION,
        modules: Vec::new(),
        variants: Vec::new(),
        assets: BTreeMap::new(),
    };
    for record in catalog.modules.values() {
        let d = &record.descriptor;
        for doc in d.resources.iter() {
            out.insert(module_file(&d.module_id, doc.kind()), canonical_serialize(doc));
        }
        index.modules.push(IndexModule {
            module_id: d.module_id.clone(),
            category: d.category,
            source_locale: d.source_locale.clone(),
            title: d.title.clone(),
            titles: record.titles.clone(),
            revisions: record.revisions.clone(),
        });
    }
    for v in catalog.variants.values() {
        out.insert(
            variant_file(&v.module_id, v.kind(), &v.locale),
            canonical_serialize(&v.document),
        );
        index.variants.push(IndexVariant {
            module_id: v.module_id.clone(),
            kind: v.kind(),
            locale: v.locale.clone(),
            status: v.status,
            source_revision: v.source_revision,
        });
    }
    for asset in catalog.assets.values() {
        out.insert(asset_file(&asset.asset_id), asset.bytes.clone());
        index.assets.insert(asset.asset_id.clone(), asset.media_type.clone());
    }
    let users: Vec<&UserRecord> = state.users.values().collect();
    out.insert(LANGUAGES.to_owned(), canonical_serialize(&catalog.languages));
    out.insert(USERS.to_owned(), canonical_serialize(&users));
    out.insert(INDEX.to_owned(), canonical_serialize(&index));
    out
}

fn write_atomic(root: &Path, rel: &str, bytes: &[u8]) -> Result<(), StoreError> {
    let path = root.join(rel);
    let dir = path.parent().unwrap_or(root);
    fs::create_dir_all(dir).map_err(|e| StoreError::io(dir, e))?;
    let tmp = path.with_extension("tmp~");
    let write = || -> io::Result<()> {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, &path)
    };
    write().map_err(|e| StoreError::io(&path, e))
}
