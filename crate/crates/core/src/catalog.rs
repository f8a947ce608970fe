//! In-memory repository content: source modules with their locale variants.
//!
//! Every mutating method validates before it changes anything, so a failed
//! call leaves the catalog untouched.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::model::{AssetId, Language, LanguageCode, ModuleDescriptor, ModuleId, Resource, ResourceKind};
use crate::validation::{
    check_asset_refs, validate_module, Locator, Segment, ValidationReport, Violation, ViolationCode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantStatus {
    Draft,
    Complete,
    Stale,
}

impl VariantStatus {
    pub const fn as_str(self) -> &'static str {
        match self {
            VariantStatus::Draft => "draft",
            VariantStatus::Complete => "complete",
            VariantStatus::Stale => "stale",
        }
    }
}

impl fmt::Display for VariantStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VariantStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "draft" => Ok(VariantStatus::Draft),
            "complete" => Ok(VariantStatus::Complete),
            "stale" => Ok(VariantStatus::Stale),
            other => Err(format!("unknown variant status {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VariantKey {
    pub module_id: ModuleId,
    pub kind: ResourceKind,
    pub locale: LanguageCode,
}

impl VariantKey {
    pub fn new(module_id: impl Into<ModuleId>, kind: ResourceKind, locale: LanguageCode) -> Self {
        Self {
            module_id: module_id.into(),
            kind,
            locale,
        }
    }
}

impl fmt::Display for VariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.module_id, self.kind, self.locale)
    }
}

/// A full per-language version of one source resource.
#[derive(Debug, Clone, PartialEq)]
pub struct LocaleVariant {
    pub module_id: ModuleId,
    pub locale: LanguageCode,
    pub document: Resource,
    pub status: VariantStatus,
    /// Source revision this variant was written against.
    pub source_revision: u64,
}

impl LocaleVariant {
    pub fn kind(&self) -> ResourceKind {
        self.document.kind()
    }

    pub fn key(&self) -> VariantKey {
        VariantKey::new(self.module_id.clone(), self.kind(), self.locale.clone())
    }
}

/// Revision bookkeeping of one source resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Revision {
    pub number: u64,
    /// Seconds since the Unix epoch.
    pub updated_at: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleRecord {
    pub descriptor: ModuleDescriptor,
    pub revisions: BTreeMap<ResourceKind, Revision>,
    /// Module titles translated per locale, used by the catalog listing.
    pub titles: BTreeMap<LanguageCode, String>,
}

impl ModuleRecord {
    pub fn revision(&self, kind: ResourceKind) -> Option<u64> {
        self.revisions.get(&kind).map(|r| r.number)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Asset {
    pub asset_id: AssetId,
    pub media_type: String,
    pub bytes: Vec<u8>,
}

impl Asset {
    pub fn new(media_type: impl Into<String>, bytes: Vec<u8>) -> Self {
        Self {
            asset_id: AssetId::for_bytes(&bytes),
            media_type: media_type.into(),
            bytes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown module {0}")]
    UnknownModule(ModuleId),
    #[error("module {module_id} has no {kind}")]
    UnknownResource { module_id: ModuleId, kind: ResourceKind },
    #[error("language {0} is not registered")]
    UnknownLocale(LanguageCode),
    #[error("language {0} is already registered")]
    DuplicateLanguage(LanguageCode),
    #[error(transparent)]
    MalformedLanguageCode(#[from] crate::model::MalformedLanguageCode),
    #[error("{0} is the module's source locale; edit the source document instead")]
    SourceLocale(LanguageCode),
    #[error("variants cannot be saved with status {0}")]
    InvalidStatus(VariantStatus),
    #[error("cannot change the source locale of module {0} while it has variants")]
    SourceLocaleChange(ModuleId),
    #[error("validation failed: {0}")]
    Validation(Box<ValidationReport>),
}

impl CatalogError {
    pub(crate) fn validation(report: ValidationReport) -> Self {
        CatalogError::Validation(Box::new(report))
    }
}

/// Result of writing a source resource.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceWrite {
    pub revision: u64,
    /// Variants that moved to stale because of this write.
    pub staled: Vec<VariantKey>,
}

pub(crate) fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or_default()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    pub(crate) languages: Vec<Language>,
    pub(crate) modules: BTreeMap<ModuleId, ModuleRecord>,
    pub(crate) variants: BTreeMap<VariantKey, LocaleVariant>,
    pub(crate) assets: BTreeMap<AssetId, Asset>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registered languages in registration order.
    pub fn languages(&self) -> &[Language] {
        &self.languages
    }

    pub fn is_registered(&self, code: &LanguageCode) -> bool {
        self.languages.iter().any(|l| &l.code == code)
    }

    pub fn modules(&self) -> impl Iterator<Item = &ModuleRecord> {
        self.modules.values()
    }

    pub fn module(&self, id: &ModuleId) -> Option<&ModuleRecord> {
        self.modules.get(id)
    }

    pub fn variants(&self) -> impl Iterator<Item = &LocaleVariant> {
        self.variants.values()
    }

    pub fn variant(&self, key: &VariantKey) -> Option<&LocaleVariant> {
        self.variants.get(key)
    }

    pub fn assets(&self) -> impl Iterator<Item = &Asset> {
        self.assets.values()
    }

    pub fn asset(&self, id: &AssetId) -> Option<&Asset> {
        self.assets.get(id)
    }

    /// Stores an asset under its content hash. Storing the same bytes twice is a no-op.
    pub fn put_asset(&mut self, media_type: impl Into<String>, bytes: Vec<u8>) -> AssetId {
        let asset = Asset::new(media_type, bytes);
        let id = asset.asset_id.clone();
        self.assets.entry(id.clone()).or_insert(asset);
        id
    }

    pub fn source(&self, module_id: &ModuleId, kind: ResourceKind) -> Result<&Resource, CatalogError> {
        let record = self.record(module_id)?;
        record
            .descriptor
            .resources
            .get(kind)
            .ok_or_else(|| CatalogError::UnknownResource {
                module_id: module_id.clone(),
                kind,
            })
    }

    pub(crate) fn record(&self, module_id: &ModuleId) -> Result<&ModuleRecord, CatalogError> {
        self.modules
            .get(module_id)
            .ok_or_else(|| CatalogError::UnknownModule(module_id.clone()))
    }

    /// Structural validation plus the checks that need repository context:
    /// registered source locale and stored assets.
    pub fn check_module(&self, module: &ModuleDescriptor) -> ValidationReport {
        let mut report = validate_module(module);
        let at = Locator::of(Segment::Module(module.module_id.clone()));
        if !self.is_registered(&module.source_locale) {
            report.merge(ValidationReport::new(
                Locator::root(),
                vec![Violation {
                    code: ViolationCode::UndeclaredLanguage,
                    path: at.child(Segment::Field("source_locale".into())),
                    message: format!("source locale {} is not registered", module.source_locale),
                }],
            ));
        }
        let assets: BTreeSet<&AssetId> = self.assets.keys().collect();
        for resource in module.resources.iter() {
            let found = check_asset_refs(resource, &at.child(Segment::Kind(resource.kind())), &assets);
            report.merge(ValidationReport::new(Locator::root(), found));
        }
        report
    }

    /// Creates a module or replaces it wholesale.
    ///
    /// Kinds absent from `descriptor` are deleted together with their
    /// variants; every kind present gets a new revision.
    pub fn put_module(&mut self, descriptor: ModuleDescriptor) -> Result<SourceWrite, CatalogError> {
        let report = self.check_module(&descriptor);
        if !report.is_valid {
            return Err(CatalogError::validation(report));
        }
        let id = descriptor.module_id.clone();
        if let Some(existing) = self.modules.get(&id) {
            if existing.descriptor.source_locale != descriptor.source_locale
                && self.variants.keys().any(|k| k.module_id == id)
            {
                return Err(CatalogError::SourceLocaleChange(id));
            }
        }

        let now = unix_now();
        let mut staled = Vec::new();
        let record = self.modules.entry(id.clone()).or_insert_with(|| ModuleRecord {
            descriptor: descriptor.clone(),
            revisions: BTreeMap::new(),
            titles: BTreeMap::new(),
        });
        let removed: Vec<ResourceKind> = record
            .descriptor
            .resources
            .kinds()
            .filter(|k| !descriptor.resources.contains(*k))
            .collect();
        for kind in &removed {
            record.revisions.remove(kind);
        }
        let mut top = 0;
        for kind in descriptor.resources.kinds() {
            let next = record.revision(kind).unwrap_or(0) + 1;
            record.revisions.insert(
                kind,
                Revision {
                    number: next,
                    updated_at: now,
                },
            );
            top = top.max(next);
        }
        record.descriptor = descriptor;
        self.variants
            .retain(|k, _| !(k.module_id == id && removed.contains(&k.kind)));
        let kinds: Vec<ResourceKind> = self.modules[&id].descriptor.resources.kinds().collect();
        for kind in kinds {
            staled.extend(self.mark_stale(&id, kind));
        }
        staled.extend(self.stale_broken_variants(&id));
        Ok(SourceWrite { revision: top, staled })
    }

    /// Writes one source resource of an existing module.
    ///
    /// The module is revalidated as a whole with the new document in place,
    /// so cross references (lesson links into the quiz) are checked too.
    pub fn put_resource(&mut self, module_id: &ModuleId, resource: Resource) -> Result<SourceWrite, CatalogError> {
        let record = self.record(module_id)?;
        let mut candidate = record.descriptor.clone();
        let kind = resource.kind();
        candidate.resources.insert(resource);
        let report = self.check_module(&candidate);
        if !report.is_valid {
            return Err(CatalogError::validation(report));
        }
        let record = self.modules.get_mut(module_id).expect("checked above");
        record.descriptor = candidate;
        let revision = record.revision(kind).unwrap_or(0) + 1;
        record.revisions.insert(
            kind,
            Revision {
                number: revision,
                updated_at: unix_now(),
            },
        );
        let mut staled = self.mark_stale(module_id, kind);
        staled.extend(self.stale_broken_variants(module_id));
        Ok(SourceWrite { revision, staled })
    }

    /// Removes a source resource and every variant of it.
    pub fn delete_resource(
        &mut self,
        module_id: &ModuleId,
        kind: ResourceKind,
    ) -> Result<Vec<VariantKey>, CatalogError> {
        self.source(module_id, kind)?;
        let mut candidate = self.modules[module_id].descriptor.clone();
        candidate.resources.remove(kind);
        let report = validate_module(&candidate);
        if !report.is_valid {
            return Err(CatalogError::validation(report));
        }
        let record = self.modules.get_mut(module_id).expect("checked above");
        record.descriptor = candidate;
        record.revisions.remove(&kind);
        let removed: Vec<VariantKey> = self
            .variants
            .keys()
            .filter(|k| &k.module_id == module_id && k.kind == kind)
            .cloned()
            .collect();
        for key in &removed {
            self.variants.remove(key);
        }
        Ok(removed)
    }

    pub fn delete_module(&mut self, module_id: &ModuleId) -> Result<ModuleRecord, CatalogError> {
        let record = self
            .modules
            .remove(module_id)
            .ok_or_else(|| CatalogError::UnknownModule(module_id.clone()))?;
        self.variants.retain(|k, _| &k.module_id != module_id);
        Ok(record)
    }

    /// Complete variants that no longer validate against the current source
    /// (for example a translated lesson linking a question the source quiz
    /// dropped) are moved to stale.
    fn stale_broken_variants(&mut self, module_id: &ModuleId) -> Vec<VariantKey> {
        let Some(record) = self.modules.get(module_id) else {
            return Vec::new();
        };
        let broken: Vec<VariantKey> = self
            .variants
            .iter()
            .filter(|(k, v)| &k.module_id == module_id && v.status == VariantStatus::Complete)
            .filter(|(_, v)| {
                !crate::validation::validate_variant_overlay(&record.descriptor, &v.locale, &v.document).is_valid
            })
            .map(|(k, _)| k.clone())
            .collect();
        for key in &broken {
            if let Some(v) = self.variants.get_mut(key) {
                v.status = VariantStatus::Stale;
            }
        }
        broken
    }

    /// Moves every non-stale variant of the resource whose source revision
    /// is behind the current one to stale.
    pub(crate) fn mark_stale(&mut self, module_id: &ModuleId, kind: ResourceKind) -> Vec<VariantKey> {
        let Some(current) = self.modules.get(module_id).and_then(|r| r.revision(kind)) else {
            return Vec::new();
        };
        let mut staled = Vec::new();
        for (key, variant) in self.variants.iter_mut() {
            if &key.module_id == module_id
                && key.kind == kind
                && variant.status != VariantStatus::Stale
                && variant.source_revision < current
            {
                variant.status = VariantStatus::Stale;
                staled.push(key.clone());
            }
        }
        staled
    }
}
