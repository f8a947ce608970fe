//! Content packs: the archive learners install for offline use.
//!
//! A pack is a ustar archive whose entries appear in sorted path order with
//! zeroed metadata, so identical content gives identical bytes:
//!
//! ```text
//! manifest.json                              format version, languages, stats, indexes
//! modules/<module_id>/<kind>.json            source documents
//! variants/<module_id>/<kind>/<locale>.json  locale variants
//! assets/<asset_id>                          binary assets, named by SHA-256
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::canonical::canonical_serialize;
use crate::catalog::{Asset, Catalog, LocaleVariant, ModuleRecord, Revision, VariantKey, VariantStatus};
use crate::model::{
    count_playable_resources, AssetId, ElementCategory, Language, LanguageCode, ModuleDescriptor, ModuleId, Resource,
    ResourceKind, ResourceSet,
};

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_PATH: &str = "manifest.json";

#[derive(Debug, thiserror::Error)]
pub enum PackError {
    #[error("malformed pack: {0}")]
    Parse(String),
    #[error("pack format version {found} is not supported (expected {FORMAT_VERSION})")]
    VersionMismatch { found: u64 },
}

fn parse_err(e: impl std::fmt::Display) -> PackError {
    PackError::Parse(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackStats {
    pub module_count: usize,
    pub resource_count: usize,
    pub language_count: usize,
    pub per_category: BTreeMap<ElementCategory, usize>,
}

impl PackStats {
    pub fn compute<'a>(modules: impl IntoIterator<Item = &'a ModuleDescriptor>, language_count: usize) -> Self {
        let mut per_category: BTreeMap<ElementCategory, usize> =
            ElementCategory::ALL.into_iter().map(|c| (c, 0)).collect();
        let mut module_count = 0;
        let mut resource_count = 0;
        for module in modules {
            module_count += 1;
            resource_count += count_playable_resources(module);
            *per_category.entry(module.category).or_default() += 1;
        }
        Self {
            module_count,
            resource_count,
            language_count,
            per_category,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PackModule {
    pub descriptor: ModuleDescriptor,
    pub revisions: BTreeMap<ResourceKind, u64>,
    pub titles: BTreeMap<LanguageCode, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContentPack {
    pub format_version: u32,
    pub languages: Vec<Language>,
    pub modules: Vec<PackModule>,
    pub variants: Vec<LocaleVariant>,
    pub assets: Vec<Asset>,
    pub stats: PackStats,
}

impl ContentPack {
    pub fn empty() -> Self {
        Self {
            format_version: FORMAT_VERSION,
            languages: Vec::new(),
            modules: Vec::new(),
            variants: Vec::new(),
            assets: Vec::new(),
            stats: PackStats::compute([], 0),
        }
    }

    /// Number of documents (source resources plus variants).
    pub fn document_count(&self) -> usize {
        self.modules.iter().map(|m| m.descriptor.resources.len()).sum::<usize>() + self.variants.len()
    }
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    format_version: u64,
    languages: Vec<Language>,
    stats: PackStats,
    modules: Vec<ManifestModule>,
    variants: Vec<ManifestVariant>,
    assets: Vec<ManifestAsset>,
}

#[derive(Serialize, Deserialize)]
struct ManifestModule {
    module_id: ModuleId,
    category: ElementCategory,
    source_locale: LanguageCode,
    title: String,
    #[serde(default)]
    titles: BTreeMap<LanguageCode, String>,
    resources: BTreeMap<ResourceKind, ManifestResource>,
}

#[derive(Serialize, Deserialize)]
struct ManifestResource {
    revision: u64,
    path: String,
}

#[derive(Serialize, Deserialize)]
struct ManifestVariant {
    module_id: ModuleId,
    kind: ResourceKind,
    locale: LanguageCode,
    status: VariantStatus,
    source_revision: u64,
    path: String,
}

#[derive(Serialize, Deserialize)]
struct ManifestAsset {
    asset_id: AssetId,
    media_type: String,
    size: usize,
    path: String,
}

fn module_path(module_id: &ModuleId, kind: ResourceKind) -> String {
    format!("modules/{module_id}/{kind}.json")
}

fn variant_path(module_id: &ModuleId, kind: ResourceKind, locale: &LanguageCode) -> String {
    format!("variants/{module_id}/{kind}/{locale}.json")
}

fn asset_path(asset_id: &AssetId) -> String {
    format!("assets/{asset_id}")
}

pub fn encode_pack(pack: &ContentPack) -> Vec<u8> {
    let mut entries: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    let mut manifest = Manifest {
        format_version: u64::from(pack.format_version),
        languages: pack.languages.clone(),
        stats: pack.stats.clone(),
        modules: Vec::new(),
        variants: Vec::new(),
        assets: Vec::new(),
    };
    for module in &pack.modules {
        let d = &module.descriptor;
        let mut resources = BTreeMap::new();
        for resource in d.resources.iter() {
            let kind = resource.kind();
            let path = module_path(&d.module_id, kind);
            entries.insert(path.clone(), canonical_serialize(resource));
            resources.insert(
                kind,
                ManifestResource {
                    revision: module.revisions.get(&kind).copied().unwrap_or(1),
                    path,
                },
            );
        }
        manifest.modules.push(ManifestModule {
            module_id: d.module_id.clone(),
            category: d.category,
            source_locale: d.source_locale.clone(),
            title: d.title.clone(),
            titles: module.titles.clone(),
            resources,
        });
    }
    for variant in &pack.variants {
        let path = variant_path(&variant.module_id, variant.kind(), &variant.locale);
        entries.insert(path.clone(), canonical_serialize(&variant.document));
        manifest.variants.push(ManifestVariant {
            module_id: variant.module_id.clone(),
            kind: variant.kind(),
            locale: variant.locale.clone(),
            status: variant.status,
            source_revision: variant.source_revision,
            path,
        });
    }
    for asset in &pack.assets {
        let path = asset_path(&asset.asset_id);
        entries.insert(path.clone(), asset.bytes.clone());
        manifest.assets.push(ManifestAsset {
            asset_id: asset.asset_id.clone(),
            media_type: asset.media_type.clone(),
            size: asset.bytes.len(),
            path,
        });
    }
    entries.insert(MANIFEST_PATH.to_owned(), canonical_serialize(&manifest));

    let mut builder = tar::Builder::new(Vec::new());
    builder.mode(tar::HeaderMode::Deterministic);
    for (path, bytes) in &entries {
        let mut header = tar::Header::new_ustar();
        header.set_size(bytes.len() as u64);
        header.set_mode(0o644);
        header.set_mtime(0);
        header.set_uid(0);
        header.set_gid(0);
        header.set_entry_type(tar::EntryType::Regular);
        builder
            .append_data(&mut header, path, bytes.as_slice())
            .expect("writing to memory cannot fail");
    }
    builder.into_inner().expect("writing to memory cannot fail")
}

pub fn decode_pack(bytes: &[u8]) -> Result<ContentPack, PackError> {
    let mut entries: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    let mut archive = tar::Archive::new(bytes);
    for entry in archive.entries().map_err(parse_err)? {
        let mut entry = entry.map_err(parse_err)?;
        let path = entry.path().map_err(parse_err)?.to_string_lossy().into_owned();
        let mut data = Vec::new();
        entry.read_to_end(&mut data).map_err(parse_err)?;
        entries.insert(path, data);
    }
    let raw_manifest = entries
        .get(MANIFEST_PATH)
        .ok_or_else(|| PackError::Parse("missing manifest.json".into()))?;
    let head: serde_json::Value = serde_json::from_slice(raw_manifest).map_err(parse_err)?;
    let found = head
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| PackError::Parse("manifest has no format_version".into()))?;
    if found != u64::from(FORMAT_VERSION) {
        return Err(PackError::VersionMismatch { found });
    }
    let manifest: Manifest = serde_json::from_value(head).map_err(parse_err)?;

    let entry = |path: &str| -> Result<&Vec<u8>, PackError> {
        entries
            .get(path)
            .ok_or_else(|| PackError::Parse(format!("missing entry {path}")))
    };

    let mut modules = Vec::with_capacity(manifest.modules.len());
    for m in manifest.modules {
        let mut resources = ResourceSet::new();
        let mut revisions = BTreeMap::new();
        for (kind, r) in m.resources {
            let doc = Resource::from_slice(kind, entry(&r.path)?)
                .map_err(|e| PackError::Parse(format!("{}: {e}", r.path)))?;
            resources.insert(doc);
            revisions.insert(kind, r.revision);
        }
        modules.push(PackModule {
            descriptor: ModuleDescriptor {
                module_id: m.module_id,
                category: m.category,
                source_locale: m.source_locale,
                title: m.title,
                resources,
            },
            revisions,
            titles: m.titles,
        });
    }
    let mut variants = Vec::with_capacity(manifest.variants.len());
    for v in manifest.variants {
        let document =
            Resource::from_slice(v.kind, entry(&v.path)?).map_err(|e| PackError::Parse(format!("{}: {e}", v.path)))?;
        variants.push(LocaleVariant {
            module_id: v.module_id,
            locale: v.locale,
            document,
            status: v.status,
            source_revision: v.source_revision,
        });
    }
    let mut assets = Vec::with_capacity(manifest.assets.len());
    for a in manifest.assets {
        assets.push(Asset {
            asset_id: a.asset_id,
            media_type: a.media_type,
            bytes: entry(&a.path)?.clone(),
        });
    }
    Ok(ContentPack {
        format_version: FORMAT_VERSION,
        languages: manifest.languages,
        modules,
        variants,
        assets,
        stats: manifest.stats,
    })
}

/// Counts reported by [`Catalog::import_pack`]. Documents are source
/// resources and variants.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportReport {
    pub created: usize,
    pub updated: usize,
    pub skipped: usize,
    pub languages_added: usize,
    pub assets_added: usize,
}

impl Catalog {
    /// Builds a pack of all modules, the Complete variants of the requested
    /// locales (every locale when `None`) and the assets they reference.
    pub fn to_pack(&self, locales: Option<&BTreeSet<LanguageCode>>) -> ContentPack {
        let wanted = |code: &LanguageCode| locales.is_none_or(|set| set.contains(code));
        let source_locales: BTreeSet<&LanguageCode> =
            self.modules.values().map(|r| &r.descriptor.source_locale).collect();
        let languages: Vec<Language> = self
            .languages
            .iter()
            .filter(|l| wanted(&l.code) || source_locales.contains(&l.code))
            .cloned()
            .collect();

        let modules: Vec<PackModule> = self
            .modules
            .values()
            .map(|r| PackModule {
                descriptor: r.descriptor.clone(),
                revisions: r.revisions.iter().map(|(k, rev)| (*k, rev.number)).collect(),
                titles: r
                    .titles
                    .iter()
                    .filter(|(l, _)| wanted(l))
                    .map(|(l, t)| (l.clone(), t.clone()))
                    .collect(),
            })
            .collect();
        let variants: Vec<LocaleVariant> = self
            .variants
            .values()
            .filter(|v| v.status == VariantStatus::Complete && wanted(&v.locale))
            .cloned()
            .collect();

        let referenced: BTreeSet<&AssetId> = modules
            .iter()
            .flat_map(|m| m.descriptor.resources.iter())
            .chain(variants.iter().map(|v| &v.document))
            .flat_map(|doc| doc.pictures())
            .map(|p| &p.asset_id)
            .collect();
        let assets = referenced
            .into_iter()
            .filter_map(|id| self.assets.get(id))
            .cloned()
            .collect();
        let stats = PackStats::compute(modules.iter().map(|m| &m.descriptor), languages.len());
        ContentPack {
            format_version: FORMAT_VERSION,
            languages,
            modules,
            variants,
            assets,
            stats,
        }
    }

    /// Applies a pack that already passed [`crate::validation::validate_pack`].
    ///
    /// Documents whose canonical bytes and revision already match are
    /// skipped, so importing the same pack twice changes nothing.
    pub fn import_pack(&mut self, pack: &ContentPack) -> ImportReport {
        let mut report = ImportReport::default();
        for language in &pack.languages {
            if !self.is_registered(&language.code) {
                self.languages.push(language.clone());
                report.languages_added += 1;
            }
        }
        for asset in &pack.assets {
            if !self.assets.contains_key(&asset.asset_id) {
                self.assets.insert(asset.asset_id.clone(), asset.clone());
                report.assets_added += 1;
            }
        }

        let now = crate::catalog::unix_now();
        for module in &pack.modules {
            let d = &module.descriptor;
            let record = self.modules.entry(d.module_id.clone()).or_insert_with(|| ModuleRecord {
                descriptor: ModuleDescriptor {
                    resources: ResourceSet::new(),
                    ..d.clone()
                },
                revisions: BTreeMap::new(),
                titles: BTreeMap::new(),
            });
            record.descriptor.category = d.category;
            record.descriptor.source_locale = d.source_locale.clone();
            record.descriptor.title = d.title.clone();
            record
                .titles
                .extend(module.titles.iter().map(|(l, t)| (l.clone(), t.clone())));

            let mut changed_kinds = Vec::new();
            for resource in d.resources.iter() {
                let kind = resource.kind();
                let pack_revision = module.revisions.get(&kind).copied().unwrap_or(1);
                match (record.descriptor.resources.get(kind), record.revision(kind)) {
                    (Some(existing), Some(current)) => {
                        if canonical_serialize(existing) == canonical_serialize(resource) {
                            report.skipped += 1;
                            continue;
                        }
                        let number = pack_revision.max(current + 1);
                        record.revisions.insert(
                            kind,
                            Revision {
                                number,
                                updated_at: now,
                            },
                        );
                        report.updated += 1;
                        changed_kinds.push(kind);
                    }
                    _ => {
                        record.revisions.insert(
                            kind,
                            Revision {
                                number: pack_revision,
                                updated_at: now,
                            },
                        );
                        report.created += 1;
                    }
                }
                record.descriptor.resources.insert(resource.clone());
            }

            let incoming: BTreeSet<VariantKey> = pack
                .variants
                .iter()
                .filter(|v| v.module_id == d.module_id)
                .map(LocaleVariant::key)
                .collect();
            for kind in changed_kinds {
                let current = self.modules[&d.module_id].revision(kind).unwrap_or(0);
                for (key, variant) in self.variants.iter_mut() {
                    if key.module_id == d.module_id
                        && key.kind == kind
                        && !incoming.contains(key)
                        && variant.source_revision < current
                    {
                        variant.status = VariantStatus::Stale;
                    }
                }
            }
        }

        for variant in &pack.variants {
            let key = variant.key();
            match self.variants.get(&key) {
                Some(existing) if existing == variant => report.skipped += 1,
                Some(_) => {
                    report.updated += 1;
                    self.variants.insert(key, variant.clone());
                }
                None => {
                    report.created += 1;
                    self.variants.insert(key, variant.clone());
                }
            }
        }
        report
    }

    pub fn from_pack(pack: &ContentPack) -> Self {
        let mut catalog = Catalog::new();
        catalog.import_pack(pack);
        catalog
    }
}
