//! Translator workflow: language registry, per-locale variants, staleness on
//! source edits, one-step fallback resolution and completeness tracking.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, CatalogError, LocaleVariant, VariantKey, VariantStatus};
use crate::model::{Language, LanguageCode, ModuleId, Resource, ResourceKind};
use crate::validation::{
    is_blank, validate_variant_overlay, Locator, Segment, ValidationReport, Violation, ViolationCode,
};

/// What a learner gets for a (module, kind, language) request.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved<'a> {
    pub document: &'a Resource,
    pub resolved_locale: LanguageCode,
    pub fallback_used: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedTitle<'a> {
    pub title: &'a str,
    pub resolved_locale: LanguageCode,
    pub fallback_used: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TranslationState {
    Complete,
    Draft,
    Stale,
    Missing,
}

impl From<VariantStatus> for TranslationState {
    fn from(status: VariantStatus) -> Self {
        match status {
            VariantStatus::Complete => TranslationState::Complete,
            VariantStatus::Draft => TranslationState::Draft,
            VariantStatus::Stale => TranslationState::Stale,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusCounts {
    pub complete: usize,
    pub draft: usize,
    pub stale: usize,
    pub missing: usize,
}

impl StatusCounts {
    fn add(&mut self, state: TranslationState) {
        match state {
            TranslationState::Complete => self.complete += 1,
            TranslationState::Draft => self.draft += 1,
            TranslationState::Stale => self.stale += 1,
            TranslationState::Missing => self.missing += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.complete + self.draft + self.stale + self.missing
    }

    fn absorb(&mut self, other: &StatusCounts) {
        self.complete += other.complete;
        self.draft += other.draft;
        self.stale += other.stale;
        self.missing += other.missing;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleCompleteness {
    pub module_id: ModuleId,
    pub kinds: BTreeMap<ResourceKind, TranslationState>,
    pub counts: StatusCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocaleCompleteness {
    pub locale: LanguageCode,
    /// Complete variants over source resources to translate, in [0, 1].
    pub coverage: f64,
    pub counts: StatusCounts,
    pub modules: Vec<ModuleCompleteness>,
}

/// Non-blocking remarks for authors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Advisory {
    pub module_id: ModuleId,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub locales: Vec<LocaleCompleteness>,
    pub advisories: Vec<Advisory>,
}

impl CompletenessReport {
    pub fn locale(&self, code: &str) -> Option<&LocaleCompleteness> {
        self.locales.iter().find(|l| l.locale.as_str() == code)
    }
}

impl Catalog {
    pub fn add_language(&mut self, code: &str, display_name: &str) -> Result<&[Language], CatalogError> {
        let code = LanguageCode::parse(code)?;
        if self.is_registered(&code) {
            return Err(CatalogError::DuplicateLanguage(code));
        }
        self.languages.push(Language::new(code, display_name));
        Ok(&self.languages)
    }

    /// Stores a translator's version of a source resource.
    ///
    /// Only `Draft` and `Complete` can be written. A `Complete` variant must
    /// validate with the rest of the source module around it.
    pub fn upsert_variant(
        &mut self,
        module_id: &ModuleId,
        locale: &LanguageCode,
        document: Resource,
        status: VariantStatus,
    ) -> Result<&LocaleVariant, CatalogError> {
        if status == VariantStatus::Stale {
            return Err(CatalogError::InvalidStatus(status));
        }
        if !self.is_registered(locale) {
            return Err(CatalogError::UnknownLocale(locale.clone()));
        }
        let kind = document.kind();
        self.source(module_id, kind)?;
        let record = self.record(module_id)?;
        if &record.descriptor.source_locale == locale {
            return Err(CatalogError::SourceLocale(locale.clone()));
        }
        if status == VariantStatus::Complete {
            let report = validate_variant_overlay(&record.descriptor, locale, &document);
            if !report.is_valid {
                return Err(CatalogError::validation(report));
            }
        }
        let source_revision = record.revision(kind).unwrap_or(0);
        let key = VariantKey::new(module_id.clone(), kind, locale.clone());
        let variant = LocaleVariant {
            module_id: module_id.clone(),
            locale: locale.clone(),
            document,
            status,
            source_revision,
        };
        self.variants.insert(key.clone(), variant);
        Ok(&self.variants[&key])
    }

    /// Complete variant in the requested language, else the source document.
    /// Drafts and stale variants are never returned.
    pub fn resolve(
        &self,
        module_id: &ModuleId,
        kind: ResourceKind,
        requested: &LanguageCode,
    ) -> Result<Resolved<'_>, CatalogError> {
        let source = self.source(module_id, kind)?;
        let source_locale = &self.modules[module_id].descriptor.source_locale;
        if requested != source_locale {
            let key = VariantKey::new(module_id.clone(), kind, requested.clone());
            if let Some(variant) = self.variants.get(&key) {
                if variant.status == VariantStatus::Complete {
                    return Ok(Resolved {
                        document: &variant.document,
                        resolved_locale: requested.clone(),
                        fallback_used: false,
                    });
                }
            }
        }
        Ok(Resolved {
            document: source,
            resolved_locale: source_locale.clone(),
            fallback_used: requested != source_locale,
        })
    }

    /// Bumps the source revision of a resource and marks its variants stale.
    pub fn touch_source(&mut self, module_id: &ModuleId, kind: ResourceKind) -> Result<Vec<VariantKey>, CatalogError> {
        self.source(module_id, kind)?;
        let record = self.modules.get_mut(module_id).expect("checked above");
        let revision = record.revisions.entry(kind).or_insert(crate::catalog::Revision {
            number: 0,
            updated_at: 0,
        });
        revision.number += 1;
        revision.updated_at = crate::catalog::unix_now();
        Ok(self.mark_stale(module_id, kind))
    }

    pub fn set_title_translation(
        &mut self,
        module_id: &ModuleId,
        locale: &LanguageCode,
        title: &str,
    ) -> Result<(), CatalogError> {
        if !self.is_registered(locale) {
            return Err(CatalogError::UnknownLocale(locale.clone()));
        }
        let record = self.record(module_id)?;
        if &record.descriptor.source_locale == locale {
            return Err(CatalogError::SourceLocale(locale.clone()));
        }
        if is_blank(title) {
            let subject = Locator::of(Segment::Module(module_id.clone()));
            let path = subject
                .child(Segment::Locale(locale.clone()))
                .child(Segment::Field("title".into()));
            let violation = Violation {
                code: ViolationCode::EmptyField,
                path,
                message: "title must not be empty".into(),
            };
            return Err(CatalogError::validation(ValidationReport::new(
                subject,
                vec![violation],
            )));
        }
        let record = self.modules.get_mut(module_id).expect("checked above");
        record.titles.insert(locale.clone(), title.to_owned());
        Ok(())
    }

    pub fn resolve_title(
        &self,
        module_id: &ModuleId,
        requested: &LanguageCode,
    ) -> Result<ResolvedTitle<'_>, CatalogError> {
        let record = self.record(module_id)?;
        let source_locale = &record.descriptor.source_locale;
        if let Some(title) = record.titles.get(requested).filter(|_| requested != source_locale) {
            return Ok(ResolvedTitle {
                title,
                resolved_locale: requested.clone(),
                fallback_used: false,
            });
        }
        Ok(ResolvedTitle {
            title: &record.descriptor.title,
            resolved_locale: source_locale.clone(),
            fallback_used: requested != source_locale,
        })
    }

    /// Translation status of every source resource in every registered
    /// language other than the module's own source locale.
    pub fn completeness_report(&self) -> CompletenessReport {
        let mut locales = Vec::new();
        for language in &self.languages {
            let mut modules = Vec::new();
            let mut counts = StatusCounts::default();
            for record in self.modules.values() {
                let module = &record.descriptor;
                if module.source_locale == language.code {
                    continue;
                }
                let mut entry = ModuleCompleteness {
                    module_id: module.module_id.clone(),
                    kinds: BTreeMap::new(),
                    counts: StatusCounts::default(),
                };
                for kind in module.resources.kinds() {
                    let key = VariantKey::new(module.module_id.clone(), kind, language.code.clone());
                    let state = self
                        .variants
                        .get(&key)
                        .map_or(TranslationState::Missing, |v| v.status.into());
                    entry.kinds.insert(kind, state);
                    entry.counts.add(state);
                }
                counts.absorb(&entry.counts);
                modules.push(entry);
            }
            if modules.is_empty() {
                continue;
            }
            let total = counts.total();
            let coverage = if total == 0 {
                1.0
            } else {
                counts.complete as f64 / total as f64
            };
            locales.push(LocaleCompleteness {
                locale: language.code.clone(),
                coverage,
                counts,
                modules,
            });
        }

        let advisories = self
            .modules
            .values()
            .filter(|r| r.descriptor.resources.lesson().is_some() && r.descriptor.resources.quiz().is_none())
            .map(|r| Advisory {
                module_id: r.descriptor.module_id.clone(),
                message: "lesson has no quiz, so pages cannot offer a self-test question".into(),
            })
            .collect();

        CompletenessReport { locales, advisories }
    }
}
