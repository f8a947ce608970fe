//! Multilingual environmental-education modules: content model, storage
//! and the play rules used by learners.

pub mod canonical;
pub mod catalog;
pub mod localization;
pub mod model;
pub mod pack;
pub mod play;
pub mod rng;
pub mod sample;
pub mod store;
pub mod validation;

pub use catalog::{Asset, Catalog, CatalogError, LocaleVariant, ModuleRecord, Revision, VariantKey, VariantStatus};
pub use model::*;
pub use pack::{ContentPack, ImportReport, PackError, PackStats};
pub use validation::{validate_module, validate_pack, ValidationReport, Violation, ViolationCode};

#[cfg(feature = "testkit")]
pub mod testkit;
