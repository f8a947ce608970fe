use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

/// A language tag such as `en`, `zh` or `pt-BR`.
///
/// Tags are checked against `[a-z]{2,3}(-[A-Za-z0-9]{2,8})*` on construction, so
/// any `LanguageCode` value in memory is well formed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct LanguageCode(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed language code {0:?}")]
pub struct MalformedLanguageCode(pub String);

impl LanguageCode {
    pub fn parse(code: &str) -> Result<Self, MalformedLanguageCode> {
        if is_well_formed(code) {
            Ok(Self(code.to_owned()))
        } else {
            Err(MalformedLanguageCode(code.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_well_formed(code: &str) -> bool {
    let mut parts = code.split('-');
    let primary = parts.next().unwrap_or_default();
    if !(2..=3).contains(&primary.len()) || !primary.bytes().all(|b| b.is_ascii_lowercase()) {
        return false;
    }
    parts.all(|sub| (2..=8).contains(&sub.len()) && sub.bytes().all(|b| b.is_ascii_alphanumeric()))
}

impl FromStr for LanguageCode {
    type Err = MalformedLanguageCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for LanguageCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Self::parse(&raw).map_err(serde::de::Error::custom)
    }
}

/// A registered language: its tag and the name shown to users.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Language {
    pub code: LanguageCode,
    pub display_name: String,
}

impl Language {
    pub fn new(code: LanguageCode, display_name: impl Into<String>) -> Self {
        Self {
            code,
            display_name: display_name.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_launch_locales() {
        for code in ["en", "fr", "zh", "es", "pt-BR", "zh-Hans-CN"] {
            assert!(LanguageCode::parse(code).is_ok(), "{code}");
        }
    }

    #[test]
    fn rejects_malformed() {
        for code in [
            "",
            "EN",
            "EN_us",
            "e",
            "engl",
            "pt-",
            "pt-B",
            "pt-BRAZILIAN",
            "fr_FR",
            "é",
        ] {
            assert!(LanguageCode::parse(code).is_err(), "{code}");
        }
    }

    #[test]
    fn deserialize_validates() {
        assert!(serde_json::from_str::<LanguageCode>("\"pt-BR\"").is_ok());
        assert!(serde_json::from_str::<LanguageCode>("\"PT\"").is_err());
    }
}
