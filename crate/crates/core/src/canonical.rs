//! Canonical JSON text.
//!
//! Object keys are sorted bytewise, arrays keep their order, output is UTF-8
//! with two-space indentation, LF line endings and a final newline. Floats
//! use the shortest representation that parses back to the same value, so
//! `0.5` is written as `0.5`.

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Serializes `value` canonically.
///
/// # Panics
/// If `value` cannot be represented as JSON (e.g. a map with non-string
/// keys). None of the content types in this crate have that shape.
pub fn canonical_serialize<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    // Going through `Value` sorts object keys: its map is a BTreeMap.
    let tree = serde_json::to_value(value).expect("content types serialize to JSON");
    let mut out = serde_json::to_vec_pretty(&tree).expect("a JSON value always serializes");
    out.push(b'\n');
    out
}

pub fn canonical_string<T: Serialize + ?Sized>(value: &T) -> String {
    String::from_utf8(canonical_serialize(value)).expect("serde_json emits UTF-8")
}

pub fn parse<T: DeserializeOwned>(bytes: &[u8]) -> serde_json::Result<T> {
    serde_json::from_slice(bytes)
}
