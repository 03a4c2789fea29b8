//! The built-in field catalog.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Deserialize;

use super::{Field, FieldSpec, NumberField, UnitData};
use crate::error::{Error, Result};

const CATALOG_JSON: &str = include_str!("catalog.json");

#[derive(Debug, Clone, Deserialize)]
struct Entry {
    label: String,
    min_poly: Vec<i64>,
    automorphisms: Vec<Vec<i64>>,
    units: UnitData,
}

fn entries() -> &'static Vec<Entry> {
    static ENTRIES: OnceLock<Vec<Entry>> = OnceLock::new();
    ENTRIES.get_or_init(|| serde_json::from_str(CATALOG_JSON).expect("catalog parses"))
}

fn cache() -> &'static Mutex<HashMap<String, Field>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn labels() -> Vec<&'static str> {
    entries().iter().map(|e| e.label.as_str()).collect()
}

/// The catalog field with the given label; built once and shared.
pub fn field(label: &str) -> Result<Field> {
    if let Some(k) = cache().lock().unwrap().get(label) {
        return Ok(k.clone());
    }
    let entry = entries()
        .iter()
        .find(|e| e.label == label)
        .ok_or_else(|| Error::UnknownField(label.to_string()))?;
    let k = Arc::new(NumberField::create(FieldSpec {
        label: entry.label.clone(),
        min_poly: entry.min_poly.clone(),
        automorphisms: entry.automorphisms.clone(),
        units: Some(entry.units.clone()),
    })?);
    let mut guard = cache().lock().unwrap();
    Ok(guard.entry(label.to_string()).or_insert(k).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_validates() {
        for l in labels() {
            let k = field(l).unwrap();
            assert_eq!(k.label, l);
        }
        assert!(matches!(field("nope"), Err(Error::UnknownField(_))));
    }
}
