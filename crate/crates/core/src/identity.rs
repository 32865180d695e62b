//! City and country identities.
//!
//! A city is identified by the pair (normalized city name, normalized country
//! name), so two same-named cities in different countries stay distinct.
//! Display casing is preserved; equality and ordering use a case-folded key.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// NFC-normalize, trim, and collapse internal whitespace runs to single spaces.
pub fn normalize_label(raw: &str) -> String {
    let nfc: String = raw.nfc().collect();
    let mut out = String::with_capacity(nfc.len());
    let mut pending_space = false;
    for ch in nfc.trim().chars() {
        if ch.is_whitespace() {
            pending_space = true;
        } else {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(ch);
        }
    }
    out
}

/// Case-fold an already normalized label for identity comparisons.
pub fn fold_label(normalized: &str) -> String {
    normalized.to_lowercase()
}

/// A geocodable node: city name plus country attribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CityId {
    name: String,
    country: String,
    #[serde(skip)]
    key: String,
}

impl CityId {
    /// Build an identity from raw strings, normalizing both parts.
    pub fn new(name: &str, country: &str) -> Self {
        let name = normalize_label(name);
        let country = normalize_label(country);
        let key = format!("{}\u{1f}{}", fold_label(&name), fold_label(&country));
        CityId { name, country, key }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn country(&self) -> &str {
        &self.country
    }

    /// Folded identity key, unique per (city, country) pair.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Display label used for graph nodes: `Name (Country)`.
    pub fn label(&self) -> String {
        format!("{} ({})", self.name, self.country)
    }
}

impl PartialEq for CityId {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for CityId {}

impl std::hash::Hash for CityId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for CityId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CityId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Display for CityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.country)
    }
}

/// Controlled vocabulary mapping country label variants to canonical names.
///
/// Loaded from a CSV with header `alias,canonical`. Labels not covered by the
/// table pass through verbatim; callers may surface that as a warning.
#[derive(Debug, Default, Clone)]
pub struct CountryVocabulary {
    aliases: HashMap<String, String>,
}

impl CountryVocabulary {
    pub fn from_csv(text: &str) -> crate::Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let mut aliases = HashMap::new();
        for record in reader.records() {
            let record = record?;
            let alias = normalize_label(record.get(0).unwrap_or(""));
            let canonical = normalize_label(record.get(1).unwrap_or(""));
            if alias.is_empty() || canonical.is_empty() {
                continue;
            }
            aliases.insert(fold_label(&alias), canonical.clone());
            // Canonical names resolve to themselves.
            aliases.entry(fold_label(&canonical)).or_insert(canonical);
        }
        Ok(CountryVocabulary { aliases })
    }

    /// Resolve a label; the flag is false when the label passed through unmatched.
    pub fn resolve<'a>(&self, label: &'a str) -> (Cow<'a, str>, bool) {
        match self.aliases.get(&fold_label(label)) {
            Some(canonical) => (Cow::Owned(canonical.clone()), true),
            None => (Cow::Borrowed(label), false),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.aliases.is_empty()
    }
}
