//! Sister-city pairing ingestion.
//!
//! Raw pairings come from wikitext snapshots or from the canonical CSV edge
//! list. Canonicalization symmetrizes them: a pair reported in either
//! direction yields one undirected edge, duplicates collapse, self-pairs are
//! discarded with a warning, and the fraction of pairs reported in both
//! directions is tracked.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::identity::{fold_label, normalize_label, CityId};

/// Where a pairing was read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingOrigin {
    Wikitext,
    Csv,
}

/// One directed report "source city is twinned with target city".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPairing {
    source: CityId,
    target: CityId,
    pub origin: PairingOrigin,
}

impl RawPairing {
    /// Normalizes all four strings; empty city or country names are rejected.
    pub fn new(
        source_city: &str,
        source_country: &str,
        target_city: &str,
        target_country: &str,
        origin: PairingOrigin,
    ) -> Result<Self> {
        let source = CityId::new(source_city, source_country);
        let target = CityId::new(target_city, target_country);
        for id in [&source, &target] {
            if id.name().is_empty() || id.country().is_empty() {
                return Err(CoreError::MissingCountryLabel(if id.name().is_empty() {
                    format!("(unnamed city in {:?})", id.country())
                } else {
                    id.name().to_string()
                }));
            }
        }
        Ok(RawPairing {
            source,
            target,
            origin,
        })
    }

    pub fn source(&self) -> &CityId {
        &self.source
    }

    pub fn target(&self) -> &CityId {
        &self.target
    }
}

/// Deduplicated, symmetrized city-pair list.
///
/// `edges` holds index pairs into `cities` with `a < b`; `cities` is sorted by
/// identity key. `bidirectional_fraction` is the share of unique pairs that
/// were reported in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalEdgeList {
    pub cities: Vec<CityId>,
    pub edges: Vec<(u32, u32)>,
    pub bidirectional_fraction: f64,
}

impl CanonicalEdgeList {
    pub fn n_cities(&self) -> usize {
        self.cities.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// View the list as one directed pairing per edge (used for round-trips).
    pub fn to_pairings(&self) -> Vec<RawPairing> {
        self.edges
            .iter()
            .map(|&(a, b)| RawPairing {
                source: self.cities[a as usize].clone(),
                target: self.cities[b as usize].clone(),
                origin: PairingOrigin::Csv,
            })
            .collect()
    }
}

/// Degenerate inputs encountered while canonicalizing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IngestWarning {
    SelfPair { city: String },
    EmptyInput,
}

impl fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IngestWarning::SelfPair { city } => {
                write!(f, "discarded self-pair: {city} twinned with itself")
            }
            IngestWarning::EmptyInput => write!(f, "no pairings supplied"),
        }
    }
}

#[derive(Debug)]
pub struct CanonicalizeOutcome {
    pub list: CanonicalEdgeList,
    pub warnings: Vec<IngestWarning>,
}

/// Collapse directed pairing reports into the canonical undirected edge list.
pub fn canonicalize(pairings: &[RawPairing]) -> CanonicalizeOutcome {
    let mut warnings = Vec::new();
    if pairings.is_empty() {
        warnings.push(IngestWarning::EmptyInput);
    }

    let mut cities: BTreeMap<CityId, ()> = BTreeMap::new();
    // Unordered pair -> (seen low->high, seen high->low)
    let mut pair_dirs: BTreeMap<(CityId, CityId), (bool, bool)> = BTreeMap::new();

    for pairing in pairings {
        let (s, t) = (pairing.source.clone(), pairing.target.clone());
        if s == t {
            // Discarded entirely; a city known only from a self-pair would
            // otherwise break canonicalize's idempotence.
            warnings.push(IngestWarning::SelfPair {
                city: s.to_string(),
            });
            continue;
        }
        cities.entry(s.clone()).or_insert(());
        cities.entry(t.clone()).or_insert(());
        let forward = s < t;
        let key = if forward { (s, t) } else { (t, s) };
        let dirs = pair_dirs.entry(key).or_insert((false, false));
        if forward {
            dirs.0 = true;
        } else {
            dirs.1 = true;
        }
    }

    let city_list: Vec<CityId> = cities.into_keys().collect();
    let index: BTreeMap<&CityId, u32> = city_list
        .iter()
        .enumerate()
        .map(|(i, c)| (c, i as u32))
        .collect();

    let mut edges = Vec::with_capacity(pair_dirs.len());
    let mut bidirectional = 0usize;
    for ((a, b), (fwd, rev)) in &pair_dirs {
        edges.push((index[a], index[b]));
        if *fwd && *rev {
            bidirectional += 1;
        }
    }
    let bidirectional_fraction = if edges.is_empty() {
        0.0
    } else {
        bidirectional as f64 / edges.len() as f64
    };

    CanonicalizeOutcome {
        list: CanonicalEdgeList {
            cities: city_list,
            edges,
            bidirectional_fraction,
        },
        warnings,
    }
}

/// Parse the canonical CSV edge-list format `city_a,country_a,city_b,country_b`.
pub fn pairings_from_csv(csv_text: &str) -> Result<Vec<RawPairing>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(csv_text.as_bytes());
    let mut pairings = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        pairings.push(RawPairing::new(
            field(0),
            field(1),
            field(2),
            field(3),
            PairingOrigin::Csv,
        )?);
    }
    Ok(pairings)
}

/// Serialize a canonical list back to the CSV edge-list format.
pub fn edges_to_csv(list: &CanonicalEdgeList) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["city_a", "country_a", "city_b", "country_b"])
        .expect("writing to memory");
    for &(a, b) in &list.edges {
        let (ca, cb) = (&list.cities[a as usize], &list.cities[b as usize]);
        writer
            .write_record([ca.name(), ca.country(), cb.name(), cb.country()])
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv is utf-8")
}

/// Per-country real-valued index (GDP, HDI, ...) keyed by folded country name.
#[derive(Debug, Clone)]
pub struct AttributeTable {
    pub name: String,
    entries: BTreeMap<String, (String, f64)>,
}

impl AttributeTable {
    pub fn get(&self, country: &str) -> Option<f64> {
        self.entries
            .get(&fold_label(&normalize_label(country)))
            .map(|(_, v)| *v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn countries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.values().map(|(name, v)| (name.as_str(), *v))
    }
}

/// Load an attribute CSV with header `country,value`.
pub fn load_attribute_table(csv_text: &str, attribute_name: &str) -> Result<AttributeTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(csv_text.as_bytes());
    let mut entries = BTreeMap::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let country = normalize_label(record.get(0).unwrap_or(""));
        let raw_value = record.get(1).unwrap_or("").trim();
        let value: f64 = raw_value
            .parse()
            .map_err(|_| CoreError::NonNumericAttribute {
                row: row + 2, // header is line 1
                country: country.clone(),
                value: raw_value.to_string(),
            })?;
        let key = fold_label(&country);
        if entries.insert(key, (country.clone(), value)).is_some() {
            return Err(CoreError::DuplicateAttributeCountry(country));
        }
    }
    Ok(AttributeTable {
        name: attribute_name.to_string(),
        entries,
    })
}
