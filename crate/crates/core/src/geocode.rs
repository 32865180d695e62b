//! Geocoding with a persistent, append-only cache.
//!
//! Cache records are line-delimited `city|country|lat|lon|status` with
//! status `ok` or `absent`; negative lookups are cached too, so repeated
//! passes over the same inputs never touch the provider again.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::{CoreError, Result};
use crate::geo::GeoPoint;
use crate::identity::{fold_label, normalize_label};

/// Result of a geocoding lookup: located, or known to be unlocatable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeocodeStatus {
    Ok(GeoPoint),
    Absent,
}

impl GeocodeStatus {
    pub fn point(&self) -> Option<GeoPoint> {
        match self {
            GeocodeStatus::Ok(p) => Some(*p),
            GeocodeStatus::Absent => None,
        }
    }
}

/// An external lookup service. `Ok(None)` means the city is not locatable;
/// transport failures must surface as `ProviderUnreachable`.
pub trait GeocodeProvider {
    fn locate(&self, city: &str, country: &str) -> Result<Option<GeoPoint>>;
}

/// Offline provider backed by a fixed table; the default for tests and for
/// fully reproducible runs.
#[derive(Debug, Default)]
pub struct StaticProvider {
    table: HashMap<String, Option<GeoPoint>>,
}

impl StaticProvider {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, city: &str, country: &str, point: Option<GeoPoint>) {
        self.table.insert(cache_key(city, country), point);
    }
}

impl GeocodeProvider for StaticProvider {
    fn locate(&self, city: &str, country: &str) -> Result<Option<GeoPoint>> {
        Ok(self
            .table
            .get(&cache_key(city, country))
            .copied()
            .flatten())
    }
}

/// HTTP provider: GET `{endpoint}?city=..&country=..`, expecting a JSON body
/// with `lat` and `lon` fields, or `{"status":"absent"}` / 404 for cities
/// the service cannot place.
pub struct HttpProvider {
    endpoint: String,
}

impl HttpProvider {
    pub fn new(endpoint: impl Into<String>) -> Self {
        HttpProvider {
            endpoint: endpoint.into(),
        }
    }
}

impl GeocodeProvider for HttpProvider {
    fn locate(&self, city: &str, country: &str) -> Result<Option<GeoPoint>> {
        let response = ureq::get(&self.endpoint)
            .query("city", city)
            .query("country", country)
            .call();
        let response = match response {
            Ok(r) => r,
            Err(ureq::Error::Status(404, _)) => return Ok(None),
            Err(e) => return Err(CoreError::ProviderUnreachable(e.to_string())),
        };
        let body: serde_json::Value = response
            .into_json()
            .map_err(|e| CoreError::ProviderUnreachable(e.to_string()))?;
        if body.get("status").and_then(|s| s.as_str()) == Some("absent") {
            return Ok(None);
        }
        match (
            body.get("lat").and_then(|v| v.as_f64()),
            body.get("lon").and_then(|v| v.as_f64()),
        ) {
            (Some(lat), Some(lon)) => Ok(Some(GeoPoint::new(lat, lon)?)),
            _ => Err(CoreError::ProviderUnreachable(format!(
                "unexpected response body: {body}"
            ))),
        }
    }
}

fn cache_key(city: &str, country: &str) -> String {
    format!(
        "{}\u{1f}{}",
        fold_label(&normalize_label(city)),
        fold_label(&normalize_label(country))
    )
}

/// Persistent geocode cache. Loads the whole file up front; writes append.
#[derive(Debug)]
pub struct GeocodeCache {
    path: PathBuf,
    entries: HashMap<String, GeocodeStatus>,
    file: Option<File>,
}

impl GeocodeCache {
    /// Open (or create) a cache file and load its records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let (key, status) = parse_record(&line).ok_or(CoreError::MalformedCacheRecord {
                    line: i + 1,
                    record: line.clone(),
                })?;
                entries.insert(key, status);
            }
        }
        Ok(GeocodeCache {
            path,
            entries,
            file: None,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Cache-only lookup; never contacts a provider.
    pub fn lookup(&self, city: &str, country: &str) -> Option<GeocodeStatus> {
        self.entries.get(&cache_key(city, country)).copied()
    }

    /// Cached result if present, otherwise query the provider and persist
    /// the outcome (including "absent").
    pub fn geocode(
        &mut self,
        city: &str,
        country: &str,
        provider: &dyn GeocodeProvider,
    ) -> Result<Option<GeoPoint>> {
        if let Some(status) = self.lookup(city, country) {
            return Ok(status.point());
        }
        let status = match provider.locate(city, country)? {
            Some(point) => GeocodeStatus::Ok(point),
            None => GeocodeStatus::Absent,
        };
        self.append(city, country, status)?;
        Ok(status.point())
    }

    fn append(&mut self, city: &str, country: &str, status: GeocodeStatus) -> Result<()> {
        let city = normalize_label(city);
        let country = normalize_label(country);
        for field in [&city, &country] {
            if field.contains('|') {
                return Err(CoreError::UnencodableCacheField(field.clone()));
            }
        }
        if self.file.is_none() {
            self.file = Some(OpenOptions::new().create(true).append(true).open(&self.path)?);
        }
        let line = match status {
            GeocodeStatus::Ok(p) => {
                format!("{city}|{country}|{}|{}|ok\n", p.latitude(), p.longitude())
            }
            GeocodeStatus::Absent => format!("{city}|{country}|||absent\n"),
        };
        let file = self.file.as_mut().expect("append handle just opened");
        file.write_all(line.as_bytes())?;
        file.flush()?;
        self.entries.insert(cache_key(&city, &country), status);
        Ok(())
    }
}

fn parse_record(line: &str) -> Option<(String, GeocodeStatus)> {
    let fields: Vec<&str> = line.split('|').collect();
    if fields.len() != 5 {
        return None;
    }
    let key = cache_key(fields[0], fields[1]);
    match fields[4] {
        "ok" => {
            let lat: f64 = fields[2].parse().ok()?;
            let lon: f64 = fields[3].parse().ok()?;
            let point = GeoPoint::new(lat, lon).ok()?;
            Some((key, GeocodeStatus::Ok(point)))
        }
        "absent" if fields[2].is_empty() && fields[3].is_empty() => {
            Some((key, GeocodeStatus::Absent))
        }
        _ => None,
    }
}
