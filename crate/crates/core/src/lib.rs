//! Graph analytics for sister-city networks.
//!
//! The pipeline runs from raw listings to reported numbers: parse sister-city
//! pairings out of wikitext snapshots or canonical CSV, build the undirected
//! city network and its country-level aggregation, then compute summary
//! statistics, degree distributions, randomization-based assortativity
//! Z-scores, centrality rankings, Louvain communities and great-circle
//! distance distributions. All randomized analyses are seed-driven and
//! reproduce bit-identically, in serial or parallel.

pub mod aggregate;
pub mod centrality;
pub mod community;
mod error;
pub mod export;
pub mod geo;
pub mod geocode;
pub mod graph;
mod identity;
pub mod ingest;
pub mod nullmodels;
pub mod wikitext;

pub use error::{CoreError, Result};
pub use identity::{fold_label, normalize_label, CityId, CountryVocabulary};
