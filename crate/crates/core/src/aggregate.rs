//! Collapse the city network into the weighted country network.
//!
//! Two countries are connected when a city of one is twinned with a city of
//! the other; the edge weight counts those international partnerships.
//! Intra-country partnerships become self-loop weights.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{CoreError, Result};
use crate::graph::{CityGraph, Graph};
use crate::identity::{fold_label, CountryVocabulary};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AggregateWarning {
    UnmatchedCountry { label: String },
}

impl fmt::Display for AggregateWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggregateWarning::UnmatchedCountry { label } => {
                write!(f, "country label {label:?} not in vocabulary; passed through verbatim")
            }
        }
    }
}

/// Weighted undirected country multigraph collapsed to integer edge weights,
/// with self-loop weights kept separately.
#[derive(Debug, Clone)]
pub struct CountryGraph {
    countries: Vec<String>,
    index: HashMap<String, u32>,
    pair_weights: BTreeMap<(u32, u32), u64>,
    self_weights: Vec<u64>,
}

impl CountryGraph {
    pub fn n_countries(&self) -> usize {
        self.countries.len()
    }

    /// Number of international links (distinct country pairs).
    pub fn n_international_links(&self) -> usize {
        self.pair_weights.len()
    }

    pub fn country(&self, idx: u32) -> &str {
        &self.countries[idx as usize]
    }

    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn index_of(&self, country: &str) -> Option<u32> {
        self.index.get(&fold_label(country)).copied()
    }

    pub fn pair_weights(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.pair_weights.iter().map(|(&k, &w)| (k, w))
    }

    pub fn self_weight(&self, idx: u32) -> u64 {
        self.self_weights[idx as usize]
    }

    pub fn self_weights(&self) -> &[u64] {
        &self.self_weights
    }

    /// Sum of international edge weights at a country, optionally adding the
    /// self-loop contribution (which counts twice, once per edge end).
    pub fn weighted_degree(&self, country: &str, include_self: bool) -> Result<u64> {
        let idx = self
            .index_of(country)
            .ok_or_else(|| CoreError::UnknownCountry(country.to_string()))?;
        Ok(self.weighted_degree_by_index(idx, include_self))
    }

    pub fn weighted_degree_by_index(&self, idx: u32, include_self: bool) -> u64 {
        let mut total: u64 = self
            .pair_weights
            .iter()
            .filter(|((a, b), _)| *a == idx || *b == idx)
            .map(|(_, w)| *w)
            .sum();
        if include_self {
            total += 2 * self.self_weights[idx as usize];
        }
        total
    }

    /// Total weight over international pairs plus self weights; equals the
    /// city-network edge count by construction.
    pub fn total_partnerships(&self) -> u64 {
        self.pair_weights.values().sum::<u64>() + self.self_weights.iter().sum::<u64>()
    }

    /// View as a weighted `Graph` for centrality, community detection and
    /// structural statistics. Self-loops can be left out, e.g. for the
    /// reported link count and for degree distributions that exclude
    /// intra-country partnerships.
    pub fn to_graph(&self, include_self_loops: bool) -> Graph {
        let mut g = Graph::new(true);
        for name in &self.countries {
            g.add_node(name.clone());
        }
        for (&(a, b), &w) in &self.pair_weights {
            g.add_edge(a, b, w as f64)
                .expect("country pairs are unique by construction");
        }
        if include_self_loops {
            for (idx, &w) in self.self_weights.iter().enumerate() {
                if w > 0 {
                    g.add_edge(idx as u32, idx as u32, w as f64)
                        .expect("one self-loop per country");
                }
            }
        }
        g
    }
}

/// Aggregate the city network per country. Country labels are resolved
/// through the vocabulary when one is supplied; unmatched labels pass through
/// verbatim with one warning per distinct label.
pub fn aggregate_countries(
    city_graph: &CityGraph,
    vocab: Option<&CountryVocabulary>,
) -> Result<(CountryGraph, Vec<AggregateWarning>)> {
    let mut warnings = Vec::new();
    let mut warned: std::collections::HashSet<String> = std::collections::HashSet::new();

    let mut countries: Vec<String> = Vec::new();
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut city_country: Vec<u32> = Vec::with_capacity(city_graph.cities.len());

    for city in &city_graph.cities {
        if city.country().is_empty() {
            return Err(CoreError::MissingCountryLabel(city.name().to_string()));
        }
        let resolved = match vocab {
            Some(vocab) => {
                let (label, matched) = vocab.resolve(city.country());
                if !matched && warned.insert(label.to_string()) {
                    warnings.push(AggregateWarning::UnmatchedCountry {
                        label: label.to_string(),
                    });
                }
                label.into_owned()
            }
            None => city.country().to_string(),
        };
        let key = fold_label(&resolved);
        let idx = *index.entry(key).or_insert_with(|| {
            countries.push(resolved);
            (countries.len() - 1) as u32
        });
        city_country.push(idx);
    }

    let mut pair_weights: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let mut self_weights = vec![0u64; countries.len()];
    for (u, v, _) in city_graph.graph.edges() {
        let (a, b) = (city_country[u as usize], city_country[v as usize]);
        if a == b {
            self_weights[a as usize] += 1;
        } else {
            *pair_weights.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }

    Ok((
        CountryGraph {
            countries,
            index,
            pair_weights,
            self_weights,
        },
        warnings,
    ))
}
