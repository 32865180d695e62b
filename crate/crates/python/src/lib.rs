//! Python bindings for the sister-city network toolkit.
//!
//! Exposes the main pipeline as two classes plus a few free functions:
//! `CityNetwork` (build from pairings or canonical CSV; statistics, CCDF,
//! betweenness, rankings, assortativity Z-scores) and `CountryNetwork`
//! (weighted aggregation; rankings, Louvain communities). Built as the
//! extension module `sistercity`.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use sistercity_core::aggregate::{aggregate_countries, CountryGraph};
use sistercity_core::centrality::{betweenness, top_k_ranking, CentralityRanking, RankBy};
use sistercity_core::community::louvain;
use sistercity_core::geo::GeoPoint;
use sistercity_core::graph::{
    build_city_graph, degree_distribution, network_summary, CityGraph, Graph, NetworkSummary,
};
use sistercity_core::ingest::{
    canonicalize, edges_to_csv, pairings_from_csv, PairingOrigin, RawPairing,
};
use sistercity_core::nullmodels::{assortativity_zscore, MixingProperty};
use sistercity_core::wikitext::parse_wikitext_listing;
use sistercity_core::{CoreError, CountryVocabulary};

fn to_py_err(err: CoreError) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn summary_dict<'py>(py: Python<'py>, s: &NetworkSummary) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("n_nodes", s.n_nodes)?;
    dict.set_item("n_edges", s.n_edges)?;
    dict.set_item("avg_clustering", s.avg_clustering)?;
    dict.set_item("giant_component_fraction", s.giant_component_fraction)?;
    dict.set_item("avg_path_length", s.avg_path_length)?;
    Ok(dict)
}

fn ranking_list<'py>(
    py: Python<'py>,
    ranking: &CentralityRanking,
) -> PyResult<Bound<'py, PyList>> {
    let out = PyList::empty(py);
    for (i, e) in ranking.entries.iter().enumerate() {
        let row = PyDict::new(py);
        row.set_item("rank", i + 1)?;
        row.set_item("node", &e.label)?;
        row.set_item("score", e.score)?;
        row.set_item("betweenness", e.betweenness)?;
        row.set_item("betweenness_rank", e.betweenness_rank)?;
        out.append(row)?;
    }
    Ok(out)
}

fn betweenness_dict<'py>(py: Python<'py>, g: &Graph, weighted: bool) -> PyResult<Bound<'py, PyDict>> {
    let scores = betweenness(g, weighted);
    let dict = PyDict::new(py);
    for (v, score) in scores.iter().enumerate() {
        dict.set_item(g.label(v as u32), score)?;
    }
    Ok(dict)
}

/// Undirected city network built from sister-city pairings.
#[pyclass]
struct CityNetwork {
    city: CityGraph,
    edges: Vec<(u32, u32)>,
    bidirectional_fraction: f64,
}

impl CityNetwork {
    fn build(outcome: sistercity_core::ingest::CanonicalizeOutcome) -> Self {
        let city = build_city_graph(&outcome.list);
        CityNetwork {
            city,
            edges: outcome.list.edges.clone(),
            bidirectional_fraction: outcome.list.bidirectional_fraction,
        }
    }

    fn values_from_table(&self, table: &Bound<'_, PyDict>) -> PyResult<Vec<Option<f64>>> {
        let mut by_country: HashMap<String, f64> = HashMap::new();
        for (key, value) in table.iter() {
            by_country.insert(
                sistercity_core::fold_label(&sistercity_core::normalize_label(
                    &key.extract::<String>()?,
                )),
                value.extract::<f64>()?,
            );
        }
        Ok(self
            .city
            .cities
            .iter()
            .map(|c| {
                by_country
                    .get(&sistercity_core::fold_label(c.country()))
                    .copied()
            })
            .collect())
    }
}

#[pymethods]
impl CityNetwork {
    /// Build from (city_a, country_a, city_b, country_b) tuples.
    #[staticmethod]
    fn from_pairs(pairs: Vec<(String, String, String, String)>) -> PyResult<Self> {
        let pairings: Vec<RawPairing> = pairs
            .iter()
            .map(|(sc, scc, tc, tcc)| {
                RawPairing::new(sc, scc, tc, tcc, PairingOrigin::Csv).map_err(to_py_err)
            })
            .collect::<PyResult<_>>()?;
        Ok(Self::build(canonicalize(&pairings)))
    }

    /// Build from the canonical CSV edge list (`city_a,country_a,city_b,country_b`).
    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        let pairings = pairings_from_csv(text).map_err(to_py_err)?;
        Ok(Self::build(canonicalize(&pairings)))
    }

    #[getter]
    fn n_cities(&self) -> usize {
        self.city.graph.n_nodes()
    }

    #[getter]
    fn n_edges(&self) -> usize {
        self.city.graph.n_edges()
    }

    #[getter]
    fn bidirectional_fraction(&self) -> f64 {
        self.bidirectional_fraction
    }

    fn labels(&self) -> Vec<String> {
        self.city.graph.labels().to_vec()
    }

    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        summary_dict(py, &network_summary(&self.city.graph).map_err(to_py_err)?)
    }

    #[pyo3(signature = (weighted=false))]
    fn degree_ccdf(&self, weighted: bool) -> Vec<(f64, f64)> {
        degree_distribution(&self.city.graph, weighted)
    }

    #[pyo3(signature = (weighted=false))]
    fn betweenness<'py>(&self, py: Python<'py>, weighted: bool) -> PyResult<Bound<'py, PyDict>> {
        betweenness_dict(py, &self.city.graph, weighted)
    }

    #[pyo3(signature = (k=20, weighted_betweenness=false))]
    fn top_k<'py>(
        &self,
        py: Python<'py>,
        k: usize,
        weighted_betweenness: bool,
    ) -> PyResult<Bound<'py, PyList>> {
        let ranking = top_k_ranking(&self.city.graph, k, RankBy::Degree, weighted_betweenness)
            .map_err(to_py_err)?;
        ranking_list(py, &ranking)
    }

    /// Assortativity Z-score for the degree property or for a
    /// {country: value} attribute table.
    #[pyo3(signature = (replicas=100, seed=42, attribute=None, name=None, swaps=None))]
    fn assortativity_zscore<'py>(
        &self,
        py: Python<'py>,
        replicas: usize,
        seed: u64,
        attribute: Option<&Bound<'py, PyDict>>,
        name: Option<&str>,
        swaps: Option<usize>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let report = match attribute {
            None => assortativity_zscore(
                &self.city.graph,
                &MixingProperty::Degree,
                replicas,
                seed,
                swaps,
            ),
            Some(table) => {
                let values = self.values_from_table(table)?;
                assortativity_zscore(
                    &self.city.graph,
                    &MixingProperty::Attribute {
                        name: name.unwrap_or("attribute"),
                        values: &values,
                    },
                    replicas,
                    seed,
                    swaps,
                )
            }
        }
        .map_err(to_py_err)?;
        let dict = PyDict::new(py);
        dict.set_item("property", &report.property)?;
        dict.set_item("r", report.r)?;
        dict.set_item("r_rand_mean", report.r_rand_mean)?;
        dict.set_item("sigma_rand", report.sigma_rand)?;
        dict.set_item("z_score", report.z_score)?;
        dict.set_item("n_replicas", report.n_replicas)?;
        dict.set_item("seed", report.seed)?;
        dict.set_item("assortative", report.is_assortative())?;
        Ok(dict)
    }

    /// Aggregate into the weighted country network, optionally resolving
    /// labels through a vocabulary CSV (`alias,canonical`).
    #[pyo3(signature = (vocabulary_csv=None))]
    fn to_country_network(&self, vocabulary_csv: Option<&str>) -> PyResult<CountryNetwork> {
        let vocab = vocabulary_csv
            .map(CountryVocabulary::from_csv)
            .transpose()
            .map_err(to_py_err)?;
        let (countries, _) = aggregate_countries(&self.city, vocab.as_ref()).map_err(to_py_err)?;
        Ok(CountryNetwork { countries })
    }

    /// Great-circle distances of the located sister-city pairs, given a
    /// {(city, country): (lat, lon)} table. Unlocated pairs are skipped.
    fn pair_distances_km(
        &self,
        coordinates: HashMap<(String, String), (f64, f64)>,
    ) -> PyResult<Vec<f64>> {
        let mut folded: HashMap<(String, String), GeoPoint> = HashMap::new();
        for ((city, country), (lat, lon)) in coordinates {
            folded.insert(
                (
                    sistercity_core::fold_label(&sistercity_core::normalize_label(&city)),
                    sistercity_core::fold_label(&sistercity_core::normalize_label(&country)),
                ),
                GeoPoint::new(lat, lon).map_err(to_py_err)?,
            );
        }
        let located: Vec<Option<GeoPoint>> = self
            .city
            .cities
            .iter()
            .map(|c| {
                folded
                    .get(&(
                        sistercity_core::fold_label(c.name()),
                        sistercity_core::fold_label(c.country()),
                    ))
                    .copied()
            })
            .collect();
        Ok(self
            .edges
            .iter()
            .filter_map(|&(a, b)| match (located[a as usize], located[b as usize]) {
                (Some(pa), Some(pb)) => Some(sistercity_core::geo::haversine_km(pa, pb)),
                _ => None,
            })
            .collect())
    }

    fn to_csv(&self) -> String {
        let list = sistercity_core::ingest::CanonicalEdgeList {
            cities: self.city.cities.clone(),
            edges: self.edges.clone(),
            bidirectional_fraction: self.bidirectional_fraction,
        };
        edges_to_csv(&list)
    }

    fn __repr__(&self) -> String {
        format!(
            "CityNetwork(n_cities={}, n_edges={})",
            self.city.graph.n_nodes(),
            self.city.graph.n_edges()
        )
    }
}

/// Weighted country network with self-loops for intra-country partnerships.
#[pyclass]
struct CountryNetwork {
    countries: CountryGraph,
}

#[pymethods]
impl CountryNetwork {
    #[getter]
    fn n_countries(&self) -> usize {
        self.countries.n_countries()
    }

    #[getter]
    fn n_links(&self) -> usize {
        self.countries.n_international_links()
    }

    fn countries(&self) -> Vec<String> {
        self.countries.countries().to_vec()
    }

    #[pyo3(signature = (country, include_self=false))]
    fn weighted_degree(&self, country: &str, include_self: bool) -> PyResult<u64> {
        self.countries
            .weighted_degree(country, include_self)
            .map_err(to_py_err)
    }

    fn self_weight(&self, country: &str) -> PyResult<u64> {
        let idx = self
            .countries
            .index_of(country)
            .ok_or_else(|| PyValueError::new_err(format!("unknown country {country:?}")))?;
        Ok(self.countries.self_weight(idx))
    }

    /// Summary statistics of the international-link topology.
    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        summary_dict(
            py,
            &network_summary(&self.countries.to_graph(false)).map_err(to_py_err)?,
        )
    }

    #[pyo3(signature = (weighted=false, include_self=true))]
    fn degree_ccdf(&self, weighted: bool, include_self: bool) -> Vec<(f64, f64)> {
        degree_distribution(&self.countries.to_graph(include_self), weighted)
    }

    #[pyo3(signature = (k=20, include_self=false, weighted_betweenness=false))]
    fn top_k<'py>(
        &self,
        py: Python<'py>,
        k: usize,
        include_self: bool,
        weighted_betweenness: bool,
    ) -> PyResult<Bound<'py, PyList>> {
        let ranking = top_k_ranking(
            &self.countries.to_graph(true),
            k,
            RankBy::WeightedDegree { include_self },
            weighted_betweenness,
        )
        .map_err(to_py_err)?;
        ranking_list(py, &ranking)
    }

    #[pyo3(signature = (weighted=false))]
    fn betweenness<'py>(&self, py: Python<'py>, weighted: bool) -> PyResult<Bound<'py, PyDict>> {
        betweenness_dict(py, &self.countries.to_graph(true), weighted)
    }

    /// Louvain community detection; returns assignment, community count and Q.
    #[pyo3(signature = (seed=42))]
    fn louvain<'py>(&self, py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let graph = self.countries.to_graph(true);
        let partition = louvain(&graph, seed).map_err(to_py_err)?;
        let assignment = PyDict::new(py);
        for (v, &community) in partition.assignment.iter().enumerate() {
            assignment.set_item(graph.label(v as u32), community)?;
        }
        let dict = PyDict::new(py);
        dict.set_item("assignment", assignment)?;
        dict.set_item("n_communities", partition.n_communities)?;
        dict.set_item("modularity", partition.modularity)?;
        dict.set_item("seed", seed)?;
        Ok(dict)
    }

    fn __repr__(&self) -> String {
        format!(
            "CountryNetwork(n_countries={}, n_links={})",
            self.countries.n_countries(),
            self.countries.n_international_links()
        )
    }
}

/// Parse one wikitext sister-city listing page. Returns (pairings, warnings):
/// pairings as dicts, warnings as human-readable strings.
#[pyfunction]
fn parse_wikitext<'py>(
    py: Python<'py>,
    page_text: &str,
    page_scope: &str,
) -> PyResult<(Bound<'py, PyList>, Vec<String>)> {
    let parsed = parse_wikitext_listing(page_text, page_scope);
    let pairings = PyList::empty(py);
    for p in &parsed.pairings {
        let row = PyDict::new(py);
        row.set_item("source_city", p.source().name())?;
        row.set_item("source_country", p.source().country())?;
        row.set_item("target_city", p.target().name())?;
        row.set_item("target_country", p.target().country())?;
        pairings.append(row)?;
    }
    let warnings = parsed.warnings.iter().map(|w| w.to_string()).collect();
    Ok((pairings, warnings))
}

/// Great-circle distance in km between two latitude/longitude points.
#[pyfunction]
fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> PyResult<f64> {
    let a = GeoPoint::new(lat1, lon1).map_err(to_py_err)?;
    let b = GeoPoint::new(lat2, lon2).map_err(to_py_err)?;
    Ok(sistercity_core::geo::haversine_km(a, b))
}

#[pymodule]
fn sistercity(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("EARTH_RADIUS_KM", sistercity_core::geo::EARTH_RADIUS_KM)?;
    m.add_class::<CityNetwork>()?;
    m.add_class::<CountryNetwork>()?;
    m.add_function(wrap_pyfunction!(parse_wikitext, m)?)?;
    m.add_function(wrap_pyfunction!(haversine_km, m)?)?;
    Ok(())
}
