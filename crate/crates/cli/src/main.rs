//! Command-line front end for the sister-city network toolkit.
//!
//! Every subcommand reads its inputs, writes its data products under the
//! output directory and finishes with a `manifest.json` recording inputs,
//! seed, version and checksums. All randomness flows from the single
//! `--seed` flag, so reruns are byte-identical.

mod manifest;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sistercity_core::aggregate::{aggregate_countries, CountryGraph};
use sistercity_core::centrality::{top_k_ranking, RankBy};
use sistercity_core::community::louvain;
use sistercity_core::export;
use sistercity_core::geo::{
    all_pairs_distance_distribution, compare_distributions, distance_distribution,
    sampled_pairs_distance_distribution, GeoPoint, PairPopulation,
};
use sistercity_core::geocode::{GeocodeCache, GeocodeProvider, HttpProvider, StaticProvider};
use sistercity_core::graph::{build_city_graph, degree_distribution, network_summary, CityGraph};
use sistercity_core::ingest::{
    canonicalize, edges_to_csv, load_attribute_table, pairings_from_csv, CanonicalEdgeList,
};
use sistercity_core::nullmodels::{assortativity_zscore, MixingProperty};
use sistercity_core::wikitext::parse_wikitext_listing;
use sistercity_core::CountryVocabulary;

use manifest::Manifest;

/// Environment variable naming the geocoding provider endpoint. Unset means
/// fully offline: cache misses resolve to "absent".
const GEOCODER_ENV: &str = "SISTERCITY_GEOCODER_URL";

#[derive(Parser)]
#[command(
    name = "sistercity",
    version,
    about = "Sister-city network analytics: ingestion, statistics, null models, rankings, communities and distances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Network {
    City,
    Country,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Graphml,
    Dot,
    Csv,
    Geojson,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse wikitext listings or a CSV edge list into the canonical,
    /// deduplicated, symmetrized edge list.
    Ingest {
        /// Wikitext page, directory of .wiki pages, or canonical CSV
        #[arg(long)]
        input: PathBuf,
        /// Country scope for a single wikitext page (defaults to the file stem)
        #[arg(long)]
        scope: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Network summary statistics for the city and country networks.
    Stats {
        /// Canonical CSV edge list
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Country vocabulary CSV (alias,canonical)
        #[arg(long)]
        countries: Option<PathBuf>,
        /// What to echo on stdout
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Complementary cumulative degree distribution as CSV.
    DegreeDist {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "city")]
        network: Network,
        /// Use weighted degrees (country network)
        #[arg(long)]
        weighted: bool,
        /// Count self-partnerships in weighted degrees
        #[arg(long)]
        include_self: bool,
        #[arg(long)]
        countries: Option<PathBuf>,
    },
    /// Assortativity Z-scores against randomized ensembles.
    Assort {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        replicas: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Attribute tables as NAME=PATH; repeatable. Degree is always included.
        #[arg(long = "attribute", value_name = "NAME=PATH")]
        attributes: Vec<String>,
        /// Accepted swaps per degree replica (default 10x edge count)
        #[arg(long)]
        swaps: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Top-k ranking by (weighted) degree with betweenness ranks.
    Rank {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "city")]
        network: Network,
        #[arg(long, default_value_t = 20)]
        top_k: usize,
        /// Weighted shortest paths (length 1/weight) for betweenness
        #[arg(long)]
        weighted: bool,
        /// Count self-partnerships in country weighted degrees
        #[arg(long)]
        include_self: bool,
        #[arg(long)]
        countries: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Louvain community detection on the country network.
    Communities {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        countries: Option<PathBuf>,
    },
    /// Distance distributions: connected sister-city pairs against the
    /// all-pairs (or sampled) baseline.
    Distances {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Geocode cache file (created when missing)
        #[arg(long)]
        geocache: PathBuf,
        #[arg(long, default_value_t = 200.0)]
        bin_km: f64,
        /// Sample the baseline instead of enumerating all pairs
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Export a network as GraphML, DOT, CSV or GeoJSON arcs.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "city")]
        network: Network,
        #[arg(long, value_enum)]
        format: ExportFormat,
        /// Geocode cache, required for geojson
        #[arg(long)]
        geocache: Option<PathBuf>,
        /// Color nodes by Louvain community (dot only)
        #[arg(long)]
        communities: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        countries: Option<PathBuf>,
    },
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::ExitCode::FAILURE
        }
    }
}

fn require_input(path: &Path) -> Result<()> {
    if !path.exists() {
        bail!("input path {} does not exist", path.display());
    }
    Ok(())
}

fn load_city_graph(input: &Path, manifest: &mut Manifest) -> Result<(CanonicalEdgeList, CityGraph)> {
    require_input(input)?;
    manifest.input(input)?;
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("reading {}", input.display()))?;
    let pairings = pairings_from_csv(&text)?;
    let outcome = canonicalize(&pairings);
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    let graph = build_city_graph(&outcome.list);
    Ok((outcome.list, graph))
}

fn load_vocabulary(
    path: &Option<PathBuf>,
    manifest: &mut Manifest,
) -> Result<Option<CountryVocabulary>> {
    match path {
        Some(path) => {
            require_input(path)?;
            manifest.input(path)?;
            let text = std::fs::read_to_string(path)?;
            Ok(Some(CountryVocabulary::from_csv(&text)?))
        }
        None => Ok(None),
    }
}

fn country_graph(city: &CityGraph, vocab: Option<&CountryVocabulary>) -> Result<CountryGraph> {
    let (countries, warnings) = aggregate_countries(city, vocab)?;
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
    Ok(countries)
}

/// "united_states" -> "United States"
fn scope_from_stem(path: &Path) -> String {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("page");
    stem.split('_')
        .map(|word| {
            let mut chars = word.chars();
            match chars.next() {
                Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
                None => String::new(),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest { input, scope, out } => cmd_ingest(&input, scope, &out),
        Command::Stats {
            input,
            out,
            countries,
            format,
        } => cmd_stats(&input, &out, &countries, format),
        Command::DegreeDist {
            input,
            out,
            network,
            weighted,
            include_self,
            countries,
        } => cmd_degree_dist(&input, &out, network, weighted, include_self, &countries),
        Command::Assort {
            input,
            out,
            replicas,
            seed,
            attributes,
            swaps,
            format,
        } => cmd_assort(&input, &out, replicas, seed, &attributes, swaps, format),
        Command::Rank {
            input,
            out,
            network,
            top_k,
            weighted,
            include_self,
            countries,
            format,
        } => cmd_rank(&input, &out, network, top_k, weighted, include_self, &countries, format),
        Command::Communities {
            input,
            out,
            seed,
            countries,
        } => cmd_communities(&input, &out, seed, &countries),
        Command::Distances {
            input,
            out,
            geocache,
            bin_km,
            sample,
            seed,
        } => cmd_distances(&input, &out, &geocache, bin_km, sample, seed),
        Command::Export {
            input,
            out,
            network,
            format,
            geocache,
            communities,
            seed,
            countries,
        } => cmd_export(&input, &out, network, format, &geocache, communities, seed, &countries),
    }
}

fn prepare_out(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))
}

fn cmd_ingest(input: &Path, scope: Option<String>, out: &Path) -> Result<()> {
    require_input(input)?;
    prepare_out(out)?;
    let mut manifest = Manifest::new("ingest");
    manifest.arg("input", input.display());

    let mut pairings = Vec::new();
    let mut warning_lines: Vec<String> = Vec::new();
    let mut pages = 0usize;

    if input.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(input)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("wiki"))
            .collect();
        files.sort();
        if files.is_empty() {
            bail!("no .wiki pages under {}", input.display());
        }
        for file in files {
            manifest.input(&file)?;
            let page_scope = scope.clone().unwrap_or_else(|| scope_from_stem(&file));
            let text = std::fs::read_to_string(&file)?;
            let parsed = parse_wikitext_listing(&text, &page_scope);
            for w in &parsed.warnings {
                warning_lines.push(format!("{}: {w}", file.display()));
            }
            pairings.extend(parsed.pairings);
            pages += 1;
        }
    } else if input.extension().and_then(|e| e.to_str()) == Some("csv") {
        manifest.input(input)?;
        let text = std::fs::read_to_string(input)?;
        pairings = pairings_from_csv(&text)?;
        pages = 1;
    } else {
        manifest.input(input)?;
        let page_scope = scope.clone().unwrap_or_else(|| scope_from_stem(input));
        let text = std::fs::read_to_string(input)?;
        let parsed = parse_wikitext_listing(&text, &page_scope);
        for w in &parsed.warnings {
            warning_lines.push(format!("{}: {w}", input.display()));
        }
        pairings = parsed.pairings;
        pages = 1;
    }

    let n_raw = pairings.len();
    let outcome = canonicalize(&pairings);
    for w in &outcome.warnings {
        warning_lines.push(w.to_string());
    }

    manifest.write_output(out, "edges.csv", edges_to_csv(&outcome.list).as_bytes())?;
    let summary = serde_json::json!({
        "pages": pages,
        "raw_pairings": n_raw,
        "cities": outcome.list.n_cities(),
        "edges": outcome.list.n_edges(),
        "bidirectional_fraction": outcome.list.bidirectional_fraction,
        "warnings": warning_lines.len(),
    });
    manifest.write_output(
        out,
        "ingest.json",
        serde_json::to_string_pretty(&summary)?.as_bytes(),
    )?;
    manifest.write_output(out, "warnings.txt", warning_lines.join("\n").as_bytes())?;
    manifest.finish(out)?;
    println!(
        "{} raw pairings from {} page(s) -> {} cities, {} edges ({} warnings)",
        n_raw,
        pages,
        outcome.list.n_cities(),
        outcome.list.n_edges(),
        warning_lines.len()
    );
    Ok(())
}

fn cmd_stats(
    input: &Path,
    out: &Path,
    countries: &Option<PathBuf>,
    format: TextFormat,
) -> Result<()> {
    prepare_out(out)?;
    let mut manifest = Manifest::new("stats");
    manifest.arg("input", input.display());
    let (_, city) = load_city_graph(input, &mut manifest)?;
    let vocab = load_vocabulary(countries, &mut manifest)?;
    let country = country_graph(&city, vocab.as_ref())?;

    let city_summary = network_summary(&city.graph)?;
    let country_summary = network_summary(&country.to_graph(false))?;

    let json = serde_json::json!({
        "city_network": city_summary,
        "country_network": country_summary,
        "country_self_partnerships": country.self_weights().iter().sum::<u64>(),
    });
    let json_text = serde_json::to_string_pretty(&json)?;
    manifest.write_output(out, "stats.json", json_text.as_bytes())?;
    let table = export::summary_table(&[
        ("city network", &city_summary),
        ("country network", &country_summary),
    ]);
    manifest.write_output(out, "stats.txt", table.as_bytes())?;
    manifest.finish(out)?;
    match format {
        TextFormat::Text => print!("{table}"),
        TextFormat::Json => println!("{json_text}"),
    }
    Ok(())
}

fn cmd_degree_dist(
    input: &Path,
    out: &Path,
    network: Network,
    weighted: bool,
    include_self: bool,
    countries: &Option<PathBuf>,
) -> Result<()> {
    prepare_out(out)?;
    let mut manifest = Manifest::new("degree-dist");
    manifest
        .arg("input", input.display())
        .arg(
            "network",
            match network {
                Network::City => "city",
                Network::Country => "country",
            },
        )
        .arg("weighted", weighted)
        .arg("include_self", include_self);
    let (_, city) = load_city_graph(input, &mut manifest)?;
    let ccdf = match network {
        Network::City => degree_distribution(&city.graph, weighted),
        Network::Country => {
            let vocab = load_vocabulary(countries, &mut manifest)?;
            let country = country_graph(&city, vocab.as_ref())?;
            degree_distribution(&country.to_graph(include_self), weighted)
        }
    };
    manifest.write_output(out, "degree_ccdf.csv", export::ccdf_csv(&ccdf).as_bytes())?;
    manifest.finish(out)?;
    println!("{} distinct degree values", ccdf.len());
    Ok(())
}

fn cmd_assort(
    input: &Path,
    out: &Path,
    replicas: usize,
    seed: u64,
    attributes: &[String],
    swaps: Option<usize>,
    format: TextFormat,
) -> Result<()> {
    prepare_out(out)?;
    let mut manifest = Manifest::new("assort");
    manifest
        .arg("input", input.display())
        .arg("replicas", replicas)
        .seed(seed);
    if let Some(swaps) = swaps {
        manifest.arg("swaps", swaps);
    }
    let (_, city) = load_city_graph(input, &mut manifest)?;

    let mut reports = Vec::new();
    reports.push(assortativity_zscore(
        &city.graph,
        &MixingProperty::Degree,
        replicas,
        seed,
        swaps,
    )?);

    // Each attribute derives its child seed from its position, so adding a
    // table never perturbs the rows before it.
    for (i, spec) in attributes.iter().enumerate() {
        let (name, path) = spec
            .split_once('=')
            .with_context(|| format!("--attribute must be NAME=PATH, got {spec:?}"))?;
        let path = PathBuf::from(path);
        require_input(&path)?;
        manifest.input(&path)?;
        manifest.arg(&format!("attribute.{name}"), path.display());
        let table = load_attribute_table(&std::fs::read_to_string(&path)?, name)?;
        let values: Vec<Option<f64>> = city
            .cities
            .iter()
            .map(|c| table.get(c.country()))
            .collect();
        reports.push(assortativity_zscore(
            &city.graph,
            &MixingProperty::Attribute {
                name,
                values: &values,
            },
            replicas,
            seed.wrapping_add(1000 * (i as u64 + 1)),
            None,
        )?);
    }

    let json_text = serde_json::to_string_pretty(&reports)?;
    manifest.write_output(out, "assortativity.json", json_text.as_bytes())?;
    let table = export::assortativity_table(&reports);
    manifest.write_output(out, "assortativity.txt", table.as_bytes())?;
    manifest.finish(out)?;
    match format {
        TextFormat::Text => print!("{table}"),
        TextFormat::Json => println!("{json_text}"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_rank(
    input: &Path,
    out: &Path,
    network: Network,
    top_k: usize,
    weighted: bool,
    include_self: bool,
    countries: &Option<PathBuf>,
    format: TextFormat,
) -> Result<()> {
    prepare_out(out)?;
    let mut manifest = Manifest::new("rank");
    manifest
        .arg("input", input.display())
        .arg("top_k", top_k)
        .arg("weighted", weighted)
        .arg("include_self", include_self);
    let (_, city) = load_city_graph(input, &mut manifest)?;
    let (graph, rank_by, score_column, title) = match network {
        Network::City => (city.graph.clone(), RankBy::Degree, "degree", "city ranking"),
        Network::Country => {
            let vocab = load_vocabulary(countries, &mut manifest)?;
            let country = country_graph(&city, vocab.as_ref())?;
            (
                country.to_graph(true),
                RankBy::WeightedDegree { include_self },
                "weighted degree",
                "country ranking",
            )
        }
    };
    let ranking = top_k_ranking(&graph, top_k, rank_by, weighted)?;
    if ranking.truncated {
        eprintln!("warning: top-k {top_k} exceeds node count; truncated");
    }
    manifest.write_output(out, "ranking.csv", export::ranking_csv(&ranking).as_bytes())?;
    let table = export::ranking_table(title, score_column, &ranking);
    manifest.write_output(out, "ranking.txt", table.as_bytes())?;
    manifest.finish(out)?;
    match format {
        TextFormat::Text => print!("{table}"),
        TextFormat::Json => println!("{}", serde_json::to_string_pretty(&ranking)?),
    }
    Ok(())
}

fn cmd_communities(
    input: &Path,
    out: &Path,
    seed: u64,
    countries: &Option<PathBuf>,
) -> Result<()> {
    prepare_out(out)?;
    let mut manifest = Manifest::new("communities");
    manifest.arg("input", input.display()).seed(seed);
    let (_, city) = load_city_graph(input, &mut manifest)?;
    let vocab = load_vocabulary(countries, &mut manifest)?;
    let country = country_graph(&city, vocab.as_ref())?;
    let graph = country.to_graph(true);
    let partition = louvain(&graph, seed)?;

    manifest.write_output(
        out,
        "communities.csv",
        export::partition_csv(&graph, &partition).as_bytes(),
    )?;
    manifest.write_output(
        out,
        "communities.dot",
        export::dot(&graph, true, Some(&partition)).as_bytes(),
    )?;
    let json = serde_json::json!({
        "seed": seed,
        "n_communities": partition.n_communities,
        "modularity": partition.modularity,
    });
    manifest.write_output(
        out,
        "communities.json",
        serde_json::to_string_pretty(&json)?.as_bytes(),
    )?;
    manifest.finish(out)?;
    println!(
        "{} communities, Q = {:.4}",
        partition.n_communities, partition.modularity
    );
    Ok(())
}

fn locate_cities(
    city: &CityGraph,
    geocache: &Path,
    manifest: &mut Manifest,
) -> Result<(Vec<Option<GeoPoint>>, usize)> {
    let mut cache = GeocodeCache::open(geocache)?;
    let provider: Box<dyn GeocodeProvider> = match std::env::var(GEOCODER_ENV) {
        Ok(endpoint) if !endpoint.is_empty() => Box::new(HttpProvider::new(endpoint)),
        _ => Box::new(StaticProvider::new()),
    };
    let mut located = Vec::with_capacity(city.cities.len());
    let mut misses = 0usize;
    for c in &city.cities {
        if cache.lookup(c.name(), c.country()).is_none() {
            misses += 1;
        }
        located.push(cache.geocode(c.name(), c.country(), provider.as_ref())?);
    }
    if geocache.exists() {
        manifest.input(geocache)?;
    }
    Ok((located, misses))
}

fn cmd_distances(
    input: &Path,
    out: &Path,
    geocache: &Path,
    bin_km: f64,
    sample: Option<u64>,
    seed: u64,
) -> Result<()> {
    prepare_out(out)?;
    let mut manifest = Manifest::new("distances");
    manifest
        .arg("input", input.display())
        .arg("geocache", geocache.display())
        .arg("bin_km", bin_km)
        .seed(seed);
    if let Some(sample) = sample {
        manifest.arg("sample", sample);
    }
    let (list, city) = load_city_graph(input, &mut manifest)?;
    let (located, misses) = locate_cities(&city, geocache, &mut manifest)?;
    if misses > 0 {
        eprintln!("note: {misses} cities were not in the geocode cache");
    }

    let observed = distance_distribution(
        &list.edges,
        &located,
        bin_km,
        PairPopulation::ConnectedPairs,
    )?;
    let baseline = match sample {
        Some(n) => sampled_pairs_distance_distribution(&located, bin_km, n, seed)?,
        None => all_pairs_distance_distribution(&located, bin_km)?,
    };
    let comparison = compare_distributions(&observed, &baseline)?;

    manifest.write_output(
        out,
        "observed_hist.csv",
        export::histogram_csv(&observed).as_bytes(),
    )?;
    manifest.write_output(
        out,
        "baseline_hist.csv",
        export::histogram_csv(&baseline).as_bytes(),
    )?;
    let json = serde_json::json!({
        "seed": seed,
        "bin_km": bin_km,
        "observed": observed,
        "baseline": baseline,
        "ks_statistic": comparison.ks_statistic,
        "mean_difference_km": comparison.mean_difference_km,
    });
    manifest.write_output(
        out,
        "distances.json",
        serde_json::to_string_pretty(&json)?.as_bytes(),
    )?;
    manifest.finish(out)?;
    println!(
        "observed mean {:.1} km over {} pairs; baseline mean {:.1} km over {} pairs; KS gap {:.4}",
        observed.mean_km,
        observed.n_pairs,
        baseline.mean_km,
        baseline.n_pairs,
        comparison.ks_statistic
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_export(
    input: &Path,
    out: &Path,
    network: Network,
    format: ExportFormat,
    geocache: &Option<PathBuf>,
    communities: bool,
    seed: u64,
    countries: &Option<PathBuf>,
) -> Result<()> {
    prepare_out(out)?;
    let mut manifest = Manifest::new("export");
    manifest.arg("input", input.display()).seed(seed);
    let (list, city) = load_city_graph(input, &mut manifest)?;

    let (graph, weighted, name) = match network {
        Network::City => (city.graph.clone(), false, "city_network"),
        Network::Country => {
            let vocab = load_vocabulary(countries, &mut manifest)?;
            let country = country_graph(&city, vocab.as_ref())?;
            if format == ExportFormat::Csv {
                manifest.write_output(
                    out,
                    "country_network.csv",
                    export::country_csv(&country).as_bytes(),
                )?;
                manifest.finish(out)?;
                println!("wrote country_network.csv");
                return Ok(());
            }
            (country.to_graph(true), true, "country_network")
        }
    };

    match format {
        ExportFormat::Graphml => {
            manifest.write_output(
                out,
                &format!("{name}.graphml"),
                export::graphml(&graph, weighted).as_bytes(),
            )?;
        }
        ExportFormat::Dot => {
            let partition = communities.then(|| louvain(&graph, seed)).transpose()?;
            manifest.write_output(
                out,
                &format!("{name}.dot"),
                export::dot(&graph, weighted, partition.as_ref()).as_bytes(),
            )?;
        }
        ExportFormat::Csv => {
            manifest.write_output(out, "edges.csv", edges_to_csv(&list).as_bytes())?;
        }
        ExportFormat::Geojson => {
            let geocache = geocache
                .as_ref()
                .context("--geocache is required for geojson export")?;
            let (located, _) = locate_cities(&city, geocache, &mut manifest)?;
            let labels: Vec<String> = city.cities.iter().map(|c| c.label()).collect();
            let (doc, skipped) =
                export::export_arcs_geojson(&list.edges, &located, Some(&labels));
            if skipped > 0 {
                eprintln!("note: {skipped} edges skipped for missing coordinates");
            }
            manifest.write_output(
                out,
                "arcs.geojson",
                serde_json::to_string_pretty(&doc)?.as_bytes(),
            )?;
        }
    }
    manifest.finish(out)?;
    println!("export complete");
    Ok(())
}
