//! Emitters for every data product: GraphML, DOT, CSV, GeoJSON and the
//! aligned text tables mirroring the reported rankings and statistics.

use std::fmt::Write as _;

use serde_json::json;

use crate::aggregate::CountryGraph;
use crate::centrality::CentralityRanking;
use crate::community::Partition;
use crate::geo::{DistanceStats, GeoPoint};
use crate::graph::{Graph, NetworkSummary};
use crate::nullmodels::AssortativityReport;

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// GraphML document with node labels and (optionally) edge weights.
pub fn graphml(g: &Graph, weighted: bool) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"d0\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    if weighted {
        out.push_str("  <key id=\"d1\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    }
    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for v in 0..g.n_nodes() {
        let _ = writeln!(
            out,
            "    <node id=\"n{v}\"><data key=\"d0\">{}</data></node>",
            xml_escape(g.label(v as u32))
        );
    }
    for (i, (u, v, w)) in g.edges().enumerate() {
        if weighted {
            let _ = writeln!(
                out,
                "    <edge id=\"e{i}\" source=\"n{u}\" target=\"n{v}\"><data key=\"d1\">{w}</data></edge>"
            );
        } else {
            let _ = writeln!(out, "    <edge id=\"e{i}\" source=\"n{u}\" target=\"n{v}\"/>");
        }
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Color palette for community coloring in DOT output.
const PALETTE: [&str; 12] = [
    "#7b5ea7", "#5ca85c", "#c95b5b", "#53b4c9", "#d9a441", "#8a8a3d",
    "#b065a8", "#5a78c7", "#c97f41", "#4faa8b", "#a0522d", "#708090",
];

/// DOT document; nodes are colored by community when a partition is given.
pub fn dot(g: &Graph, weighted: bool, partition: Option<&Partition>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n_nodes() {
        let label = dot_escape(g.label(v as u32));
        match partition {
            Some(p) => {
                let color = PALETTE[p.assignment[v] as usize % PALETTE.len()];
                let _ = writeln!(
                    out,
                    "  \"{label}\" [style=filled, fillcolor=\"{color}\", community={}];",
                    p.assignment[v]
                );
            }
            None => {
                let _ = writeln!(out, "  \"{label}\";");
            }
        }
    }
    for (u, v, w) in g.edges() {
        let (lu, lv) = (dot_escape(g.label(u)), dot_escape(g.label(v)));
        if weighted {
            let _ = writeln!(out, "  \"{lu}\" -- \"{lv}\" [weight={w}];");
        } else {
            let _ = writeln!(out, "  \"{lu}\" -- \"{lv}\";");
        }
    }
    out.push_str("}\n");
    out
}

/// CCDF rows as CSV `degree,ccdf`.
pub fn ccdf_csv(ccdf: &[(f64, f64)]) -> String {
    let mut out = String::from("degree,ccdf\n");
    for (degree, p) in ccdf {
        let _ = writeln!(out, "{degree},{p}");
    }
    out
}

/// Country network as CSV `country_a,country_b,weight`, self-loops as `A,A,w`,
/// rows sorted by country names.
pub fn country_csv(cg: &CountryGraph) -> String {
    let mut rows: Vec<(String, String, u64)> = cg
        .pair_weights()
        .map(|((a, b), w)| {
            let (na, nb) = (cg.country(a).to_string(), cg.country(b).to_string());
            if na <= nb {
                (na, nb, w)
            } else {
                (nb, na, w)
            }
        })
        .collect();
    for (idx, &w) in cg.self_weights().iter().enumerate() {
        if w > 0 {
            let name = cg.country(idx as u32).to_string();
            rows.push((name.clone(), name, w));
        }
    }
    rows.sort();
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["country_a", "country_b", "weight"])
        .expect("writing to memory");
    for (a, b, w) in rows {
        writer
            .write_record([a.as_str(), b.as_str(), &w.to_string()])
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv is utf-8")
}

/// Histogram rows as CSV `bin_low_km,count`.
pub fn histogram_csv(stats: &DistanceStats) -> String {
    let mut out = String::from("bin_low_km,count\n");
    for (low, count) in stats.bins() {
        let _ = writeln!(out, "{low},{count}");
    }
    out
}

/// Partition rows as CSV `node,community`.
pub fn partition_csv(g: &Graph, partition: &Partition) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["node", "community"])
        .expect("writing to memory");
    for v in 0..g.n_nodes() {
        writer
            .write_record([g.label(v as u32), &partition.assignment[v].to_string()])
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv is utf-8")
}

/// Ranking rows as CSV `rank,node,score,betweenness,betweenness_rank`.
pub fn ranking_csv(ranking: &CentralityRanking) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["rank", "node", "score", "betweenness", "betweenness_rank"])
        .expect("writing to memory");
    for (i, e) in ranking.entries.iter().enumerate() {
        writer
            .write_record([
                (i + 1).to_string().as_str(),
                &e.label,
                &format!("{}", e.score),
                &format!("{:.2}", e.betweenness),
                &e.betweenness_rank.to_string(),
            ])
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv is utf-8")
}

/// Aligned text table of the top-k ranking: score, betweenness, and the
/// betweenness rank in parenthesis.
pub fn ranking_table(title: &str, score_column: &str, ranking: &CentralityRanking) -> String {
    let name_width = ranking
        .entries
        .iter()
        .map(|e| e.label.chars().count())
        .max()
        .unwrap_or(4)
        .max(4);
    let mut out = format!(
        "{title}\n{:<name_width$}  {:>12}  {:>16}  rank\n",
        "node", score_column, "betweenness"
    );
    for e in &ranking.entries {
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>12}  {:>16.2}  ({})",
            e.label, e.score, e.betweenness, e.betweenness_rank
        );
    }
    out
}

/// Aligned text table of assortativity reports; Z-scores >= 2 are bolded.
pub fn assortativity_table(reports: &[AssortativityReport]) -> String {
    let name_width = reports
        .iter()
        .map(|r| r.property.chars().count())
        .max()
        .unwrap_or(8)
        .max(8);
    let mut out = format!(
        "{:<name_width$}  {:>8}  {:>8}  {:>10}  {:>10}\n",
        "property", "r", "r_rand", "sigma_rand", "Z"
    );
    for r in reports {
        let z = if r.is_assortative() {
            format!("**{:.2}**", r.z_score)
        } else {
            format!("{:.2}", r.z_score)
        };
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>8.4}  {:>8.4}  {:>10.4}  {:>10}",
            r.property, r.r, r.r_rand_mean, r.sigma_rand, z
        );
    }
    out
}

/// Aligned text table of network summaries (one row per network).
pub fn summary_table(rows: &[(&str, &NetworkSummary)]) -> String {
    let name_width = rows
        .iter()
        .map(|(name, _)| name.chars().count())
        .max()
        .unwrap_or(7)
        .max(7);
    let mut out = format!(
        "{:<name_width$}  {:>8}  {:>8}  {:>6}  {:>8}  {:>6}\n",
        "network", "N", "K", "<C>", "%GC", "<d>"
    );
    for (name, s) in rows {
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>8}  {:>8}  {:>6.2}  {:>7.2}%  {:>6.2}",
            name,
            s.n_nodes,
            s.n_edges,
            s.avg_clustering,
            100.0 * s.giant_component_fraction,
            s.avg_path_length
        );
    }
    out
}

/// GeoJSON FeatureCollection of great-circle arcs, one feature per located
/// edge, each carrying a `distance_km` property. Arcs crossing the
/// antimeridian are split into two segments. Returns the document and the
/// number of edges skipped for missing coordinates.
pub fn export_arcs_geojson(
    edges: &[(u32, u32)],
    located: &[Option<GeoPoint>],
    labels: Option<&[String]>,
) -> (serde_json::Value, usize) {
    let mut features = Vec::new();
    let mut skipped = 0usize;
    for &(a, b) in edges {
        let (Some(pa), Some(pb)) = (located[a as usize], located[b as usize]) else {
            skipped += 1;
            continue;
        };
        let distance = crate::geo::haversine_km(pa, pb);
        let geometry = arc_geometry(pa, pb);
        let mut properties = serde_json::Map::new();
        properties.insert("distance_km".into(), json!(distance));
        if let Some(labels) = labels {
            properties.insert("a".into(), json!(labels[a as usize]));
            properties.insert("b".into(), json!(labels[b as usize]));
        }
        features.push(json!({
            "type": "Feature",
            "geometry": geometry,
            "properties": serde_json::Value::Object(properties),
        }));
    }
    (
        json!({ "type": "FeatureCollection", "features": features }),
        skipped,
    )
}

/// LineString for ordinary arcs; MultiLineString split at the antimeridian
/// when the longitude gap exceeds 180 degrees.
fn arc_geometry(a: GeoPoint, b: GeoPoint) -> serde_json::Value {
    let (lon1, lat1) = (a.longitude(), a.latitude());
    let (lon2, lat2) = (b.longitude(), b.latitude());
    if (lon2 - lon1).abs() <= 180.0 {
        return json!({
            "type": "LineString",
            "coordinates": [[lon1, lat1], [lon2, lat2]],
        });
    }
    // Unwrap the second longitude so the segment is the short way around,
    // then cut where it crosses +/-180.
    let (unwrapped, cut) = if lon2 < lon1 {
        (lon2 + 360.0, 180.0)
    } else {
        (lon2 - 360.0, -180.0)
    };
    let t = (cut - lon1) / (unwrapped - lon1);
    let lat_cut = lat1 + t * (lat2 - lat1);
    json!({
        "type": "MultiLineString",
        "coordinates": [
            [[lon1, lat1], [cut, lat_cut]],
            [[-cut, lat_cut], [lon2, lat2]],
        ],
    })
}
