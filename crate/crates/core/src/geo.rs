//! Great-circle distances and distance distributions.
//!
//! Distances use the haversine formula on a sphere of radius 6371.0088 km
//! (the IUGG mean Earth radius). Distributions are fixed-width histograms
//! from 0 km plus a streaming mean, computed over the pairs whose endpoints
//! are both located.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// A validated latitude/longitude position in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    /// Latitude must lie in [-90, 90], longitude in (-180, 180].
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat) || lat.is_nan() {
            return Err(CoreError::LatitudeOutOfRange(lat));
        }
        if !(lon > -180.0 && lon <= 180.0) {
            return Err(CoreError::LongitudeOutOfRange(lon));
        }
        Ok(GeoPoint { lat, lon })
    }

    pub fn latitude(&self) -> f64 {
        self.lat
    }

    pub fn longitude(&self) -> f64 {
        self.lon
    }
}

/// Great-circle distance in kilometers.
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat1 = a.lat.to_radians();
    let lat2 = b.lat.to_radians();
    let dlat = (b.lat - a.lat).to_radians();
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Which pair population a distribution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairPopulation {
    ConnectedPairs,
    AllPairsBaseline,
}

/// Histogram plus mean of great-circle distances for one pair population.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceStats {
    pub population: PairPopulation,
    pub bin_width_km: f64,
    /// Count per bin, bin i covering [i*bin_width, (i+1)*bin_width).
    pub counts: Vec<u64>,
    pub mean_km: f64,
    pub n_pairs: u64,
    /// Pairs dropped because an endpoint was not located.
    pub n_skipped: u64,
}

impl DistanceStats {
    /// Rows of (bin lower edge km, count).
    pub fn bins(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64 * self.bin_width_km, c))
    }
}

#[derive(Default)]
struct HistogramAccumulator {
    counts: Vec<u64>,
    sum_km: f64,
    n_pairs: u64,
    n_skipped: u64,
}

impl HistogramAccumulator {
    fn record(&mut self, distance_km: f64, bin_width: f64) {
        let bin = (distance_km / bin_width).floor() as usize;
        if self.counts.len() <= bin {
            self.counts.resize(bin + 1, 0);
        }
        self.counts[bin] += 1;
        self.sum_km += distance_km;
        self.n_pairs += 1;
    }

    fn merge(mut self, other: HistogramAccumulator) -> HistogramAccumulator {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (i, c) in other.counts.into_iter().enumerate() {
            self.counts[i] += c;
        }
        self.sum_km += other.sum_km;
        self.n_pairs += other.n_pairs;
        self.n_skipped += other.n_skipped;
        self
    }

    fn finish(self, population: PairPopulation, bin_width: f64) -> Result<DistanceStats> {
        if self.n_pairs == 0 {
            return Err(CoreError::NoLocatedPairs);
        }
        Ok(DistanceStats {
            population,
            bin_width_km: bin_width,
            mean_km: self.sum_km / self.n_pairs as f64,
            counts: self.counts,
            n_pairs: self.n_pairs,
            n_skipped: self.n_skipped,
        })
    }
}

/// Distance distribution over an explicit pair population (indices into
/// `located`). Pairs with an unlocated endpoint are skipped and counted.
pub fn distance_distribution(
    pairs: &[(u32, u32)],
    located: &[Option<GeoPoint>],
    bin_width_km: f64,
    population: PairPopulation,
) -> Result<DistanceStats> {
    if bin_width_km <= 0.0 || bin_width_km.is_nan() {
        return Err(CoreError::NonPositiveBinWidth(bin_width_km));
    }
    let mut acc = HistogramAccumulator::default();
    for &(a, b) in pairs {
        match (located[a as usize], located[b as usize]) {
            (Some(pa), Some(pb)) => acc.record(haversine_km(pa, pb), bin_width_km),
            _ => acc.n_skipped += 1,
        }
    }
    acc.finish(population, bin_width_km)
}

/// Baseline distribution over all unordered pairs of located cities,
/// computed exactly: n(n-1)/2 haversine evaluations for n located points.
pub fn all_pairs_distance_distribution(
    located: &[Option<GeoPoint>],
    bin_width_km: f64,
) -> Result<DistanceStats> {
    if bin_width_km <= 0.0 || bin_width_km.is_nan() {
        return Err(CoreError::NonPositiveBinWidth(bin_width_km));
    }
    let points: Vec<GeoPoint> = located.iter().flatten().copied().collect();
    let rows: Vec<usize> = (0..points.len()).collect();
    // Fixed row chunks, folded in chunk order: float sums never depend on
    // the thread schedule.
    let acc = rows
        .par_chunks(64)
        .map(|chunk| {
            let mut acc = HistogramAccumulator::default();
            for &i in chunk {
                for j in (i + 1)..points.len() {
                    acc.record(haversine_km(points[i], points[j]), bin_width_km);
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(HistogramAccumulator::merge)
        .unwrap_or_default();
    let expected = points.len() as u64 * (points.len() as u64 - 1) / 2;
    debug_assert_eq!(acc.n_pairs, expected);
    acc.finish(PairPopulation::AllPairsBaseline, bin_width_km)
}

/// Seeded random sample of unordered located pairs, for inputs where the
/// exact baseline is too large.
pub fn sampled_pairs_distance_distribution(
    located: &[Option<GeoPoint>],
    bin_width_km: f64,
    n_samples: u64,
    seed: u64,
) -> Result<DistanceStats> {
    use rand::Rng;
    use rand::SeedableRng;

    if bin_width_km <= 0.0 || bin_width_km.is_nan() {
        return Err(CoreError::NonPositiveBinWidth(bin_width_km));
    }
    let points: Vec<GeoPoint> = located.iter().flatten().copied().collect();
    if points.len() < 2 {
        return Err(CoreError::NoLocatedPairs);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut acc = HistogramAccumulator::default();
    for _ in 0..n_samples {
        let i = rng.random_range(0..points.len());
        let mut j = rng.random_range(0..points.len() - 1);
        if j >= i {
            j += 1;
        }
        acc.record(haversine_km(points[i], points[j]), bin_width_km);
    }
    acc.finish(PairPopulation::AllPairsBaseline, bin_width_km)
}

/// Side-by-side view of two distributions with the same bin width.
#[derive(Debug, Clone, Serialize)]
pub struct DistributionComparison {
    pub bin_width_km: f64,
    /// Per bin: lower edge, observed frequency, baseline frequency.
    pub bins: Vec<(f64, f64, f64)>,
    /// Maximum absolute gap between the two cumulative curves.
    pub ks_statistic: f64,
    /// observed mean minus baseline mean, in km.
    pub mean_difference_km: f64,
}

/// Compare an observed distribution against a baseline: normalized per-bin
/// frequencies, cumulative curves, the Kolmogorov-Smirnov gap and the mean
/// difference.
pub fn compare_distributions(
    observed: &DistanceStats,
    baseline: &DistanceStats,
) -> Result<DistributionComparison> {
    if observed.bin_width_km != baseline.bin_width_km {
        return Err(CoreError::BinWidthMismatch(
            observed.bin_width_km,
            baseline.bin_width_km,
        ));
    }
    let n_bins = observed.counts.len().max(baseline.counts.len());
    let freq = |stats: &DistanceStats, i: usize| {
        *stats.counts.get(i).unwrap_or(&0) as f64 / stats.n_pairs as f64
    };
    let mut bins = Vec::with_capacity(n_bins);
    let mut cdf_obs = 0.0;
    let mut cdf_base = 0.0;
    let mut ks = 0.0f64;
    for i in 0..n_bins {
        let f_obs = freq(observed, i);
        let f_base = freq(baseline, i);
        cdf_obs += f_obs;
        cdf_base += f_base;
        ks = ks.max((cdf_obs - cdf_base).abs());
        bins.push((i as f64 * observed.bin_width_km, f_obs, f_base));
    }
    Ok(DistributionComparison {
        bin_width_km: observed.bin_width_km,
        bins,
        ks_statistic: ks,
        mean_difference_km: observed.mean_km - baseline.mean_km,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon).unwrap()
    }

    #[test]
    fn point_ranges_are_enforced() {
        assert!(GeoPoint::new(90.0, 180.0).is_ok());
        assert!(GeoPoint::new(-90.0, -179.999).is_ok());
        assert!(matches!(
            GeoPoint::new(90.01, 0.0),
            Err(CoreError::LatitudeOutOfRange(_))
        ));
        assert!(matches!(
            GeoPoint::new(0.0, -180.0),
            Err(CoreError::LongitudeOutOfRange(_))
        ));
        assert!(matches!(
            GeoPoint::new(0.0, 180.5),
            Err(CoreError::LongitudeOutOfRange(_))
        ));
    }

    #[test]
    fn identical_points_are_at_distance_zero() {
        let p = point(48.8566, 2.3522);
        assert_eq!(haversine_km(p, p), 0.0);
    }

    #[test]
    fn antipodal_distance_is_half_circumference() {
        let d = haversine_km(point(0.0, 0.0), point(0.0, 180.0));
        assert!((d - std::f64::consts::PI * EARTH_RADIUS_KM).abs() < 0.1);
    }

    #[test]
    fn one_degree_arc_on_the_equator() {
        let d = haversine_km(point(0.0, 0.0), point(0.0, 1.0));
        assert!((d - 111.195).abs() < 0.01);
    }

    #[test]
    fn haversine_is_symmetric() {
        let a = point(59.93, 30.33);
        let b = point(-34.61, -58.38);
        assert_eq!(haversine_km(a, b), haversine_km(b, a));
    }

    #[test]
    fn single_zero_distance_pair() {
        let located = vec![Some(point(10.0, 10.0)), Some(point(10.0, 10.0))];
        let stats =
            distance_distribution(&[(0, 1)], &located, 200.0, PairPopulation::ConnectedPairs)
                .unwrap();
        assert_eq!(stats.mean_km, 0.0);
        assert_eq!(stats.counts, vec![1]);
        assert_eq!(stats.n_pairs, 1);
    }

    #[test]
    fn unlocated_endpoints_skip_with_count() {
        let located = vec![Some(point(0.0, 0.0)), None, Some(point(0.0, 1.0))];
        let stats = distance_distribution(
            &[(0, 1), (0, 2)],
            &located,
            200.0,
            PairPopulation::ConnectedPairs,
        )
        .unwrap();
        assert_eq!(stats.n_pairs, 1);
        assert_eq!(stats.n_skipped, 1);
    }

    #[test]
    fn no_located_pair_is_an_error() {
        let located = vec![None, None];
        assert!(matches!(
            distance_distribution(&[(0, 1)], &located, 200.0, PairPopulation::ConnectedPairs),
            Err(CoreError::NoLocatedPairs)
        ));
    }

    #[test]
    fn all_pairs_count_is_n_choose_two() {
        let located: Vec<Option<GeoPoint>> = (0..30)
            .map(|i| {
                if i % 7 == 3 {
                    None
                } else {
                    Some(point(i as f64, i as f64))
                }
            })
            .collect();
        let n = located.iter().flatten().count() as u64;
        let stats = all_pairs_distance_distribution(&located, 200.0).unwrap();
        assert_eq!(stats.n_pairs, n * (n - 1) / 2);
    }

    #[test]
    fn histogram_counts_sum_to_pair_count() {
        let located: Vec<Option<GeoPoint>> =
            (0..12).map(|i| Some(point(i as f64 * 5.0, 0.0))).collect();
        let stats = all_pairs_distance_distribution(&located, 300.0).unwrap();
        assert_eq!(stats.counts.iter().sum::<u64>(), stats.n_pairs);
    }

    #[test]
    fn identical_distributions_compare_to_zero() {
        let located: Vec<Option<GeoPoint>> =
            (0..8).map(|i| Some(point(i as f64 * 3.0, i as f64))).collect();
        let stats = all_pairs_distance_distribution(&located, 200.0).unwrap();
        let cmp = compare_distributions(&stats, &stats).unwrap();
        assert_eq!(cmp.ks_statistic, 0.0);
        assert_eq!(cmp.mean_difference_km, 0.0);
    }

    #[test]
    fn disjoint_histograms_have_ks_gap_one() {
        let near = DistanceStats {
            population: PairPopulation::ConnectedPairs,
            bin_width_km: 100.0,
            counts: vec![5],
            mean_km: 50.0,
            n_pairs: 5,
            n_skipped: 0,
        };
        let far = DistanceStats {
            population: PairPopulation::AllPairsBaseline,
            bin_width_km: 100.0,
            counts: vec![0, 0, 7],
            mean_km: 250.0,
            n_pairs: 7,
            n_skipped: 0,
        };
        let cmp = compare_distributions(&near, &far).unwrap();
        assert_eq!(cmp.ks_statistic, 1.0);
    }

    #[test]
    fn mismatched_bin_widths_error() {
        let a = DistanceStats {
            population: PairPopulation::ConnectedPairs,
            bin_width_km: 100.0,
            counts: vec![1],
            mean_km: 10.0,
            n_pairs: 1,
            n_skipped: 0,
        };
        let mut b = a.clone();
        b.bin_width_km = 200.0;
        assert!(matches!(
            compare_distributions(&a, &b),
            Err(CoreError::BinWidthMismatch(_, _))
        ));
    }

    #[test]
    fn sampled_baseline_is_seed_stable() {
        let located: Vec<Option<GeoPoint>> =
            (0..20).map(|i| Some(point(i as f64 * 2.0, i as f64))).collect();
        let a = sampled_pairs_distance_distribution(&located, 200.0, 500, 9).unwrap();
        let b = sampled_pairs_distance_distribution(&located, 200.0, 500, 9).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.mean_km.to_bits(), b.mean_km.to_bits());
    }
}
