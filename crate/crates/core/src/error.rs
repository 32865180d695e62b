use thiserror::Error;

/// Errors shared across the toolkit's modules.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("giant component has fewer than 2 nodes")]
    GiantComponentTooSmall,
    #[error("node index {0} out of range")]
    NodeOutOfRange(u32),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop on {0} not allowed in this graph")]
    SelfLoopNotAllowed(String),
    #[error("edge weight must be positive, got {0}")]
    NonPositiveWeight(f64),
    #[error("unknown country {0:?}")]
    UnknownCountry(String),
    #[error("city {0:?} has no country label")]
    MissingCountryLabel(String),
    #[error("row {row}: non-numeric value {value:?} for country {country:?}")]
    NonNumericAttribute {
        row: usize,
        country: String,
        value: String,
    },
    #[error("duplicate country {0:?} in attribute table")]
    DuplicateAttributeCountry(String),
    #[error("edge-end values have zero variance; correlation undefined")]
    UndefinedCorrelation,
    #[error("no edges with values on both endpoints")]
    NoUsableEdges,
    #[error("need at least {needed} replicas, got {got}")]
    TooFewReplicas { needed: usize, got: usize },
    #[error("randomized ensemble has zero variance; Z-score undefined")]
    ZeroEnsembleVariance,
    #[error("need at least 2 edges to rewire, got {0}")]
    TooFewEdges(usize),
    #[error("swap rejection budget exhausted after {accepted} of {requested} accepted swaps")]
    SwapBudgetExhausted { accepted: usize, requested: usize },
    #[error("partition covers {got} nodes but the graph has {expected}")]
    PartitionSizeMismatch { expected: usize, got: usize },
    #[error("total edge weight is zero")]
    ZeroTotalWeight,
    #[error("latitude {0} outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("longitude {0} outside (-180, 180]")]
    LongitudeOutOfRange(f64),
    #[error("bin width must be positive, got {0}")]
    NonPositiveBinWidth(f64),
    #[error("histogram bin widths differ: {0} km vs {1} km")]
    BinWidthMismatch(f64, f64),
    #[error("no pair had both endpoints located")]
    NoLocatedPairs,
    #[error("malformed geocode cache record at line {line}: {record:?}")]
    MalformedCacheRecord { line: usize, record: String },
    #[error("geocode cache refuses field containing '|': {0:?}")]
    UnencodableCacheField(String),
    #[error("geocoding provider unreachable: {0}")]
    ProviderUnreachable(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
