//! Error type shared by all modules.

use thiserror::Error;

/// Library-wide error enumeration.
///
/// Variants are deliberately fine-grained: callers (and the CLI exit-code
/// table) distinguish e.g. a bad cache magic from a truncated payload.
#[derive(Debug, Error)]
pub enum Error {
    // ----- zeros_store -----
    #[error("line {line}: non-numeric zero value {token:?}")]
    NonNumericZero { line: usize, token: String },
    #[error("line {line}: zeros not strictly increasing ({value} after {previous})")]
    NonMonotoneZero {
        line: usize,
        value: f64,
        previous: f64,
    },
    #[error("cache: bad magic bytes {found:?} (expected \"ZFPZ\")")]
    BadMagic { found: [u8; 4] },
    #[error("cache: unsupported format version {found} (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },
    #[error("cache: truncated payload, expected {expected} bytes, got {got}")]
    Truncated { expected: u64, got: u64 },
    #[error("cache: corrupt value table: {0}")]
    CorruptCache(String),

    // ----- relations -----
    #[error("relation row {row}: entries of b have gcd {gcd}, expected 1")]
    RowGcd { row: usize, gcd: u64 },
    #[error("relation row {row}: b is the zero vector")]
    ZeroRow { row: usize },
    #[error("relation row {row}: gcd(a, q) = gcd({a}, {q}) != 1")]
    NonCoprimeAq { row: usize, a: u64, q: u64 },
    #[error("relation row {row}: {p} is not prime")]
    NotPrime { row: usize, p: u64 },
    #[error("relation row {row}: a = 0, exponent must be positive")]
    NonPositiveA { row: usize },
    #[error("relation rows are rank-deficient (rank {rank} < {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
    #[error("prime {p} appears in more than one relation row")]
    RepeatedPrime { p: u64 },
    #[error("relation row {row}: b has length {got}, system dimension is {expected}")]
    RowLength {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("relation row {row}: sign convention violated, b·α = {value} <= 0")]
    SignConvention { row: usize, value: f64 },
    #[error("system underdetermined: r = {r} rows < n = {n}; cannot solve for α")]
    Underdetermined { r: usize, n: usize },
    #[error("ambiguous detection: m = {m:?} matches (a,q,p) = {first:?} and {second:?} within tolerance")]
    AmbiguousDetection {
        m: Vec<i64>,
        first: (u64, u64, u64),
        second: (u64, u64, u64),
    },
    #[error("alpha coordinates must be positive and pairwise distinct")]
    BadAlpha,

    // ----- density -----
    #[error("frequency {m:?} reachable from two distinct relation rows")]
    AmbiguousFrequency { m: Vec<i64> },
    #[error("test function violates Hermitian symmetry at m = {m:?}")]
    NonHermitian { m: Vec<i64> },
    #[error("grid operations require n = 2, system has n = {n}")]
    DimensionError { n: usize },
    #[error("resolution {r} too small (minimum {min})")]
    ResolutionTooSmall { r: usize, min: usize },

    // ----- landau / empirical -----
    #[error("T = {t} exceeds dataset t_max = {t_max}")]
    InsufficientData { t: f64, t_max: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("relation system inconsistent with α at row {row}: |b·α - (a/q)log(p)/(2π)| = {residual}")]
    InconsistentSystem { row: usize, residual: f64 },

    // ----- xprec -----
    #[error("cannot parse {input:?} as a decimal number")]
    BadDecimal { input: String },

    // ----- plumbing -----
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Config(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable process exit code for the CLI (documented in the README).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonNumericZero { .. } | Error::NonMonotoneZero { .. } => 2,
            Error::BadMagic { .. }
            | Error::UnsupportedVersion { .. }
            | Error::Truncated { .. }
            | Error::CorruptCache(_) => 3,
            Error::RowGcd { .. }
            | Error::ZeroRow { .. }
            | Error::NonCoprimeAq { .. }
            | Error::NotPrime { .. }
            | Error::NonPositiveA { .. }
            | Error::RankDeficient { .. }
            | Error::RepeatedPrime { .. }
            | Error::RowLength { .. }
            | Error::SignConvention { .. }
            | Error::Underdetermined { .. }
            | Error::AmbiguousDetection { .. }
            | Error::BadAlpha => 4,
            Error::AmbiguousFrequency { .. }
            | Error::NonHermitian { .. }
            | Error::DimensionError { .. }
            | Error::ResolutionTooSmall { .. } => 5,
            Error::InsufficientData { .. }
            | Error::Domain(_)
            | Error::InconsistentSystem { .. } => 6,
            Error::BadDecimal { .. } => 7,
            Error::Io(_) => 8,
            Error::Json(_) => 9,
            Error::Config(_) => 10,
        }
    }
}
