use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },

    #[error("field has {actual} points but grid requires {expected}")]
    FieldLength { expected: usize, actual: usize },

    #[error("invalid units: {0}")]
    InvalidUnits(String),

    #[error("wavevector must be nonzero")]
    ZeroWavevector,

    #[error("CFL violated: dt = {dt:e} exceeds limit {limit:e} (0.5 * min spacing / c)")]
    CflViolation { dt: f64, limit: f64 },

    #[error("invalid propagation config: {0}")]
    InvalidPropagation(String),

    #[error("matrix is not in SL(2,C): |det - 1| = {deviation:e}")]
    NotUnimodular { deviation: f64 },

    #[error("tensor is not self-dual: max |dual(F) - F| = {deviation:e}")]
    NotSelfDual { deviation: f64 },

    #[error("tensor is not anti-self-dual: max |dual(F) + F| = {deviation:e}")]
    NotAntiSelfDual { deviation: f64 },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("lattice mismatch: {left} vs {right}")]
    LatticeMismatch { left: String, right: String },

    #[error("current is not conserved: max |div j| = {divergence:e}")]
    CurrentNotConserved { divergence: f64 },

    #[error("lattice momentum must be nonzero")]
    ZeroMomentum,

    #[error("invalid beam parameters: {0}")]
    InvalidBeam(String),

    #[error(
        "vortex scalar is degenerate (F·F vanishes identically, e.g. a single plane wave): \
         a null field has no isolated vortex lines"
    )]
    DegenerateField,

    #[error("{path}: bad magic {:?}, expected \"RSF1\"", found.escape_ascii().to_string())]
    BadMagic { path: PathBuf, found: [u8; 4] },

    #[error("{path}: unsupported field file version {version}")]
    UnsupportedVersion { path: PathBuf, version: u32 },

    #[error("{path}: truncated field file: expected {expected} bytes, found {actual}")]
    Truncated {
        path: PathBuf,
        expected: u64,
        actual: u64,
    },

    #[error("{path}: dimensions {nx}x{ny}x{nz} overflow the addressable payload size")]
    DimensionOverflow {
        path: PathBuf,
        nx: u32,
        ny: u32,
        nz: u32,
    },

    #[error("{path}: invalid header: {msg}")]
    BadHeader { path: PathBuf, msg: String },

    #[error("{path}:{line}: {msg}")]
    Config {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("check failed: {name} (measured {measured:.16e}, tolerance {tolerance:.16e})")]
    CheckFailed {
        name: String,
        measured: f64,
        tolerance: f64,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
