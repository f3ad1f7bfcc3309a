use thiserror::Error;

/// Failure modes surfaced by the library.
///
/// `Domain` marks an inverse-trig argument that left its legal range while
/// converting ground-state amplitudes to rotation angles; sweep drivers are
/// expected to skip the offending point and keep going.
#[derive(Debug, Error)]
pub enum Error {
    /// An arcsine argument fell outside [-1, 1], or a ratio lost meaning.
    #[error("domain error in {context}: offending value {value:.17e}")]
    Domain {
        /// Which angle computation rejected the input.
        context: &'static str,
        /// The value that left the legal range.
        value: f64,
    },

    /// A vector did not match the expected ground-state amplitude pattern.
    #[error("ground-state pattern mismatch: {0}")]
    PatternMismatch(String),

    /// A basis contained states outside the N = 4, Sz = 0 sector.
    #[error("wrong sector: {0}")]
    WrongSector(String),

    /// A momentum mode index outside 0..=3.
    #[error("momentum index {0} out of range (modes are 0..=3)")]
    BadMomentum(usize),

    /// An excitation factor violated its shape rules.
    #[error("invalid excitation factor: {0}")]
    BadFactor(String),

    /// A preparation-table row index outside the range for the mode.
    #[error("row {row} out of range (this mode has rows 1..={max})")]
    BadRow { row: usize, max: usize },

    /// A sweep or solver configuration that cannot be run.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Output could not be written.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
