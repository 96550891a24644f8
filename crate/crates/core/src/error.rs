use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("state enumeration needs {required} configurations, cap is {cap}")]
    StateCapExceeded { required: u128, cap: u128 },

    #[error("reduced dimension {required} exceeds cap {cap}")]
    DimensionCapExceeded { required: u128, cap: u128 },

    #[error("lattice length {length} exceeds the oracle limit {cap}")]
    LengthCapExceeded { length: usize, cap: usize },

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("mode {0} is self-conjugate (k = 0 or k = π) and has no distinct partner")]
    SelfConjugateMode(usize),

    #[error("spectrum is not normalized: total weight {total}")]
    Unnormalized { total: f64 },

    #[error("subsystem does not factorize the basis: {0}")]
    NonFactorizable(String),

    #[error("outside the validity range of the asymptotic form: {0}")]
    OutsideValidity(String),

    #[error("block size D = {0} is odd; the momentum-space Q-measure is defined for an even number of modes")]
    OddBlockSize(usize),

    #[error("invalid BCS profile at k index {k}: {reason}")]
    InvalidProfile { k: usize, reason: String },

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for the enumeration and dimension limits of the oracle.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::StateCapExceeded { .. }
                | Error::DimensionCapExceeded { .. }
                | Error::LengthCapExceeded { .. }
        )
    }
}
