use alloc::string::String;

/// Missing window length per variable, in the order the operation names its variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Deficit(pub [i64; 3]);

impl core::fmt::Display for Deficit {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "[{a}, {b}, {c}]")
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("division by a series that vanishes on its window")]
    DivisionByZeroSeries,
    #[error("window too narrow for {what}: missing {deficit}")]
    WindowTooNarrow { what: &'static str, deficit: Deficit },
    #[error("coordinate change must have the form c z + O(z^2) with c != 0")]
    InvalidCoordinate,
    #[error("series has vanishing constant term")]
    NotAUnit,
    #[error("not an antisymmetric bracket at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("not simple: {0}")]
    NotSimple(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("not in standard form: {0}")]
    NotStandardForm(String),
    #[error("r-matrix is not normalized")]
    NotNormalized,
    #[error("r-matrix is not skew-symmetric")]
    NotSkew,
    #[error("singular matrix")]
    Singular,
    #[error("no genus-one relation: {0}")]
    NotGenusOne(String),
    #[error("invalid lattice generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn window(what: &'static str, deficit: [i64; 3]) -> Self {
        Error::WindowTooNarrow { what, deficit: Deficit(deficit.map(|d| d.max(0))) }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
