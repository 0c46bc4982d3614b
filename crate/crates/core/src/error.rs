use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid group action: {law} law violated at {witness}")]
    InvalidAction { law: &'static str, witness: String },

    #[error("element {index} out of range for groupoid of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("element {0} is not a unit")]
    NotAUnit(usize),

    #[error("groupoid fails its axioms: {0}")]
    InvalidGroupoid(String),

    #[error("malformed groupoid data: {0}")]
    Malformed(String),

    #[error("functions belong to different groupoids")]
    AlgebraMismatch,

    #[error("unsupported owner groupoid: {0}")]
    UnsupportedOwner(String),

    #[error("groupoid is not transitive ({orbits} orbits); split it per orbit first")]
    NotTransitive { orbits: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("density must be positive, got {value} at grid point {index}")]
    NonPositiveDensity { index: usize, value: f64 },

    #[error("symbol and pair live on different index spaces")]
    SpaceMismatch,

    #[error("invalid index space: {0}")]
    InvalidSpace(String),

    #[error("dense kernel requested for {points} index points (limit {limit})")]
    KernelTooLarge { points: usize, limit: usize },

    #[error("invalid spin quantum number j = {0}")]
    InvalidSpin(f64),

    #[error("ordering parameter s = {0} outside the open interval (-1, 1)")]
    OrderingParameter(f64),

    #[error("degenerate quadrature direction (mu, nu) = (0, 0)")]
    DegenerateDirection,

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error(
        "position grid [{a}, {b}] too narrow for {n_trunc} Fock levels \
         (edge amplitude {edge_amplitude:e}); use a half-width of at least {suggested:.2}"
    )]
    GridSupport {
        a: f64,
        b: f64,
        n_trunc: usize,
        edge_amplitude: f64,
        suggested: f64,
    },

    #[error(
        "lattice point |z| = {max_abs_z:.3} outside the reliable region |z| <= {bound:.3}; \
         estimated truncation loss {estimate:e}"
    )]
    Truncation {
        max_abs_z: f64,
        bound: f64,
        estimate: f64,
    },

    #[error("tomographic weights overflow at n = {n}; use n_max <= {suggested}")]
    WeightRange { n: usize, suggested: usize },

    #[error("lattice infeasible: {0}")]
    InfeasibleGrid(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
