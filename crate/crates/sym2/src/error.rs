use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma has a pole at {0}")]
    GammaPole(String),
    #[error("{func} has a pole at {at}")]
    Pole { func: &'static str, at: String },
    #[error("{func}: argument out of domain ({detail})")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: precision failure ({detail})")]
    Precision { func: &'static str, detail: String },
    #[error("contour abscissa {sigma} outside admissible range ({lo}, {hi})")]
    ContourOutOfRange { sigma: f64, lo: f64, hi: f64 },
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("tail bound {bound:e} at height {height} exceeds tolerance {tol:e}")]
    TailBound { bound: f64, height: f64, tol: f64 },
    #[error("Dirichlet character mod {0} is principal or imprimitive")]
    Imprimitive(u64),
    #[error("{x} is not coprime to {c}")]
    NotCoprime { x: i64, c: u64 },
    #[error("no cusp forms of weight {0}")]
    DimensionZero(u32),
    #[error("repeated Hecke eigenvalue at weight {0}")]
    RepeatedEigenvalue(u32),
    #[error("singular Petersson system at weight {0}")]
    SingularSystem(u32),
    #[error("negative Petersson weight {w:e} at weight {k}")]
    NegativeWeight { k: u32, w: f64 },
    #[error("truncation insufficient: tail bound {tail:e} beyond n = {cutoff} exceeds {tol:e}")]
    TruncationInsufficient { cutoff: u64, tail: f64, tol: f64 },
    #[error("Re u = {re} outside the strip ({lo}, {hi})")]
    StripViolation { re: f64, lo: f64, hi: f64 },
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("uncertified tail: {0}")]
    Uncertified(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
