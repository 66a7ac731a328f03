use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("eigen-solver did not converge within {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },
    #[error("real-spectrum assumption violated")]
    ComplexSpectrum,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid exponent spectrum: {0}")]
    Spectrum(String),
    #[error(
        "Remez exchange did not converge after {iterations} iterations (deviation {deviation:e})"
    )]
    RemezNoConvergence { iterations: usize, deviation: f64 },
    #[error("ill-conditioned node system; increase the cluster tolerance ({0})")]
    IllConditioned(String),
    #[error("epsilon too large for this spectrum")]
    EpsilonTooLarge,
    #[error("shift too small: spectral abscissa {abscissa} is not below {bound}")]
    ShiftTooSmall { abscissa: f64, bound: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(
        "joint spectral radius search inconclusive: [{lower}, {upper}] after {nodes} nodes, depth {depth}"
    )]
    JsrInconclusive {
        lower: f64,
        upper: f64,
        nodes: u64,
        depth: usize,
    },
    #[error(
        "bisection stopped at c = {c}: JSR search inconclusive in [{lower}, {upper}] (tau = {tau}); bracket so far [{a}, {b}]"
    )]
    BisectionInconclusive {
        a: f64,
        b: f64,
        c: f64,
        tau: f64,
        lower: f64,
        upper: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
