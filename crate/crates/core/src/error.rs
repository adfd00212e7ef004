use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error(
        "quadrature did not converge: coarse {coarse:e}, refined {refined:e} (relative gap {relative_gap:e})"
    )]
    QuadratureNonConvergence {
        coarse: f64,
        refined: f64,
        relative_gap: f64,
    },
    #[error("zero-symbol frequency: the denominator of the multiplier vanishes")]
    ZeroSymbolFrequency,
    #[error("non-integrable time profile: real part of the symbol is {re_symbol:e}, must be negative")]
    NonIntegrableProfile { re_symbol: f64 },
    #[error("aliasing: band {band} exceeds the {resolvable} the quadrature grid resolves")]
    Aliasing { band: u32, resolvable: u32 },
    #[error("Riesz undefined on constants (trivial representation)")]
    RieszOnConstants,
    #[error("metric normalization broken: Casimir sum is not scalar (residual {residual:e})")]
    MetricNormalization { residual: f64 },
    #[error("Bernstein function vanishes at the Casimir eigenvalue")]
    ZeroBernstein,
    #[error("real part of the characteristic exponent vanishes")]
    ZeroExponent,
    #[error("no symbol entry for irrep {0}")]
    MissingLabel(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("exponent p = {0} must lie in (1, inf)")]
    InvalidExponent(f64),
    #[error("interval [{b}, {big_b}] must satisfy b < B")]
    InvalidInterval { b: f64, big_b: f64 },
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
