use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("q = {q} exceeds the configured cap {cap}")]
    CapExceeded { q: u32, cap: u32 },
    #[error("zero has no discrete logarithm or inverse")]
    ZeroElement,
    #[error("character of modulus {modulus} evaluated outside its group")]
    DomainMismatch { modulus: u32 },
    #[error("operands belong to different fields (q = {left} vs q = {right})")]
    ContextMismatch { left: u32, right: u32 },
    #[error("character table failed validation (residual {residual:.3e})")]
    ValidationFailed { residual: f64 },
    #[error("function is not bi-equivariant (deviation {residual:.3e})")]
    NotBiEquivariant { residual: f64 },
    #[error("multiplicity of {label} is not an integer ({value:.6})")]
    NonIntegralMultiplicity { label: String, value: f64 },
    #[error("{label} is not a constituent of the induced representation")]
    NotAConstituent { label: String },
    #[error("parameter a = {a} lies outside the domain of the formula")]
    SingularParameter { a: u32 },
    #[error("character {lambda} is Frobenius-fixed and has no cuspidal representation")]
    NotCuspidal { lambda: u32 },
    #[error("Hilbert-Schmidt norm came out negative ({value:.3e})")]
    NegativeResidual { value: f64 },
    #[error("unsupported interpretation '{0}'")]
    UnsupportedInterpretation(String),
    #[error("function vanishes identically")]
    ZeroFunction,
    #[error("could not draw a nonzero Hecke function after {attempts} attempts")]
    DegenerateChannel { attempts: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
