//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime (primes p > 3 required)")]
    NotPrime(u64),
    #[error("field size {q} exceeds the configured bound {bound}")]
    FieldTooLarge { q: u64, bound: u64 },
    #[error("no irreducible polynomial of degree {0} found (search bug)")]
    NoIrreducibleFound(u32),
    #[error("every element of F_{0} is a cube (q = 2 mod 3)")]
    AllCubes(u64),
    #[error("curve has bad reduction (discriminant is zero)")]
    BadReduction,
    #[error("trace {t} violates the Hasse bound for p = {p}")]
    HasseViolation { t: i64, p: u64 },
    #[error("prime {p} is not {residue} mod {modulus}")]
    WrongResidue { p: u64, residue: u64, modulus: u64 },
    #[error("degenerate character: m = n mod q-1")]
    DegenerateCharacter,
    #[error("{0} is not a valid imaginary quadratic discriminant")]
    BadDiscriminant(i64),
    #[error("{f} does not divide the conductor {t}")]
    NotADivisor { f: u64, t: u64 },
    #[error("trace formula produced a non-integral value {0}")]
    NonIntegralTrace(String),
    #[error("expected an integer, got {0}")]
    NonIntegralResult(String),
    #[error("eta product has non-integral leading power")]
    NonIntegralWeight,
    #[error("p = {p} is too large for method {method}")]
    TooLargeForMethod { p: u64, method: &'static str },
    #[error("value {0} was not recognized as a rational")]
    NotRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
