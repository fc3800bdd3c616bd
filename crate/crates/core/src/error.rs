use thiserror::Error;

use crate::gf2::BitPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid hexadecimal polynomial {0:?}")]
    InvalidHex(String),
    #[error("polynomial {hex} does not have constraint length {k}")]
    ConstraintLength { hex: String, k: u32 },
    #[error("invalid tap string {0:?}")]
    InvalidTaps(String),
    #[error("modulus x^0 - 1 is not allowed")]
    ZeroModulus,
    #[error("cyclic length {0} exceeds the supported maximum")]
    ModulusTooLarge(u32),
    #[error("polynomial of degree {degree} is not reduced modulo x^{k} - 1")]
    DegreeTooLarge { degree: u32, k: u32 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("not invertible modulo x^{k} - 1: gcd = {gcd}")]
    NotInvertible { gcd: BitPoly, k: u32 },
    #[error("window of {window} taps cannot hold a polynomial of degree {degree}")]
    WindowTooShort { degree: u32, window: u32 },
    #[error("unsupported vector length {0}")]
    VectorLength(u32),
    #[error("bits set beyond vector length {len}")]
    VectorOverflow { len: u32 },

    #[error("{family} construction needs {expected} polynomial weight, got {weight}")]
    WrongParity {
        family: &'static str,
        expected: &'static str,
        weight: u32,
    },
    #[error("constraint length {k} is outside 1..={max}")]
    BadConstraintLength { k: u32, max: u32 },
    #[error("canonical polynomials need p_0 = p_(K-1) = 1")]
    NotCanonical,
    #[error("matrix is malformed: {0}")]
    Matrix(String),
    #[error("matrix provenance does not support {0}")]
    Provenance(&'static str),

    #[error("generator matrix is not self-dual")]
    NotSelfDual,
    #[error("orbit-reduced enumeration needs a two-circulant generator matrix")]
    OrbitUnsupported,
    #[error("no enumerator template fits A12={a12} A14={a14} A16={a16} A20={a20}")]
    NoTemplate {
        a12: u64,
        a14: u64,
        a16: u64,
        a20: u64,
    },
    #[error("weight distribution has length {0}; parameters are defined for length 72")]
    WrongLength(usize),
    #[error("weight distribution is not {0}")]
    WrongFamily(&'static str),

    #[error("search aborted: {0}")]
    Inconsistent(String),

    #[error("fixture line {line}: {msg}")]
    Fixture { line: usize, msg: String },
    #[error("record line {line}: {msg}")]
    Record { line: usize, msg: String },
    #[error("invalid weight distribution: {0}")]
    Distribution(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
