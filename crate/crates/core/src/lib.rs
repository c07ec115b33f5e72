//! Real root isolation for polynomials whose coefficients are only available
//! through approximations of increasing precision.
//!
//! ```
//! use bitroot::{r_isolate, CoefficientOracle};
//!
//! // x^3 - 7x + 6 = (x + 3)(x - 1)(x - 2)
//! let oracle = CoefficientOracle::from_integers(&[6, -7, 0, 1]);
//! let res = r_isolate(&oracle, 16, 1 << 20).unwrap();
//! assert_eq!(res.intervals.len(), 3);
//! ```

pub mod coeffstream;
pub mod dyadic;
pub mod isolator;
pub mod oracle;
pub mod polyops;
pub mod rootbound;

pub use coeffstream::{CoefficientOracle, CoefficientSource, RealConst};
pub use dyadic::{Dyadic, DyadicInterval, Rational};
pub use isolator::{r_isolate, r_isolate_with, CertifyMode, IsolationResult, IsolatorConfig, Tracer};
pub use polyops::{DyadicPoly, RationalPoly};

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/bitstreams.md")]
    mod bitstreams {}
    #[doc = include_str!("../../../book/src/dyadics.md")]
    mod dyadics {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/subdivision.md")]
    mod subdivision {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("leading coefficient is not distinguishable from zero")]
    LeadingCoefficientTooSmall,
    #[error("polynomial must have degree at least 1")]
    DegreeTooSmall,
    #[error("initial precision must be at least 2, got {0}")]
    InvalidPrecision(i64),
    #[error("precision cap {cap} exceeded (next attempt would use {attempted} bits)")]
    PrecisionCapExceeded { cap: i64, attempted: i64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
}
