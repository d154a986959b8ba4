//! Extreme-tail probabilities without underflow.
//!
//! Probabilities and waiting times are carried as [`Magnitude`]s, positive
//! reals stored as an exact decade plus a base-10 fraction, so values such as
//! `1e-276` or `1e272` years are ordinary data. The numerical core is generic
//! over [`Scalar`]; `f64` is the working precision and the aliases below fix
//! it. With the `double-double` feature the same code also runs on
//! `twofloat::TwoFloat`, which the test suites use as a higher-precision
//! cross-check.
//!
//! ```
//! use hisigma::tailprob::gauss_tail;
//! use hisigma::TailQuery;
//!
//! let r = gauss_tail(&TailQuery::new(25.0)).unwrap();
//! assert_eq!(r.probability.format_sci(4).unwrap(), "3.057e-138");
//! assert_eq!(r.occurrence_years.format_sci(4).unwrap(), "1.309e+135");
//! ```

pub mod audit;
pub mod context;
pub mod error;
pub mod fattail;
pub mod magnum;
pub mod scalar;
pub mod special;
pub mod tailprob;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Working-precision magnitude.
pub type Magnitude = magnum::Magnitude<f64>;
pub type TailResult = tailprob::TailResult<f64>;
pub type TailQuery = tailprob::TailQuery<f64>;
pub type SeriesDiagnostics = tailprob::SeriesDiagnostics<f64>;
pub type ReferenceScale = context::ReferenceScale<f64>;
pub type LotteryModel = context::LotteryModel<f64>;

#[cfg(feature = "double-double")]
pub use twofloat::TwoFloat;
