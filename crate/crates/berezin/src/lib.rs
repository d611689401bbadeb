//! Exact Grassmann-algebra arithmetic, Berezin integration over invariant
//! superfunctions, and the radial differential operators that the integration
//! reduces to, together with a numerical verification harness for the
//! associated Cauchy-like integral theorems and random-matrix applications.
//!
//! The crate is organised around the pipeline
//!
//! ```text
//!   grassmann  ->  superspace  ->  theorems (oracle side)
//!   jets       ->  operators   ->  theorems (operator side)
//!                                  rmt (applications)
//! ```
//!
//! Both sides of every identity are computed independently: the oracle side
//! expands invariant profiles into nilpotent power series and extracts top
//! Grassmann coefficients exactly, while the operator side applies symbolic
//! rational-coefficient differential operators to jet-backed functions.

pub mod error;
pub mod grassmann;
pub mod jets;
pub mod operators;
pub mod parallel;
pub mod report;
pub mod ring;
pub mod rmt;
pub mod superspace;
pub mod symbolic;
pub mod theorems;

pub use error::Error;
pub use grassmann::Multivector;
pub use jets::Jet;
pub use operators::RadialOperator;
pub use report::VerificationReport;
pub use superspace::{SuperMatrix, SuperVector};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
