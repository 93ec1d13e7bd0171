//! Majorization-based entropic uncertainty bounds for pairs of quantum
//! operations given as Kraus sets.
//!
//! The usual entry point is [`entropy::bound_report`], which computes the
//! norm sequence `c_k`, the majorizing vectors and every entropic bound for
//! two operations. [`qubit`] holds closed forms for two-outcome qubit
//! operations and [`cli`] the commands behind the `maj` binary.

pub mod channels;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod majorization;
pub mod qubit;

pub use channels::{DensityMatrix, KrausSet, ProbVector};
pub use entropy::{bound_report, BoundReport, EntropyFamily, EntropyQuery, LogBase};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
