//! Participatory budgeting with substitute projects.
//!
//! Voters split the projects they want into groups of substitutes and attach a
//! non-increasing marginal utility curve to every group. On top of that model
//! this crate provides:
//!
//! * [`mechanisms`]: Rule X and Substitute Rule X with full payment traces,
//! * [`fairness`]: exhaustive EJR and Strong-BPJR verifiers with witnesses,
//! * [`simgen`]: seeded instance generators for the Euclidean and
//!   global-substitutes experiment families,
//! * [`metrics`]: social welfare, anger ratio and paired comparisons,
//! * [`cli`]: the instance file format, CSV schema and command drivers.
//!
//! All money and utility arithmetic is exact (arbitrary precision rationals).

pub mod cli;
pub mod curve;
pub mod error;
pub mod fairness;
pub mod fixtures;
pub mod mechanisms;
pub mod metrics;
pub mod model;
pub mod profile;
pub mod rational;
pub mod simgen;

pub use curve::MarginalCurve;
pub use error::{Error, Result};
pub use model::{Bundle, PBInstance, ProjectIdx, VoterIdx};
pub use profile::{Ballot, Partition, PreferenceProfile};
pub use rational::Rational;
