//! Profiles `h`, zero sets `K`, and the weight `H = h o d_K` with its
//! distribution-function calculus.

pub mod profile;
pub mod weight;
pub mod zeroset;

pub use profile::ProfileFunction;
pub use weight::{
    CutoffIntegral, LevelEquation, LevelSetSummary, LevelSolution, RegularityReport, WeightField,
};
pub use zeroset::{CompactSetModel, GapClass, ZeroSetSpec};
