//! Region-based synthesis toolkit for b-bounded Petri net types.
//!
//! The crate decides feasibility, event/state separation (ESSP/SSP) of
//! deterministic transition systems over the four net-type families
//! `tau0`..`tau3` (plain, pure, group-extended and pure group-extended
//! b-bounded P/T nets), synthesizes nets from witness regions, and compiles
//! cubic monotone one-in-three 3-SAT instances into separation gadgets with
//! checkable witness regions.

pub mod error;
pub mod fixtures;
pub mod gadgets;
pub mod nettype;
pub mod region;
pub mod samples;
pub mod sat;
pub mod solver;
pub mod synth;
pub mod testgen;
pub mod ts;
pub mod union;

pub use error::{Error, Result};
pub use nettype::{Family, NetType, TypeEvent};
pub use region::{Region, SeparationAtom, Verdict};
pub use ts::TransitionSystem;
pub use union::Union;
