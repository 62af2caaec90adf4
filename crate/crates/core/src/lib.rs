//! Groupcast index coding: problem model, alignment and conflict structure,
//! rate feasibility verdicts, random scalar linear code constructions and an
//! exhaustive small-field oracle.

pub mod cli;
pub mod codec;
pub mod corpus;
mod dsu;
pub mod feasibility;
pub mod fixtures;
pub mod linalg;
pub mod oracle;
pub mod problem;
pub mod structure;
