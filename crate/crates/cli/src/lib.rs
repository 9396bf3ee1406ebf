//! Batch front end for the finite-category toolkit: JSON documents on disk,
//! corpus generation, and the self-test suites behind `catlift selftest`.

pub mod corpus;
pub mod docs;
pub mod suites;
