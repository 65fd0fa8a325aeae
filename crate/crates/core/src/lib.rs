//! Workbench for non-deterministic communication complexity and
//! time-bounded instance complexity on small boolean functions.

pub mod bits;
pub mod cli;
pub mod boolfun;
pub mod corpus;
pub mod covers;
pub mod icomplex;
pub mod microvm;
pub mod protocols;
pub mod witness;
