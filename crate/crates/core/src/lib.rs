//! Exact equivariant Schubert calculus on finite-type flag varieties.

pub mod billey;
pub mod cli;
pub mod coeffs;
pub mod exec;
pub mod poly;
pub mod rootsys;
pub mod verify;
pub mod weyl;
