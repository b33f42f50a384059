//! Exact representation theory over cyclotomic fields: finite groups,
//! character tables, module constructions, invariant Grassmannians and the
//! invariant-hypersurface search built on top of them.

#![allow(clippy::needless_range_loop)]

pub mod chars;
pub mod cyclo;
pub mod error;
pub mod grp;
mod lex;
pub mod linalg;
pub mod projrep;
pub mod repmod;
pub mod varsearch;

pub use cyclo::{parse_cyc, CycElt};
pub use error::{Error, Result};
