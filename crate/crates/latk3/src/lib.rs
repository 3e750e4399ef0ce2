//! Exact arithmetic for even integral lattices and their finite order isometries.
//!
//! All computations run over arbitrary precision integers and rationals.

pub mod cyclo;
pub mod exactmat;
pub mod finquad;
pub mod glue;
pub mod lattice;
pub mod lefschetz;
pub mod vinberg;

mod error;

pub use error::{Error, Result};
