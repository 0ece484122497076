//! Poincaré, true Poincaré and Katz ranks of linear differential systems at
//! `z = 0`, computed exactly through valuated matroids and tropical projection.
//!
//! The guide under `book/` walks through each module; its examples run as
//! doctests.

pub mod cli;
pub mod connection;
pub mod error;
pub mod ext;
pub mod io;
pub mod lattice;
pub(crate) mod linalg;
pub mod ranks;
pub mod scalar;
pub mod tropical;
pub mod vmatroid;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/rational-functions.md")]
    mod rational_functions {}
    #[doc = include_str!("../../../book/src/membranes.md")]
    mod membranes {}
    #[doc = include_str!("../../../book/src/valuated-matroids.md")]
    mod valuated_matroids {}
    #[doc = include_str!("../../../book/src/projection.md")]
    mod projection {}
    #[doc = include_str!("../../../book/src/ranks.md")]
    mod ranks {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
