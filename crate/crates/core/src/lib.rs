//! Dense finite-dimensional models of multiplicative unitaries, their
//! representation categories, natural absorbers, and braided multiplicative
//! unitaries with their semidirect products.
//!
//! Every identity is a check returning a [`CheckReport`] with a residual
//! (largest absolute entrywise difference). Legs are numbered from 1 and leg
//! 1 is the slowest index. See the guide in `book/` for a walkthrough.

pub mod absorber;
pub mod braided;
pub mod category;
pub mod cli;
pub mod error;
pub mod fixture;
pub mod leg_expr;
pub mod multunit;
pub mod oracle;
pub mod repcat;
pub mod report;
pub mod tensor;

pub use error::{Error, Result};
pub use report::CheckReport;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/legs.md")]
    mod legs {}
    #[doc = include_str!("../../../book/src/multiplicative_unitaries.md")]
    mod multiplicative_unitaries {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/absorbers.md")]
    mod absorbers {}
    #[doc = include_str!("../../../book/src/braided.md")]
    mod braided {}
    #[doc = include_str!("../../../book/src/semidirect.md")]
    mod semidirect {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
