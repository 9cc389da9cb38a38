//! Exact Witt-ring arithmetic, the cohomology of `BN` for SL-oriented
//! η-inverted theories, Euler classes of `N`-representations and
//! fixed-point localization.
//!
//! The guide in `book/` walks through each layer; its snippets run as
//! doctests.

mod arith;
pub mod bn;
pub mod engine;
pub mod euler;
pub mod expr;
pub mod localized;
pub mod problem;
pub mod report;
pub mod scalar;
pub mod selfcheck;
pub mod series;
pub mod witt;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/witt-rings.md")]
    mod witt_rings {}
    #[doc = include_str!("../../../book/src/bn-ring.md")]
    mod bn_ring {}
    #[doc = include_str!("../../../book/src/euler-classes.md")]
    mod euler_classes {}
    #[doc = include_str!("../../../book/src/localization.md")]
    mod localization {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
