//! Exact analysis of positive ODE models written as polynomial or rational
//! right-hand sides: reaction-network extraction, minimal siphons and their
//! union lattice, boundary-face equilibria, next-generation matrices,
//! Routh-Hurwitz stability, and transcritical relays between faces.

pub mod algebra;
mod error;
pub mod expr;
pub mod model;
pub mod builtin;
pub mod equilibria;
pub mod stability;
pub mod relay;
pub mod network;

pub use error::{Error, Result};

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub mod overview {}
    #[doc = include_str!("../../../book/src/models.md")]
    pub mod models {}
    #[doc = include_str!("../../../book/src/siphons.md")]
    pub mod siphons {}
    #[doc = include_str!("../../../book/src/equilibria.md")]
    pub mod equilibria {}
    #[doc = include_str!("../../../book/src/stability.md")]
    pub mod stability {}
    #[doc = include_str!("../../../book/src/relays.md")]
    pub mod relays {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
