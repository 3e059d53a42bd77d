//! SIR epidemics on two interconnected contact networks.
//!
//! * [`netgen`] builds single layers and couples them.
//! * [`spectral`] computes epidemic thresholds of coupled layers.
//! * [`meanfield`] integrates node-level mean-field dynamics.
//! * [`stochastic`] runs the exact continuous-time Markov chain.
//! * [`spillover`] drives Monte Carlo spillover experiments.
//!
//! The guide under `book/` walks through each piece; its code blocks run as
//! doc-tests of this crate.

pub mod error;
pub mod meanfield;
pub mod netgen;
pub mod params;
pub mod rng;
pub mod spectral;
pub mod spillover;
pub mod stochastic;

pub use error::{Error, ErrorClass, Result};
pub use netgen::{Graph, Layer, LayeredNetwork, LinkSpec};
pub use params::EpidemicParams;

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// The guide's code blocks run as doc-tests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/networks.md")]
    mod networks {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/meanfield.md")]
    mod meanfield {}
    #[doc = include_str!("../../../book/src/stochastic.md")]
    mod stochastic {}
    #[doc = include_str!("../../../book/src/spillover.md")]
    mod spillover {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
