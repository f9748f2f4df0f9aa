//! Exact combinatorics of relatively hyperbolic group pairs: cusped graphs,
//! Rips complexes, ℓ¹ filling norms and standard resolutions.

pub mod cli;
pub mod complexes;
pub mod cusped;
pub mod error;
pub mod filling;
pub mod geomfill;
pub mod graphs;
pub mod groups;
pub mod hyperbolicity;
pub mod lincomb;
pub mod lp;
pub mod paircomplex;
pub mod rational;
pub mod resolutions;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use rational::Q;
