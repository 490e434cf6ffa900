//! Shared numerical machinery used by every model.

pub mod mc;
pub mod noise;
pub mod optimize;
pub mod poisson;
pub mod quadrature;
pub mod rng;
pub mod special;
