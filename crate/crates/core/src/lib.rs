//! Exact ADHM data and monads for framed sheaves on blow-ups of the projective plane.

pub mod adhm;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod monad;
pub mod poly;
pub mod rational;
pub mod sections;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use rational::Q;
