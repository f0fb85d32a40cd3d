pub mod combinatorics;
pub mod error;
pub mod generator;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use generator::{Alphabet, Gen};
pub use scalar::Scalar;
pub use series::{Basis, Series};
pub mod assoc;
pub mod free;
pub mod lie;
pub mod prelie;
pub mod liegraph;
pub mod slinfty;
pub mod verify;
