pub mod coeff;
pub mod error;
pub mod exprlang;
pub mod hlv;
pub mod macdonald;
pub mod partition;
pub mod plethysm;
pub mod symfun;

pub use coeff::{BigRat, LaurentPoly, RatFunc};
pub use error::{Error, Result};
