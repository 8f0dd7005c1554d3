pub mod channels;
pub mod codesim;
pub mod entropics;
pub mod error;
pub mod linalg;
pub mod prob;
pub mod random;
pub mod regions;
pub mod typicality;

pub use error::{Error, Result};
