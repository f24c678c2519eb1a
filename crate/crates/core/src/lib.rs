pub mod error;
pub mod exact;
pub mod ext;
pub mod fhs;
pub mod fixtures;
pub mod functors;
pub mod io;
pub mod lie;
pub mod mhs;
pub mod random;
pub mod report;
pub mod sharp;
pub mod vecn;

pub use error::{Error, Result};
pub use exact::{FinAbGroup, GMatrix, GaussScalar, IntMatrix, Subspace};
