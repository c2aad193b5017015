pub mod cohom;
pub mod error;
pub mod exc;
pub mod matrix;
pub mod piclattice;
pub mod pipeline;
pub mod qha;
pub mod toric;
pub mod uext;

pub use error::{Error, Result};
