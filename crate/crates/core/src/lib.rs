pub mod biject;
pub mod boards;
pub mod error;
pub mod file;
pub mod harness;
pub mod jattack;
pub mod rook;
pub mod scalar;
pub mod special;
pub mod table;
pub mod theta;
pub mod weights;

pub use error::{Error, Result};
