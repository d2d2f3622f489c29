pub mod blowup;
pub mod cli;
pub mod config;
pub mod error;
pub mod exponential;
pub mod filtration;
pub mod formal;
pub mod frobenius;
pub mod laurent;
pub mod mellin;
pub mod newton;
pub mod operator;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod polar;
pub mod skeleton;
pub mod term;

pub use error::{Error, Result};
