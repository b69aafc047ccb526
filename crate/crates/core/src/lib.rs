pub mod cli;
pub mod error;
pub mod gen;
pub mod linext;
pub mod oracle;
pub mod poset;
pub mod rational;
pub mod sim;
pub mod spectra;
pub mod stationary;
pub mod symmat;

pub use error::{Error, Result};
