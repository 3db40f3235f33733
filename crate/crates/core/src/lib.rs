pub mod catalog;
pub mod error;
pub mod io;
pub mod render;
pub mod report;
pub mod tiling;

pub use error::{Error, Result};
pub use tiling::DimerModel;
pub mod matchings;
pub mod quiver;
pub mod heights;
pub mod stability;
pub mod lattice;
pub mod charts;
