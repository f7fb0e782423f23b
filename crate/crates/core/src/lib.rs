pub mod catalog;
pub mod class;
pub mod error;
pub mod forms;
pub mod fp;
pub mod orbit;
pub mod twisting;
pub mod wells;

pub use error::{Error, Result};
