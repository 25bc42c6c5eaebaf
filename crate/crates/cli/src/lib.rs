//! Table reproduction and output helpers behind the `afm` binary.

pub mod golden;
pub mod tables;
