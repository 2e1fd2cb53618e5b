pub mod algebra;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod io;
pub mod morse;
pub mod testkit;
pub mod trace;
