pub mod analyze;
pub mod construct;
pub mod error;
pub mod gf2;
pub mod io;
pub mod search;
