//! Model checking for sabotage (SDL), creation (SCL) and update (SUL) logics
//! over weighted serial digraphs.

pub mod checker;
pub mod cli;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod syntax;
pub mod updates;
