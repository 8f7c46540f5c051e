pub mod error;
pub mod field;
pub mod forms;
pub mod lattice;
pub mod mw;
pub mod subgroup;
pub mod slice;
pub mod transfer;
pub mod checks;
pub mod cli;
