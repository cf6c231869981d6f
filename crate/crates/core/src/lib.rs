pub mod catalog;
pub mod distinguishability;
pub mod error;
pub mod figures;
pub mod fock;
pub mod macroscopicity;
pub mod measurement;
pub mod sweep;
pub mod table;
