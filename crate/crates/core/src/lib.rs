//! Online vertex enumeration with the double description method, and an
//! outer approximation solver for linear multiobjective programs built on it.

mod linalg;

pub mod bench;
pub mod benson;
pub mod dd;
pub mod format;
pub mod lp;
pub mod oracle;
pub mod polyhedron;
