pub mod constructions;
pub mod field;
pub mod group;
pub mod linalg;
pub mod orbit;
pub mod partition;
pub mod perm;
pub mod suite;
