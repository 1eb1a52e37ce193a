//! Exact computational algebra for Hecke pairs, orbit Fell bundles and their crossed products.

pub mod bs;
pub mod json;
pub mod pair;
pub mod perm;
pub mod scalars;
pub mod hecke;
pub mod matrix;
pub mod bundle;
pub mod eq;
pub mod crossed;
pub mod rep;
pub mod lln;
pub mod random;
pub mod check;
pub mod cli;
