//! Construction and exact certification of sum-rank metric codes over small finite fields.

pub mod certify;
pub mod cli;
pub mod cyclic;
pub mod families;
pub mod gf;
pub mod matspace;
pub(crate) mod search;
pub mod srspace;
