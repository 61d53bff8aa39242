//! Zeta-regularized values of divergent power integrals `∫_0^∞ x^r dx`.

pub mod exact;
pub mod mucore;
pub mod query;
pub mod regint;
pub mod special;
pub mod table;
pub mod verify;
