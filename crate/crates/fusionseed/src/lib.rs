//! Decide whether a prime-field matrix group with a cyclic Sylow subgroup of
//! order `p` and a module over it give rise to a simple fusion system, and
//! build the supporting `p`-group data.

pub mod gfp;
pub mod grp;
pub mod modrep;
pub mod mu;
pub mod criterion;
pub mod sgroup;
pub mod zoo;
pub mod cli;
