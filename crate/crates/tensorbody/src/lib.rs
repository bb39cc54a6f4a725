//! JSON formats, the claim battery and the command-line front end for
//! [`tensorbody_core`].

pub use tensorbody_core as core;

pub mod cli;
pub mod json;
pub mod verify;
