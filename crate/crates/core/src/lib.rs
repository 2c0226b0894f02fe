//! Computational group theory for orbit configuration braid groups.

pub mod abelian;
mod automorphism;
pub mod combing;
pub mod error;
pub mod fibration;
pub mod presentation;
pub mod random;
pub mod word;

pub use error::{Error, Result};
