//! Bordered Heegaard Floer calculus over F2.
//!
//! Strands algebras of pointed matched circles, bordered structures (type D,
//! A-infinity, DA, DD) with box tensor products and morphism complexes, and the
//! involutive pipeline computing the conjugation map and HFI-hat.

pub mod algebra;
pub mod equivalence;
pub mod error;
pub mod f2;
pub mod involutive;
pub mod io;
pub mod standard;
pub mod strands;
pub mod structures;
pub mod triangle;

pub use error::{Error, Result};
