//! Harmonic analysis on the twisted finite upper half-plane.
//!
//! For `G = GL(2, q)` and the Coxeter torus `K ≅ E^×` this crate decomposes
//! `Ind_K^G Φ`, builds the twisted spherical functions, and checks the finite
//! uncertainty principle on the Hecke algebra `L¹_Φ(G, K)`, comparing closed
//! formulas against brute-force oracles.

pub mod chartable;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harmonics;
pub mod hecke;
pub mod report;
pub mod setting;
pub mod uncertainty;

pub use error::{Error, Result};
pub use setting::Setting;
