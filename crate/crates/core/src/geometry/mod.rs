//! `G = GL(2, q)`, the Coxeter torus `K`, the half-plane `H = E ∖ F`, the
//! invariant `D`, conjugacy classes and `K`-double cosets.

mod classes;
mod cosets;
mod group;
mod halfplane;

pub use classes::{ClassInfo, ClassLabel};
pub use cosets::{DoubleCoset, DoubleCosetTable};
pub use group::{enumerate_group, torus_matrix, Gl2, GroupElem, TorusElem};
pub use halfplane::{
    classify_pair_orbits, distance_invariant, mobius_act, Distance, HalfPlanePoint, PairOrbitReport,
};
