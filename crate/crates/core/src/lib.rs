//! Group actions on curves, packings of graphs of automorphisms, and exact
//! Chern-number and slope formulas for double étale Kodaira fibrations.

pub mod bitset;
pub mod curve;
pub mod group;
pub mod packing;
pub mod report;
pub mod search;
pub mod slope;
pub mod verify;
