//! Enumeration and generating functions for convex, L-convex and Z-convex
//! polyominoes.

pub mod anatomy;
pub mod census;
pub mod grid;
pub mod harness;
pub mod pathmetry;
pub mod series;
pub mod zgf;
