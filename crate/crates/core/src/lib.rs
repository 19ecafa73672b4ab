//! Exact G1 spline spaces on topological surfaces made of triangles and quads.
//!
//! The crate models a surface by its faces and edge identifications, carries rational
//! gluing data on each interior edge, and computes the dimension and an explicit basis of
//! the space of G1 splines of a given degree. Every result can be re-checked against a
//! brute-force linear-algebra oracle in [`verify`].

pub mod basis;
pub mod dimension;
pub mod fixtures;
pub mod gluing;
pub mod io;
pub mod linalg;
pub mod ratpoly;
pub mod surface;
pub mod syzygy;
pub mod verify;

pub use ratpoly::{FaceKind, FacePoly, Rational, UniPoly};
