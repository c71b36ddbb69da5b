//! Exact Pfaffian half-tree machinery.
//!
//! Skew-symmetric matrices with zero column sums, their graphs, perfect
//! matchings, spanning forests selected by the trimming algorithm, the
//! opening of doubled edges that turns matchings into half-forests, the
//! line-bundle determinant expansion over cycle-rooted spanning forests,
//! and the 3-uniform hypergraph comparison. Every quantity is an exact
//! rational; every identity can be checked by equality.

pub mod config;
pub mod error;
pub mod forests;
pub mod graphmodel;
pub mod hypergraph;
pub mod linebundle;
pub mod opening;
pub mod perm;
pub mod poly;
pub mod rational;
pub mod skewmatrix;

pub use error::{Error, Result};
pub use rational::Rational;
