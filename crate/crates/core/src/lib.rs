#![no_std]
//! Hyperplane arrangements with complex weights: intersection lattices,
//! chambers, βnbc bases, the beta-function and critical-value products, and
//! numerical period matrices whose determinants they evaluate.

extern crate alloc;

pub mod error;
pub mod exact;
pub mod geometry;
pub mod polyhedron;
pub mod chambers;
pub mod nbc;
pub mod special;
pub mod forms;
pub mod closed_form;
pub mod quadrature;
pub mod selberg;

pub use error::{Error, Result};
