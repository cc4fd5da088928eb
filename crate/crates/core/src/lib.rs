//! Finite-geometry codes of points and hyperplanes.
//!
//! The crate builds on `alloc` only. The `std` feature adds parallel sweeps
//! and wall-clock timing of verification runs.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod field;
pub mod code;
pub mod geometry;
pub mod bounds;
pub mod classify;
pub mod construct;
pub mod decompose;
pub mod verify;
pub mod io;
