//! Infinigons of the hyperbolic plane.
//!
//! A Poincaré disc kernel ([`geom`]), the vertex sequence whose points lie
//! on a circle, horocycle or equidistant curve ([`sequence`]), closed-form
//! metrics of regular polygons anchored at the disc centre ([`metrics`]),
//! grossone arithmetic for polygons with infinitely many sides
//! ([`grossnum`]) and tiling generation with sector-tree censuses
//! ([`tiler`]).

pub mod cli;
pub mod geom;
pub mod grossnum;
pub mod metrics;
pub mod sequence;
pub mod svg;
pub mod tiler;
pub mod verify;
