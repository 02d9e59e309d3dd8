//! Exact computations on graded restricted root data of compact symmetric
//! triads. Computes fundamental alcoves of Hermann actions with their faces
//! and classifies the orbit through each point (minimal, austere, totally
//! geodesic, arid, weakly reflective).
//!
//! All root-level arithmetic is exact over the rationals with angles held as
//! rational multiples of π. The only floating step is certified interval
//! evaluation of cotangents and logarithms.

#![no_std]

extern crate alloc;

pub mod alcove;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod interval;
pub mod roots;
pub mod triad;

pub use error::{Error, Result};
pub use exact::{rat, AngleUnit, GramMatrix, Rational, RationalAngle, RootVector};
pub use interval::{cot_eval, RealContext, RealInterval};
pub use roots::{CartanLabel, Family, RootSystem, WeylGroup};
pub use triad::{catalog, CatalogParams, GradedRootDatum, Sector, Violation};
