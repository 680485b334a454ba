#![no_std]

//! Numerics for general Dirichlet series `f(s) = Σ aₙ e^(−λₙ s)` on the right
//! half-plane and their boundary behaviour on the imaginary axis.
//!
//! The crate is `no_std` (it needs `alloc`) and has no IO. It provides:
//!
//!  - [`series`]: truncated evaluation with a certified tail bound, partial sums,
//!    derivatives, the Taylor bridge `z = w·e^(−s)` and exponent gap diagnostics.
//!  - [`gaps`]: detection of pure Ostrowski gaps in Taylor coefficient sequences.
//!  - [`geometry`]: Stolz sectors, half-discs and fat approach regions.
//!  - [`limits`]: windowed limit detectors for nontangential limits and for
//!    partial-sum subsequences on the boundary.
//!  - [`experiments`]: boundary scans and the theorem-level probes built from the
//!    detectors.
//!  - [`potential`]: Poisson kernel and integrals, the Green function of the
//!    complement of a vertical segment, and walk-on-spheres harmonic measure.
//!
//! Everything is a pure function over immutable values. Work that is naturally
//! parallel (grid points, lattice points, random walks) is exposed per item so a
//! std front end can fan it out and still reproduce the serial result bit for bit.

extern crate alloc;

pub mod closed_form;
pub mod error;
pub mod experiments;
pub mod gaps;
pub mod geometry;
pub mod limits;
pub mod point;
pub mod potential;
pub mod quad;
pub mod series;
pub mod sum;

pub use closed_form::ClosedForm;
pub use error::{LabError, Result};
pub use gaps::{detect_pure_ostrowski, detect_pure_ostrowski_sparse, OstrowskiGapReport};
pub use geometry::{ApproachRegion, CuspProfile, FatnessVerdict, TriangleGamma};
pub use limits::{ConvergenceReport, NtParams, Status};
pub use num_complex::Complex64;
pub use point::ComplexPoint;
pub use series::{EvaluationResult, GeneralDirichletSeries, SubsequenceSelector, TailKind};
