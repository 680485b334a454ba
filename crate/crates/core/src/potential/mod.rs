//! Potential theory on the right half-plane: Poisson kernel and integrals,
//! the Green function of the complement of a vertical segment, and
//! walk-on-spheres harmonic measure.

mod green;
mod poisson;
mod wos;

pub use green::{green_segment, lemma_l_constant, LemmaLReport, SegmentK};
pub use poisson::{h1_decompose, poisson_integral, poisson_kernel, BoundaryMeasure};
pub use wos::{
    check_inputs, harmonic_measure_wos, tally, walk_once, BoundaryPart, HarmonicMeasure, Piece, Side, WalkConfig,
    WalkOutcome, WosDomain,
};
