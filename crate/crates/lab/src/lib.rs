//! Std front end for `dirichlet-lab-core`: config files, JSON and CSV
//! artifacts, and parallel drivers that reproduce the serial results exactly.

pub mod config;
pub mod formats;
pub mod par;
pub mod runner;
pub mod validate;
