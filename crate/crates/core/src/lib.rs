//! Exact computations with cylinder decompositions of translation surfaces:
//! separatrix diagrams, combinatorial Prym involutions, isoperiodic twist
//! spaces and rank certificates.

pub mod cli;
pub mod diagram;
pub mod enumerator;
pub mod error;
pub mod exactalg;
pub mod presets;
pub mod prym;
pub mod surface;
pub mod twistspace;

pub use error::{Error, Result};
