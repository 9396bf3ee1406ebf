/*! Delta lenses: functors equipped with chosen lifts, their axioms,
composition, cells, tabulators, and exhaustive structure searches. */

mod enumerate;
pub mod fixtures;
mod lens;
mod tabulator;

pub use enumerate::{
    enumerate_generated_structures, enumerate_lens_structures, GeneratedVariant,
    LensStructureCount,
};
pub use lens::{
    compose_lenses, is_lens_cell, lens_cell_failure, lens_from_dopf, CellFailure, DeltaLens,
    LensBuildError, LensCellError, LensComposeError, LensViolation, OpcartesianFailure,
};
pub use tabulator::{induce_into_tabulator, lens_from_diagram, tabulator, DiagramLensError, Tabulator};
