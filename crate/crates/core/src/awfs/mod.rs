/*! The factorisation of a functor into a twisted coreflection followed by
a delta lens, and everything it supports: lifting either class against the
other, the action of squares on middle categories, universal arrows out of
free lenses and into cofree coreflections, and the correspondences packaging
twisted coreflections as coalgebras and delta lenses as algebras over the
factorisation's comparison functors. */

mod algebras;
mod coslice;
mod factorization;
mod lift;
mod names;

pub use algebras::{
    algebra_to_lens, coalgebra_to_twisted, lens_to_algebra, twisted_to_coalgebra, AlgebraError,
    CoalgebraError,
};
pub use coslice::{coslice_sum, CosliceSum};
pub use factorization::{factorize, EfFactorization, EfMorSort};
pub use lift::{
    cofree_coref_universal, e_of_square, free_lens_universal, lift, LiftError, LiftIntermediates,
    LiftResult, LiftStrategy,
};
