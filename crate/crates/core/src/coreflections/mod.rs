/*! Split coreflections and their twisted refinement.
 *
 * A split coreflection is a fully faithful left adjoint with an identity
 * unit, stored as explicit functor and counit tables.  Twistedness asks for
 * a unique section `q̄u: x → fqx` against the counit for every morphism the
 * right adjoint moves; this module decides it by exhaustive search, builds
 * twisted coreflections by glueing categories onto initial functors, and
 * computes the universal twisted replacement of an arbitrary split
 * coreflection together with the comparison functor that measures how far
 * the input was from twisted.
 */

mod coreflection;
pub mod fixtures;
mod twisted;

pub use coreflection::{
    compose_coreflections, coref_cell_failure, is_coref_cell, CorefBuildError, CorefCellError,
    CorefCellFailure, CorefComposeError, CorefViolation, SplitCoreflection,
};
pub use twisted::{
    coreflection_from_initial, fibre_sum, is_twisted, pullback_coreflection, split_to_twisted,
    twisted_from_pushout, InitialCorefError, PullbackCorefError, PulledBackCoreflection,
    SplitToTwisted, TwistedCoreflection, TwistedFailure, TwistedFromPushoutError, TwistedOutcome,
    TwistedWitness,
};
