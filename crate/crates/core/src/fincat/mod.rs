/*! Finite categories and functors as total tables, plus the constructions
used by the rest of the crate: comma categories, pullbacks, the special
pushout along a discrete subcategory, orthogonal lifts, and the
comprehensive factorisation. */

mod category;
mod catalog;
mod constructions;
mod enumerate;
mod functor;
mod ids;
mod nat;
pub mod oracle;

pub use catalog::{
    bang, bex, delta, disc_two, non_twisted, one, ordinal, sigma, three, two, two_lifts,
};
pub use category::{
    CategoryBuildError, CategoryBuilder, CategoryViolation, FinCategory, Report,
};
pub use constructions::{
    boo_lift, comma_category, comprehensive_factorize, discrete_of, orthogonal_lift, pullback,
    pushout_along_discrete, BooLiftError, Comma, ComprehensiveFactorization, OrthogonalLiftError,
    Pullback, PullbackError, Pushout, PushoutError, PushoutSort,
};
pub use enumerate::{enumerate_functors, functor_search_estimate, SizeGuard, SizeLimitExceeded};
pub use functor::{DopfLiftError, FinFunctor, FunctorBuildError, FunctorClass, FunctorViolation};
pub use ids::{MorId, ObjId};
pub use nat::{NatTrans, NatViolation};
