/*! Computations on finite categories, presented as total composition tables.

Everything in this crate is decidable by exhaustive scan: validation of
categories, functors and natural transformations, classification of functors
(fully faithful, initial, discrete opfibration, ...), and the constructions
built on top of them — delta lenses, split and twisted coreflections, and the
`E_f` factorisation of an arbitrary functor into a twisted coreflection
followed by a delta lens, together with its lifting operations and
(co)algebra correspondences.

The layers build strictly upwards:

* [`fincat`] — categories, functors, catalog fixtures, comma categories,
  pullbacks, a special pushout along a discrete subcategory, orthogonal
  lifts, and the comprehensive (initial, discrete opfibration)
  factorisation.
* [`lenses`] — delta lenses (functors with chosen lifts), their cells,
  tabulators, and enumeration of lens structures on a functor.
* [`coreflections`] — split coreflections, the twistedness property and its
  witnesses, and the pushout characterisation of twistedness.
* [`awfs`] — the `E_f` factorisation, the lift of a twisted coreflection
  against a delta lens (by direct formula and by universal property), and
  the algebra/coalgebra correspondences.
*/

pub mod awfs;
pub mod coreflections;
pub mod fincat;
pub mod lenses;
