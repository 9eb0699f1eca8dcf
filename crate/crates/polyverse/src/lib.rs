//! Finite-set models of polynomial functors and lenses.
//!
//! Everything is a table over ranked finite sets: a polynomial is its list of
//! direction counts, a lens is a forward table plus backward tables, and the
//! structural isomorphisms of the composition product, the tensor product,
//! and the up-arrow construction are computed lenses over explicit rankings.
//! On top of this sit distributors between composites, truncated universe
//! polynomials carrying partial monad structure, and a law engine that checks
//! the monad and distributive-law diagrams pointwise and reports minimal
//! counterexamples.

pub mod error;
pub mod finset;
pub mod poly;
pub mod monoidal;
pub mod uparrow;
pub mod universes;
pub mod distributor;
pub mod laws;
