//! Exact computational homological algebra for weak Hopf algebras and their
//! cleft extensions.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`], [`linalg`], [`tensor`] — exact scalars, deterministic linear
//!   algebra, quotient presentations, and multi-slot tensor bookkeeping.
//! * [`algebra`], [`weak_hopf`] — structure-constant (co)algebras, weak Hopf
//!   axioms, canonical projections and counital subalgebras.
//! * [`complex`] — chain complexes, total and mixed complexes, cyclic-type
//!   bicomplexes, filtrations and spectral sequences.
//! * [`hopf_homology`] — the small resolution of the source subalgebra and
//!   the induced (co)homology of a weak Hopf algebra with module
//!   coefficients.
//! * [`crossed`] — weak measures, cocycles, and crossed-product algebras
//!   with their cleft structure maps.
//! * [`cleft`] — the small mixed-size relative complexes computing the
//!   Hochschild (co)homology of a cleft extension, the comparison
//!   isomorphisms against the canonical complexes, cup/cap products, and the
//!   cyclic-type operators.
//! * [`builders`], [`instance`], [`report`] — canonical examples, the JSON
//!   instance format, and named check reporting.
//!
//! Everything is computed over an exact field; there are no floating-point
//! numbers and no tolerances anywhere in the crate.

pub mod algebra;
pub mod builders;
pub mod canonical;
pub mod cleft;
pub mod cleft_cochain;
pub mod complex;
pub mod crossed;
pub mod cyclic;
pub mod field;
pub mod hopf_homology;
pub mod instance;
pub mod linalg;
pub mod pairing;
pub mod presented;
pub mod report;
pub mod tensor;
pub mod weak_hopf;
