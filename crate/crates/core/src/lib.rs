//! A finite-scale workbench for structural Ramsey theory.
//!
//! The crate implements the combinatorial calculus behind "direct" and dual
//! Ramsey statements at desk scale:
//!
//! * [`relstruct`]: finite relational structures, embeddings, substructures
//!   and automorphisms (the object layer of the direct category);
//! * [`rigidsurj`]: rigid surjections between finite linear orders (the
//!   morphism layer of the dual category) together with the canonical
//!   surjections, prime extensions and the restriction map φ;
//! * [`paramwords`]: parameter words, the substitution monoid, partial
//!   substitution and the correspondence with rigid surjections;
//! * [`category`]: the two concrete categories the workbench operates in;
//! * [`quotients`]: group families 𝔊 and hom-set quotients hom(A,B)/~𝔊;
//! * [`arrowcheck`]: exhaustive and backtracking decision of finite Ramsey
//!   arrows with counterexample certificates;
//! * [`proofcolorings`]: executable coloring constructions that transform
//!   arrow certificates between the quotient and plain hom-set views;
//! * [`fraisse`]: finite enumerated approximants of Fraïssé limits with
//!   strongly amalgamable ages and natural one-point extensions;
//! * [`approx`]: approximation schemes (F, Φ, ι), morphism lifts and the
//!   ⋆-composition, with exhaustive identity verification;
//! * [`selftest`]: named suites mirroring the invariants of every module.
//!
//! Everything is deterministic: enumerations are lexicographic, searches
//! explore a fixed order, and identical inputs produce identical outputs.

pub mod approx;
pub mod arrowcheck;
pub mod category;
pub mod error;
pub mod fraisse;
pub mod paramwords;
pub mod proofcolorings;
pub mod quotients;
pub mod relstruct;
pub mod rigidsurj;
pub mod selftest;

pub use error::{Error, Result};
