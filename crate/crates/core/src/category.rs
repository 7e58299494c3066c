//! The two concrete categories the workbench operates in.
//!
//! `Direct` has finite relational structures as objects and embeddings as
//! morphisms. `Dual` is the opposite of the category of finite linear orders
//! and rigid surjections: its objects are order sizes, and a morphism A → B
//! is a rigid surjection from B's order onto A's order, composed in reverse.
//! In both categories every morphism is mono.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::relstruct::{self, Embedding, Structure};
use crate::rigidsurj::{self, RigidSurjection};

pub trait Category {
    type Obj: Clone + Eq + Ord + Debug;
    type Mor: Clone + Eq + Ord + Debug;

    /// The hom-set hom(a, b) in a fixed lexicographic order.
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Vec<Self::Mor>>;

    /// Composition g·f, defined when cod(f) = dom(g).
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;

    fn identity(&self, a: &Self::Obj) -> Self::Mor;

    /// All invertible self-morphisms of `a`.
    fn automorphisms(&self, a: &Self::Obj) -> Result<Vec<Self::Mor>>;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;

    fn cod(&self, f: &Self::Mor) -> Self::Obj;
}

/// Finite relational structures with embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Direct;

impl Category for Direct {
    type Obj = Structure;
    type Mor = Embedding;

    fn hom(&self, a: &Structure, b: &Structure) -> Result<Vec<Embedding>> {
        relstruct::enumerate_embeddings(a, b)
    }

    fn compose(&self, g: &Embedding, f: &Embedding) -> Result<Embedding> {
        relstruct::compose_embeddings(g, f)
    }

    fn identity(&self, a: &Structure) -> Embedding {
        Embedding::identity(a)
    }

    fn automorphisms(&self, a: &Structure) -> Result<Vec<Embedding>> {
        Ok(relstruct::automorphisms(a))
    }

    fn dom(&self, f: &Embedding) -> Structure {
        f.dom().clone()
    }

    fn cod(&self, f: &Embedding) -> Structure {
        f.cod().clone()
    }
}

/// The opposite of the category of finite linear orders and rigid
/// surjections. An object is the size of a linear order; a morphism
/// A → B is carried by a rigid surjection B ↠ A.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dual;

impl Category for Dual {
    type Obj = usize;
    type Mor = RigidSurjection;

    fn hom(&self, a: &usize, b: &usize) -> Result<Vec<RigidSurjection>> {
        if *a == 0 || *b == 0 {
            return Err(Error::Invalid {
                kind: "dual object",
                reason: "orders must be nonempty".to_string(),
            });
        }
        if b < a {
            return Ok(vec![]);
        }
        rigidsurj::enumerate_rigid_surjections(*b, *a)
    }

    // g·f in the opposite category is f ∘ g on the underlying surjections.
    fn compose(&self, g: &RigidSurjection, f: &RigidSurjection) -> Result<RigidSurjection> {
        rigidsurj::compose_rsurj(f, g)
    }

    fn identity(&self, a: &usize) -> RigidSurjection {
        RigidSurjection::identity(*a)
    }

    fn automorphisms(&self, a: &usize) -> Result<Vec<RigidSurjection>> {
        // the only rigid surjection n ↠ n is the identity
        Ok(vec![RigidSurjection::identity(*a)])
    }

    fn dom(&self, f: &RigidSurjection) -> usize {
        f.cod()
    }

    fn cod(&self, f: &RigidSurjection) -> usize {
        f.dom()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_hom_sets_are_rigid_surjections_backwards() {
        let d = Dual;
        assert_eq!(d.hom(&2, &4).unwrap().len(), 7); // S(4,2)
        assert_eq!(d.hom(&4, &2).unwrap().len(), 0);
        let id3 = d.identity(&3);
        let id2 = d.identity(&2);
        for f in d.hom(&2, &3).unwrap() {
            assert_eq!(d.compose(&id3, &f).unwrap(), f);
            assert_eq!(d.compose(&f, &id2).unwrap(), f);
            assert_eq!(d.dom(&f), 2);
            assert_eq!(d.cod(&f), 3);
        }
    }

    #[test]
    fn dual_composition_reverses() {
        let d = Dual;
        // w : B → C with |B| = 3, |C| = 5; f : A → B with |A| = 2
        for w in d.hom(&3, &5).unwrap() {
            for f in d.hom(&2, &3).unwrap() {
                let wf = d.compose(&w, &f).unwrap();
                assert_eq!(d.dom(&wf), 2);
                assert_eq!(d.cod(&wf), 5);
                // pointwise: (w·f)(x) = f(w(x)) on the surjection side
                for x in 0..5 {
                    assert_eq!(wf.apply(x), f.apply(w.apply(x)));
                }
            }
        }
    }

    #[test]
    fn direct_category_wraps_relstruct() {
        let c = Direct;
        let k2 = Structure::graph(2, &[(0, 1)]).unwrap();
        let k3 = Structure::graph(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(c.hom(&k2, &k3).unwrap().len(), 6);
        assert_eq!(c.automorphisms(&k2).unwrap().len(), 2);
    }
}
