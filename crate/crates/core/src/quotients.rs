//! Group families 𝔊 = (G_A) and hom-set quotients hom(A,B)/~𝔊.
//!
//! Two morphisms f, g : A → B are equivalent when f = g·α for some α ∈ G_A.
//! A class is held by its canonical representative, the lexicographically
//! least member, so class identity is stable across runs.
//!
//! Under the full automorphism family, classes of embeddings correspond
//! one-to-one with induced copies of A in B: a copy is identified with the
//! class of embeddings onto it. Coloring copies and coloring classes are
//! therefore the same thing here.

use serde::Serialize;

use crate::category::Category;
use crate::error::{Error, Result};

/// A choice of subgroup G_A ≤ Aut(A) per object.
#[derive(Debug, PartialEq, Eq)]
pub enum GroupFamily<C: Category> {
    /// G_A = {id}: quotients are singletons (embedding degrees).
    IdentityOnly,
    /// G_A = Aut(A) (structural degrees).
    FullAutomorphism,
    /// Hand-picked subgroups for selected objects.
    Explicit(Vec<(C::Obj, Vec<C::Mor>)>),
}

// hand-rolled so that Clone is not required of the category marker itself
impl<C: Category> Clone for GroupFamily<C> {
    fn clone(&self) -> Self {
        match self {
            GroupFamily::IdentityOnly => GroupFamily::IdentityOnly,
            GroupFamily::FullAutomorphism => GroupFamily::FullAutomorphism,
            GroupFamily::Explicit(entries) => GroupFamily::Explicit(entries.clone()),
        }
    }
}

impl<C: Category> GroupFamily<C> {
    /// Builds an explicit family, validating that every entry is a subgroup
    /// of the object's automorphism group: identity present, closed under
    /// composition and inverses.
    pub fn explicit(cat: &C, entries: Vec<(C::Obj, Vec<C::Mor>)>) -> Result<Self> {
        for (obj, members) in &entries {
            let autos = cat.automorphisms(obj)?;
            let id = cat.identity(obj);
            if !members.contains(&id) {
                return Err(Error::NotASubgroup("identity missing".to_string()));
            }
            for m in members {
                if !autos.contains(m) {
                    return Err(Error::NotASubgroup(
                        "member is not an automorphism".to_string(),
                    ));
                }
                if !members.iter().any(|n| {
                    cat.compose(m, n).map(|c| c == id).unwrap_or(false)
                }) {
                    return Err(Error::NotASubgroup("inverse missing".to_string()));
                }
                for n in members {
                    let mn = cat.compose(m, n)?;
                    if !members.contains(&mn) {
                        return Err(Error::NotASubgroup(
                            "not closed under composition".to_string(),
                        ));
                    }
                }
            }
        }
        Ok(GroupFamily::Explicit(entries))
    }

    /// The group G_A for the given object, sorted.
    pub fn resolve(&self, cat: &C, a: &C::Obj) -> Result<Vec<C::Mor>> {
        let mut g = match self {
            GroupFamily::IdentityOnly => vec![cat.identity(a)],
            GroupFamily::FullAutomorphism => cat.automorphisms(a)?,
            GroupFamily::Explicit(entries) => entries
                .iter()
                .find(|(obj, _)| obj == a)
                .map(|(_, members)| members.clone())
                .ok_or(Error::MissingGroupEntry)?,
        };
        g.sort();
        g.dedup();
        Ok(g)
    }

    /// A short stable name used in query echoes.
    pub fn tag(&self) -> &'static str {
        match self {
            GroupFamily::IdentityOnly => "identity",
            GroupFamily::FullAutomorphism => "automorphism",
            GroupFamily::Explicit(_) => "explicit",
        }
    }
}

/// An equivalence class f·G_A, stored as its sorted member list with the
/// least member as representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HomClass<M: Ord> {
    representative: M,
    members: Vec<M>,
}

impl<M: Clone + Ord> HomClass<M> {
    fn from_members(mut members: Vec<M>) -> Self {
        members.sort();
        members.dedup();
        HomClass {
            representative: members[0].clone(),
            members,
        }
    }

    pub fn representative(&self) -> &M {
        &self.representative
    }

    pub fn members(&self) -> &[M] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a class always contains its representative
    }

    pub fn contains(&self, m: &M) -> bool {
        self.members.binary_search(m).is_ok()
    }
}

/// The partition hom(A,B)/~𝔊, classes sorted by representative.
pub fn hom_classes<C: Category>(
    cat: &C,
    a: &C::Obj,
    b: &C::Obj,
    family: &GroupFamily<C>,
) -> Result<Vec<HomClass<C::Mor>>> {
    let group = family.resolve(cat, a)?;
    let homs = cat.hom(a, b)?;
    let mut classes: Vec<HomClass<C::Mor>> = Vec::new();
    let mut assigned = vec![false; homs.len()];
    for (i, f) in homs.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let mut members = Vec::with_capacity(group.len());
        for alpha in &group {
            members.push(cat.compose(f, alpha)?);
        }
        let class = HomClass::from_members(members);
        for m in class.members() {
            if let Ok(j) = homs.binary_search(m) {
                assigned[j] = true;
            } else {
                return Err(Error::Internal(
                    "orbit member escaped the hom-set".to_string(),
                ));
            }
        }
        classes.push(class);
    }
    classes.sort();
    Ok(classes)
}

/// Left action of w : B → C on a class over (A, B): the class of
/// w·representative, computed memberwise. Well-defined because the classes
/// are right orbits.
pub fn act_left<C: Category>(
    cat: &C,
    w: &C::Mor,
    class: &HomClass<C::Mor>,
) -> Result<HomClass<C::Mor>> {
    let members = class
        .members()
        .iter()
        .map(|m| cat.compose(w, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomClass::from_members(members))
}

/// True when every class of hom(A,B)/~𝔊 has exactly |G_A| members, the
/// class-size law for categories with mono morphisms. Vacuously true when
/// the hom-set is empty.
pub fn class_size_law<C: Category>(
    cat: &C,
    a: &C::Obj,
    b: &C::Obj,
    family: &GroupFamily<C>,
) -> Result<bool> {
    let group = family.resolve(cat, a)?;
    let classes = hom_classes(cat, a, b, family)?;
    Ok(classes.iter().all(|c| c.len() == group.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{Direct, Dual};
    use crate::relstruct::Structure;

    fn k2() -> Structure {
        Structure::graph(2, &[(0, 1)]).unwrap()
    }

    fn k3() -> Structure {
        Structure::graph(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn k2_in_k3_has_three_classes_of_two() {
        let classes = hom_classes(&Direct, &k2(), &k3(), &GroupFamily::FullAutomorphism).unwrap();
        assert_eq!(classes.len(), 3);
        assert!(classes.iter().all(|c| c.len() == 2));
        // sorted by representative
        for pair in classes.windows(2) {
            assert!(pair[0].representative() < pair[1].representative());
        }
    }

    #[test]
    fn identity_family_gives_singletons() {
        let classes = hom_classes(&Direct, &k2(), &k3(), &GroupFamily::IdentityOnly).unwrap();
        assert_eq!(classes.len(), 6);
        assert!(classes.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn ordered_objects_are_rigid() {
        let a = k2().with_order(vec![0, 1]).unwrap();
        let b = k3().with_order(vec![0, 1, 2]).unwrap();
        let classes = hom_classes(&Direct, &a, &b, &GroupFamily::FullAutomorphism).unwrap();
        assert!(classes.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn act_left_is_independent_of_representatives() {
        let cat = Direct;
        let classes = hom_classes(&cat, &k2(), &k3(), &GroupFamily::FullAutomorphism).unwrap();
        for w in cat.automorphisms(&k3()).unwrap() {
            for class in &classes {
                let acted = act_left(&cat, &w, class).unwrap();
                for member in class.members() {
                    let direct = cat.compose(&w, member).unwrap();
                    assert!(acted.contains(&direct));
                }
                assert_eq!(acted.len(), class.len()); // w is mono
            }
        }
    }

    #[test]
    fn act_left_with_identity_fixes_classes() {
        let cat = Direct;
        let classes = hom_classes(&cat, &k2(), &k3(), &GroupFamily::FullAutomorphism).unwrap();
        let id = cat.identity(&k3());
        for class in &classes {
            assert_eq!(&act_left(&cat, &id, class).unwrap(), class);
        }
    }

    #[test]
    fn class_size_law_on_graphs_and_duals() {
        assert!(class_size_law(&Direct, &k2(), &k3(), &GroupFamily::FullAutomorphism).unwrap());
        assert!(class_size_law(&Direct, &k2(), &k3(), &GroupFamily::IdentityOnly).unwrap());
        assert!(class_size_law(&Dual, &2, &4, &GroupFamily::IdentityOnly).unwrap());
    }

    #[test]
    fn explicit_family_is_validated() {
        let cat = Direct;
        let autos = cat.automorphisms(&k2()).unwrap();
        let ok = GroupFamily::explicit(&cat, vec![(k2(), autos.clone())]);
        assert!(ok.is_ok());

        let missing_id = GroupFamily::explicit(&cat, vec![(k2(), vec![autos[1].clone()])]);
        assert!(missing_id.is_err());

        let fam = ok.unwrap();
        assert!(matches!(
            fam.resolve(&cat, &k3()),
            Err(Error::MissingGroupEntry)
        ));
    }

    #[test]
    fn explicit_proper_subgroup_partitions_into_its_cosets() {
        // the rotation subgroup of Aut(E3) acting on hom(E3, E4)
        let cat = Direct;
        let e3 = Structure::graph(3, &[]).unwrap();
        let e4 = Structure::graph(4, &[]).unwrap();
        let autos = cat.automorphisms(&e3).unwrap();
        assert_eq!(autos.len(), 6);
        let rotations: Vec<_> = autos
            .iter()
            .filter(|a| {
                let m = a.map();
                m == [0, 1, 2] || m == [1, 2, 0] || m == [2, 0, 1]
            })
            .cloned()
            .collect();
        let fam = GroupFamily::explicit(&cat, vec![(e3.clone(), rotations)]).unwrap();
        let classes = hom_classes(&cat, &e3, &e4, &fam).unwrap();
        assert_eq!(classes.len(), 8); // 24 embeddings in cosets of size 3
        assert!(classes.iter().all(|c| c.len() == 3));
        assert!(class_size_law(&cat, &e3, &e4, &fam).unwrap());

        // a transposition with the identity is also a subgroup; a lone
        // transposition is not
        let swap01 = autos.iter().find(|a| a.map() == [1, 0, 2]).unwrap().clone();
        let id = cat.identity(&e3);
        assert!(GroupFamily::explicit(&cat, vec![(e3.clone(), vec![id, swap01.clone()])]).is_ok());
        assert!(GroupFamily::explicit(&cat, vec![(e3.clone(), vec![swap01])]).is_err());
    }

    #[test]
    fn equivalence_relation_sanity() {
        // reflexive, symmetric, transitive on a small instance, by direct check
        let cat = Direct;
        let family = GroupFamily::FullAutomorphism;
        let homs = cat.hom(&k2(), &k3()).unwrap();
        let classes = hom_classes(&cat, &k2(), &k3(), &family).unwrap();
        let class_of = |f: &_| classes.iter().position(|c| c.contains(f)).unwrap();
        for f in &homs {
            assert_eq!(class_of(f), class_of(f));
            for g in &homs {
                if class_of(f) == class_of(g) {
                    assert_eq!(class_of(g), class_of(f));
                    for h in &homs {
                        if class_of(g) == class_of(h) {
                            assert_eq!(class_of(f), class_of(h));
                        }
                    }
                }
            }
        }
        // every morphism is in exactly one class
        let total: usize = classes.iter().map(|c| c.len()).sum();
        assert_eq!(total, homs.len());
    }
}
