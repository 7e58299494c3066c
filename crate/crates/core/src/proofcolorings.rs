//! Executable coloring constructions: the transformations between colorings
//! of hom(A,C) and colorings of hom(A,C)/~𝔊, and the two-coloring that
//! separates automorphism cosets. Each construction comes with the verifier
//! for its stated postcondition, so certificates can be recounted rather
//! than trusted.
//!
//! Color tokens may be structured (sets of colors, color × group-element
//! pairs); `normalized` renumbers them 0..k-1 when a plain coloring is
//! needed downstream.

use std::collections::BTreeSet;

use crate::category::Category;
use crate::error::{Error, Result};
use crate::quotients::{act_left, hom_classes, GroupFamily, HomClass};

/// A color: a plain integer or a structured token built from colors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColorToken {
    Int(usize),
    Set(BTreeSet<ColorToken>),
    Pair(Box<ColorToken>, Box<ColorToken>),
}

impl ColorToken {
    pub fn pair(a: ColorToken, b: ColorToken) -> Self {
        ColorToken::Pair(Box::new(a), Box::new(b))
    }
}

/// A total coloring of hom(A,C)/~𝔊, stored over the sorted class list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassColoring<M: Ord> {
    pub classes: Vec<HomClass<M>>,
    pub colors: Vec<ColorToken>,
}

/// A total coloring of a sorted list of morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorColoring<M: Ord> {
    pub domain: Vec<M>,
    pub colors: Vec<ColorToken>,
}

impl<M: Clone + Ord> ClassColoring<M> {
    pub fn new(classes: Vec<HomClass<M>>, colors: Vec<ColorToken>) -> Result<Self> {
        if classes.len() != colors.len() {
            return Err(Error::PartialColoring(
                "one color per class required".to_string(),
            ));
        }
        Ok(ClassColoring { classes, colors })
    }

    pub fn from_ints(classes: Vec<HomClass<M>>, colors: &[usize]) -> Result<Self> {
        let tokens = colors.iter().map(|&c| ColorToken::Int(c)).collect();
        ClassColoring::new(classes, tokens)
    }

    /// The color of the class containing `m`.
    pub fn color_of(&self, m: &M) -> Option<&ColorToken> {
        self.classes
            .iter()
            .position(|c| c.contains(m))
            .map(|i| &self.colors[i])
    }

    /// Tokens renumbered 0..k-1 by first occurrence; returns the plain
    /// coloring and k.
    pub fn normalized(&self) -> (Vec<usize>, usize) {
        normalize(&self.colors)
    }
}

impl<M: Clone + Ord> MorColoring<M> {
    pub fn new(domain: Vec<M>, colors: Vec<ColorToken>) -> Result<Self> {
        if domain.len() != colors.len() {
            return Err(Error::PartialColoring(
                "one color per morphism required".to_string(),
            ));
        }
        Ok(MorColoring { domain, colors })
    }

    pub fn color_of(&self, m: &M) -> Option<&ColorToken> {
        self.domain
            .binary_search(m)
            .ok()
            .map(|i| &self.colors[i])
    }

    pub fn normalized(&self) -> (Vec<usize>, usize) {
        normalize(&self.colors)
    }
}

fn normalize(tokens: &[ColorToken]) -> (Vec<usize>, usize) {
    let mut seen: Vec<&ColorToken> = Vec::new();
    let out = tokens
        .iter()
        .map(|t| {
            if let Some(i) = seen.iter().position(|s| *s == t) {
                i
            } else {
                seen.push(t);
                seen.len() - 1
            }
        })
        .collect();
    (out, seen.len())
}

/// Pulls a class coloring back to the hom-set: χ'(f) = χ(f/~𝔊).
pub fn quotient_coloring<C: Category>(
    _cat: &C,
    chi: &ClassColoring<C::Mor>,
) -> Result<MorColoring<C::Mor>> {
    let mut domain: Vec<C::Mor> = chi
        .classes
        .iter()
        .flat_map(|c| c.members().iter().cloned())
        .collect();
    domain.sort();
    let colors = domain
        .iter()
        .map(|m| {
            chi.color_of(m)
                .cloned()
                .ok_or_else(|| Error::PartialColoring("morphism outside every class".to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    MorColoring::new(domain, colors)
}

/// Pushes a hom-set coloring to classes by collecting the member colors:
/// χ'(f·G_A) = {χ(g) : g ∈ f·G_A}.
pub fn powerset_coloring<C: Category>(
    cat: &C,
    family: &GroupFamily<C>,
    chi: &MorColoring<C::Mor>,
) -> Result<ClassColoring<C::Mor>> {
    let first = chi
        .domain
        .first()
        .ok_or_else(|| Error::PartialColoring("empty coloring".to_string()))?;
    let a = cat.dom(first);
    let c = cat.cod(first);
    let full = cat.hom(&a, &c)?;
    if full != chi.domain {
        return Err(Error::PartialColoring(
            "coloring does not cover hom(A,C) exactly".to_string(),
        ));
    }
    let classes = hom_classes(cat, &a, &c, family)?;
    let colors = classes
        .iter()
        .map(|class| {
            let set: BTreeSet<ColorToken> = class
                .members()
                .iter()
                .map(|m| chi.color_of(m).cloned().unwrap())
                .collect();
            ColorToken::Set(set)
        })
        .collect();
    ClassColoring::new(classes, colors)
}

/// Refines a class coloring to the hom-set by tagging each morphism with
/// the unique group element connecting it to the canonical representative:
/// ξ(f) = (χ(f/~𝔊), α(f)) where f = rep·α(f).
pub fn factor_coloring<C: Category>(
    cat: &C,
    family: &GroupFamily<C>,
    chi: &ClassColoring<C::Mor>,
) -> Result<MorColoring<C::Mor>> {
    let first = chi
        .classes
        .first()
        .ok_or_else(|| Error::PartialColoring("empty coloring".to_string()))?;
    let a = cat.dom(first.representative());
    let group = family.resolve(cat, &a)?;
    let mut entries: Vec<(C::Mor, ColorToken)> = Vec::new();
    for (class, color) in chi.classes.iter().zip(&chi.colors) {
        let rep = class.representative();
        for member in class.members() {
            let mut alphas = group
                .iter()
                .enumerate()
                .filter(|(_, alpha)| cat.compose(rep, alpha).ok().as_ref() == Some(member));
            let (idx, _) = alphas.next().ok_or(Error::NonUniqueFactorization)?;
            if alphas.next().is_some() {
                return Err(Error::NonUniqueFactorization);
            }
            entries.push((
                member.clone(),
                ColorToken::pair(color.clone(), ColorToken::Int(idx)),
            ));
        }
    }
    entries.sort();
    let (domain, colors) = entries.into_iter().unzip();
    MorColoring::new(domain, colors)
}

/// The coset-separating 2-coloring: with H = ⟨G_A ∪ {α}⟩ acting on hom(A,C)
/// from the right, every orbit's lexicographic representative f gets
/// χ(f·G_A) = 0 and χ(f·α·G_A) = 1; every other class gets 0. On the
/// resulting coloring every w ∈ hom(A,C) sees both colors on w·classes(A,A).
pub fn orbit_two_coloring<C: Category>(
    cat: &C,
    a: &C::Obj,
    c: &C::Obj,
    family: &GroupFamily<C>,
    alpha: &C::Mor,
) -> Result<ClassColoring<C::Mor>> {
    let autos = cat.automorphisms(a)?;
    if !autos.contains(alpha) {
        return Err(Error::InadmissibleAutomorphism(
            "α is not an automorphism of A".to_string(),
        ));
    }
    let group = family.resolve(cat, a)?;
    if group.contains(alpha) {
        return Err(Error::InadmissibleAutomorphism(
            "α already lies in G_A".to_string(),
        ));
    }
    let homs = cat.hom(a, c)?;
    if homs.is_empty() {
        return Err(Error::Invalid {
            kind: "orbit coloring",
            reason: "hom(A,C) is empty".to_string(),
        });
    }

    // close G_A ∪ {α} under composition (finite, so inverses come for free)
    let mut subgroup: BTreeSet<C::Mor> = group.iter().cloned().collect();
    subgroup.insert(alpha.clone());
    loop {
        let mut fresh = Vec::new();
        for g in &subgroup {
            for h in &subgroup {
                let gh = cat.compose(g, h)?;
                if !subgroup.contains(&gh) {
                    fresh.push(gh);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        subgroup.extend(fresh);
    }

    let classes = hom_classes(cat, a, c, family)?;
    let mut colors = vec![ColorToken::Int(0); classes.len()];
    let class_index = |m: &C::Mor| classes.iter().position(|cl| cl.contains(m));

    let mut in_orbit = vec![false; homs.len()];
    for (i, f) in homs.iter().enumerate() {
        if in_orbit[i] {
            continue;
        }
        // f is the lexicographic minimum of its H-orbit
        for h in &subgroup {
            let fh = cat.compose(f, h)?;
            if let Ok(j) = homs.binary_search(&fh) {
                in_orbit[j] = true;
            }
        }
        let zero = class_index(f).ok_or_else(|| Error::Internal("class lookup".to_string()))?;
        let one_mor = cat.compose(f, alpha)?;
        let one = class_index(&one_mor)
            .ok_or_else(|| Error::Internal("class lookup".to_string()))?;
        if zero == one {
            return Err(Error::Internal(
                "f·G_A and f·α·G_A coincide although α ∉ G_A".to_string(),
            ));
        }
        colors[one] = ColorToken::Int(1);
    }
    ClassColoring::new(classes, colors)
}

/// Checks |χ'(w·hom(A,B))| = |χ(w·classes(A,B))| for every w ∈ hom(B,C).
pub fn verify_quotient_postcondition<C: Category>(
    cat: &C,
    family: &GroupFamily<C>,
    chi: &ClassColoring<C::Mor>,
    chi_mor: &MorColoring<C::Mor>,
    b: &C::Obj,
) -> Result<bool> {
    let first = chi
        .classes
        .first()
        .ok_or_else(|| Error::PartialColoring("empty coloring".to_string()))?;
    let a = cat.dom(first.representative());
    let c = cat.cod(first.representative());
    let classes_ab = hom_classes(cat, &a, b, family)?;
    let hom_ab = cat.hom(&a, b)?;
    for w in cat.hom(b, &c)? {
        let mut class_colors = BTreeSet::new();
        for cls in &classes_ab {
            let image = act_left(cat, &w, cls)?;
            class_colors.insert(chi.color_of(image.representative()).cloned());
        }
        let mut mor_colors = BTreeSet::new();
        for f in &hom_ab {
            let wf = cat.compose(&w, f)?;
            mor_colors.insert(chi_mor.color_of(&wf).cloned());
        }
        if class_colors.len() != mor_colors.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks, for every w ∈ hom(B,C), that the hom-set recount is bounded by
/// the class count: |χ(w·hom(A,B))| ≤ |χ'(w·classes(A,B))| · |G_A|.
pub fn verify_powerset_implication<C: Category>(
    cat: &C,
    family: &GroupFamily<C>,
    chi: &MorColoring<C::Mor>,
    chi_classes: &ClassColoring<C::Mor>,
    b: &C::Obj,
) -> Result<bool> {
    let first = chi
        .domain
        .first()
        .ok_or_else(|| Error::PartialColoring("empty coloring".to_string()))?;
    let a = cat.dom(first);
    let c = cat.cod(first);
    let group_size = family.resolve(cat, &a)?.len();
    let classes_ab = hom_classes(cat, &a, b, family)?;
    let hom_ab = cat.hom(&a, b)?;
    for w in cat.hom(b, &c)? {
        let mut token_count = BTreeSet::new();
        for cls in &classes_ab {
            let image = act_left(cat, &w, cls)?;
            token_count.insert(chi_classes.color_of(image.representative()).cloned());
        }
        let mut recount = BTreeSet::new();
        for f in &hom_ab {
            let wf = cat.compose(&w, f)?;
            recount.insert(chi.color_of(&wf).cloned());
        }
        if recount.len() > token_count.len() * group_size {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that ξ = factor_coloring(χ) turns a lower bound n for χ on
/// classes into the bound n·|G_A| on the hom-set: computes
/// n = min_w |χ(w·classes(A,B))| and verifies min_w |ξ(w·hom(A,B))| ≥ n·|G_A|.
pub fn verify_factor_lower_bound<C: Category>(
    cat: &C,
    family: &GroupFamily<C>,
    chi: &ClassColoring<C::Mor>,
    xi: &MorColoring<C::Mor>,
    b: &C::Obj,
) -> Result<bool> {
    let first = chi
        .classes
        .first()
        .ok_or_else(|| Error::PartialColoring("empty coloring".to_string()))?;
    let a = cat.dom(first.representative());
    let c = cat.cod(first.representative());
    let group_size = family.resolve(cat, &a)?.len();
    let classes_ab = hom_classes(cat, &a, b, family)?;
    let hom_ab = cat.hom(&a, b)?;
    let mut class_min = usize::MAX;
    let mut mor_min = usize::MAX;
    for w in cat.hom(b, &c)? {
        let mut class_colors = BTreeSet::new();
        for cls in &classes_ab {
            let image = act_left(cat, &w, cls)?;
            class_colors.insert(chi.color_of(image.representative()).cloned());
        }
        class_min = class_min.min(class_colors.len());
        let mut mor_colors = BTreeSet::new();
        for f in &hom_ab {
            let wf = cat.compose(&w, f)?;
            mor_colors.insert(xi.color_of(&wf).cloned());
        }
        mor_min = mor_min.min(mor_colors.len());
    }
    Ok(mor_min >= class_min.saturating_mul(group_size))
}

/// The postcondition of the coset-separating coloring: every w ∈ hom(A,C)
/// sees exactly two colors on w·classes(A,A).
pub fn verify_orbit_two_postcondition<C: Category>(
    cat: &C,
    a: &C::Obj,
    c: &C::Obj,
    family: &GroupFamily<C>,
    coloring: &ClassColoring<C::Mor>,
) -> Result<bool> {
    let classes_aa = hom_classes(cat, a, a, family)?;
    for w in cat.hom(a, c)? {
        let mut seen = BTreeSet::new();
        for cls in &classes_aa {
            let image = act_left(cat, &w, cls)?;
            seen.insert(coloring.color_of(image.representative()).cloned());
        }
        if seen.len() != 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Direct;
    use crate::relstruct::Structure;

    fn k2() -> Structure {
        Structure::graph(2, &[(0, 1)]).unwrap()
    }

    fn k3() -> Structure {
        Structure::graph(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn quotient_coloring_is_constant_on_classes() {
        let cat = Direct;
        let fam = GroupFamily::FullAutomorphism;
        let classes = hom_classes(&cat, &k2(), &k3(), &fam).unwrap();
        let chi = ClassColoring::from_ints(classes, &[0, 1, 2]).unwrap();
        let lifted = quotient_coloring(&cat, &chi).unwrap();
        assert_eq!(lifted.domain.len(), 6);
        for class in &chi.classes {
            let colors: BTreeSet<_> = class
                .members()
                .iter()
                .map(|m| lifted.color_of(m).unwrap().clone())
                .collect();
            assert_eq!(colors.len(), 1);
        }
        assert!(
            verify_quotient_postcondition(&cat, &fam, &chi, &lifted, &k3()).unwrap()
        );
    }

    #[test]
    fn constant_coloring_stays_constant() {
        let cat = Direct;
        let fam = GroupFamily::FullAutomorphism;
        let classes = hom_classes(&cat, &k2(), &k3(), &fam).unwrap();
        let chi = ClassColoring::from_ints(classes, &[0, 0, 0]).unwrap();
        let lifted = quotient_coloring(&cat, &chi).unwrap();
        let distinct: BTreeSet<_> = lifted.colors.iter().collect();
        assert_eq!(distinct.len(), 1);
    }

    #[test]
    fn powerset_tokens_collect_member_colors() {
        let cat = Direct;
        let fam = GroupFamily::FullAutomorphism;
        let homs = cat.hom(&k2(), &k3()).unwrap();
        // color one class injectively, everything else 0
        let colors: Vec<ColorToken> = (0..homs.len())
            .map(|i| ColorToken::Int(usize::from(i == 0)))
            .collect();
        let chi = MorColoring::new(homs.clone(), colors).unwrap();
        let pushed = powerset_coloring(&cat, &fam, &chi).unwrap();
        let sizes: Vec<usize> = pushed
            .colors
            .iter()
            .map(|t| match t {
                ColorToken::Set(s) => s.len(),
                _ => panic!("powerset tokens are sets"),
            })
            .collect();
        assert!(sizes.contains(&2)); // the class split by the coloring
        assert!(sizes.contains(&1));

        let constant = MorColoring::new(
            homs.clone(),
            vec![ColorToken::Int(0); homs.len()],
        )
        .unwrap();
        let pushed = powerset_coloring(&cat, &fam, &constant).unwrap();
        assert!(pushed.colors.iter().all(|t| match t {
            ColorToken::Set(s) => s.len() == 1,
            _ => false,
        }));
        assert!(verify_powerset_implication(&cat, &fam, &chi, &powerset_coloring(&cat, &fam, &chi).unwrap(), &k3()).unwrap());
    }

    #[test]
    fn factor_coloring_separates_group_elements() {
        let cat = Direct;
        let fam = GroupFamily::FullAutomorphism;
        let classes = hom_classes(&cat, &k2(), &k3(), &fam).unwrap();
        let chi = ClassColoring::from_ints(classes, &[0, 1, 2]).unwrap();
        let xi = factor_coloring(&cat, &fam, &chi).unwrap();
        let distinct: BTreeSet<_> = xi.colors.iter().collect();
        assert_eq!(distinct.len(), 6); // 3 classes × |Aut(K2)| = 2
        assert!(verify_factor_lower_bound(&cat, &fam, &chi, &xi, &k3()).unwrap());
    }

    #[test]
    fn factor_with_identity_family_is_the_same_coloring() {
        let cat = Direct;
        let fam = GroupFamily::IdentityOnly;
        let classes = hom_classes(&cat, &k2(), &k3(), &fam).unwrap();
        let ints: Vec<usize> = (0..classes.len()).map(|i| i % 2).collect();
        let chi = ClassColoring::from_ints(classes, &ints).unwrap();
        let xi = factor_coloring(&cat, &fam, &chi).unwrap();
        let (plain_xi, k_xi) = xi.normalized();
        let (plain_chi, k_chi) = chi.normalized();
        assert_eq!(k_xi, k_chi);
        assert_eq!(plain_xi, plain_chi); // α is always the identity
    }

    #[test]
    fn orbit_two_coloring_on_k2_in_k3() {
        let cat = Direct;
        let fam = GroupFamily::IdentityOnly;
        let swap = cat.automorphisms(&k2()).unwrap()[1].clone();
        let coloring = orbit_two_coloring(&cat, &k2(), &k3(), &fam, &swap).unwrap();
        assert!(
            verify_orbit_two_postcondition(&cat, &k2(), &k3(), &fam, &coloring).unwrap()
        );
    }

    #[test]
    fn orbit_two_coloring_on_edgeless_pair() {
        let cat = Direct;
        let fam = GroupFamily::IdentityOnly;
        let e2 = Structure::graph(2, &[]).unwrap();
        let e3 = Structure::graph(3, &[]).unwrap();
        let swap = cat.automorphisms(&e2).unwrap()[1].clone();
        let coloring = orbit_two_coloring(&cat, &e2, &e3, &fam, &swap).unwrap();
        assert!(
            verify_orbit_two_postcondition(&cat, &e2, &e3, &fam, &coloring).unwrap()
        );
    }

    #[test]
    fn orbit_two_coloring_with_an_explicit_subgroup() {
        // G = the rotation subgroup of Aut(E3), α = a transposition outside it
        let cat = Direct;
        let e3 = Structure::graph(3, &[]).unwrap();
        let e4 = Structure::graph(4, &[]).unwrap();
        let autos = cat.automorphisms(&e3).unwrap();
        let rotations: Vec<_> = autos
            .iter()
            .filter(|a| {
                let m = a.map();
                m == [0, 1, 2] || m == [1, 2, 0] || m == [2, 0, 1]
            })
            .cloned()
            .collect();
        let fam = GroupFamily::explicit(&cat, vec![(e3.clone(), rotations)]).unwrap();
        let alpha = autos.iter().find(|a| a.map() == [1, 0, 2]).unwrap();
        let coloring = orbit_two_coloring(&cat, &e3, &e4, &fam, alpha).unwrap();
        assert!(verify_orbit_two_postcondition(&cat, &e3, &e4, &fam, &coloring).unwrap());

        // a rotation is inadmissible: it lies in the family
        let rot = autos.iter().find(|a| a.map() == [1, 2, 0]).unwrap();
        assert!(matches!(
            orbit_two_coloring(&cat, &e3, &e4, &fam, rot),
            Err(Error::InadmissibleAutomorphism(_))
        ));
    }

    #[test]
    fn ordered_a_has_no_admissible_alpha() {
        let cat = Direct;
        let ordered = k2().with_order(vec![0, 1]).unwrap();
        let id = cat.identity(&ordered);
        // the only automorphism is the identity, which lies in every family
        assert!(matches!(
            orbit_two_coloring(&cat, &ordered, &k3().with_order(vec![0, 1, 2]).unwrap(), &GroupFamily::IdentityOnly, &id),
            Err(Error::InadmissibleAutomorphism(_))
        ));
    }

    #[test]
    fn normalization_renumbers_by_first_occurrence() {
        let tokens = vec![
            ColorToken::Int(7),
            ColorToken::Int(3),
            ColorToken::Int(7),
            ColorToken::pair(ColorToken::Int(0), ColorToken::Int(1)),
        ];
        let (plain, k) = normalize(&tokens);
        assert_eq!(plain, vec![0, 1, 0, 2]);
        assert_eq!(k, 3);
    }
}
