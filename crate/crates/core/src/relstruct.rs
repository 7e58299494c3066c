//! Finite relational structures, embeddings, induced substructures and
//! automorphisms: the object layer of the direct category.
//!
//! Universes are always `0..n-1`. Relations are stored as sorted tuple sets,
//! so equality of structures is plain componentwise equality. A structure may
//! carry a linear order; the order is a distinguished component rather than a
//! relation, and `order[x]` is the rank of the point `x` (so `x` precedes `y`
//! iff `order[x] < order[y]`). Embeddings between ordered structures must be
//! monotone with respect to the ranks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A relational signature: named relation symbols with positive arities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(String, usize)>", into = "Vec<(String, usize)>")]
pub struct Signature {
    relations: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(relations: Vec<(String, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (name, arity) in &relations {
            if *arity == 0 {
                return Err(Error::Invalid {
                    kind: "signature",
                    reason: format!("relation {name} has arity 0"),
                });
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Invalid {
                    kind: "signature",
                    reason: format!("duplicate relation name {name}"),
                });
            }
        }
        Ok(Signature { relations })
    }

    /// The empty signature (pure sets / linear orders).
    pub fn empty() -> Self {
        Signature { relations: vec![] }
    }

    /// A single binary relation with the given name.
    pub fn binary(name: &str) -> Self {
        Signature {
            relations: vec![(name.to_string(), 2)],
        }
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
    }
}

impl TryFrom<Vec<(String, usize)>> for Signature {
    type Error = Error;
    fn try_from(v: Vec<(String, usize)>) -> Result<Self> {
        Signature::new(v)
    }
}

impl From<Signature> for Vec<(String, usize)> {
    fn from(s: Signature) -> Self {
        s.relations
    }
}

/// A finite relational structure over universe `0..size-1`, optionally
/// carrying a linear order given as a rank vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStructure", into = "RawStructure")]
pub struct Structure {
    signature: Signature,
    size: usize,
    tuples: BTreeMap<String, BTreeSet<Vec<usize>>>,
    order: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawStructure {
    signature: Signature,
    size: usize,
    tuples: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<Vec<usize>>,
}

impl TryFrom<RawStructure> for Structure {
    type Error = Error;
    fn try_from(raw: RawStructure) -> Result<Self> {
        let tuples = raw
            .tuples
            .into_iter()
            .map(|(name, ts)| (name, ts.into_iter().collect()))
            .collect();
        Structure::new(raw.signature, raw.size, tuples, raw.order)
    }
}

impl From<Structure> for RawStructure {
    fn from(s: Structure) -> Self {
        RawStructure {
            signature: s.signature,
            size: s.size,
            tuples: s
                .tuples
                .into_iter()
                .map(|(name, ts)| (name, ts.into_iter().collect()))
                .collect(),
            order: s.order,
        }
    }
}

impl Structure {
    pub fn new(
        signature: Signature,
        size: usize,
        mut tuples: BTreeMap<String, BTreeSet<Vec<usize>>>,
        order: Option<Vec<usize>>,
    ) -> Result<Self> {
        for (name, arity) in signature.relations() {
            let ts = tuples.entry(name.clone()).or_default();
            for t in ts.iter() {
                if t.len() != *arity {
                    return Err(Error::Invalid {
                        kind: "structure",
                        reason: format!("tuple {t:?} has wrong arity for {name}"),
                    });
                }
                if t.iter().any(|&x| x >= size) {
                    return Err(Error::Invalid {
                        kind: "structure",
                        reason: format!("tuple {t:?} leaves the universe 0..{size}"),
                    });
                }
            }
        }
        if tuples.len() != signature.relations().len() {
            return Err(Error::Invalid {
                kind: "structure",
                reason: "tuples mention a relation missing from the signature".to_string(),
            });
        }
        if let Some(ord) = &order {
            if ord.len() != size {
                return Err(Error::Invalid {
                    kind: "structure",
                    reason: "order length differs from universe size".to_string(),
                });
            }
            let mut seen = vec![false; size];
            for &r in ord {
                if r >= size || seen[r] {
                    return Err(Error::Invalid {
                        kind: "structure",
                        reason: "order is not a permutation of 0..n-1".to_string(),
                    });
                }
                seen[r] = true;
            }
        }
        Ok(Structure {
            signature,
            size,
            tuples,
            order,
        })
    }

    /// The linear order `0 < 1 < ... < n-1` over the empty signature.
    pub fn linear_order(n: usize) -> Self {
        Structure {
            signature: Signature::empty(),
            size: n,
            tuples: BTreeMap::new(),
            order: Some((0..n).collect()),
        }
    }

    /// A loopless undirected graph; both orientations of every edge are stored.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut ts = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::Invalid {
                    kind: "structure",
                    reason: format!("loop at {a}"),
                });
            }
            ts.insert(vec![a, b]);
            ts.insert(vec![b, a]);
        }
        let tuples = BTreeMap::from([("E".to_string(), ts)]);
        Structure::new(Signature::binary("E"), n, tuples, None)
    }

    /// A structure with a single binary relation holding exactly `arcs`.
    pub fn binary_rel(name: &str, n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let ts = arcs.iter().map(|&(a, b)| vec![a, b]).collect();
        let tuples = BTreeMap::from([(name.to_string(), ts)]);
        Structure::new(Signature::binary(name), n, tuples, None)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tuples(&self, relation: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.tuples.get(relation)
    }

    pub fn all_tuples(&self) -> &BTreeMap<String, BTreeSet<Vec<usize>>> {
        &self.tuples
    }

    pub fn order(&self) -> Option<&[usize]> {
        self.order.as_deref()
    }

    pub fn has(&self, relation: &str, tuple: &[usize]) -> bool {
        self.tuples
            .get(relation)
            .is_some_and(|ts| ts.contains(tuple))
    }

    /// Returns a copy carrying the given order ranks.
    pub fn with_order(&self, order: Vec<usize>) -> Result<Self> {
        Structure::new(
            self.signature.clone(),
            self.size,
            self.tuples.clone(),
            Some(order),
        )
    }

    /// Returns a copy with the order component removed.
    pub fn without_order(&self) -> Self {
        let mut s = self.clone();
        s.order = None;
        s
    }
}

/// An embedding between structures over the same signature: an injective map
/// preserving and reflecting every relation, monotone whenever both sides
/// are ordered.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEmbedding", into = "RawEmbedding")]
pub struct Embedding {
    dom: Structure,
    cod: Structure,
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawEmbedding {
    dom: Structure,
    cod: Structure,
    map: Vec<usize>,
}

impl TryFrom<RawEmbedding> for Embedding {
    type Error = Error;
    fn try_from(raw: RawEmbedding) -> Result<Self> {
        Embedding::new(raw.dom, raw.cod, raw.map)
    }
}

impl From<Embedding> for RawEmbedding {
    fn from(e: Embedding) -> Self {
        RawEmbedding {
            dom: e.dom,
            cod: e.cod,
            map: e.map,
        }
    }
}

// Hom-class representatives are chosen lexicographically, so embeddings
// compare by map vector first.
impl PartialOrd for Embedding {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Embedding {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.map
            .cmp(&other.map)
            .then_with(|| self.dom.cmp(&other.dom))
            .then_with(|| self.cod.cmp(&other.cod))
    }
}

impl Embedding {
    pub fn new(dom: Structure, cod: Structure, map: Vec<usize>) -> Result<Self> {
        let e = Embedding { dom, cod, map };
        e.validate()?;
        Ok(e)
    }

    pub fn identity(a: &Structure) -> Self {
        Embedding {
            dom: a.clone(),
            cod: a.clone(),
            map: (0..a.size()).collect(),
        }
    }

    pub fn dom(&self) -> &Structure {
        &self.dom
    }

    pub fn cod(&self) -> &Structure {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.size() == self.cod.size()
    }

    fn validate(&self) -> Result<()> {
        if self.dom.signature() != self.cod.signature() {
            return Err(Error::SignatureMismatch(
                "embedding endpoints differ".to_string(),
            ));
        }
        if self.map.len() != self.dom.size() {
            return Err(Error::Invalid {
                kind: "embedding",
                reason: "map length differs from domain size".to_string(),
            });
        }
        let mut seen = BTreeSet::new();
        for &y in &self.map {
            if y >= self.cod.size() {
                return Err(Error::Invalid {
                    kind: "embedding",
                    reason: format!("target {y} leaves the codomain universe"),
                });
            }
            if !seen.insert(y) {
                return Err(Error::Invalid {
                    kind: "embedding",
                    reason: "map is not injective".to_string(),
                });
            }
        }
        let mut inverse = vec![usize::MAX; self.cod.size()];
        for (x, &y) in self.map.iter().enumerate() {
            inverse[y] = x;
        }
        for (name, _) in self.dom.signature().relations() {
            if let Some(ts) = self.dom.tuples(name) {
                for t in ts {
                    let image: Vec<usize> = t.iter().map(|&x| self.map[x]).collect();
                    if !self.cod.has(name, &image) {
                        return Err(Error::Invalid {
                            kind: "embedding",
                            reason: format!("relation {name} not preserved on {t:?}"),
                        });
                    }
                }
            }
            if let Some(ts) = self.cod.tuples(name) {
                for t in ts {
                    if t.iter().all(|&y| inverse[y] != usize::MAX) {
                        let preimage: Vec<usize> = t.iter().map(|&y| inverse[y]).collect();
                        if !self.dom.has(name, &preimage) {
                            return Err(Error::Invalid {
                                kind: "embedding",
                                reason: format!("relation {name} not reflected on {t:?}"),
                            });
                        }
                    }
                }
            }
        }
        if let (Some(od), Some(oc)) = (self.dom.order(), self.cod.order()) {
            for x in 0..self.dom.size() {
                for y in 0..self.dom.size() {
                    if od[x] < od[y] && oc[self.map[x]] >= oc[self.map[y]] {
                        return Err(Error::Invalid {
                            kind: "embedding",
                            reason: "map is not order-preserving".to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// All embeddings A ↪ B in lexicographic order of their map vectors.
pub fn enumerate_embeddings(a: &Structure, b: &Structure) -> Result<Vec<Embedding>> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(
            "enumerate_embeddings requires a common signature".to_string(),
        ));
    }
    let mut out = Vec::new();
    EmbSearch::new(a, b, None).run(&mut |m| {
        out.push(Embedding {
            dom: a.clone(),
            cod: b.clone(),
            map: m.to_vec(),
        });
        true
    });
    Ok(out)
}

/// The lexicographically least embedding A ↪ B, if any.
pub fn first_embedding(a: &Structure, b: &Structure) -> Result<Option<Embedding>> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(
            "first_embedding requires a common signature".to_string(),
        ));
    }
    let mut found = None;
    EmbSearch::new(a, b, None).run(&mut |m| {
        found = Some(Embedding {
            dom: a.clone(),
            cod: b.clone(),
            map: m.to_vec(),
        });
        false
    });
    Ok(found)
}

/// Returns true if the structures are isomorphic: equal sizes and some
/// embedding between them (bijective by size). Degree profiles prune the
/// search. Total on mismatched signatures (no embedding can exist).
pub fn is_isomorphic(a: &Structure, b: &Structure) -> bool {
    if a.signature() != b.signature() || a.size() != b.size() {
        return false;
    }
    if a.order().is_some() != b.order().is_some() {
        return false;
    }
    for (name, _) in a.signature().relations() {
        if a.tuples(name).map(|t| t.len()) != b.tuples(name).map(|t| t.len()) {
            return false;
        }
    }
    let pa = degree_profiles(a);
    let pb = degree_profiles(b);
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut found = false;
    EmbSearch::new(a, b, Some((&pa, &pb))).run(&mut |_| {
        found = true;
        false // stop at the first embedding
    });
    found
}

/// Per-point occurrence counts, one entry per (relation, argument position).
fn degree_profiles(s: &Structure) -> Vec<Vec<usize>> {
    let mut profiles = vec![Vec::new(); s.size()];
    for (name, arity) in s.signature().relations() {
        for pos in 0..*arity {
            let mut counts = vec![0usize; s.size()];
            if let Some(ts) = s.tuples(name) {
                for t in ts {
                    counts[t[pos]] += 1;
                }
            }
            for (x, c) in counts.into_iter().enumerate() {
                profiles[x].push(c);
            }
        }
    }
    profiles
}

/// Per-point degree profiles of the domain and codomain.
type Profiles<'a> = (&'a [Vec<usize>], &'a [Vec<usize>]);

struct EmbSearch<'a> {
    a: &'a Structure,
    b: &'a Structure,
    /// degree profiles; sound as a filter only for bijective searches
    profiles: Option<Profiles<'a>>,
    map: Vec<usize>,
    used: Vec<bool>,
    /// partial inverse of `map`; usize::MAX marks unassigned codomain points
    inverse: Vec<usize>,
    image: Vec<usize>, // scratch for tuple images
}

impl<'a> EmbSearch<'a> {
    fn new(a: &'a Structure, b: &'a Structure, profiles: Option<Profiles<'a>>) -> Self {
        EmbSearch {
            a,
            b,
            profiles,
            map: Vec::with_capacity(a.size()),
            used: vec![false; b.size()],
            inverse: vec![usize::MAX; b.size()],
            image: Vec::new(),
        }
    }

    /// Depth-first extension of the partial embedding; `visit` returns
    /// false to stop the whole search. Targets are tried in increasing
    /// order, so complete maps appear lexicographically.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let v = self.map.len();
        if v == self.a.size() {
            return visit(&self.map);
        }
        for y in 0..self.b.size() {
            if self.used[y] {
                continue;
            }
            if let Some((pa, pb)) = self.profiles {
                if pa[v] != pb[y] {
                    continue;
                }
            }
            self.map.push(y);
            self.used[y] = true;
            self.inverse[y] = v;
            if self.consistent_at(v) && !self.run(visit) {
                self.map.pop();
                self.used[y] = false;
                self.inverse[y] = usize::MAX;
                return false;
            }
            self.map.pop();
            self.used[y] = false;
            self.inverse[y] = usize::MAX;
        }
        true
    }

    /// Checks the embedding biconditional and order monotonicity for the
    /// tuples that involve the newest point `v`.
    fn consistent_at(&mut self, v: usize) -> bool {
        let prefix = self.map.len();
        if let (Some(od), Some(oc)) = (self.a.order(), self.b.order()) {
            let mv = self.map[v];
            for u in 0..prefix {
                if u == v {
                    continue;
                }
                if (od[u] < od[v]) != (oc[self.map[u]] < oc[mv]) {
                    return false;
                }
            }
        }
        for (name, _) in self.a.signature().relations() {
            if let Some(ts) = self.a.tuples(name) {
                for t in ts {
                    if !t.contains(&v) || t.iter().any(|&x| x >= prefix) {
                        continue;
                    }
                    self.image.clear();
                    self.image.extend(t.iter().map(|&x| self.map[x]));
                    if !self.b.has(name, &self.image) {
                        return false;
                    }
                }
            }
            let mv = self.map[v];
            if let Some(ts) = self.b.tuples(name) {
                for t in ts {
                    if !t.contains(&mv) || t.iter().any(|&y| self.inverse[y] == usize::MAX) {
                        continue;
                    }
                    self.image.clear();
                    self.image.extend(t.iter().map(|&y| self.inverse[y]));
                    if !self.a.has(name, &self.image) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The substructure of `b` induced by `subset`, with the universe relabeled
/// `0..|subset|-1` preserving the order of labels.
pub fn induced_substructure(b: &Structure, subset: &BTreeSet<usize>) -> Result<Structure> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let points: Vec<usize> = subset.iter().copied().collect();
    if *points.last().unwrap() >= b.size() {
        return Err(Error::Invalid {
            kind: "subset",
            reason: "subset leaves the universe".to_string(),
        });
    }
    let index_of = |x: usize| points.binary_search(&x).unwrap();
    let mut tuples = BTreeMap::new();
    for (name, _) in b.signature().relations() {
        let mut ts = BTreeSet::new();
        if let Some(orig) = b.tuples(name) {
            for t in orig {
                if t.iter().all(|x| subset.contains(x)) {
                    ts.insert(t.iter().map(|&x| index_of(x)).collect());
                }
            }
        }
        tuples.insert(name.clone(), ts);
    }
    let order = b.order().map(|ord| {
        let mut ranks: Vec<(usize, usize)> = points.iter().map(|&p| (ord[p], p)).collect();
        ranks.sort();
        let mut new_order = vec![0; points.len()];
        for (rank, (_, p)) in ranks.into_iter().enumerate() {
            new_order[index_of(p)] = rank;
        }
        new_order
    });
    Structure::new(b.signature().clone(), points.len(), tuples, order)
}

/// All subsets of `b`'s universe inducing a copy of `a`, in lexicographic
/// order of their sorted element lists.
pub fn substructure_copies(a: &Structure, b: &Structure) -> Result<Vec<BTreeSet<usize>>> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(
            "substructure_copies requires a common signature".to_string(),
        ));
    }
    let k = a.size();
    let mut out = Vec::new();
    if k == 0 || k > b.size() {
        return Ok(out);
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        let induced = induced_substructure(b, &set)?;
        if is_isomorphic(&induced, a) {
            out.push(set);
        }
        // next k-combination of 0..b.size() in lexicographic order
        let n = b.size();
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if subset[i] != i + n - k {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// All bijective self-embeddings of `a` (injective self-maps of a finite
/// structure are bijective), identity included.
pub fn automorphisms(a: &Structure) -> Vec<Embedding> {
    enumerate_embeddings(a, a).expect("a structure shares its own signature")
}

/// Composes embeddings: `g ∘ f`, defined when `cod(f) = dom(g)` as values.
pub fn compose_embeddings(g: &Embedding, f: &Embedding) -> Result<Embedding> {
    if f.cod() != g.dom() {
        return Err(Error::ComposeMismatch(
            "cod(f) differs from dom(g)".to_string(),
        ));
    }
    let map = f.map().iter().map(|&x| g.apply(x)).collect();
    Embedding::new(f.dom().clone(), g.cod().clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> Structure {
        Structure::graph(2, &[(0, 1)]).unwrap()
    }

    fn k3() -> Structure {
        Structure::graph(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn path3() -> Structure {
        Structure::graph(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn k2_into_k3_has_six_embeddings() {
        let embs = enumerate_embeddings(&k2(), &k3()).unwrap();
        assert_eq!(embs.len(), 6);
        // lexicographic by map vector
        let maps: Vec<&[usize]> = embs.iter().map(|e| e.map()).collect();
        let mut sorted = maps.clone();
        sorted.sort();
        assert_eq!(maps, sorted);
    }

    #[test]
    fn singletons_embed_everywhere() {
        let one = Structure::graph(1, &[]).unwrap();
        let b = path3();
        assert_eq!(enumerate_embeddings(&one, &b).unwrap().len(), 3);
    }

    #[test]
    fn no_edge_no_embedding() {
        let e2 = Structure::graph(2, &[]).unwrap();
        assert_eq!(enumerate_embeddings(&k2(), &e2).unwrap().len(), 0);
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let lo = Structure::linear_order(2);
        assert!(matches!(
            enumerate_embeddings(&k2(), &lo),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn induced_substructure_examples() {
        let sub = induced_substructure(&k3(), &BTreeSet::from([0, 1])).unwrap();
        assert_eq!(sub, k2());

        let sub = induced_substructure(&path3(), &BTreeSet::from([0, 2])).unwrap();
        assert_eq!(sub, Structure::graph(2, &[]).unwrap());

        let full = induced_substructure(&path3(), &BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(full, path3());

        assert!(matches!(
            induced_substructure(&k3(), &BTreeSet::new()),
            Err(Error::EmptySubset)
        ));
    }

    #[test]
    fn copies_of_k2_in_k3() {
        let copies = substructure_copies(&k2(), &k3()).unwrap();
        assert_eq!(copies.len(), 3);
        assert_eq!(copies[0], BTreeSet::from([0, 1]));
    }

    #[test]
    fn self_copy_and_missing_triangle() {
        let b = path3();
        assert_eq!(substructure_copies(&b, &b).unwrap().len(), 1);
        assert_eq!(substructure_copies(&k3(), &b).unwrap().len(), 0);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&k2()).len(), 2);
        assert_eq!(automorphisms(&path3()).len(), 2);
        let ordered_k2 = k2().with_order(vec![0, 1]).unwrap();
        assert_eq!(automorphisms(&ordered_k2).len(), 1);
    }

    #[test]
    fn automorphisms_contain_identity_and_compose() {
        let a = path3();
        let autos = automorphisms(&a);
        assert!(autos.contains(&Embedding::identity(&a)));
        for g in &autos {
            for f in &autos {
                let gf = compose_embeddings(g, f).unwrap();
                assert!(autos.contains(&gf));
            }
        }
    }

    #[test]
    fn composition_identity_laws() {
        let embs = enumerate_embeddings(&k2(), &k3()).unwrap();
        let id_b = Embedding::identity(&k3());
        let id_a = Embedding::identity(&k2());
        for f in &embs {
            assert_eq!(&compose_embeddings(&id_b, f).unwrap(), f);
            assert_eq!(&compose_embeddings(f, &id_a).unwrap(), f);
        }
    }

    #[test]
    fn composition_with_automorphisms_stays_valid() {
        let embs = enumerate_embeddings(&k2(), &k3()).unwrap();
        for g in automorphisms(&k3()) {
            for f in &embs {
                let gf = compose_embeddings(&g, f).unwrap();
                assert!(Embedding::new(gf.dom().clone(), gf.cod().clone(), gf.map().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn compose_mismatch_is_an_error() {
        let f = enumerate_embeddings(&k2(), &k3()).unwrap()[0].clone();
        assert!(compose_embeddings(&f, &f).is_err());
    }

    #[test]
    fn isomorphism_examples() {
        let relabeled = Structure::graph(3, &[(2, 1), (1, 0), (2, 0)]).unwrap();
        assert!(is_isomorphic(&k3(), &relabeled));
        assert!(!is_isomorphic(&k2(), &Structure::graph(2, &[]).unwrap()));
        let star = Structure::graph(3, &[(1, 0), (1, 2)]).unwrap();
        assert!(is_isomorphic(&path3(), &star));
    }

    #[test]
    fn emb_count_factors_through_copies_and_automorphisms() {
        let pairs = [
            (k2(), k3()),
            (k2(), path3()),
            (path3(), k3()),
            (Structure::graph(1, &[]).unwrap(), path3()),
        ];
        for (a, b) in pairs {
            let nemb = enumerate_embeddings(&a, &b).unwrap().len();
            let copies = substructure_copies(&a, &b).unwrap().len();
            let aut = automorphisms(&a).len();
            if nemb > 0 {
                assert_eq!(nemb, copies * aut);
            }
        }
    }

    #[test]
    fn ordered_embeddings_are_monotone() {
        let a = Structure::linear_order(2);
        let b = Structure::linear_order(4);
        let embs = enumerate_embeddings(&a, &b).unwrap();
        assert_eq!(embs.len(), 6); // C(4,2)
        for e in embs {
            assert!(e.map()[0] < e.map()[1]);
        }
    }

    #[test]
    fn structure_json_round_trip() {
        let s = k3().with_order(vec![0, 1, 2]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"signature\":[[\"E\",2]]"));
        let back: Structure = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);

        let fixed = r#"{"signature":[["E",2]],"size":3,"tuples":{"E":[[0,1],[1,0],[0,2],[2,0],[1,2],[2,1]]},"order":[0,1,2]}"#;
        let parsed: Structure = serde_json::from_str(fixed).unwrap();
        assert_eq!(parsed, s);
    }

    #[test]
    fn invalid_json_is_rejected() {
        let bad = r#"{"signature":[["E",2]],"size":2,"tuples":{"E":[[0,5]]}}"#;
        assert!(serde_json::from_str::<Structure>(bad).is_err());
        let bad_order = r#"{"signature":[],"size":2,"tuples":{},"order":[0,0]}"#;
        assert!(serde_json::from_str::<Structure>(bad_order).is_err());
    }
}
