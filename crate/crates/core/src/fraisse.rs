//! Finite enumerated approximants of Fraïssé limits with strongly
//! amalgamable ages: random graph, random digraph, random tournament and
//! random poset. Stages are built deterministically by realizing one-point
//! extension demands in lexicographic order, so a stage is a reproducible
//! fixture rather than a random sample. The module also provides the
//! natural one-point extension functors J and strong amalgamation.
//!
//! Conventions: graphs store both orientations of each edge; digraphs are
//! loopless and may carry both arcs of a pair; tournaments store the arc
//! winner → loser; posets store the strict order x < y as (x, y).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relstruct::{compose_embeddings, induced_substructure, Embedding, Structure};

const DEFAULT_STAGE_CAP: usize = 2048;

/// A strongly amalgamable age supported at finite stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Age {
    Graph,
    Digraph,
    Tournament,
    Poset,
}

impl Age {
    pub fn parse(name: &str) -> Result<Age> {
        match name {
            "graph" => Ok(Age::Graph),
            "digraph" => Ok(Age::Digraph),
            "tournament" => Ok(Age::Tournament),
            "poset" => Ok(Age::Poset),
            other => Err(Error::UnsupportedAge(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Age::Graph => "graph",
            Age::Digraph => "digraph",
            Age::Tournament => "tournament",
            Age::Poset => "poset",
        }
    }

    pub fn relation(&self) -> &'static str {
        match self {
            Age::Poset => "R",
            _ => "E",
        }
    }

    /// Membership of a structure in the age; the order component, if any,
    /// is ignored.
    pub fn member(&self, s: &Structure) -> bool {
        let rel = self.relation();
        if s.signature().relations() != [(rel.to_string(), 2)] {
            return false;
        }
        let ts = match s.tuples(rel) {
            Some(ts) => ts,
            None => return false,
        };
        let has = |a: usize, b: usize| ts.contains(&vec![a, b]);
        if ts.iter().any(|t| t[0] == t[1]) {
            return false; // loopless in every supported age
        }
        match self {
            Age::Graph => ts.iter().all(|t| has(t[1], t[0])),
            Age::Digraph => true,
            Age::Tournament => {
                for a in 0..s.size() {
                    for b in (a + 1)..s.size() {
                        if has(a, b) == has(b, a) {
                            return false; // exactly one arc per pair
                        }
                    }
                }
                true
            }
            Age::Poset => {
                for t in ts {
                    if has(t[1], t[0]) {
                        return false; // antisymmetry
                    }
                }
                for x in ts.clone() {
                    for y in ts {
                        if x[1] == y[0] && !has(x[0], y[1]) {
                            return false; // transitivity
                        }
                    }
                }
                true
            }
        }
    }

    /// All labeled age members on `0..n-1`, in a fixed lexicographic order
    /// of their arc sets.
    pub fn labeled_members(&self, n: usize) -> Vec<Structure> {
        let pairs: Vec<(usize, usize)> = match self {
            Age::Graph | Age::Tournament => (0..n)
                .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
                .collect(),
            Age::Digraph | Age::Poset => (0..n)
                .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
                .collect(),
        };
        let mut out = Vec::new();
        for mask in 0u64..(1 << pairs.len()) {
            let mut arcs = Vec::new();
            for (i, &(a, b)) in pairs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    match self {
                        Age::Graph => {
                            arcs.push((a, b));
                            arcs.push((b, a));
                        }
                        Age::Tournament => arcs.push((a, b)),
                        Age::Digraph | Age::Poset => arcs.push((a, b)),
                    }
                } else if *self == Age::Tournament {
                    arcs.push((b, a));
                }
            }
            let s = Structure::binary_rel(self.relation(), n, &arcs).unwrap();
            if self.member(&s) {
                out.push(s);
            }
        }
        out
    }
}

/// How a demanded point relates to one existing point.
type PatternCode = u8;

fn codes_per_point(age: Age) -> u8 {
    match age {
        Age::Graph => 2,      // nonadjacent / adjacent
        Age::Tournament => 2, // u beats x / x beats u
        Age::Poset => 3,      // incomparable / x < u / u < x
        Age::Digraph => 4,    // none / x→u / u→x / both
    }
}

fn code_arcs(age: Age, code: PatternCode, x: usize, u: usize) -> Vec<(usize, usize)> {
    match (age, code) {
        (Age::Graph, 1) => vec![(x, u), (u, x)],
        (Age::Tournament, 0) => vec![(u, x)],
        (Age::Tournament, 1) => vec![(x, u)],
        (Age::Poset, 1) => vec![(x, u)],
        (Age::Poset, 2) => vec![(u, x)],
        (Age::Digraph, 1) => vec![(x, u)],
        (Age::Digraph, 2) => vec![(u, x)],
        (Age::Digraph, 3) => vec![(x, u), (u, x)],
        _ => vec![],
    }
}

/// A one-point extension demand: a new point relating to `points[i]` as
/// prescribed by `codes[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Demand {
    points: Vec<usize>,
    codes: Vec<PatternCode>,
}

impl Demand {
    /// The structure on points ∪ {x} the demand describes, with x last.
    fn as_structure(&self, age: Age, stage: &Structure) -> Structure {
        let rel = age.relation();
        let a = self.points.len();
        let index_of = |p: usize| self.points.binary_search(&p).unwrap();
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        if let Some(ts) = stage.tuples(rel) {
            for t in ts {
                if self.points.contains(&t[0]) && self.points.contains(&t[1]) {
                    arcs.push((index_of(t[0]), index_of(t[1])));
                }
            }
        }
        for (i, &code) in self.codes.iter().enumerate() {
            arcs.extend(code_arcs(age, code, a, i));
        }
        Structure::binary_rel(rel, a + 1, &arcs).unwrap()
    }

    fn consistent(&self, age: Age, stage: &Structure) -> bool {
        age.member(&self.as_structure(age, stage))
    }

    /// Does `y` already relate to every demanded point exactly as required?
    fn realized_by(&self, age: Age, stage: &Structure, y: usize) -> bool {
        if self.points.contains(&y) {
            return false;
        }
        let rel = age.relation();
        for (i, &u) in self.points.iter().enumerate() {
            let want = code_arcs(age, self.codes[i], usize::MAX, u);
            let fwd = want.iter().any(|&(p, _)| p == usize::MAX);
            let bwd = want.iter().any(|&(_, q)| q == usize::MAX);
            if stage.has(rel, &[y, u]) != fwd || stage.has(rel, &[u, y]) != bwd {
                return false;
            }
        }
        true
    }

    fn realized(&self, age: Age, stage: &Structure) -> bool {
        (0..stage.size()).any(|y| self.realized_by(age, stage, y))
    }
}

/// Sorted subsets of `base` of the given size, lexicographically.
fn subsets(base: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(base: &[usize], size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in from..base.len() {
            cur.push(base[i]);
            rec(base, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(base, size, 0, &mut current, &mut out);
    out
}

fn all_demands(age: Age, stage: &Structure, base: &[usize], max_arity: usize) -> Vec<Demand> {
    let mut out = Vec::new();
    let codes = codes_per_point(age);
    for arity in 1..=max_arity.min(base.len()) {
        for points in subsets(base, arity) {
            let mut pattern = vec![0 as PatternCode; arity];
            loop {
                let demand = Demand {
                    points: points.clone(),
                    codes: pattern.clone(),
                };
                if demand.consistent(age, stage) {
                    out.push(demand);
                }
                // next pattern in lexicographic order
                let mut pos = arity;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    if pattern[pos] + 1 < codes {
                        pattern[pos] += 1;
                        break;
                    }
                    pattern[pos] = 0;
                }
                if pattern.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
    }
    out
}

/// A finite stage of an enumerated Fraïssé approximant: the structure's
/// order is the identity enumeration, and `born[p]` records the round in
/// which point p was created.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratedStructure {
    pub structure: Structure,
    pub stage_meta: StageMeta,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageMeta {
    pub age: Age,
    pub rounds: usize,
    pub seed_size: usize,
    pub born: Vec<usize>,
}

impl EnumeratedStructure {
    pub fn validate(&self) -> Result<()> {
        let s = &self.structure;
        if s.order() != Some(&(0..s.size()).collect::<Vec<_>>()[..]) {
            return Err(Error::Invalid {
                kind: "enumerated structure",
                reason: "order must be the identity enumeration".to_string(),
            });
        }
        if !self.stage_meta.age.member(s) {
            return Err(Error::AgeViolation(format!(
                "stage is not a {}",
                self.stage_meta.age.name()
            )));
        }
        if self.stage_meta.born.len() != s.size() {
            return Err(Error::Invalid {
                kind: "enumerated structure",
                reason: "one birth round per point required".to_string(),
            });
        }
        Ok(())
    }

    /// Points present before the given round.
    fn born_before(&self, round: usize) -> Vec<usize> {
        self.stage_meta
            .born
            .iter()
            .enumerate()
            .filter(|(_, &b)| b < round)
            .map(|(p, _)| p)
            .collect()
    }
}

/// Builds a stage deterministically: the seed is the edgeless/empty-relation
/// structure on `seed_size` points, and each round realizes, in
/// lexicographic order, every demand of arity ≤ rounds over the points of
/// the previous round, adding one fresh point per unrealized demand.
pub fn saturate_stage(age: Age, rounds: usize, seed_size: usize) -> Result<EnumeratedStructure> {
    saturate_stage_with_cap(age, rounds, seed_size, DEFAULT_STAGE_CAP)
}

pub fn saturate_stage_with_cap(
    age: Age,
    rounds: usize,
    seed_size: usize,
    cap: usize,
) -> Result<EnumeratedStructure> {
    let rel = age.relation();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    if age == Age::Tournament {
        for a in 0..seed_size {
            for b in (a + 1)..seed_size {
                arcs.push((a, b)); // seed: lower index beats higher
            }
        }
    }
    let mut size = seed_size;
    let mut born = vec![0usize; seed_size];

    let build = |size: usize, arcs: &[(usize, usize)]| -> Result<Structure> {
        Structure::binary_rel(rel, size, arcs)?.with_order((0..size).collect())
    };

    for round in 1..=rounds {
        let stage = build(size, &arcs)?;
        if !age.member(&stage) {
            return Err(Error::AgeViolation(format!(
                "stage left the age before round {round}"
            )));
        }
        let base: Vec<usize> = (0..size).filter(|&p| born[p] < round).collect();
        for demand in all_demands(age, &stage, &base, rounds) {
            let current = build(size, &arcs)?;
            if demand.realized(age, &current) {
                continue;
            }
            if size + 1 > cap {
                return Err(Error::CapExceeded {
                    what: "stage size",
                    required: (size + 1) as u128,
                    cap: cap as u128,
                });
            }
            let x = size;
            for (i, &u) in demand.points.iter().enumerate() {
                arcs.extend(code_arcs(age, demand.codes[i], x, u));
            }
            if age == Age::Tournament {
                for w in 0..size {
                    if !demand.points.contains(&w) {
                        arcs.push((w, x)); // unconstrained pairs: existing beats new
                    }
                }
            }
            size += 1;
            born.push(round);
            if age == Age::Poset {
                arcs = transitive_closure(size, &arcs);
            }
        }
    }

    let structure = build(size, &arcs)?;
    let stage = EnumeratedStructure {
        structure,
        stage_meta: StageMeta {
            age,
            rounds,
            seed_size,
            born,
        },
    };
    stage.validate()?;
    Ok(stage)
}

fn transitive_closure(n: usize, arcs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut rel = vec![false; n * n];
    for &(a, b) in arcs {
        rel[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if rel[i * n + k] {
                for j in 0..n {
                    if rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rel[i * n + j] {
                out.push((i, j));
            }
        }
    }
    out
}

/// True when every age-consistent one-point extension demand over at most
/// `level` points of the stage's pre-final-round base is realized inside
/// the stage.
pub fn check_extension_axioms(stage: &EnumeratedStructure, level: usize) -> Result<bool> {
    stage.validate()?;
    if level == 0 {
        return Ok(true);
    }
    let base = stage.born_before(stage.stage_meta.rounds.max(1));
    let age = stage.stage_meta.age;
    for demand in all_demands(age, &stage.structure, &base, level) {
        if !demand.realized(age, &stage.structure) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The natural one-point extension functor of an age.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionKind {
    /// A new vertex with no arcs (graphs, digraphs).
    IsolatedVertex,
    /// A new element that arrows (tournaments) or dominates (posets)
    /// every other element.
    TopElement,
    /// A new point at maximum distance from everything (metric ages);
    /// definitional only, no stage construction behind it.
    MaxDistancePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnePointExtension {
    pub age: Age,
    pub kind: ExtensionKind,
}

/// The natural one-point extension of the age.
pub fn one_point_extension(age: Age) -> OnePointExtension {
    let kind = match age {
        Age::Graph | Age::Digraph => ExtensionKind::IsolatedVertex,
        Age::Tournament | Age::Poset => ExtensionKind::TopElement,
    };
    OnePointExtension { age, kind }
}

impl OnePointExtension {
    /// J on objects: appends one point according to the extension rule. If
    /// the input carries an order the new point becomes its maximum.
    pub fn apply(&self, a: &Structure) -> Result<Structure> {
        if !self.age.member(&a.without_order()) {
            return Err(Error::AgeViolation(format!(
                "input is not a {}",
                self.age.name()
            )));
        }
        let rel = self.age.relation();
        let n = a.size();
        let mut tuples = a.all_tuples().clone();
        let ts = tuples.entry(rel.to_string()).or_default();
        match self.kind {
            ExtensionKind::IsolatedVertex => {}
            ExtensionKind::TopElement => {
                for x in 0..n {
                    match self.age {
                        // the new point beats everything
                        Age::Tournament => {
                            ts.insert(vec![n, x]);
                        }
                        // the new point lies above everything
                        Age::Poset => {
                            ts.insert(vec![x, n]);
                        }
                        _ => {
                            return Err(Error::UnsupportedAge(format!(
                                "top element extension of a {}",
                                self.age.name()
                            )))
                        }
                    }
                }
            }
            ExtensionKind::MaxDistancePoint => {
                return Err(Error::UnsupportedAge(
                    "metric extensions are definitional only".to_string(),
                ))
            }
        }
        let order = a.order().map(|ord| {
            let mut o = ord.to_vec();
            o.push(n);
            o
        });
        let out = Structure::new(a.signature().clone(), n + 1, tuples, order)?;
        if !self.age.member(&out.without_order()) {
            return Err(Error::AgeViolation(
                "extension left the age".to_string(),
            ));
        }
        Ok(out)
    }

    /// J on morphisms: extends f by new ↦ new.
    pub fn apply_mor(&self, f: &Embedding) -> Result<Embedding> {
        let dom = self.apply(f.dom())?;
        let cod = self.apply(f.cod())?;
        let mut map = f.map().to_vec();
        map.push(f.cod().size());
        Embedding::new(dom, cod, map)
    }
}

/// Strong amalgamation of B and C over A: the images of B and C in the
/// amalgam intersect exactly in the image of A. Graphs and digraphs take
/// the free amalgam; tournaments orient all cross pairs from the B side to
/// the C side; posets close the free amalgam transitively.
pub fn strong_amalgam(
    age: Age,
    a: &Structure,
    b: &Structure,
    c: &Structure,
    f: &Embedding,
    g: &Embedding,
) -> Result<(Structure, Embedding, Embedding)> {
    for (s, name) in [(a, "A"), (b, "B"), (c, "C")] {
        if !age.member(s) {
            return Err(Error::AgeViolation(format!(
                "{name} is not a {}",
                age.name()
            )));
        }
        if s.order().is_some() {
            return Err(Error::Invalid {
                kind: "amalgamation input",
                reason: "amalgamation works on unordered structures".to_string(),
            });
        }
    }
    if f.dom() != a || f.cod() != b || g.dom() != a || g.cod() != c {
        return Err(Error::ComposeMismatch(
            "f must embed A into B and g must embed A into C".to_string(),
        ));
    }
    let rel = age.relation();
    let nb = b.size();
    // C's points: shared ones land on their B image, fresh ones after B
    let mut g_prime_map = vec![usize::MAX; c.size()];
    for (x, &gx) in g.map().iter().enumerate() {
        g_prime_map[gx] = f.apply(x);
    }
    let mut next = nb;
    for slot in g_prime_map.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let size = next;

    let mut arcs: Vec<(usize, usize)> = Vec::new();
    if let Some(ts) = b.tuples(rel) {
        arcs.extend(ts.iter().map(|t| (t[0], t[1])));
    }
    if let Some(ts) = c.tuples(rel) {
        arcs.extend(ts.iter().map(|t| (g_prime_map[t[0]], g_prime_map[t[1]])));
    }
    match age {
        Age::Tournament => {
            let b_only: Vec<usize> = (0..nb).filter(|&p| !f.map().contains(&p)).collect();
            for &u in &b_only {
                for v in nb..size {
                    arcs.push((u, v));
                }
            }
        }
        Age::Poset => {
            arcs = transitive_closure(size, &arcs);
        }
        _ => {}
    }
    let d = Structure::binary_rel(rel, size, &arcs)?;
    if !age.member(&d) {
        return Err(Error::AgeViolation(
            "amalgam left the age".to_string(),
        ));
    }
    let f_prime = Embedding::new(b.clone(), d.clone(), (0..nb).collect())?;
    let g_prime = Embedding::new(c.clone(), d.clone(), g_prime_map)?;
    // commuting square and the strong intersection condition
    let left = compose_embeddings(&f_prime, f)?;
    let right = compose_embeddings(&g_prime, g)?;
    if left != right {
        return Err(Error::Internal("amalgamation square does not commute".to_string()));
    }
    let fb: BTreeSet<usize> = f_prime.map().iter().copied().collect();
    let gc: BTreeSet<usize> = g_prime.map().iter().copied().collect();
    let ffa: BTreeSet<usize> = f.map().iter().map(|&x| f_prime.apply(x)).collect();
    if fb.intersection(&gc).copied().collect::<BTreeSet<_>>() != ffa {
        return Err(Error::Internal(
            "amalgam images intersect outside the image of A".to_string(),
        ));
    }
    Ok((d, f_prime, g_prime))
}

/// Convenience for tests and the CLI: an induced initial segment of a stage.
pub fn stage_prefix(stage: &EnumeratedStructure, len: usize) -> Result<Structure> {
    if len == 0 || len > stage.structure.size() {
        return Err(Error::Invalid {
            kind: "stage prefix",
            reason: format!("length {len} outside 1..={}", stage.structure.size()),
        });
    }
    let subset: BTreeSet<usize> = (0..len).collect();
    induced_substructure(&stage.structure, &subset)
}

/// All embeddings among labeled, identity-ordered age members of the given
/// sizes; helper for exhaustive functoriality checks.
pub fn ordered_members(age: Age, n: usize) -> Vec<Structure> {
    age.labeled_members(n)
        .into_iter()
        .map(|s| s.with_order((0..n).collect()).unwrap())
        .collect()
}
