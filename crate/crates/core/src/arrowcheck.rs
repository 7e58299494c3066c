//! Decides finite Ramsey-arrow instances C →𝔊 (B)^A_{k,t} by searching for
//! a counterexample coloring of hom(A,C)/~𝔊.
//!
//! The arrow holds when every k-coloring of the classes admits some
//! w : B → C whose composite image uses at most t colors; a counterexample
//! is a coloring on which every w sees more than t colors. The default
//! search backtracks over class-color assignments in restricted-growth form
//! (colorings differing only by a permutation of colors are equivalent
//! here), pruning a branch as soon as some w can no longer exceed the
//! threshold. A naive enumeration over all k^N colorings is kept as a
//! reference oracle. Both searches visit colorings in lexicographic order
//! and report the same, lexicographically least, counterexample, so results
//! are reproducible fixtures. With several workers the tree is split at a
//! frontier depth and the least counterexample across subtrees wins, which
//! keeps parallel and serial verdicts identical.

use crate::category::Category;
use crate::error::{Error, Result};
use crate::quotients::{act_left, hom_classes, GroupFamily, HomClass};

/// How check_arrow explores the coloring space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    #[default]
    Backtracking,
    Naive,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Cap on |hom(A,C)/~𝔊| for the backtracking search.
    pub max_classes: usize,
    /// Cap on k^N for the naive enumeration.
    pub max_naive_colorings: u128,
    /// Prune branches that are not canonical under Aut(C) acting on classes.
    pub symmetry_reduction: bool,
    /// Worker threads for the backtracking search.
    pub workers: usize,
    pub mode: SearchMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_classes: 40,
            max_naive_colorings: 1 << 22,
            symmetry_reduction: false,
            workers: 1,
            mode: SearchMode::Backtracking,
        }
    }
}

/// A finite arrow instance C →𝔊 (B)^A_{k,t}.
#[derive(Debug, Clone)]
pub struct ArrowQuery<C: Category> {
    pub a: C::Obj,
    pub b: C::Obj,
    pub c: C::Obj,
    pub colors: usize,
    pub threshold: usize,
    pub family: GroupFamily<C>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Class-color assignments attempted (backtracking) or colorings
    /// examined (naive).
    pub nodes: u64,
    /// Subtrees pruned (backtracking) or colorings rejected (naive).
    pub eliminated: u64,
}

/// The verdict, with a counterexample coloring when the arrow fails: each
/// class of hom(A,C)/~𝔊, listed by representative, with its color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowResult<M: Ord> {
    pub holds: bool,
    pub counterexample: Option<Vec<(M, usize)>>,
    pub stats: SearchStats,
}

/// The class traces of an instance: for each w ∈ hom(B,C), the set of
/// indices (into classes(A,C)) hit by w·classes(A,B).
struct Instance<C: Category> {
    classes_ac: Vec<HomClass<C::Mor>>,
    traces: Vec<Vec<usize>>,
}

fn build_instance<C: Category>(cat: &C, q: &ArrowQuery<C>) -> Result<Instance<C>> {
    let hom_ab = cat.hom(&q.a, &q.b)?;
    if hom_ab.is_empty() {
        return Err(Error::Invalid {
            kind: "arrow query",
            reason: "hom(A,B) is empty".to_string(),
        });
    }
    let hom_bc = cat.hom(&q.b, &q.c)?;
    if hom_bc.is_empty() {
        return Err(Error::Invalid {
            kind: "arrow query",
            reason: "hom(B,C) is empty".to_string(),
        });
    }
    if q.colors == 0 || q.threshold == 0 {
        return Err(Error::Invalid {
            kind: "arrow query",
            reason: "k and t must be positive".to_string(),
        });
    }
    let classes_ac = hom_classes(cat, &q.a, &q.c, &q.family)?;
    let classes_ab = hom_classes(cat, &q.a, &q.b, &q.family)?;
    let mut traces = Vec::with_capacity(hom_bc.len());
    for w in &hom_bc {
        let mut trace = Vec::with_capacity(classes_ab.len());
        for class in &classes_ab {
            let image = act_left(cat, w, class)?;
            let idx = classes_ac
                .binary_search(&image)
                .map_err(|_| Error::Internal("acted class not found in hom(A,C)/~".to_string()))?;
            trace.push(idx);
        }
        trace.sort_unstable();
        trace.dedup();
        traces.push(trace);
    }
    traces.sort();
    traces.dedup();
    Ok(Instance { classes_ac, traces })
}

/// Decides the arrow. The verdict is independent of the search order; when
/// the arrow fails the returned coloring is the lexicographically least
/// counterexample in canonical (restricted-growth) form.
pub fn check_arrow<C: Category>(
    cat: &C,
    q: &ArrowQuery<C>,
    config: &SearchConfig,
) -> Result<ArrowResult<C::Mor>> {
    let instance = build_instance(cat, q)?;
    let n = instance.classes_ac.len();
    let mut stats = SearchStats::default();

    // some w already sees at most t classes: no coloring can defeat it
    if instance
        .traces
        .iter()
        .any(|t| t.len().min(q.colors) <= q.threshold)
    {
        return Ok(ArrowResult {
            holds: true,
            counterexample: None,
            stats,
        });
    }

    let found = match config.mode {
        SearchMode::Naive => {
            let required = (q.colors as u128)
                .checked_pow(n as u32)
                .ok_or(Error::CapExceeded {
                    what: "naive coloring enumeration",
                    required: u128::MAX,
                    cap: config.max_naive_colorings,
                })?;
            if required > config.max_naive_colorings {
                return Err(Error::CapExceeded {
                    what: "naive coloring enumeration",
                    required,
                    cap: config.max_naive_colorings,
                });
            }
            naive_search(n, q.colors, q.threshold, &instance.traces, &mut stats)
        }
        SearchMode::Backtracking => {
            if n > config.max_classes {
                return Err(Error::CapExceeded {
                    what: "backtracking over classes",
                    required: n as u128,
                    cap: config.max_classes as u128,
                });
            }
            let symmetry = if config.symmetry_reduction {
                class_symmetries(cat, q, &instance)?
            } else {
                vec![]
            };
            if config.workers > 1 {
                parallel_search(
                    n,
                    q.colors,
                    q.threshold,
                    &instance.traces,
                    &symmetry,
                    config.workers,
                    &mut stats,
                )
            } else {
                let mut search =
                    Backtracker::new(n, q.colors, q.threshold, &instance.traces, &symmetry);
                let found = search.run(&mut vec![], 0);
                stats = search.stats;
                found
            }
        }
    };

    Ok(match found {
        Some(colors) => ArrowResult {
            holds: false,
            counterexample: Some(
                instance
                    .classes_ac
                    .iter()
                    .zip(colors)
                    .map(|(c, col)| (c.representative().clone(), col))
                    .collect(),
            ),
            stats,
        },
        None => ArrowResult {
            holds: true,
            counterexample: None,
            stats,
        },
    })
}

/// Aut(C) acts on classes(A,C) by postcomposition; returns the induced
/// index permutations (identity excluded).
fn class_symmetries<C: Category>(
    cat: &C,
    q: &ArrowQuery<C>,
    instance: &Instance<C>,
) -> Result<Vec<Vec<usize>>> {
    let autos = cat.automorphisms(&q.c)?;
    let mut perms = Vec::new();
    for sigma in &autos {
        let mut perm = Vec::with_capacity(instance.classes_ac.len());
        for class in &instance.classes_ac {
            let image = act_left(cat, sigma, class)?;
            let idx = instance
                .classes_ac
                .binary_search(&image)
                .map_err(|_| Error::Internal("automorphism broke the class set".to_string()))?;
            perm.push(idx);
        }
        if perm.iter().enumerate().any(|(i, &j)| i != j) {
            perms.push(perm);
        }
    }
    Ok(perms)
}

struct Backtracker<'a> {
    colors: usize,
    threshold: usize,
    traces: &'a [Vec<usize>],
    /// traces touching each class index
    touching: Vec<Vec<usize>>,
    /// per trace: number of colored members, distinct colors, counts per color
    colored: Vec<usize>,
    distinct: Vec<usize>,
    counts: Vec<Vec<usize>>,
    symmetry: &'a [Vec<usize>],
    stats: SearchStats,
    n: usize,
}

impl<'a> Backtracker<'a> {
    fn new(
        n: usize,
        colors: usize,
        threshold: usize,
        traces: &'a [Vec<usize>],
        symmetry: &'a [Vec<usize>],
    ) -> Self {
        let mut touching = vec![Vec::new(); n];
        for (t, trace) in traces.iter().enumerate() {
            for &i in trace {
                touching[i].push(t);
            }
        }
        Backtracker {
            colors,
            threshold,
            traces,
            touching,
            colored: vec![0; traces.len()],
            distinct: vec![0; traces.len()],
            counts: vec![vec![0; colors]; traces.len()],
            symmetry,
            stats: SearchStats::default(),
            n,
        }
    }

    /// Tries every admissible color for class `assignment.len()` in
    /// increasing order; returns the first complete counterexample found,
    /// which is the lexicographically least one below this node.
    fn run(&mut self, assignment: &mut Vec<usize>, max_used: usize) -> Option<Vec<usize>> {
        if assignment.len() == self.n {
            return Some(assignment.clone());
        }
        let i = assignment.len();
        let top = max_used.min(self.colors - 1); // RGS: at most one fresh color
        for color in 0..=top {
            self.stats.nodes += 1;
            assignment.push(color);
            let viable = self.assign(i, color) && self.canonical(assignment);
            if viable {
                if let Some(hit) = self.run(assignment, max_used.max(color + 1)) {
                    self.unassign(i, color);
                    assignment.pop();
                    return Some(hit);
                }
            } else {
                self.stats.eliminated += 1;
            }
            self.unassign(i, color);
            assignment.pop();
        }
        None
    }

    /// Applies the assignment and reports whether every affected trace can
    /// still exceed the threshold.
    fn assign(&mut self, class: usize, color: usize) -> bool {
        let mut ok = true;
        for &t in &self.touching[class] {
            self.colored[t] += 1;
            self.counts[t][color] += 1;
            if self.counts[t][color] == 1 {
                self.distinct[t] += 1;
            }
            let uncolored = self.traces[t].len() - self.colored[t];
            let reachable = self.distinct[t] + uncolored.min(self.colors - self.distinct[t]);
            if reachable <= self.threshold {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&mut self, class: usize, color: usize) {
        for &t in &self.touching[class] {
            self.colored[t] -= 1;
            self.counts[t][color] -= 1;
            if self.counts[t][color] == 0 {
                self.distinct[t] -= 1;
            }
        }
    }

    /// With symmetry reduction on: keep only prefixes that are lexicographic
    /// minima among their images under prefix-stabilizing permutations
    /// (after restricted-growth renumbering). The globally least
    /// counterexample survives, so verdict and certificate match the
    /// unreduced search.
    fn canonical(&self, assignment: &[usize]) -> bool {
        if self.symmetry.is_empty() {
            return true;
        }
        let len = assignment.len();
        'perms: for perm in self.symmetry {
            let mut image = Vec::with_capacity(len);
            for &src in &perm[..len] {
                if src >= len {
                    continue 'perms; // permutation does not stabilize the prefix
                }
                image.push(assignment[src]);
            }
            if rgs_normalize(&image).as_slice() < assignment {
                return false;
            }
        }
        true
    }
}

/// Renumbers colors by first occurrence, producing the canonical
/// restricted-growth form.
fn rgs_normalize(colors: &[usize]) -> Vec<usize> {
    let mut relabel: Vec<Option<usize>> = vec![None; colors.len() + 1];
    let mut next = 0;
    colors
        .iter()
        .map(|&c| {
            *relabel[c].get_or_insert_with(|| {
                let v = next;
                next += 1;
                v
            })
        })
        .collect()
}

fn naive_search(
    n: usize,
    colors: usize,
    threshold: usize,
    traces: &[Vec<usize>],
    stats: &mut SearchStats,
) -> Option<Vec<usize>> {
    let mut assignment = vec![0usize; n];
    loop {
        stats.nodes += 1;
        let defeated = traces.iter().all(|trace| {
            let mut seen = vec![false; colors];
            let mut distinct = 0;
            for &i in trace {
                if !seen[assignment[i]] {
                    seen[assignment[i]] = true;
                    distinct += 1;
                }
            }
            distinct > threshold
        });
        if defeated {
            return Some(assignment);
        }
        stats.eliminated += 1;
        // next coloring in lexicographic order
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if assignment[pos] + 1 < colors {
                assignment[pos] += 1;
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Splits the search at a frontier of restricted-growth prefixes and runs
/// the subtrees on worker threads. The least counterexample over all
/// subtrees is exactly the one the serial search returns.
fn parallel_search(
    n: usize,
    colors: usize,
    threshold: usize,
    traces: &[Vec<usize>],
    symmetry: &[Vec<usize>],
    workers: usize,
    stats: &mut SearchStats,
) -> Option<Vec<usize>> {
    let mut depth = 0;
    let mut frontier: Vec<(Vec<usize>, usize)> = vec![(vec![], 0)];
    while depth < n && frontier.len() < workers * 8 {
        let mut next = Vec::with_capacity(frontier.len() * colors);
        for (prefix, max_used) in &frontier {
            let top = (*max_used).min(colors - 1);
            for color in 0..=top {
                let mut p = prefix.clone();
                p.push(color);
                next.push((p, (*max_used).max(color + 1)));
            }
        }
        frontier = next;
        depth += 1;
    }

    let task_index = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(vec![None::<Vec<usize>>; frontier.len()]);
    let total_stats = std::sync::Mutex::new(SearchStats::default());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = task_index.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= frontier.len() {
                    break;
                }
                let (prefix, max_used) = &frontier[i];
                let mut search = Backtracker::new(n, colors, threshold, traces, symmetry);
                let mut assignment = Vec::with_capacity(n);
                let mut viable = true;
                for (pos, &color) in prefix.iter().enumerate() {
                    search.stats.nodes += 1;
                    assignment.push(color);
                    if !(search.assign(pos, color) && search.canonical(&assignment)) {
                        viable = false;
                        search.stats.eliminated += 1;
                        break;
                    }
                }
                let found = if viable {
                    search.run(&mut assignment, *max_used)
                } else {
                    None
                };
                if let Some(hit) = found {
                    results.lock().unwrap()[i] = Some(hit);
                }
                let mut ts = total_stats.lock().unwrap();
                ts.nodes += search.stats.nodes;
                ts.eliminated += search.stats.eliminated;
            });
        }
    });
    *stats = *total_stats.lock().unwrap();
    let results = results.into_inner().unwrap();
    results.into_iter().flatten().min()
}

/// The least t for which the arrow holds; at most |hom(A,B)/~𝔊|.
pub fn min_threshold<C: Category>(
    cat: &C,
    a: &C::Obj,
    b: &C::Obj,
    c: &C::Obj,
    colors: usize,
    family: &GroupFamily<C>,
    config: &SearchConfig,
) -> Result<usize> {
    let bound = hom_classes(cat, a, b, family)?.len();
    for t in 1..=bound {
        let q = ArrowQuery {
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
            colors,
            threshold: t,
            family: family.clone(),
        };
        if check_arrow(cat, &q, config)?.holds {
            return Ok(t);
        }
    }
    Err(Error::Internal(
        "arrow must hold at t = |hom(A,B)/~|".to_string(),
    ))
}

/// Outcome of scanning a candidate list for a witness object.
#[derive(Debug, Clone)]
pub struct WitnessSearch<C: Category> {
    /// The first candidate for which the arrow holds.
    pub found: Option<C::Obj>,
    /// Candidates whose check errored (cap exceeded, empty hom-sets), with
    /// the error; the scan continues past them.
    pub skipped: Vec<(C::Obj, Error)>,
}

/// Scans `candidates` in order and returns the first C with
/// C →𝔊 (B)^A_{k,t}.
#[allow(clippy::too_many_arguments)]
pub fn search_witness<C: Category>(
    cat: &C,
    a: &C::Obj,
    b: &C::Obj,
    colors: usize,
    threshold: usize,
    family: &GroupFamily<C>,
    candidates: &[C::Obj],
    config: &SearchConfig,
) -> Result<WitnessSearch<C>> {
    let mut skipped = Vec::new();
    for cand in candidates {
        let q = ArrowQuery {
            a: a.clone(),
            b: b.clone(),
            c: cand.clone(),
            colors,
            threshold,
            family: family.clone(),
        };
        match check_arrow(cat, &q, config) {
            Ok(result) if result.holds => {
                return Ok(WitnessSearch {
                    found: Some(cand.clone()),
                    skipped,
                })
            }
            Ok(_) => {}
            Err(e) => skipped.push((cand.clone(), e)),
        }
    }
    Ok(WitnessSearch {
        found: None,
        skipped,
    })
}

/// True when every w ∈ hom(B,C) sees at least `bound` colors under the
/// given total coloring of hom(A,C)/~𝔊.
pub fn verify_lower_bound<C: Category>(
    cat: &C,
    family: &GroupFamily<C>,
    coloring: &[(C::Mor, usize)],
    b: &C::Obj,
    bound: usize,
) -> Result<bool> {
    let first = coloring
        .first()
        .ok_or_else(|| Error::PartialColoring("coloring is empty".to_string()))?;
    let a = cat.dom(&first.0);
    let c = cat.cod(&first.0);
    let classes_ac = hom_classes(cat, &a, &c, family)?;
    if classes_ac.len() != coloring.len()
        || !classes_ac
            .iter()
            .zip(coloring)
            .all(|(cls, (rep, _))| cls.representative() == rep)
    {
        return Err(Error::PartialColoring(
            "coloring does not cover hom(A,C)/~ exactly".to_string(),
        ));
    }
    let classes_ab = hom_classes(cat, &a, b, family)?;
    for w in cat.hom(b, &c)? {
        let mut seen = std::collections::BTreeSet::new();
        for class in &classes_ab {
            let image = act_left(cat, &w, class)?;
            let idx = classes_ac
                .binary_search(&image)
                .map_err(|_| Error::Internal("acted class not found".to_string()))?;
            seen.insert(coloring[idx].1);
        }
        if seen.len() < bound {
            return Ok(false);
        }
    }
    Ok(true)
}
