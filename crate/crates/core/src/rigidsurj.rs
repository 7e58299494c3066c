//! Rigid surjections between finite linear orders, the morphism layer of
//! the dual category, plus the canonical surjection π, the prime extension
//! f ↦ f′ and the restriction map φ used by the compactness constructions.
//!
//! A surjection f : n ↠ m is rigid when the minima of its preimages are
//! increasing: the first occurrence of b precedes the first occurrence of b′
//! whenever b < b′. Equivalently, `values[0] = 0` and every prefix's set of
//! seen values is an initial segment. Rigid surjections n ↠ m are exactly
//! the restricted growth strings with m blocks, so there are S(n, m) of them
//! (Stirling numbers of the second kind).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rigid surjection from the linear order `0..dom-1` onto `0..cod-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRigidSurjection", into = "RawRigidSurjection")]
pub struct RigidSurjection {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawRigidSurjection {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

impl TryFrom<RawRigidSurjection> for RigidSurjection {
    type Error = Error;
    fn try_from(raw: RawRigidSurjection) -> Result<Self> {
        if raw.values.len() != raw.dom {
            return Err(Error::Invalid {
                kind: "rigid surjection",
                reason: "values length differs from dom".to_string(),
            });
        }
        RigidSurjection::new(raw.values, raw.cod)
    }
}

impl From<RigidSurjection> for RawRigidSurjection {
    fn from(f: RigidSurjection) -> Self {
        RawRigidSurjection {
            dom: f.dom,
            cod: f.cod,
            values: f.values,
        }
    }
}

impl PartialOrd for RigidSurjection {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RigidSurjection {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.values
            .cmp(&other.values)
            .then(self.dom.cmp(&other.dom))
            .then(self.cod.cmp(&other.cod))
    }
}

impl RigidSurjection {
    /// Builds a rigid surjection from its value vector, validating
    /// surjectivity onto `0..cod-1` and the min-first-occurrence condition.
    pub fn new(values: Vec<usize>, cod: usize) -> Result<Self> {
        if values.is_empty() || cod == 0 {
            return Err(Error::Invalid {
                kind: "rigid surjection",
                reason: "domain and codomain must be nonempty".to_string(),
            });
        }
        let mut next_fresh = 0;
        for &v in &values {
            if v > next_fresh {
                return Err(Error::Invalid {
                    kind: "rigid surjection",
                    reason: format!("value {v} appears before {}", next_fresh),
                });
            }
            if v == next_fresh {
                next_fresh += 1;
            }
        }
        if next_fresh != cod {
            return Err(Error::Invalid {
                kind: "rigid surjection",
                reason: format!("not surjective onto 0..{cod}"),
            });
        }
        Ok(RigidSurjection {
            dom: values.len(),
            cod,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        RigidSurjection {
            dom: n,
            cod: n,
            values: (0..n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// The first position mapped to `b` (defined for every b < cod).
    pub fn first_occurrence(&self, b: usize) -> usize {
        self.values.iter().position(|&v| v == b).unwrap()
    }
}

/// All rigid surjections n ↠ m in lexicographic order of their value
/// vectors; there are S(n, m) of them.
pub fn enumerate_rigid_surjections(n: usize, m: usize) -> Result<Vec<RigidSurjection>> {
    if n < m {
        return Err(Error::DomainTooShort { n, m });
    }
    if m == 0 {
        return Err(Error::Invalid {
            kind: "rigid surjection",
            reason: "codomain must be nonempty".to_string(),
        });
    }
    let mut out = Vec::new();
    let mut values = Vec::with_capacity(n);
    extend_rgs(n, m, 0, &mut values, &mut out);
    Ok(out)
}

fn extend_rgs(n: usize, m: usize, seen: usize, values: &mut Vec<usize>, out: &mut Vec<RigidSurjection>) {
    if values.len() == n {
        if seen == m {
            out.push(RigidSurjection {
                dom: n,
                cod: m,
                values: values.clone(),
            });
        }
        return;
    }
    let remaining = n - values.len();
    // every value still missing must get a first occurrence
    if seen + remaining < m {
        return;
    }
    let top = if seen < m { seen } else { seen - 1 };
    for v in 0..=top {
        values.push(v);
        extend_rgs(n, m, seen.max(v + 1), values, out);
        values.pop();
    }
}

/// Composition of rigid surjections: `(compose_rsurj(f, g))(x) = f(g(x))`,
/// defined when `cod(g) = dom(f)`. The composite is itself rigid.
pub fn compose_rsurj(f: &RigidSurjection, g: &RigidSurjection) -> Result<RigidSurjection> {
    if g.cod() != f.dom() {
        return Err(Error::ComposeMismatch(format!(
            "cod(g) = {} but dom(f) = {}",
            g.cod(),
            f.dom()
        )));
    }
    let values: Vec<usize> = g.values().iter().map(|&x| f.apply(x)).collect();
    RigidSurjection::new(values, f.cod())
        .map_err(|e| Error::Internal(format!("composition of rigid surjections not rigid: {e}")))
}

/// The canonical rigid surjection n ↠ m: identity below m−1, then constant
/// m−1.
pub fn canonical_pi(m: usize, n: usize) -> Result<RigidSurjection> {
    if n < m {
        return Err(Error::DomainTooShort { n, m });
    }
    if m == 0 {
        return Err(Error::Invalid {
            kind: "rigid surjection",
            reason: "codomain must be nonempty".to_string(),
        });
    }
    let values = (0..n).map(|j| j.min(m - 1)).collect();
    Ok(RigidSurjection {
        dom: n,
        cod: m,
        values,
    })
}

/// Extends f : s ↠ t to f′ : s+1 ↠ t+1 by sending the new top point to the
/// new top value.
pub fn extend_prime(f: &RigidSurjection) -> RigidSurjection {
    let mut values = f.values().to_vec();
    values.push(f.cod());
    RigidSurjection {
        dom: f.dom() + 1,
        cod: f.cod() + 1,
        values,
    }
}

/// φ: restricts f : n ↠ r+1 to the positions before the first occurrence of
/// the top value r, giving a rigid surjection onto r.
pub fn phi_restrict(f: &RigidSurjection) -> Result<RigidSurjection> {
    if f.cod() < 2 {
        return Err(Error::CodomainTooSmall);
    }
    let top = f.cod() - 1;
    let d = f.first_occurrence(top);
    // rigidity of f makes the prefix surjective onto 0..top-1
    RigidSurjection::new(f.values()[..d].to_vec(), top)
        .map_err(|e| Error::Internal(format!("φ produced an invalid surjection: {e}")))
}

/// Finite ⋆-composition: `h ⊛ f = f ∘ φ_s(π_{s+1} ∘ h)` where s = dom(f).
/// Requires cod(h) ≥ s+1 so that π_{s+1} is defined on it.
pub fn star_finite(h: &RigidSurjection, f: &RigidSurjection) -> Result<RigidSurjection> {
    let s = f.dom();
    if h.cod() < s + 1 {
        return Err(Error::TruncationTooSmall { required: s + 1 });
    }
    let pi = canonical_pi(s + 1, h.cod())?;
    let u = compose_rsurj(&pi, h)?;
    let cut = phi_restrict(&u)?;
    compose_rsurj(f, &cut)
}

/// Stirling numbers of the second kind by the standard recurrence
/// S(n, m) = m·S(n−1, m) + S(n−1, m−1). Independent of the enumerators.
pub fn stirling2(n: usize, m: usize) -> u128 {
    if n == 0 && m == 0 {
        return 1;
    }
    if n == 0 || m == 0 || m > n {
        return 0;
    }
    let mut row = vec![0u128; m + 1];
    row[0] = 1; // S(0, 0)
    for i in 1..=n {
        for j in (1..=m.min(i)).rev() {
            row[j] = (j as u128) * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[m]
}
