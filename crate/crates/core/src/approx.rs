//! Approximation schemes: the data (F, Φ, ι) through which an infinite
//! object is handled by finite truncations, the morphism lift f ↦ f′, the
//! ⋆-composition h ⋆ f = Φ_B(h·ι_{F(B)})·f, and an exhaustive verifier for
//! the defining identity Φ_A(u·f′) = Φ_B(u)·f.
//!
//! The infinite object is never a value. Every scheme fixes a finite
//! truncation window and all quantifiers range inside it; operations that
//! would need a larger window report the size they required.
//!
//! Three schemes are built in:
//! * linear orders into ω (window = a finite linear order);
//! * the dual scheme on rigid surjections, where Φ is the restriction map
//!   φ and the lift is the prime extension; its verifier is exactly the
//!   identity f∘φ_s(u) = φ_r(f′∘u);
//! * enumerated Fraïssé stages with a natural one-point extension, where
//!   Φ restricts to the least initial segment covering the image.

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraisse::{one_point_extension, EnumeratedStructure, OnePointExtension};
use crate::relstruct::{
    compose_embeddings, enumerate_embeddings, first_embedding, induced_substructure, Embedding,
    Structure,
};
use crate::rigidsurj::{
    canonical_pi, compose_rsurj, enumerate_rigid_surjections, extend_prime, phi_restrict,
    RigidSurjection,
};

pub trait ApproxScheme {
    /// Finite objects of the approximated category.
    type Obj: Clone + Eq + Ord + Debug + Serialize;
    /// Morphisms between finite objects.
    type Mor: Clone + Eq + Ord + Debug + Serialize;
    /// Morphisms into (or of) the truncated infinite object.
    type SMor: Clone + Eq + Ord + Debug + Serialize;

    /// The one-point extension F.
    fn extend(&self, a: &Self::Obj) -> Result<Self::Obj>;

    /// The scheme's lift f ↦ f′ : F(A) → F(B).
    fn lift(&self, f: &Self::Mor) -> Result<Self::Mor>;

    /// Φ_A(u) for u : F(A) → S; the codomain is encoded in the morphism.
    fn phi(&self, a: &Self::Obj, u: &Self::SMor) -> Result<Self::Mor>;

    /// The distinguished morphism ι_B : B → S.
    fn iota(&self, b: &Self::Obj) -> Result<Self::SMor>;

    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Vec<Self::Mor>>;

    /// All morphisms a → S inside the truncation window.
    fn stage_homs(&self, a: &Self::Obj) -> Result<Vec<Self::SMor>>;

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;

    /// u·f′ for u : F(B) → S and f′ : F(A) → F(B).
    fn precompose_stage(&self, u: &Self::SMor, f_prime: &Self::Mor) -> Result<Self::SMor>;

    /// h·ι_{F(b)} for an endomorphism truncation h of S.
    fn endo_after_iota(&self, h: &Self::SMor, b: &Self::Obj) -> Result<Self::SMor>;

    fn identity(&self, a: &Self::Obj) -> Result<Self::Mor>;

    fn mor_dom(&self, f: &Self::Mor) -> Self::Obj;

    fn mor_cod(&self, f: &Self::Mor) -> Self::Obj;

    /// The verification grid: all objects up to the given size.
    fn objects(&self, max_size: usize) -> Result<Vec<Self::Obj>>;
}

/// An embedding A ↪ ω presented as its strictly increasing target list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaEmbedding {
    pub dom: Structure,
    pub targets: Vec<usize>,
}

impl OmegaEmbedding {
    pub fn new(dom: Structure, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != dom.size() {
            return Err(Error::Invalid {
                kind: "omega embedding",
                reason: "one target per point required".to_string(),
            });
        }
        if !targets.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid {
                kind: "omega embedding",
                reason: "targets must be strictly increasing".to_string(),
            });
        }
        if dom.order() != Some(&(0..dom.size()).collect::<Vec<_>>()[..]) {
            return Err(Error::Invalid {
                kind: "omega embedding",
                reason: "domain must carry the identity enumeration".to_string(),
            });
        }
        Ok(OmegaEmbedding { dom, targets })
    }

    /// The same data over a linear order of the given size.
    pub fn linear(n: usize, targets: Vec<usize>) -> Result<Self> {
        OmegaEmbedding::new(Structure::linear_order(n), targets)
    }

    /// Realizes the targets inside a concrete window structure.
    pub fn into_embedding(self, window: &Structure) -> Result<Embedding> {
        if let Some(&max) = self.targets.iter().max() {
            if max >= window.size() {
                return Err(Error::TruncationTooSmall { required: max + 1 });
            }
        }
        Embedding::new(self.dom, window.clone(), self.targets)
    }
}

/// Schemes whose finite objects are ordered structures and whose infinite
/// object is approximated by a fixed enumerated stage.
#[derive(Debug, Clone)]
pub struct EmbedScheme {
    stage: Structure,
    kind: EmbedKind,
    iota_overrides: Vec<(Structure, Embedding)>,
}

#[derive(Debug, Clone)]
enum EmbedKind {
    LinearOrders,
    Enumerated(OnePointExtension),
}

/// The linear-order scheme: F appends a top point, Φ restricts an
/// embedding F(A) ↪ ω to A with codomain {0..m-1} where m is the image of
/// the top point, and ι is the identity-targets embedding.
pub fn scheme_linear_orders(window: usize) -> EmbedScheme {
    EmbedScheme {
        stage: Structure::linear_order(window),
        kind: EmbedKind::LinearOrders,
        iota_overrides: Vec::new(),
    }
}

/// The enumerated-stage scheme: F is the age's natural one-point extension
/// followed by placing the new point on top of the enumeration; Φ restricts
/// f : F(A) ↪ stage to A with codomain the least initial segment containing
/// im(f), minus its top point; ι_B is the least embedding of B into the
/// stage.
pub fn scheme_enumerated(
    stage: &EnumeratedStructure,
    extension: OnePointExtension,
) -> Result<EmbedScheme> {
    stage.validate()?;
    if extension.age != stage.stage_meta.age {
        return Err(Error::UnsupportedAge(format!(
            "extension is for {} but the stage is a {}",
            extension.age.name(),
            stage.stage_meta.age.name()
        )));
    }
    if extension.kind != one_point_extension(extension.age).kind {
        return Err(Error::UnsupportedAge(
            "extension kind does not match the age's natural one".to_string(),
        ));
    }
    Ok(EmbedScheme {
        stage: stage.structure.clone(),
        kind: EmbedKind::Enumerated(extension),
        iota_overrides: Vec::new(),
    })
}

impl EmbedScheme {
    pub fn stage(&self) -> &Structure {
        &self.stage
    }

    /// Pins ι for one object, overriding the least-embedding default.
    pub fn with_iota(mut self, b: Structure, iota: Embedding) -> Result<Self> {
        self.check_object(&b)?;
        if iota.dom() != &b || iota.cod() != &self.stage {
            return Err(Error::Invalid {
                kind: "iota override",
                reason: "ι must embed the object into the stage".to_string(),
            });
        }
        self.iota_overrides.retain(|(obj, _)| obj != &b);
        self.iota_overrides.push((b, iota));
        Ok(self)
    }

    fn check_object(&self, a: &Structure) -> Result<()> {
        if a.size() == 0 {
            return Err(Error::Invalid {
                kind: "scheme object",
                reason: "objects must have at least one point".to_string(),
            });
        }
        if a.order().is_none() {
            return Err(Error::Invalid {
                kind: "scheme object",
                reason: "objects must carry a linear order".to_string(),
            });
        }
        match &self.kind {
            EmbedKind::LinearOrders => {
                if !a.signature().relations().is_empty() {
                    return Err(Error::Invalid {
                        kind: "scheme object",
                        reason: "linear-order objects have an empty signature".to_string(),
                    });
                }
            }
            EmbedKind::Enumerated(ext) => {
                if !ext.age.member(&a.without_order()) {
                    return Err(Error::AgeViolation(format!(
                        "object is not a {}",
                        ext.age.name()
                    )));
                }
            }
        }
        Ok(())
    }

    /// An endomorphism truncation of the stage: an embedding of the induced
    /// prefix of the given length into the stage.
    pub fn prefix_endo(&self, targets: Vec<usize>) -> Result<Embedding> {
        let len = targets.len();
        if len == 0 || len > self.stage.size() {
            return Err(Error::Invalid {
                kind: "stage endomorphism",
                reason: "target list must fit inside the stage".to_string(),
            });
        }
        let prefix = induced_substructure(&self.stage, &(0..len).collect())?;
        Embedding::new(prefix, self.stage.clone(), targets)
    }
}

impl ApproxScheme for EmbedScheme {
    type Obj = Structure;
    type Mor = Embedding;
    type SMor = Embedding;

    fn extend(&self, a: &Structure) -> Result<Structure> {
        self.check_object(a)?;
        match &self.kind {
            EmbedKind::LinearOrders => {
                let n = a.size();
                let mut order = a.order().unwrap().to_vec();
                order.push(n);
                Structure::new(a.signature().clone(), n + 1, a.all_tuples().clone(), Some(order))
            }
            EmbedKind::Enumerated(ext) => ext.apply(a),
        }
    }

    fn lift(&self, f: &Embedding) -> Result<Embedding> {
        let dom = self.extend(f.dom())?;
        let cod = self.extend(f.cod())?;
        let mut map = f.map().to_vec();
        map.push(f.cod().size());
        Embedding::new(dom, cod, map)
    }

    fn phi(&self, a: &Structure, u: &Embedding) -> Result<Embedding> {
        let fa = self.extend(a)?;
        if u.dom() != &fa {
            return Err(Error::Invalid {
                kind: "scheme morphism",
                reason: "u must start at F(A)".to_string(),
            });
        }
        if u.cod() != &self.stage {
            return Err(Error::Invalid {
                kind: "scheme morphism",
                reason: "u must end at the stage".to_string(),
            });
        }
        // the new point is the enumeration maximum, so it marks the least
        // initial segment containing the image
        let top_target = u.apply(a.size());
        let segment = induced_substructure(&self.stage, &(0..top_target).collect())?;
        Embedding::new(a.clone(), segment, u.map()[..a.size()].to_vec())
    }

    fn iota(&self, b: &Structure) -> Result<Embedding> {
        self.check_object(b)?;
        if let Some((_, iota)) = self.iota_overrides.iter().find(|(obj, _)| obj == b) {
            return Ok(iota.clone());
        }
        first_embedding(b, &self.stage)?.ok_or_else(|| Error::Invalid {
            kind: "scheme object",
            reason: "the stage contains no copy of the object".to_string(),
        })
    }

    fn hom(&self, a: &Structure, b: &Structure) -> Result<Vec<Embedding>> {
        enumerate_embeddings(a, b)
    }

    fn stage_homs(&self, a: &Structure) -> Result<Vec<Embedding>> {
        enumerate_embeddings(a, &self.stage)
    }

    fn compose(&self, g: &Embedding, f: &Embedding) -> Result<Embedding> {
        compose_embeddings(g, f)
    }

    fn precompose_stage(&self, u: &Embedding, f_prime: &Embedding) -> Result<Embedding> {
        compose_embeddings(u, f_prime)
    }

    fn endo_after_iota(&self, h: &Embedding, b: &Structure) -> Result<Embedding> {
        if h.cod() != &self.stage {
            return Err(Error::Invalid {
                kind: "stage endomorphism",
                reason: "h must end at the stage".to_string(),
            });
        }
        let window = h.dom().size();
        let prefix = induced_substructure(&self.stage, &(0..window).collect())?;
        if h.dom() != &prefix {
            return Err(Error::Invalid {
                kind: "stage endomorphism",
                reason: "h must start at an initial segment of the stage".to_string(),
            });
        }
        let fb = self.extend(b)?;
        let iota = self.iota(&fb)?;
        if let Some(&max) = iota.map().iter().max() {
            if max >= window {
                return Err(Error::TruncationTooSmall { required: max + 1 });
            }
        }
        let map = iota.map().iter().map(|&x| h.apply(x)).collect();
        Embedding::new(fb, self.stage.clone(), map)
    }

    fn identity(&self, a: &Structure) -> Result<Embedding> {
        self.check_object(a)?;
        Ok(Embedding::identity(a))
    }

    fn mor_dom(&self, f: &Embedding) -> Structure {
        f.dom().clone()
    }

    fn mor_cod(&self, f: &Embedding) -> Structure {
        f.cod().clone()
    }

    fn objects(&self, max_size: usize) -> Result<Vec<Structure>> {
        let mut out = Vec::new();
        for n in 1..=max_size {
            match &self.kind {
                EmbedKind::LinearOrders => out.push(Structure::linear_order(n)),
                EmbedKind::Enumerated(ext) => {
                    for s in ext.age.labeled_members(n) {
                        out.push(s.with_order((0..n).collect())?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The dual scheme on finite truncations of rigid surjections. Objects are
/// order sizes; a morphism A → B is carried by a rigid surjection B ↠ A,
/// composed in reverse. Φ is the restriction map φ, the lift is the prime
/// extension, and ι_B defaults to the canonical surjection π_B.
#[derive(Debug, Clone)]
pub struct DualScheme {
    /// Largest truncation domain enumerated by `stage_homs`.
    pub window: usize,
    iota_overrides: Vec<(usize, RigidSurjection)>,
}

pub fn scheme_dual_orders(window: usize) -> DualScheme {
    DualScheme {
        window,
        iota_overrides: Vec::new(),
    }
}

impl DualScheme {
    /// Pins ι for one order size, overriding the canonical π default.
    pub fn with_iota(mut self, b: usize, iota: RigidSurjection) -> Result<Self> {
        if iota.cod() != b {
            return Err(Error::Invalid {
                kind: "iota override",
                reason: format!("ι must map onto the {b}-point order"),
            });
        }
        self.iota_overrides.retain(|(obj, _)| *obj != b);
        self.iota_overrides.push((b, iota));
        Ok(self)
    }
}

impl ApproxScheme for DualScheme {
    type Obj = usize;
    type Mor = RigidSurjection;
    type SMor = RigidSurjection;

    fn extend(&self, a: &usize) -> Result<usize> {
        if *a == 0 {
            return Err(Error::Invalid {
                kind: "scheme object",
                reason: "orders must be nonempty".to_string(),
            });
        }
        Ok(a + 1)
    }

    fn lift(&self, f: &RigidSurjection) -> Result<RigidSurjection> {
        Ok(extend_prime(f))
    }

    fn phi(&self, a: &usize, u: &RigidSurjection) -> Result<RigidSurjection> {
        if u.cod() != a + 1 {
            return Err(Error::Invalid {
                kind: "scheme morphism",
                reason: format!("u must map onto F(A) = {}", a + 1),
            });
        }
        phi_restrict(u)
    }

    fn iota(&self, b: &usize) -> Result<RigidSurjection> {
        if let Some((_, iota)) = self.iota_overrides.iter().find(|(obj, _)| obj == b) {
            return Ok(iota.clone());
        }
        if self.window < *b {
            return Err(Error::TruncationTooSmall { required: *b });
        }
        canonical_pi(*b, self.window)
    }

    fn hom(&self, a: &usize, b: &usize) -> Result<Vec<RigidSurjection>> {
        if *b < *a {
            return Ok(vec![]);
        }
        enumerate_rigid_surjections(*b, *a)
    }

    fn stage_homs(&self, a: &usize) -> Result<Vec<RigidSurjection>> {
        let mut out = Vec::new();
        for n in *a..=self.window {
            out.extend(enumerate_rigid_surjections(n, *a)?);
        }
        Ok(out)
    }

    fn compose(&self, g: &RigidSurjection, f: &RigidSurjection) -> Result<RigidSurjection> {
        compose_rsurj(f, g)
    }

    fn precompose_stage(
        &self,
        u: &RigidSurjection,
        f_prime: &RigidSurjection,
    ) -> Result<RigidSurjection> {
        compose_rsurj(f_prime, u)
    }

    fn endo_after_iota(&self, h: &RigidSurjection, b: &usize) -> Result<RigidSurjection> {
        let fb = b + 1;
        if let Some((_, iota)) = self.iota_overrides.iter().find(|(obj, _)| *obj == fb) {
            if h.cod() != iota.dom() {
                return Err(Error::TruncationTooSmall {
                    required: iota.dom(),
                });
            }
            return compose_rsurj(iota, h);
        }
        if h.cod() < fb {
            return Err(Error::TruncationTooSmall { required: fb });
        }
        // the default ι is π, re-truncated to h's codomain
        let pi = canonical_pi(fb, h.cod())?;
        compose_rsurj(&pi, h)
    }

    fn identity(&self, a: &usize) -> Result<RigidSurjection> {
        Ok(RigidSurjection::identity(*a))
    }

    fn mor_dom(&self, f: &RigidSurjection) -> usize {
        f.cod()
    }

    fn mor_cod(&self, f: &RigidSurjection) -> usize {
        f.dom()
    }

    fn objects(&self, max_size: usize) -> Result<Vec<usize>> {
        Ok((1..=max_size).collect())
    }
}

/// Searches hom(F(A), F(B)) for a lift making the approximation square
/// commute for this particular (f, u); absence signals a scheme violation
/// on the instance.
pub fn find_lift<S: ApproxScheme>(
    scheme: &S,
    f: &S::Mor,
    u: &S::SMor,
) -> Result<Option<S::Mor>> {
    let a = scheme.mor_dom(f);
    let b = scheme.mor_cod(f);
    let target = scheme.compose(&scheme.phi(&b, u)?, f)?;
    for candidate in scheme.hom(&scheme.extend(&a)?, &scheme.extend(&b)?)? {
        let pushed = scheme.precompose_stage(u, &candidate)?;
        if scheme.phi(&a, &pushed)? == target {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}

/// The ⋆-composition h ⋆ f = Φ_B(h·ι_{F(B)})·f.
pub fn star<S: ApproxScheme>(scheme: &S, h: &S::SMor, f: &S::Mor) -> Result<S::Mor> {
    let b = scheme.mor_cod(f);
    let u = scheme.endo_after_iota(h, &b)?;
    let g = scheme.phi(&b, &u)?;
    scheme.compose(&g, f)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SchemeFailure {
    pub instance: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeReport {
    pub checked: u64,
    pub failures: Vec<SchemeFailure>,
}

/// Exhaustively checks Φ_A(u·f′) = Φ_B(u)·f over all objects up to
/// `max_size`, all f between them and all u into the window, with f′ the
/// scheme's lift; if the lift fails the identity, an enumerated lift is
/// attempted before the instance is reported. Also checks lift
/// functoriality along the way.
pub fn verify_scheme<S: ApproxScheme + Sync>(
    scheme: &S,
    max_size: usize,
    workers: usize,
) -> Result<SchemeReport>
where
    S::Mor: Send + Sync,
    S::Obj: Sync,
{
    let objects = scheme.objects(max_size)?;

    // lift functoriality: identities and composable pairs
    let mut failures = Vec::new();
    let mut checked = 0u64;
    for a in &objects {
        let id = scheme.identity(a)?;
        checked += 1;
        if scheme.lift(&id)? != scheme.identity(&scheme.extend(a)?)? {
            failures.push(SchemeFailure {
                instance: format!("lift of identity at {}", serde_json::to_string(a).unwrap()),
                expected: "identity".to_string(),
                got: "non-identity".to_string(),
            });
        }
    }
    for a in &objects {
        for b in &objects {
            for f in scheme.hom(a, b)? {
                for c in &objects {
                    for g in scheme.hom(b, c)? {
                        checked += 1;
                        let lhs = scheme.lift(&scheme.compose(&g, &f)?)?;
                        let rhs = scheme.compose(&scheme.lift(&g)?, &scheme.lift(&f)?)?;
                        if lhs != rhs {
                            failures.push(SchemeFailure {
                                instance: format!(
                                    "lift of composite f={} g={}",
                                    serde_json::to_string(&f).unwrap(),
                                    serde_json::to_string(&g).unwrap()
                                ),
                                expected: serde_json::to_string(&rhs).unwrap(),
                                got: serde_json::to_string(&lhs).unwrap(),
                            });
                        }
                    }
                }
            }
        }
    }

    // the approximability identity over the full grid
    let mut grid: Vec<(&S::Obj, &S::Obj, S::Mor)> = Vec::new();
    for a in &objects {
        for b in &objects {
            for f in scheme.hom(a, b)? {
                grid.push((a, b, f));
            }
        }
    }
    let workers = workers.max(1);
    let chunk = grid.len().div_ceil(workers).max(1);
    let results = std::sync::Mutex::new(vec![(0u64, Vec::new()); workers]);
    let errors = std::sync::Mutex::new(Vec::<Error>::new());
    std::thread::scope(|scope| {
        for (slot, work) in grid.chunks(chunk).enumerate() {
            let results = &results;
            let errors = &errors;
            scope.spawn(move || {
                let mut local_checked = 0u64;
                let mut local_failures = Vec::new();
                for (a, b, f) in work {
                    let mut run = || -> Result<()> {
                        let fb = scheme.extend(b)?;
                        let lifted = scheme.lift(f)?;
                        for u in scheme.stage_homs(&fb)? {
                            local_checked += 1;
                            let expected = scheme.compose(&scheme.phi(b, &u)?, f)?;
                            let got = scheme.phi(a, &scheme.precompose_stage(&u, &lifted)?)?;
                            if got != expected && find_lift(scheme, f, &u)?.is_none() {
                                local_failures.push(SchemeFailure {
                                    instance: format!(
                                        "f={} u={}",
                                        serde_json::to_string(f).unwrap(),
                                        serde_json::to_string(&u).unwrap()
                                    ),
                                    expected: serde_json::to_string(&expected).unwrap(),
                                    got: serde_json::to_string(&got).unwrap(),
                                });
                            }
                        }
                        Ok(())
                    };
                    if let Err(e) = run() {
                        errors.lock().unwrap().push(e);
                    }
                }
                results.lock().unwrap()[slot] = (local_checked, local_failures);
            });
        }
    });
    if let Some(e) = errors.into_inner().unwrap().into_iter().next() {
        return Err(e);
    }
    for (c, fs) in results.into_inner().unwrap() {
        checked += c;
        failures.extend(fs);
    }
    failures.sort();
    Ok(SchemeReport { checked, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraisse::{saturate_stage, Age};

    #[test]
    fn linear_phi_follows_the_top_point() {
        let scheme = scheme_linear_orders(8);
        let a = Structure::linear_order(2);
        let fa = scheme.extend(&a).unwrap();
        assert_eq!(fa, Structure::linear_order(3));
        let u = OmegaEmbedding::linear(3, vec![1, 4, 7])
            .unwrap()
            .into_embedding(scheme.stage())
            .unwrap();
        let phi = scheme.phi(&a, &u).unwrap();
        assert_eq!(phi.cod().size(), 7);
        assert_eq!(phi.map(), &[1, 4]);
    }

    #[test]
    fn linear_lift_of_identity_is_identity() {
        let scheme = scheme_linear_orders(6);
        let a = Structure::linear_order(3);
        let id = Embedding::identity(&a);
        assert_eq!(
            scheme.lift(&id).unwrap(),
            Embedding::identity(&Structure::linear_order(4))
        );
    }

    #[test]
    fn linear_iota_is_identity_targets() {
        let scheme = scheme_linear_orders(6);
        let iota = scheme.iota(&Structure::linear_order(3)).unwrap();
        assert_eq!(iota.map(), &[0, 1, 2]);
    }

    #[test]
    fn linear_phi_of_iota_is_the_covering_inclusion() {
        let scheme = scheme_linear_orders(8);
        for n in 1..=4 {
            let a = Structure::linear_order(n);
            let fa = scheme.extend(&a).unwrap();
            let iota_fa = scheme.iota(&fa).unwrap();
            let phi = scheme.phi(&a, &iota_fa).unwrap();
            assert_eq!(phi.cod().size(), n);
            assert_eq!(phi.map(), (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn linear_scheme_verifies() {
        let report = verify_scheme(&scheme_linear_orders(8), 4, 1).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert!(report.checked > 0);
    }

    #[test]
    fn dual_scheme_verifies_and_matches_phi() {
        let scheme = scheme_dual_orders(7);
        let u = RigidSurjection::new(vec![0, 1, 0, 2, 1], 3).unwrap();
        let phi = scheme.phi(&2, &u).unwrap();
        assert_eq!(phi.values(), &[0, 1, 0]);

        // Φ undoes the prime extension
        for s in 1..=3 {
            for r in 1..=s {
                for f in enumerate_rigid_surjections(s, r).unwrap() {
                    let lifted = scheme.lift(&f).unwrap();
                    assert_eq!(scheme.phi(&r, &lifted).unwrap(), f);
                }
            }
        }

        let report = verify_scheme(&scheme, 3, 1).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn dual_star_agrees_with_star_finite() {
        let scheme = scheme_dual_orders(7);
        for n in 2..=6 {
            for np in 2..=n {
                for h in enumerate_rigid_surjections(n, np).unwrap() {
                    for s in 1..np {
                        for r in 1..=s {
                            for f in enumerate_rigid_surjections(s, r).unwrap() {
                                let lhs = star(&scheme, &h, &f).unwrap();
                                let rhs = crate::rigidsurj::star_finite(&h, &f).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn star_with_identity_recovers_the_inclusion() {
        let scheme = scheme_linear_orders(6);
        let h = scheme
            .prefix_endo((0..6).collect())
            .unwrap();
        let b = Structure::linear_order(2);
        for f in scheme.hom(&Structure::linear_order(1), &b).unwrap() {
            let out = star(&scheme, &h, &f).unwrap();
            assert_eq!(out.cod().size(), 2);
            assert_eq!(out.map(), f.map());
        }
    }

    #[test]
    fn star_shift_example() {
        let scheme = scheme_linear_orders(5);
        let h = scheme.prefix_endo(vec![1, 2, 3, 4]).unwrap();
        let a = Structure::linear_order(1);
        let b = Structure::linear_order(2);
        for (f, expect) in scheme.hom(&a, &b).unwrap().iter().zip([vec![1], vec![2]]) {
            let out = star(&scheme, &h, f).unwrap();
            assert_eq!(out.cod().size(), 3);
            assert_eq!(out.map(), &expect[..]);
        }
    }

    #[test]
    fn star_reports_needed_window() {
        let scheme = scheme_linear_orders(6);
        let h = scheme.prefix_endo(vec![2]).unwrap(); // window of size 1
        let f = Embedding::identity(&Structure::linear_order(2));
        assert!(matches!(
            star(&scheme, &h, &f),
            Err(Error::TruncationTooSmall { required: 3 })
        ));
    }

    #[test]
    fn iota_overrides_change_star() {
        // shift ι_{F(B)} by one: h ⋆ f now reads off h one step later
        let base = scheme_linear_orders(6);
        let b = Structure::linear_order(2);
        let fb = base.extend(&b).unwrap();
        let shifted = Embedding::new(fb.clone(), base.stage().clone(), vec![1, 2, 3]).unwrap();
        let scheme = base.clone().with_iota(fb, shifted).unwrap();
        let h = scheme.prefix_endo(vec![0, 2, 4, 5]).unwrap();
        let f = Embedding::identity(&b);
        let with_default = star(&base, &h, &f).unwrap();
        let with_override = star(&scheme, &h, &f).unwrap();
        assert_eq!(with_default.map(), &[0, 2]); // h ∘ [0,1,2], cut below h(2)=4
        assert_eq!(with_override.map(), &[2, 4]); // h ∘ [1,2,3], cut below h(3)=5
        assert_ne!(with_default, with_override);

        // a morphism that is not an embedding of B into the stage is rejected
        let bad = Embedding::identity(&Structure::linear_order(3));
        assert!(base.clone().with_iota(Structure::linear_order(3), bad).is_err());
    }

    #[test]
    fn dual_iota_override_is_used_by_star() {
        let base = scheme_dual_orders(7);
        // ι_{F(B)} for B = 1: a non-canonical surjection onto 2 points
        let iota = RigidSurjection::new(vec![0, 0, 1, 0], 2).unwrap();
        let scheme = base.clone().with_iota(2, iota).unwrap();
        let h = RigidSurjection::new(vec![0, 1, 2, 3, 1], 4).unwrap();
        let f = RigidSurjection::identity(1); // the only morphism 1 → 1
        // ι ∘ h = [0,0,1,0,0]: φ cuts at the first 1, so h ⋆ f is [0,0]
        let out = star(&scheme, &h, &f).unwrap();
        assert_eq!(out.values(), &[0, 0]);
        // the default π-based star differs: π_2 ∘ h = [0,1,1,1,1] cuts at index 1
        let default_out = star(&base, &h, &f).unwrap();
        assert_eq!(default_out.values(), &[0]);
        // window mismatch is reported with the size the override needs
        let short = RigidSurjection::new(vec![0, 1, 0], 2).unwrap();
        assert!(matches!(
            star(&scheme, &short, &f),
            Err(Error::TruncationTooSmall { required: 4 })
        ));
    }

    #[test]
    fn find_lift_returns_the_canonical_lift() {
        let scheme = scheme_dual_orders(6);
        let f = RigidSurjection::new(vec![0, 1, 0], 2).unwrap(); // op-morphism 2 → 3
        for u in scheme.stage_homs(&4).unwrap() {
            let found = find_lift(&scheme, &f, &u).unwrap().unwrap();
            assert_eq!(found, extend_prime(&f));
        }
    }

    #[test]
    fn enumerated_scheme_phi_restricts_to_initial_segment() {
        let stage = saturate_stage(Age::Graph, 2, 1).unwrap();
        let scheme = scheme_enumerated(&stage, one_point_extension(Age::Graph)).unwrap();
        // A = the edge on two points, embedded somewhere in the stage
        let a = Structure::graph(2, &[(0, 1)])
            .unwrap()
            .with_order(vec![0, 1])
            .unwrap();
        let fa = scheme.extend(&a).unwrap();
        assert_eq!(fa.size(), 3);
        let u = scheme.stage_homs(&fa).unwrap().into_iter().next().unwrap();
        let phi = scheme.phi(&a, &u).unwrap();
        assert_eq!(phi.cod().size(), u.apply(2));
        assert_eq!(phi.map(), &u.map()[..2]);
    }

    #[test]
    fn enumerated_phi_of_an_initial_segment_inclusion_is_the_inclusion() {
        let stage = saturate_stage(Age::Graph, 2, 1).unwrap();
        let scheme = scheme_enumerated(&stage, one_point_extension(Age::Graph)).unwrap();
        // pick a prefix of the stage whose first part extended by its own
        // last point is the next prefix: F(A) = stage[0..m] with A = stage[0..m-1]
        let mut hits = 0;
        for m in 2..=4usize {
            let fa_labeled = crate::fraisse::stage_prefix(&stage, m).unwrap();
            let a = crate::fraisse::stage_prefix(&stage, m - 1).unwrap();
            if scheme.extend(&a).unwrap() != fa_labeled {
                continue; // the stage point m-1 is not isolated below m
            }
            let inclusion = Embedding::new(
                fa_labeled.clone(),
                stage.structure.clone(),
                (0..m).collect(),
            )
            .unwrap();
            let phi = scheme.phi(&a, &inclusion).unwrap();
            assert_eq!(phi.cod(), &a);
            assert_eq!(phi.map(), (0..m - 1).collect::<Vec<_>>());
            hits += 1;
        }
        assert!(hits > 0, "no initial segment matched the extension rule");
    }

    #[test]
    fn enumerated_scheme_verifies_on_a_small_stage() {
        let stage = saturate_stage(Age::Graph, 1, 2).unwrap();
        let scheme = scheme_enumerated(&stage, one_point_extension(Age::Graph)).unwrap();
        let report = verify_scheme(&scheme, 2, 1).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn verify_scheme_is_deterministic_across_workers() {
        let scheme = scheme_dual_orders(6);
        let serial = verify_scheme(&scheme, 3, 1).unwrap();
        let parallel = verify_scheme(&scheme, 3, 4).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn mismatched_extension_is_rejected() {
        let stage = saturate_stage(Age::Graph, 1, 1).unwrap();
        assert!(scheme_enumerated(&stage, one_point_extension(Age::Poset)).is_err());
    }
}
