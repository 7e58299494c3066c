//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The two structures do not share a signature.
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    /// A value failed its construction invariants.
    #[error("invalid {kind}: {reason}")]
    Invalid { kind: &'static str, reason: String },

    /// Composition attempted on morphisms whose endpoints do not meet.
    #[error("composition mismatch: {0}")]
    ComposeMismatch(String),

    /// An operation received an empty subset where a nonempty one is required.
    #[error("empty subset")]
    EmptySubset,

    /// Enumeration of rigid surjections or parameter words with n < m.
    #[error("domain shorter than codomain: n = {n}, m = {m}")]
    DomainTooShort { n: usize, m: usize },

    /// φ applied to a surjection onto a single point: there is no top value to cut at.
    #[error("cannot restrict a surjection onto a 1-element order")]
    CodomainTooSmall,

    /// Partial substitution would produce a word of length zero.
    #[error("partial substitution truncated to the empty word")]
    EmptyWord,

    /// Substitution with mismatched word sizes.
    #[error("substitution mismatch: {0}")]
    SubstitutionMismatch(String),

    /// An explicit group family has no entry for the requested object.
    #[error("explicit group family has no entry for the requested object")]
    MissingGroupEntry,

    /// An explicit group family entry is not a subgroup of the automorphism group.
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    /// A morphism supplied as a group element is not an automorphism,
    /// or is already in the family where it must not be.
    #[error("inadmissible automorphism: {0}")]
    InadmissibleAutomorphism(String),

    /// A search would exceed a configured cap; `required` is the size the
    /// search would have needed.
    #[error("{what} would require {required}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    /// A coloring does not cover its whole intended domain.
    #[error("partial coloring: {0}")]
    PartialColoring(String),

    /// Factoring f = rep·α did not yield a unique α (signals a non-mono morphism).
    #[error("non-unique factorization through the canonical representative")]
    NonUniqueFactorization,

    /// The requested age is not supported by this operation.
    #[error("unsupported age: {0}")]
    UnsupportedAge(String),

    /// A stage truncation is too small for the requested operation;
    /// `required` is the window size that would have sufficed.
    #[error("truncation too small: requires a window of at least {required}")]
    TruncationTooSmall { required: usize },

    /// An amalgam or stage mutation left the age (signals a defect).
    #[error("age closure violation: {0}")]
    AgeViolation(String),

    /// A guaranteed-by-construction validity check failed (internal defect).
    #[error("internal defect: {0}")]
    Internal(String),
}
