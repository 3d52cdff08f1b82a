use thiserror::Error;

pub type Result<T, E = ToposError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToposError {
    /// An enumeration would have examined more candidates than the configured budget.
    #[error("{op}: budget of {limit} candidates exceeded")]
    BudgetExceeded { op: &'static str, limit: u64 },

    #[error("structures live over different base categories")]
    BaseMismatch,

    #[error("{0}")]
    Mismatch(String),

    #[error("mediator requested for a non-cone: {0}")]
    NotACone(String),

    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("subpresheaf is not closed under restriction: {0}")]
    NotRestrictionClosed(String),

    #[error("expected a monomorphism: {0}")]
    NotMono(String),

    #[error("expected an isomorphism: {0}")]
    NotIso(String),

    /// A universal property was requested but no candidate satisfies it.
    #[error("{what}: no candidate satisfies the universal property")]
    NoCandidate { what: String },

    /// A universal property was requested but the candidate is not unique.
    #[error("{what}: {count} candidates satisfy the universal property")]
    Ambiguous { what: String, count: usize },

    /// A derived construction produced data that violates one of its postconditions.
    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("base category too large: {0}")]
    TooLarge(String),
}

impl ToposError {
    pub fn is_budget(&self) -> bool {
        matches!(self, ToposError::BudgetExceeded { .. })
    }
}

/// Candidate counter for a single enumeration.
#[derive(Debug)]
pub(crate) struct Meter {
    op: &'static str,
    used: u64,
    limit: u64,
}

impl Meter {
    pub(crate) fn new(op: &'static str, limit: u64) -> Self {
        Meter { op, used: 0, limit }
    }

    pub(crate) fn tick(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(ToposError::BudgetExceeded {
                op: self.op,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}
