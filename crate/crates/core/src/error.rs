use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into three families that the command line maps onto
/// distinct exit codes: input/validation problems, exhausted enumeration
/// budgets, and mathematical invariant failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("enumeration budget exceeded: {requested} tuples requested, cap is {cap}")]
    BudgetExceeded { requested: String, cap: u64 },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup is not central: element {0} does not commute with the group")]
    NotCentral(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("invalid central product data: {0}")]
    InvalidCentralProduct(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("composite of boundary maps is nonzero")]
    NonzeroComposite,

    #[error("lattice is not primitive (saturation has index {0})")]
    NotPrimitive(String),

    #[error("truncation depth {have} is insufficient for degree {degree} (need {need})")]
    InsufficientTruncation {
        degree: usize,
        have: usize,
        need: usize,
    },

    #[error("tuple is not affinely commutative")]
    NotAffinelyCommutative,

    #[error("invalid torus extension: {0}")]
    InvalidExtension(String),

    #[error("elements belong to different extensions")]
    MixedParent,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("cocycle is not commutative at the {0} triple point")]
    NonCommutativeCocycle(String),

    #[error("loop is not based at the identity")]
    NotBasedLoop,

    #[error("endpoint commutation fails: commutator is {0}")]
    EndpointCommutation(String),

    #[error("clutching loop does not close: {0}")]
    NonClosingLoop(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by an exhausted enumeration budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    /// True for errors that signal a failed mathematical invariant rather
    /// than bad input.
    pub fn is_invariant_failure(&self) -> bool {
        matches!(
            self,
            Error::InternalInconsistency(_) | Error::NonzeroComposite | Error::NonClosingLoop(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Cap on the number of tuples an enumeration may touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_tuples: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_tuples: 10_000_000,
        }
    }
}

impl Budget {
    pub fn new(max_tuples: u64) -> Self {
        Budget { max_tuples }
    }

    /// Fails unless `base^exp` fits under the cap.
    pub fn check_power(&self, base: usize, exp: usize) -> Result<u64> {
        let mut acc: u64 = 1;
        for _ in 0..exp {
            match acc.checked_mul(base as u64) {
                Some(v) if v <= self.max_tuples => acc = v,
                _ => {
                    return Err(Error::BudgetExceeded {
                        requested: format!("{base}^{exp}"),
                        cap: self.max_tuples,
                    })
                }
            }
        }
        if acc > self.max_tuples {
            return Err(Error::BudgetExceeded {
                requested: acc.to_string(),
                cap: self.max_tuples,
            });
        }
        Ok(acc)
    }

    pub fn check_count(&self, count: u64) -> Result<()> {
        if count > self.max_tuples {
            Err(Error::BudgetExceeded {
                requested: count.to_string(),
                cap: self.max_tuples,
            })
        } else {
            Ok(())
        }
    }
}
