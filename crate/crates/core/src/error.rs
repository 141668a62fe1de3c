use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("self-coupling undefined")]
    SelfCoupling,

    #[error("invalid shell indices: p = {p}, q = {q} (need 1 <= p <= q)")]
    InvalidShellIndices { p: usize, q: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("phase condition infeasible at shell {q}: t_q = {t}")]
    PhaseConditionInfeasible { q: usize, t: f64 },

    #[error("degenerate fit window: {points} points (need at least 5)")]
    DegenerateFitWindow { points: usize },

    #[error("qubit count {n} exceeds the state-vector cap of {cap}")]
    QubitCapExceeded { n: usize, cap: usize },

    #[error("non-commuting simultaneous terms: qubit {qubit} appears as both control and target")]
    NonCommutingTerms { qubit: usize },

    #[error("no interaction: V = 0")]
    ZeroInteraction,

    #[error("unlabeled qubit {0} in echo assignment")]
    UnlabeledQubit(usize),

    #[error("integrand singular inside region")]
    TargetInsidePrism,

    #[error("quadrature tolerance {tol:e} not reached: best estimate {estimate:e} with error {error:e}")]
    QuadratureNoConvergence { estimate: f64, error: f64, tol: f64 },

    #[error("monotonicity region violated: point must face the prism with its y,z projection inside the cross-section")]
    MonotonicityRegionViolated,

    #[error("zero crossing in slab during expansion step {step}")]
    ZeroCrossingInSlab { step: usize },

    #[error("{l} is not a power of {phi}")]
    NotPowerOfPhi { l: usize, phi: usize },

    #[error("scratch conflict at layer {layer}: site {site} is not in |0>")]
    ScratchConflict { layer: usize, site: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by invalid caller input, as opposed to
    /// numerical or consistency failures discovered at run time.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::SelfCoupling
                | Error::InvalidShellIndices { .. }
                | Error::InvalidLattice(_)
                | Error::InvalidParameter(_)
                | Error::DegenerateFitWindow { .. }
                | Error::QubitCapExceeded { .. }
                | Error::NonCommutingTerms { .. }
                | Error::ZeroInteraction
                | Error::UnlabeledQubit(_)
                | Error::TargetInsidePrism
                | Error::MonotonicityRegionViolated
                | Error::NotPowerOfPhi { .. }
        )
    }
}
