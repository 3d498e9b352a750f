use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("depth insufficiency: requested scale {requested:e} is below the resolvable scale {resolvable:e} of the zero-set model")]
    DepthInsufficiency { requested: f64, resolvable: f64 },

    #[error("level equation has no crossing: n*g(a) > a over the whole search range (0, {upper}]")]
    NoCrossing { upper: f64 },

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("nonpositive total mass c_0 = {0}; the density specification is broken")]
    NegativeMass(f64),

    #[error("positivity lost in the recursion at step {step}: |alpha| = {alpha}; raise the moment precision")]
    PositivityLoss { step: usize, alpha: f64 },

    #[error("arc-Chebyshev polynomials require an even degree, got {0}")]
    OddDegree(usize),

    #[error("Taylor-section tail bound {tail:e} exceeds the budget {budget:e}; the section degree n is too small for A/delta")]
    TailTooLarge { tail: f64, budget: f64 },

    #[error("regularity hypothesis failed: {0}")]
    RegularityViolation(String),

    #[error("subordination ratio appears unbounded under grid refinement (last ratio {0})")]
    UnboundedRatio(f64),

    #[error("|P(0)| = {0:e} is below the precision floor; cannot certify")]
    ZeroAtOrigin(f64),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("unknown corollary id `{0}`")]
    UnknownCorollary(String),

    #[error("unknown scenario family: {0}")]
    UnknownFamily(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
