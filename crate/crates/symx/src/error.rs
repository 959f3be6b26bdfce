use thiserror::Error;

/// Errors raised by the symmetry-expansion toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pauli product has imaginary phase (operands anticommute)")]
    ImaginaryPhase,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("probability {0} outside [0, 1)")]
    BadProbability(f64),
    #[error("per-location probability {0} >= 1; decrease mu or increase locations")]
    ProbabilityOverflow(f64),
    #[error("noise spec declares {spec} locations but circuit has {circuit}")]
    LocationMismatch { spec: usize, circuit: usize },
    #[error("unsupported lattice: {0}")]
    UnsupportedLattice(String),
    #[error("unsupported noise kind: {0}")]
    UnsupportedNoise(String),
    #[error("expansion weights sum to zero")]
    ZeroWeightSum,
    #[error("expansion operator expectation {0:.3e} too close to zero")]
    DegenerateNormalisation(f64),
    #[error("expansion operator expectation {0:.6} is not positive")]
    NonPositiveGamma(f64),
    #[error("denominator vanishes in bias expression")]
    SingularDenominator,
    #[error("schemes have equal squared biases; crossover undefined")]
    EqualBiases,
    #[error("expanded state has unit fidelity; no erroneous component to extract")]
    UnitFidelity,
    #[error("no detectable fraction recorded for a scheme element")]
    MissingFraction,
    #[error("threshold set is empty at mu={mu}, delta={delta}")]
    EmptyThresholdSet { mu: f64, delta: f64 },
    #[error("observable does not commute with every scheme element")]
    NonCommutingObservable,
    #[error("denominator mean is zero in ratio estimate")]
    ZeroDenominator,
    #[error("denominator mean is zero in quotient variance")]
    ZeroMeanDenominator,
    #[error("overlap matrix has no admissible eigenvectors")]
    SingularPencil,
    #[error("cycle order {m} outside 1..={max}")]
    BadCycleOrder { m: usize, max: usize },
    #[error("copied-state dimension {0} exceeds the dense-simulation ceiling")]
    DimensionOverflow(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
