use thiserror::Error;

/// Errors surfaced by the numeric engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions do not match: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("eigensolver did not converge: off-diagonal norm {0:.3e} after {1} sweeps")]
    NoConvergence(f64, usize),

    #[error("alpha must lie strictly inside (0, 1), got {0}")]
    AlphaOutOfRange(f64),

    #[error("Bloch radius must lie strictly inside (0, 1), got {0}")]
    InvalidBloch(f64),

    #[error("unphysical Bell-diagonal parameters (eigenvalue {0:.3e})")]
    Unphysical(f64),

    #[error("system size {0} exceeds the supported maximum {1}")]
    TooLarge(usize, usize),

    #[error("mixing parameter must lie strictly inside (0, 1), got {0}")]
    InvalidP(f64),

    #[error("direction vector must have unit norm, got norm {0}")]
    NotUnit(f64),

    #[error("spectrum is not integer spaced: difference {1} is off the unit lattice by {0:.3e}")]
    NotIntegerSpaced(f64, f64),

    #[error("imaginary residue {0:.3e} exceeds tolerance on a provably real quantity")]
    ImaginaryResidue(f64),

    #[error("{0} samples undersample the spectrum, need at least {1}")]
    Undersampled(usize, usize),

    #[error("negative radicand {0:.3e} in alpha-variance; an upstream quantifier is broken")]
    NegativeRadicand(f64),

    #[error("state is singular (smallest eigenvalue {0:.3e}); full rank required")]
    SingularState(f64),

    #[error("echo purity paths disagree by {0:.3e}")]
    MismatchedPaths(f64),

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
