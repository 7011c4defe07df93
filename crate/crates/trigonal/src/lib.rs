//! Numerical machinery for cyclic trigonal curves `y^3 = k(x)` carrying a
//! numerical semigroup of type `<3, 2r+s, r+2s>` at their point at infinity.
//!
//! The crate builds, from a list of branch points:
//!
//! * the Weierstrass semigroup combinatorics (gaps, Young diagram, Schur
//!   polynomial) — [`semigroup`],
//! * the curve itself with sheet tracking and expansions at infinity —
//!   [`curve`],
//! * weight-ordered monomial bases and the differentials of first and second
//!   kind — [`basis`],
//! * the fundamental 2-form and third-kind differentials — [`forms`],
//! * homology cycles, period matrices, and Abel maps — [`periods`] (with
//!   quadrature/continuation support in [`contour`]),
//! * theta and sigma functions with derivatives — [`sigma`],
//! * Frobenius–Stickelberger determinants, Jacobi inversion, and the
//!   vanishing-stratum checks — [`inversion`].
//!
//! Everything is plain double-precision complex arithmetic; the pipelines
//! are deterministic given the curve data and (where sampling is involved)
//! an RNG seed.

pub mod basis;
pub mod contour;
pub mod curve;
pub mod forms;
pub mod inversion;
pub mod periods;
pub mod poly;
pub mod semigroup;
pub mod sigma;

pub use num_complex::Complex64;

/// Errors surfaced by the construction and verification pipelines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Parameters that do not define a curve in the supported family.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// Analytic continuation of a sheet could not make progress.
    #[error("analytic continuation stuck near x = {0}")]
    ContinuationStuck(Complex64),
    /// A homology cycle candidate failed to return to its starting sheet.
    #[error("cycle candidate ({0},{1}) on sheet {2} did not close")]
    CycleNotClosed(usize, usize, usize),
    /// The intersection pairing did not reduce to a standard symplectic basis.
    #[error("symplectic reduction failed: {0}")]
    SymplecticReduction(String),
    /// The second-kind numerator data did not split along the expected basis.
    #[error("second-kind numerator split failed: {0}")]
    SecondKindSplit(String),
    /// Sheet targeting failed (no deck rotation matches the requested lift).
    #[error("no deck rotation reaches the requested lift at x = {0}")]
    SheetMismatch(Complex64),
    /// Theta characteristic search did not produce a unique winner.
    #[error("theta characteristic search ambiguous: {0}")]
    DeltaAmbiguous(String),
    /// A numerical solve failed (singular matrix, non-convergence, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Convenient result alias for the crate.
pub type Result<T> = std::result::Result<T, Error>;
