//! Numerical study of the joint distribution of fractional parts
//! (α₁γ, …, αₙγ) of the imaginary parts γ of Riemann zeta zeros.
//!
//! The library is organized around the objects that drive that study:
//!
//! * [`zeros`] — ingestion, caching, and counting of zero tables;
//! * [`relations`] — the rational-relation systems Mα = P that determine
//!   the limiting density, exact solving and numerical detection;
//! * [`density`] — the limiting density g_α: closed form, series oracle,
//!   Fourier coefficients, ∫hg, and torus grids;
//! * [`landau`] — von Mangoldt / prime-power helpers and Landau-type
//!   sums Σ x^{iγ} over zeros with deterministic parallel reduction;
//! * [`diophantine`] — continued fractions of α₁/α₂, the convergent
//!   inequality, U_α membership, and Diophantine condition scans;
//! * [`empirical`] — fractional-part statistics (M, DM, weighted sums)
//!   and convergence checks against ∫hg;
//! * [`render`] — CSV / PGM / PPM output for grids.
//!
//! Extended-precision scalar arithmetic lives in [`xprec`]; the
//! deterministic chunked summation primitives live in [`parallel`].

pub mod density;
pub mod diophantine;
pub mod empirical;
pub mod error;
pub mod landau;
pub mod parallel;
pub mod primes;
pub mod relations;
pub mod render;
pub mod xprec;
pub mod zeros;

pub use density::{Grid2D, TestFunction};
pub use error::Error;
pub use relations::{AlphaVector, RelationRow, RelationSystem};
pub use zeros::ZeroSet;
