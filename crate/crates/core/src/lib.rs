//! Magic biunitary matrices built from Clifford algebras, and the Catalan
//! moment certificate for their characters.
//!
//! The crate is organised bottom-up:
//!
//! * [`clifford`] exact arithmetic in `Cl(R^s)` over the basis `{e_I}`;
//! * [`linalg`] dense complex matrices with a Jacobi hermitian eigensolver;
//! * [`magic`] magic biunitary matrices, their verification and characters;
//! * [`haar`] counter-based sampling of unit spheres and Clifford unitaries;
//! * [`moments`] Catalan numbers, semicircular laws and character moments;
//! * [`fusion`] the `SO(3)` fusion ring and its Poincaré coefficients;
//! * [`cli`] the batch front end used by the `clifford-magic` binary.

pub mod cli;
pub mod clifford;
pub mod error;
pub mod fusion;
pub mod haar;
pub mod linalg;
pub mod magic;
pub mod moments;

pub use clifford::{CliffordElement, MultiIndex};
pub use error::{Error, Result};
pub use fusion::FusionVector;
pub use haar::SeededSampler;
pub use linalg::ComplexMatrix;
pub use magic::{MagicMatrix, MagicReport};
pub use moments::MomentReport;

/// Tolerance for identities on exactly constructed inputs.
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for sampled or accumulated quantities.
pub const SAMPLED_TOL: f64 = 1e-9;
