//! Numerics for nonlocal (fractional) minimal surface theory.
//!
//! The crate computes the central quantities of the theory at desk scale:
//!
//! * [`quad`] — adaptive 1-D/N-D quadrature with weak-singularity flattening,
//!   symmetric-excision principal values and a seeded Monte Carlo oracle;
//! * [`cones`] — the fractional mean curvature functional `H(alpha)` of a
//!   Lawson cone and the s-minimal aperture `alpha(s,m,n)`;
//! * [`stability`] — fractional Hardy constants `H(m,n,s)`, the geometric
//!   constants `A0(m,n,s)^2`, stability verdicts and the full constant table;
//! * [`profiles`] — catenoid continuation and two-sheet profile ODEs,
//!   Emden–Fowler diagnostics and Jacobi fields;
//! * [`fracmc`] — fractional mean curvature and the nonlocal Jacobi operator
//!   on axially symmetric bodies in 3-space, fractional perimeters, residual
//!   scans of the assembled surface and a best-effort profile relaxation;
//! * [`layers`] — balancing constants for multi-sheet layered surfaces by
//!   constrained minimization.
//!
//! The `fracmin` binary exposes each capability as a subcommand; the
//! `examples/` directory holds one runnable example per capability.

pub mod cli;
pub mod cones;
pub mod error;
pub mod fracmc;
pub mod layers;
pub mod ode;
pub mod profiles;
pub mod quad;
pub mod report;
pub mod roots;
pub mod stability;

pub use error::{Error, Result};
pub use quad::{QuadConfig, QuadResult};
