//! Spectral bounds and a Fourier-multiplier Galerkin solver for the
//! fractional-logarithmic Laplacian, the operator with Fourier symbol
//! `|xi|^(2s) ln |xi|^2`, restricted to Dirichlet boundary conditions on
//! box domains.
//!
//! The crate is organised in four layers:
//!
//! * [`coremath`] — closed-form mathematics of the radial symbol: ball
//!   integrals, the level-set objective and its optimum, the bathtub
//!   rearrangement oracle, Karamata-style summation checks and the C^2
//!   boundary cutoff profile.
//! * [`bounds`] — evaluators for the eigenvalue-sum lower bound, the
//!   leading-order upper bound, positivity thresholds and the Weyl-type
//!   asymptotic laws with logarithmic corrections.
//! * [`solver`] — a Galerkin discretisation in the zero-extended sine
//!   basis: closed-form basis transforms, symbol quadrature with
//!   analytic tails, dense symmetric eigensolves, a binary matrix cache
//!   and the cutoff plane-wave probe.
//! * [`harness`] — experiment configuration, CSV/JSON reporting and the
//!   verification suite behind the `speclog` command-line tool.
//!
//! Everything is deterministic: given identical inputs, configurations
//! and seeds, all outputs are bitwise reproducible regardless of thread
//! count.

pub mod bounds;
pub mod coremath;
pub mod harness;
pub mod numeric;
pub mod solver;

pub use bounds::DomainGeometry;
pub use coremath::SpectralParams;
