//! Random hyperbolic graphs and their clustering behaviour.
//!
//! This crate generates random geometric graphs on a disc of the hyperbolic
//! plane (the hard-threshold *disc* model and the logistic *binomial* model),
//! counts triangles and 2-paths exactly, and evaluates the closed-form limits
//! that the global and type-restricted clustering coefficients converge to.
//! The two sides are built to be cross-validated: Monte Carlo estimates from
//! the generators against quadrature values from [`theory`], with the
//! orchestration living in [`harness`].
//!
//! Modules:
//! - [`hypgeom`] — exact and approximate geometry on the disc `D_R`.
//! - [`sampler`] — seeded, order-independent sampling of vertex sets.
//! - [`graphgen`] — graph builders (naive, pruned, binomial) over a vertex set.
//! - [`clustering`] — triangle / 2-path counting and clustering coefficients.
//! - [`theory`] — quadrature of the limit formulas and asymptotic predictions.
//! - [`harness`] — seeded experiments, sweeps, and CSV/JSON reporting.
//!
//! All randomness is counter-based: every variate is a pure function of
//! `(seed, index, purpose)`, so results are identical under any parallel
//! schedule. The `parallel` feature (on by default) switches the data-parallel
//! inner loops to rayon; every such loop also has a sequential fallback with
//! bit-identical output.

pub mod clustering;
pub mod graphgen;
pub mod harness;
pub mod hypgeom;
mod par;
pub mod rng;
pub mod sampler;
pub mod theory;

pub use graphgen::Graph;
pub use hypgeom::{ModelParams, PolarVertex};
pub use sampler::VertexSet;
