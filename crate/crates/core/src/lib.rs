//! # cauchy-fdiv
//!
//! f-divergences between Cauchy-type distributions.
//!
//! Every f-divergence between two univariate Cauchy densities is a function of
//! a single scalar, the maximal invariant
//!
//! ```text
//! chi(p, q) = ((l1 - l2)^2 + (s1 - s2)^2) / (2 s1 s2)
//! ```
//!
//! so `I_f(p : q) = h_f(chi(p, q))`. This crate provides:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`cauchy_core`] | parameters, densities, `chi`, SL(2,R) action, standard-pair reduction, Fisher-Rao distance |
//! | [`special_fn`] | AGM, complete elliptic integrals `K`, `E` (parameter convention), Gauss `1 - E/K` series |
//! | [`closed_form`] | the `h_f` catalog, mixtures, entropies, J-polynomials, angular Bhattacharyya integral |
//! | [`oracle`] | adaptive quadrature and Monte Carlo ground truth, bivariate KL |
//! | [`chi_series`] | power-chi Taylor expansions with convergence gating |
//! | [`families`] | circular, wrapped and log-Cauchy reductions; Boole and Moebius pushforwards |
//! | [`geometry_analysis`] | metrization, embeddability, Gromov probes, Chernoff optimum, regression |
//! | [`suites`] | executable acceptance checks shared by the test-suite and the CLI |
//!
//! ## Quick start
//!
//! ```rust
//! use cauchy_fdiv::cauchy_core::{chi, CauchyParam};
//! use cauchy_fdiv::closed_form::{divergence, DivergenceKind};
//!
//! let p = CauchyParam::new(0.0, 1.0).unwrap();
//! let q = CauchyParam::new(1.0, 1.0).unwrap();
//! assert!((chi(&p, &q) - 0.5).abs() < 1e-15);
//! let kl = divergence(&DivergenceKind::KL, &p, &q).unwrap();
//! assert!((kl - (5.0f64 / 4.0).ln()).abs() < 1e-15);
//! ```
//!
//! ## Conventions
//!
//! - Elliptic integrals use the *parameter* convention:
//!   `K(t) = ∫_0^{π/2} (1 - t sin²θ)^{-1/2} dθ`.
//! - Natural logarithms throughout (divergences in nats).
//! - All functions are pure; nothing holds shared mutable state.

// `!(x > 0.0)` is used deliberately so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cauchy_core;
pub mod chi_series;
pub mod closed_form;
pub mod error;
pub mod families;
pub mod geometry_analysis;
pub mod oracle;
pub mod quadrature;
pub mod sampling;
pub mod special_fn;
pub mod suites;

pub use error::{Error, Result};
