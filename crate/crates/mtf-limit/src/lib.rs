//! Limiting search-cost distribution of the move-to-front rule under random
//! request probabilities.
//!
//! Item popularities are iid nonnegative weights; request probabilities are
//! the weights normalized over an `n`-item catalog. As `n` grows, the
//! stationary search cost per request, scaled by `n`, converges to a
//! continuous law determined by the weight distribution's Laplace transform.
//! This crate computes that law (density, CDF, quantiles, moments, transform),
//! verifies it against exact finite-`n` machinery, and applies it to LRU
//! cache miss-ratio prediction and sizing.
//!
//! Entry points:
//! - [`weights::WeightFamily`]: a weight model (four built-in shapes, JSON
//!   descriptors, or hand-built transforms).
//! - [`limit_law::LimitLaw`]: the limiting search-cost distribution.
//! - [`mtf_sim`]: exact stationary samplers, a brute-force oracle, and the
//!   finite-`n` transform quadrature.
//! - [`cache_analysis`]: LRU miss curves and cache sizing.
//! - [`stochastic_order`]: dominance scans against the uniform law.
//! - [`cli`]: the `mtf-limit` command-line tool.

// Comparisons written as `!(x >= 0.0)` reject NaN along with the sign; the
// suggested partial_cmp spelling hides that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache_analysis;
pub mod cli;
pub mod error;
pub mod limit_law;
pub mod mtf_sim;
pub mod quad;
pub mod rng;
pub mod stochastic_order;
pub mod weights;

pub use error::{Error, Result};
pub use limit_law::{ClosedForm, LimitLaw, MomentRoutes};
pub use mtf_sim::{MtfState, RequestProbabilities, SampleMethod, SearchCostSamples};
pub use weights::{FamilyDescriptor, FamilyKind, ValidationReport, WeightFamily};
