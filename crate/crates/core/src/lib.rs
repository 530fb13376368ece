//! Exact counts and conditional probabilities for fixed points of uniform
//! random permutations, with enumeration oracles, claim sweeps and a
//! seeded Monte Carlo sampler.
//!
//! `c(n, k, d)` counts permutations of `[n]` with exactly `d` fixed points
//! in `[k]`; `p(n, k, d) = c(n, k, d) / n!`; `f(n, k, d)` is the chance that
//! `k + 1` is fixed given exactly `d` fixed points in `[k]`.

pub mod analysis;
pub mod conditional;
pub mod counts;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod report;
pub mod sampler;

pub use conditional::{
    closed_form_small_k, cond_fix_prob, cond_fix_prob_incl_excl, f_bounds, last_point_gap, BoundsTriple,
};
pub use counts::{
    count_exact_fixed, count_exact_fixed_flat, derangements, partial_derangements, prob_exact_fixed,
    prob_via_point_split, recurrence_suite, Params,
};
pub use error::{Error, ParamError, Result};
pub use exact::{binomial, factorial, render_decimal, Count, DecimalStyle, ExactError, Prob, Rational};
pub use oracle::{Permutation, SizeGuard};
pub use report::{Record, Status, VerificationReport};
