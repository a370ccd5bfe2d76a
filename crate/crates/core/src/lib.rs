//! Exact and rigorous machinery for ruling out nontrivial tight `2s`-designs
//! with `s >= 10`: design parameter families, identity checks, upper and lower
//! bounds on `v`, and the prime-gap and candidate search engines.

pub mod auxiliary_h;
pub mod design_functions;
pub mod exact_arith;
pub mod identity_suite;
pub mod prime_engine;
pub mod rigorous;
pub mod search;
pub mod upper_bound;
