//! Exact arithmetic for tame pro-p Galois groups over the rationals.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: fixed-precision arithmetic in the p-adic integers, including
//!   Hensel lifting of square roots.
//! * [`pmatrix`]: square matrices over truncated Z_p, congruence filtration
//!   levels, and the omega valuation.
//! * [`linkdata`]: primitive roots, discrete logarithms, and the table of
//!   link numbers attached to a finite set of tame primes.
//! * [`koch`]: generator/relator presentations of the groups G_S(p), relator
//!   evaluation under matrix assignments, and the mod-p^3 linearization.
//! * [`classify`]: finiteness and image-restriction checks driven by the link
//!   data, plus the unconditional degree bound for small ramified sets.
//!
//! All computations are exact: integers are arbitrary precision and every
//! congruence is decided by integer arithmetic, never by floating point.

pub mod classify;
pub mod koch;
pub mod linkdata;
pub mod padic;
pub mod pmatrix;

pub use classify::{
    check_all_lij_zero, check_labute_triple, check_sl2_conditions, check_small_s, classify,
    classify_with_choice, degree_inequality_holds, golod_shafarevich_flag, search_labute_triples,
    simple_threshold, tame_degree_bound, ClassificationReport, ClassifyError, Conclusion,
    Condition, Finding, TameBoundResult,
};
pub use koch::{
    frattini_image, linearized_residual, local_witness, span_rank, KochError, KochPresentation,
    MatrixAssignment, PresentationCheck, RelatorCheck, TraceZeroMat,
};
pub use linkdata::{LinkError, LinkTable, RootChoice, TamePrimeSet};
pub use padic::{hensel_sqrt, is_prime_u64, PadicError, PadicInt, ValLevel, DEFAULT_PRECISION};
pub use pmatrix::{MatrixError, OmegaLevel, PMatrix};
