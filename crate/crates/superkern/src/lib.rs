//! Exact-arithmetic kernel for universal enveloping algebras of restricted
//! Lie superalgebras over finite fields of odd characteristic.
//!
//! The crate builds `U(g)` on its PBW basis for a validated structure-constant
//! description of `g`, computes degree-truncated centers and anticenters by
//! exact linear algebra, constructs reduced enveloping algebras and baby Verma
//! modules, runs the Harish-Chandra projection, and tabulates the smooth locus
//! of the center for `osp(1|2)` at desk-scale primes `p = 3, 5`.
//!
//! Modules mirror the pipeline:
//!
//! * [`scalar`]: `F_{p^k}` arithmetic and dense exact linear algebra;
//! * [`superalg`]: structure constants, validation, builtin algebras;
//! * [`pbw`]: the straightening engine for `U(g)`;
//! * [`central`]: centralizer slices, generated slices, relation search;
//! * [`reduced`]: reduced enveloping algebras `U_chi(g)`;
//! * [`repmod`]: graded matrix representations, baby Vermas, MeatAxe;
//! * [`harish`]: the Harish-Chandra projection and Weyl twists;
//! * [`zassenhaus`]: the `osp(1|2)` laboratory (special elements, skew ring,
//!   hypersurface relation, smooth/singular tabulation);
//! * [`cli`]: command dispatch, JSON/CSV reports, result cache.

pub mod central;
pub mod cli;
pub mod error;
pub mod harish;
pub mod pbw;
pub mod reduced;
pub mod repmod;
pub mod scalar;
pub mod superalg;
pub mod zassenhaus;

pub use error::Error;

/// Version tag baked into cache keys and report headers. Bump when a change
/// invalidates previously cached payloads.
pub const ARTIFACT_VERSION: &str = "superkern-0.1.0";
