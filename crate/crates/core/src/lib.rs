//! Exact intersection-theoretic invariants of relative complete intersections
//! `X = X_1 ∩ … ∩ X_c` inside a projective bundle `P_B(E)` over a smooth curve,
//! together with the f-positivity, cone and Chow-stability arithmetic built on
//! top of them.
//!
//! Every quantity is an arbitrary-precision integer or rational; nothing in
//! this crate touches floating point.
//!
//! The modules mirror the layers of the computation:
//!
//! - [`chowring`]: the numerical Chow ring `Z[H,Σ]/(Σ², H^r − d·H^{r−1}Σ)`.
//! - [`pushforward`]: Koszul ranks and degrees of `f_*O_X(h)`, plus a
//!   Hilbert-series oracle.
//! - [`positivity`]: f-positivity margins, the slope condition and the
//!   asymptotic analysis.
//! - [`cones`]: virtual slopes and the `Nef ⊆ B ⊆ Pseff` cone chain.
//! - [`stability`]: Hilbert–Mumford degree-of-contact arithmetic.
//! - [`sweep`]: seeded randomized cross-checks of all of the above.

pub mod chowring;
pub mod cones;
pub mod error;
pub mod exact;
pub mod poly;
pub mod positivity;
pub mod pushforward;
pub mod stability;
pub mod sweep;

pub use chowring::{AmbientData, CiFactor, CompleteIntersectionSpec, HomogeneousClass};
pub use cones::{ConeChainReport, ConeSpec, HNData, HNPiece};
pub use error::{Error, Result};
pub use poly::ExactPolynomial;
pub use positivity::{PositivityMargin, SlopeCondition, TheoremReport};
pub use pushforward::SubsetTerm;
pub use stability::{ContactDatum, Verdict, WeightedFiltration};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
