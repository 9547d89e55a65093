//! Arbitrary-precision construction and verification of Ramanujan-type
//! series for `1/π^{2ν}`.
//!
//! The crate is layered bottom-up:
//!
//! - [`bigreal`]: tagged-precision reals and the cached AGM value of `π`.
//! - [`elliptic`]: AGM, complete elliptic integrals, nome, theta functions,
//!   singular moduli and the product `f(-q)`.
//! - [`alpha`]: the elliptic alpha function, its 4r/9r/25r reductions,
//!   multipliers and Eisenstein sums; [`identities`] collects the modular
//!   identities used for cross-validation.
//! - [`rr`]: the Rogers–Ramanujan continued fraction and the Y-values.
//! - [`symbolic`]: exact differentiation in `K`, `E` over `Q(k)` and the
//!   numeric solve for the series coefficients.
//! - [`series`]: exact `c_p(n)`, bracket polynomials, series evaluation and
//!   digit-level verification, including replay of the printed series.

pub mod alpha;
pub mod bigreal;
pub mod elliptic;
pub mod error;
pub mod identities;
pub mod rational;
pub mod roots;
pub mod rr;
pub mod series;
pub mod symbolic;

pub use bigreal::BigReal;
pub use error::{Error, Result};
pub use rational::PosRational;
