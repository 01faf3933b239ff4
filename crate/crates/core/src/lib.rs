//! Exact value-set statistics for polynomial families over finite fields.
//!
//! The family under study is `f_b = T^d + a_{d-1} T^{d-1} + ... + a_{d-s} T^{d-s}
//! + b_{d-s-1} T^{d-s-1} + ... + b_1 T` over F_q with the leading coefficients
//! `a` fixed and the tail `b` free.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod gf;
pub mod rational;
pub mod regime;
pub mod seed;
pub mod suite;
pub mod symcore;
pub mod unipoly;
pub mod varscan;

pub use error::{Error, Result};
pub use exact::{Budget, ExactReport, FamilySpec, Method};
pub use gf::{ArithOp, FieldCtx, FieldElement};
pub use rational::Rational;
pub use regime::{validate_regime, RegimeReport};
pub use unipoly::Poly;
pub use varscan::{JacobianReport, PointCount, ScanMode, ScanOptions};
pub use bounds::Interval;
