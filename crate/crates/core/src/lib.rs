//! Exact-arithmetic invariants of integrable highest-weight modules over
//! finite simple and affine Kac-Moody algebras:
//!
//! - root-system data, including Langlands duals of untwisted algebras
//!   ([`root_system`]),
//! - the affine Weyl group, dot action, and fundamental-domain reduction
//!   ([`weyl`]),
//! - the q-Kostant partition function and the q-analog `C^lambda_mu(q)` of
//!   weight multiplicity ([`kostant`]),
//! - Freudenthal's multiplicity recursion as an independent oracle
//!   ([`freudenthal`]),
//! - explicit module slices with exact Chevalley actions and the Brylinski
//!   principal filtration `{x : e^i x = 0}` giving `^eC^lambda_mu(q)`
//!   ([`brylinski`]),
//! - level-rank combinatorics for affine sl(N): generalized Young diagrams,
//!   Nakajima weight lifts, and a tensor-multiplicity oracle ([`levelrank`]).
//!
//! Everything is computed over exact integers and rationals; no floats.

// index-based loops are the clearer form for the dense matrix kernels here
#![allow(clippy::needless_range_loop)]

pub mod brylinski;
pub mod error;
pub mod freudenthal;
pub mod kostant;
pub mod levelrank;
pub mod linalg;
pub mod qpoly;
pub mod root_system;
pub mod weyl;

pub use brylinski::ModuleSlice;
pub use error::{Error, Result};
pub use freudenthal::MultiplicityTable;
pub use kostant::WeightQSeries;
pub use levelrank::{GeneralizedYoungDiagram, GlWeight, GlkAffine, QuiverDims};
pub use qpoly::QPolynomial;
pub use root_system::{Algebra, AlgebraKind, FiniteType, Series, Weight};
pub use weyl::{Parity, WeylElement};
