//! Arbitrary-precision Eisenstein–Kronecker series, Kronecker theta
//! functions and Kato–Siegel differentials on complex lattices.

pub mod context;
pub mod ek;
pub mod error;
pub mod kato_siegel;
pub mod lattice;
pub mod nhmf;
pub mod numerics;
pub mod theta;
pub mod torsion;

pub use context::PrecisionContext;
pub use ek::{ek_direct, ek_normalized, lerch_kstar, EkValue, Method, Route};
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeInvariants, TransformCheck};
pub use nhmf::{algebraic_ek, d_variant, hodge_projection, katz_comparison_check, SymHodgeVector};
pub use theta::{kronecker_theta, taylor_coeffs, TaylorGrid, ThetaTranslate};
pub use torsion::TorsionPoint;
