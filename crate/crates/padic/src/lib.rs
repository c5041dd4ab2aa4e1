//! Two-variable power series over Z/p^M read as p-adic measures on Z_p²
//! through the Amice transform: invariant derivations and moments, unit
//! restriction, pushforward along x ↦ px, evaluation on cylinder sets and
//! Kummer-congruence checks.

pub mod cyclotomic;
pub mod error;
pub mod kummer;
pub mod measure;
pub mod modular;
pub mod series;

pub use cyclotomic::{CyclotomicElt, CyclotomicRing};
pub use error::{Error, Result};
pub use kummer::{kummer_check, KummerReport, KummerViolation, MeasureMoments};
pub use measure::{frob_relation_check, measure_eval, measure_eval_2d, pushforward_p, restrict_unit_s, FrobCheck};
pub use series::{invariant_derive, moment, moments, TruncatedSeries2, Var};
