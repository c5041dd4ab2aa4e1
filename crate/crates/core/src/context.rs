use crate::error::{Error, Result};

/// Extra bits carried internally on top of `prec_bits`.
pub const GUARD_BITS: u32 = 32;

/// Working precision and truncation knobs threaded through every analytic
/// computation.
///
/// `q_terms = 0` lets each lattice pick its own theta truncation; a nonzero
/// value is a hard cap that lattice construction validates against
/// `|q|^q_terms < 2^-prec_bits`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    pub prec_bits: u32,
    pub sum_radius: u32,
    pub q_terms: u32,
    pub tol_rel: f64,
}

impl PrecisionContext {
    pub fn new(prec_bits: u32) -> Result<Self> {
        let ctx = Self {
            prec_bits,
            sum_radius: 4096,
            q_terms: 0,
            tol_rel: (-(prec_bits as f64) / 2.0).exp2(),
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if self.prec_bits < 64 {
            return Err(Error::InvalidArgument(format!(
                "prec_bits must be at least 64, got {}",
                self.prec_bits
            )));
        }
        if self.prec_bits > 1900 {
            // tol_rel is carried as an f64
            return Err(Error::InvalidArgument(format!(
                "prec_bits above 1900 is not supported, got {}",
                self.prec_bits
            )));
        }
        if self.tol_rel.is_nan() || self.tol_rel <= 0.0 {
            return Err(Error::InvalidArgument("tol_rel must be positive".into()));
        }
        if self.sum_radius == 0 {
            return Err(Error::InvalidArgument("sum_radius must be positive".into()));
        }
        Ok(())
    }

    /// Precision used for intermediate quantities.
    pub fn working_prec(&self) -> u32 {
        self.prec_bits + GUARD_BITS
    }

    /// The same knobs at twice the precision, with the tolerance retuned.
    pub fn doubled(&self) -> Self {
        Self {
            prec_bits: self.prec_bits * 2,
            sum_radius: self.sum_radius * 2,
            q_terms: self.q_terms * 2,
            tol_rel: (-(self.prec_bits as f64)).exp2(),
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(256).expect("256 bits is a valid precision")
    }
}
