//! Moment grids and the congruences every measure's moments must satisfy.

use crate::error::{Error, Result};
use crate::modular::{factorial_valuation, mul_mod, add_mod, prime_power, stirling_first};
use crate::series::TruncatedSeries2;

/// m[k][l] = ∫ x^k y^l dμ mod p^M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureMoments {
    pub p: u64,
    pub prec: u32,
    pub m: Vec<Vec<u64>>,
}

impl MeasureMoments {
    pub fn new(p: u64, prec: u32, m: Vec<Vec<u64>>) -> Result<Self> {
        if m.is_empty() || m[0].is_empty() || m.iter().any(|r| r.len() != m[0].len()) {
            return Err(Error::Mismatch("moment grid must be a nonempty rectangle".into()));
        }
        let modulus = prime_power(p, prec)?;
        let m = m.into_iter().map(|r| r.into_iter().map(|v| v % modulus).collect()).collect();
        Ok(Self { p, prec, m })
    }

    /// One-variable grid m[k] placed in column l = 0.
    pub fn from_column(p: u64, prec: u32, column: &[i64]) -> Result<Self> {
        let modulus = prime_power(p, prec)?;
        let m = column.iter().map(|v| vec![crate::modular::from_i64(*v, modulus)]).collect();
        Self::new(p, prec, m)
    }

    pub fn kmax(&self) -> usize {
        self.m.len() - 1
    }

    pub fn lmax(&self) -> usize {
        self.m[0].len() - 1
    }

    /// The grid as a series whose S^k T^l coefficient is m[k][l].
    pub fn to_series(&self) -> Result<TruncatedSeries2> {
        TruncatedSeries2::from_fn(self.p, self.prec, self.kmax(), self.lmax(), |k, l| self.m[k][l] as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KummerViolation {
    /// m[k][l] ≢ m[k2][l] mod p^exp although (p−1)p^{exp−1} | k2 − k.
    Congruence { k: usize, k2: usize, l: usize, exp: u32 },
    /// Σ_j s(n,j)·m[j][l] = n!·∫C(x,n)y^l dμ is not divisible by p^exp.
    Mahler { n: usize, l: usize, exp: u32 },
}

#[derive(Debug, Clone, Default)]
pub struct KummerReport {
    pub congruences_checked: usize,
    pub mahler_checked: usize,
    pub violations: Vec<KummerViolation>,
}

impl KummerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for each column l:
/// - Kummer: m[k] ≡ m[k′] mod p^{min(v+1, M)} whenever k ≡ k′ mod (p−1)p^v
///   (a property of measures supported on Z_p^× in the first variable);
/// - Mahler integrality: Σ_j s(n,j)·m[j] ≡ 0 mod p^{min(v_p(n!), M)}, which
///   holds for every measure on Z_p.
///
/// Needs K ≥ p so that at least one Kummer pair exists.
pub fn kummer_check(mm: &MeasureMoments) -> Result<KummerReport> {
    let p = mm.p;
    let kmax = mm.kmax();
    if kmax < p as usize {
        return Err(Error::Mismatch(format!("Kummer check needs K ≥ p = {p}, got K = {kmax}")));
    }
    let modulus = prime_power(p, mm.prec)?;
    let mut report = KummerReport::default();
    let period = (p - 1) as usize;
    for l in 0..=mm.lmax() {
        for k in 0..=kmax {
            let mut k2 = k + period;
            while k2 <= kmax {
                // largest v with (p−1)p^v | k2 − k
                let mut q = (k2 - k) / period;
                let mut v = 0u32;
                while q.is_multiple_of(p as usize) {
                    q /= p as usize;
                    v += 1;
                }
                let exp = (v + 1).min(mm.prec);
                let md = prime_power(p, exp)?;
                report.congruences_checked += 1;
                if mm.m[k][l] % md != mm.m[k2][l] % md {
                    report.violations.push(KummerViolation::Congruence { k, k2, l, exp });
                }
                k2 += period;
            }
        }
        let s = stirling_first(kmax, modulus);
        for (n, row) in s.iter().enumerate().skip(1) {
            let exp = factorial_valuation(n as u64, p).min(mm.prec);
            if exp == 0 {
                continue;
            }
            let mut acc = 0u64;
            for (j, sj) in row.iter().enumerate() {
                acc = add_mod(acc, mul_mod(*sj, mm.m[j][l], modulus), modulus);
            }
            report.mahler_checked += 1;
            if !acc.is_multiple_of(prime_power(p, exp)?) {
                report.violations.push(KummerViolation::Mahler { n, l, exp });
            }
        }
    }
    Ok(report)
}
