use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::kummer::MeasureMoments;
use crate::modular::{add_mod, from_i64, is_prime, mul_mod, prime_power, sub_mod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    S,
    T,
}

/// f = Σ c[i][j]·S^i·T^j with c[i][j] ∈ Z/p^M, i ≤ deg_s, j ≤ deg_t.
///
/// A series is either an exact polynomial (`valid_* = None`) or the
/// truncation of a power series whose coefficients are known only up to the
/// recorded degree in that variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries2 {
    p: u64,
    prec: u32,
    modulus: u64,
    deg_s: usize,
    deg_t: usize,
    valid_s: Option<usize>,
    valid_t: Option<usize>,
    coeffs: Vec<u64>,
}

impl TruncatedSeries2 {
    /// The zero polynomial.
    pub fn zero(p: u64, prec: u32, deg_s: usize, deg_t: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if prec == 0 {
            return Err(Error::PrecisionOverflow("precision must be at least 1".into()));
        }
        let modulus = prime_power(p, prec)?;
        Ok(Self { p, prec, modulus, deg_s, deg_t, valid_s: None, valid_t: None, coeffs: vec![0; (deg_s + 1) * (deg_t + 1)] })
    }

    /// Row-major coefficients (S-degree outer), reduced mod p^M.
    pub fn from_coeffs(p: u64, prec: u32, deg_s: usize, deg_t: usize, coeffs: &[i64]) -> Result<Self> {
        let mut f = Self::zero(p, prec, deg_s, deg_t)?;
        if coeffs.len() != f.coeffs.len() {
            return Err(Error::Mismatch(format!("expected {} coefficients, got {}", f.coeffs.len(), coeffs.len())));
        }
        for (dst, &c) in f.coeffs.iter_mut().zip(coeffs) {
            *dst = from_i64(c, f.modulus);
        }
        Ok(f)
    }

    pub fn from_fn<F: FnMut(usize, usize) -> i64>(p: u64, prec: u32, deg_s: usize, deg_t: usize, mut f: F) -> Result<Self> {
        let mut out = Self::zero(p, prec, deg_s, deg_t)?;
        for i in 0..=deg_s {
            for j in 0..=deg_t {
                let m = out.modulus;
                out.set(i, j, from_i64(f(i, j), m));
            }
        }
        Ok(out)
    }

    pub fn constant(p: u64, prec: u32, c: i64) -> Result<Self> {
        Self::from_coeffs(p, prec, 0, 0, &[c])
    }

    /// (1+S)^a·(1+T)^b, the transform of the Dirac measure at (a, b).
    pub fn dirac(p: u64, prec: u32, a: u64, b: u64) -> Result<Self> {
        let mut f = Self::zero(p, prec, a as usize, b as usize)?;
        let m = f.modulus;
        let ra = crate::modular::binomial_table(a as usize, m).pop().unwrap_or_default();
        let rb = crate::modular::binomial_table(b as usize, m).pop().unwrap_or_default();
        for (i, x) in ra.iter().enumerate() {
            for (j, y) in rb.iter().enumerate() {
                f.set(i, j, mul_mod(*x, *y, m));
            }
        }
        Ok(f)
    }

    /// Marks the series as a power-series truncation, reliable up to the
    /// given degrees (clamped to the stored degrees).
    pub fn truncated(mut self, valid_s: Option<usize>, valid_t: Option<usize>) -> Self {
        self.valid_s = valid_s.map(|v| v.min(self.deg_s));
        self.valid_t = valid_t.map(|v| v.min(self.deg_t));
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn deg_s(&self) -> usize {
        self.deg_s
    }

    pub fn deg_t(&self) -> usize {
        self.deg_t
    }

    pub fn deg(&self, var: Var) -> usize {
        match var {
            Var::S => self.deg_s,
            Var::T => self.deg_t,
        }
    }

    pub fn valid_s(&self) -> Option<usize> {
        self.valid_s
    }

    pub fn valid_t(&self) -> Option<usize> {
        self.valid_t
    }

    pub fn valid(&self, var: Var) -> Option<usize> {
        match var {
            Var::S => self.valid_s,
            Var::T => self.valid_t,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.valid_s.is_none() && self.valid_t.is_none()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.deg_t + 1) + j
    }

    /// Coefficient of S^i T^j (0 beyond the stored degrees).
    pub fn get(&self, i: usize, j: usize) -> u64 {
        if i > self.deg_s || j > self.deg_t {
            0
        } else {
            self.coeffs[self.idx(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        let k = self.idx(i, j);
        self.coeffs[k] = v % self.modulus;
    }

    /// f(0, 0), the total mass.
    pub fn constant_term(&self) -> u64 {
        self.coeffs[0]
    }

    /// Reduction to a lower precision.
    pub fn reduce_prec(&self, prec: u32) -> Result<Self> {
        if prec > self.prec || prec == 0 {
            return Err(Error::Mismatch(format!("cannot move from precision {} to {prec}", self.prec)));
        }
        let modulus = prime_power(self.p, prec)?;
        let mut out = self.clone();
        out.prec = prec;
        out.modulus = modulus;
        for c in &mut out.coeffs {
            *c %= modulus;
        }
        Ok(out)
    }

    /// Copy with the stored degrees changed, dropping or zero-padding
    /// coefficients.
    pub fn resized(&self, deg_s: usize, deg_t: usize) -> Self {
        let mut out = Self { deg_s, deg_t, coeffs: vec![0; (deg_s + 1) * (deg_t + 1)], ..self.clone() };
        for i in 0..=deg_s.min(self.deg_s) {
            for j in 0..=deg_t.min(self.deg_t) {
                let k = out.idx(i, j);
                out.coeffs[k] = self.get(i, j);
            }
        }
        out.valid_s = self.valid_s.map(|v| v.min(deg_s));
        out.valid_t = self.valid_t.map(|v| v.min(deg_t));
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.prec != other.prec {
            return Err(Error::Mismatch(format!(
                "series over Z/{}^{} and Z/{}^{}",
                self.p, self.prec, other.p, other.prec
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, op: fn(u64, u64, u64) -> u64) -> Result<Self> {
        self.check_compatible(other)?;
        let ds = self.deg_s.max(other.deg_s);
        let dt = self.deg_t.max(other.deg_t);
        let mut out = Self::zero(self.p, self.prec, ds, dt)?;
        for i in 0..=ds {
            for j in 0..=dt {
                let v = op(self.get(i, j), other.get(i, j), self.modulus);
                out.set(i, j, v);
            }
        }
        out.valid_s = min_valid(self.valid_s, other.valid_s);
        out.valid_t = min_valid(self.valid_t, other.valid_t);
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, add_mod)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, sub_mod)
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = self.clone();
        let c = from_i64(c, self.modulus);
        for x in &mut out.coeffs {
            *x = mul_mod(*x, c, self.modulus);
        }
        out
    }

    /// Product; for truncated factors the result is reliable up to the
    /// smaller validity in each variable.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let ds = self.deg_s + other.deg_s;
        let dt = self.deg_t + other.deg_t;
        let mut out = Self::zero(self.p, self.prec, ds, dt)?;
        let m = self.modulus;
        for i in 0..=self.deg_s {
            for j in 0..=self.deg_t {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..=other.deg_s {
                    for l in 0..=other.deg_t {
                        let b = other.get(k, l);
                        if b == 0 {
                            continue;
                        }
                        let idx = out.idx(i + k, j + l);
                        out.coeffs[idx] = add_mod(out.coeffs[idx], mul_mod(a, b, m), m);
                    }
                }
            }
        }
        out.valid_s = min_valid(self.valid_s, other.valid_s);
        out.valid_t = min_valid(self.valid_t, other.valid_t);
        if let Some(v) = out.valid_s {
            out = out.resized(v, out.deg_t);
        }
        if let Some(v) = out.valid_t {
            out = out.resized(out.deg_s, v);
        }
        Ok(out)
    }

    /// Agreement modulo p^prec on the common reliable range.
    pub fn congruent(&self, other: &Self, prec: u32) -> Result<bool> {
        if self.p != other.p {
            return Ok(false);
        }
        let m = prime_power(self.p, prec.min(self.prec).min(other.prec))?;
        let ds = self.deg_s.max(other.deg_s);
        let dt = self.deg_t.max(other.deg_t);
        let ls = min_valid(self.valid_s, other.valid_s).unwrap_or(ds);
        let lt = min_valid(self.valid_t, other.valid_t).unwrap_or(dt);
        for i in 0..=ls {
            for j in 0..=lt {
                if self.get(i, j) % m != other.get(i, j) % m {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Text form: a `p M degS degT` header followed by deg_s + 1 lines of
    /// deg_t + 1 base-10 coefficients. Only the reliable part of a
    /// truncated series is written.
    pub fn to_text(&self) -> String {
        let ds = self.valid_s.unwrap_or(self.deg_s);
        let dt = self.valid_t.unwrap_or(self.deg_t);
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {} {}", self.p, self.prec, ds, dt);
        for i in 0..=ds {
            let row: Vec<String> = (0..=dt).map(|j| self.get(i, j).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Parses [`TruncatedSeries2::to_text`] output. Blank lines and lines
    /// starting with `#` are ignored; coefficients may be negative and are
    /// reduced mod p^M.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header `p M degS degT`".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse { line: hline, msg: format!("header needs 4 fields `p M degS degT`, found {}", fields.len()) });
        }
        let num = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| Error::Parse { line: hline, msg: format!("bad {what} `{s}`") })
        };
        let p = num(fields[0], "prime")?;
        let prec = num(fields[1], "precision")?;
        let ds = num(fields[2], "S-degree")? as usize;
        let dt = num(fields[3], "T-degree")? as usize;
        if !is_prime(p) {
            return Err(Error::Parse { line: hline, msg: format!("{p} is not a prime") });
        }
        if prec == 0 || prec > 62 {
            return Err(Error::Parse { line: hline, msg: format!("precision {prec} out of range") });
        }
        if ds > 1 << 16 || dt > 1 << 16 {
            return Err(Error::Parse { line: hline, msg: "degree too large".into() });
        }
        let mut f = Self::zero(p, prec as u32, ds, dt).map_err(|e| Error::Parse { line: hline, msg: e.to_string() })?;
        let mut row = 0usize;
        let mut last_line = hline;
        for (ln, l) in lines {
            last_line = ln;
            if row > ds {
                return Err(Error::Parse { line: ln, msg: format!("more than {} coefficient rows", ds + 1) });
            }
            let vals: Vec<&str> = l.split_whitespace().collect();
            if vals.len() != dt + 1 {
                return Err(Error::Parse { line: ln, msg: format!("expected {} coefficients, found {}", dt + 1, vals.len()) });
            }
            for (j, v) in vals.iter().enumerate() {
                let c: i128 = v.parse().map_err(|_| Error::Parse { line: ln, msg: format!("bad coefficient `{v}`") })?;
                let m = f.modulus;
                f.set(row, j, c.rem_euclid(m as i128) as u64);
            }
            row += 1;
        }
        if row != ds + 1 {
            return Err(Error::Parse { line: last_line, msg: format!("expected {} coefficient rows, found {row}", ds + 1) });
        }
        Ok(f)
    }
}

fn min_valid(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// ∂ = (1+X)·d/dX in the variable X ∈ {S, T}.
///
/// On an exact polynomial the degree is unchanged. On a truncation reliable
/// up to degree v the output is reliable up to v − 1, and DegreeExhausted is
/// raised once nothing reliable is left.
pub fn invariant_derive(f: &TruncatedSeries2, var: Var) -> Result<TruncatedSeries2> {
    let valid = match f.valid(var) {
        None => None,
        Some(0) => return Err(Error::DegreeExhausted(format!("no reliable {var:?}-degree left to differentiate"))),
        Some(v) => Some(v - 1),
    };
    let m = f.modulus;
    let mut out = f.clone();
    let (ds, dt) = (f.deg_s, f.deg_t);
    let deg = f.deg(var);
    for i in 0..=ds {
        for j in 0..=dt {
            let (n, up) = match var {
                Var::S => (i, f.get(i + 1, j)),
                Var::T => (j, f.get(i, j + 1)),
            };
            // (n+1)·c_{n+1} + n·c_n
            let mut v = mul_mod((n as u64 + 1) % m, up, m);
            v = add_mod(v, mul_mod(n as u64 % m, f.get(i, j), m), m);
            if n == deg && f.valid(var).is_some() {
                v = 0;
            }
            out.set(i, j, v);
        }
    }
    match var {
        Var::S => out.valid_s = valid,
        Var::T => out.valid_t = valid,
    }
    Ok(out)
}

/// ∫ x^k y^l dμ_f = ∂_S^k ∂_T^l f |_{S=T=0}, a residue mod p^M.
pub fn moment(f: &TruncatedSeries2, k: usize, l: usize) -> Result<u64> {
    let mut g = f.clone();
    for _ in 0..k {
        g = invariant_derive(&g, Var::S)?;
    }
    for _ in 0..l {
        g = invariant_derive(&g, Var::T)?;
    }
    Ok(g.constant_term())
}

/// The grid m[k][l], k ≤ kmax, l ≤ lmax.
pub fn moments(f: &TruncatedSeries2, kmax: usize, lmax: usize) -> Result<MeasureMoments> {
    let mut grid = vec![vec![0u64; lmax + 1]; kmax + 1];
    let mut gs = f.clone();
    for k in 0..=kmax {
        let mut gt = gs.clone();
        for l in 0..=lmax {
            grid[k][l] = gt.constant_term();
            if l < lmax {
                gt = invariant_derive(&gt, Var::T)?;
            }
        }
        if k < kmax {
            gs = invariant_derive(&gs, Var::S)?;
        }
    }
    MeasureMoments::new(f.p(), f.prec(), grid)
}
