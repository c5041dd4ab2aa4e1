//! Z/p^M[X]/Φ_{p^j}(X), the ring generated over Z/p^M by a primitive
//! p^j-th root of unity ζ = X.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::modular::{add_mod, mul_mod, neg_mod, prime_power, sub_mod};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicRing {
    p: u64,
    level: u32,
    modulus: u64,
    /// p^j
    order: u64,
    /// p^{j−1}
    step: usize,
    /// φ(p^j) = (p−1)p^{j−1}
    dim: usize,
}

impl CyclotomicRing {
    pub fn new(p: u64, level: u32, modulus: u64) -> Result<Arc<Self>> {
        if level == 0 {
            return Err(Error::Mismatch("cyclotomic level must be at least 1".into()));
        }
        let order = prime_power(p, level)?;
        let step = (order / p) as usize;
        Ok(Arc::new(Self { p, level, modulus, order, step, dim: (p as usize - 1) * step }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order p^j of the root of unity.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces a polynomial of any length modulo Φ_{p^j}, using
    /// X^{φ} = −Σ_{i<p−1} X^{i·p^{j−1}}.
    fn reduce(&self, mut poly: Vec<u64>) -> Vec<u64> {
        let m = self.modulus;
        for e in (self.dim..poly.len()).rev() {
            let c = poly[e];
            if c == 0 {
                continue;
            }
            poly[e] = 0;
            let base = e - self.dim;
            for i in 0..(self.p as usize - 1) {
                let k = base + i * self.step;
                poly[k] = sub_mod(poly[k], c, m);
            }
        }
        poly.resize(self.dim, 0);
        poly
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicElt {
    ring: Arc<CyclotomicRing>,
    coeffs: Vec<u64>,
}

impl CyclotomicElt {
    pub fn zero(ring: &Arc<CyclotomicRing>) -> Self {
        Self { ring: ring.clone(), coeffs: vec![0; ring.dim] }
    }

    pub fn constant(ring: &Arc<CyclotomicRing>, c: u64) -> Self {
        let mut out = Self::zero(ring);
        out.coeffs[0] = c % ring.modulus;
        out
    }

    /// ζ^e for any integer e.
    pub fn monomial(ring: &Arc<CyclotomicRing>, e: i64) -> Self {
        let e = e.rem_euclid(ring.order as i64) as usize;
        let mut poly = vec![0u64; e.max(ring.dim - 1) + 1];
        poly[e] = 1 % ring.modulus;
        Self { ring: ring.clone(), coeffs: ring.reduce(poly) }
    }

    pub fn from_poly(ring: &Arc<CyclotomicRing>, poly: &[u64]) -> Self {
        let mut v: Vec<u64> = poly.iter().map(|c| c % ring.modulus).collect();
        if v.len() < ring.dim {
            v.resize(ring.dim, 0);
        }
        Self { ring: ring.clone(), coeffs: ring.reduce(v) }
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.ring.modulus;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| add_mod(*a, *b, m)).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.ring.modulus;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| sub_mod(*a, *b, m)).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        let m = self.ring.modulus;
        Self { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| neg_mod(*a, m)).collect() }
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.ring.modulus;
        Self { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| mul_mod(*a, c % m, m)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.ring.modulus;
        let mut poly = vec![0u64; 2 * self.ring.dim];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                poly[i + j] = add_mod(poly[i + j], mul_mod(*a, *b, m), m);
            }
        }
        Self { ring: self.ring.clone(), coeffs: self.ring.reduce(poly) }
    }

    /// Multiplication by ζ^e.
    pub fn mul_monomial(&self, e: i64) -> Self {
        let ring = &self.ring;
        let shift = e.rem_euclid(ring.order as i64) as usize;
        let mut poly = vec![0u64; ring.dim + shift];
        poly[shift..shift + ring.dim].copy_from_slice(&self.coeffs);
        Self { ring: ring.clone(), coeffs: ring.reduce(poly) }
    }

    /// The Galois conjugate ζ ↦ ζ^b, gcd(b, p) = 1.
    pub fn conjugate(&self, b: u64) -> Self {
        let ring = &self.ring;
        let m = ring.modulus;
        let n = ring.order as usize;
        let mut poly = vec![0u64; n];
        for (e, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let k = ((e as u128 * b as u128) % n as u128) as usize;
            poly[k] = add_mod(poly[k], *c, m);
        }
        Self { ring: ring.clone(), coeffs: ring.reduce(poly) }
    }

    /// Some(c) iff the element is the constant c.
    pub fn as_rational(&self) -> Option<u64> {
        if self.coeffs[1..].iter().all(|c| *c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Sum of the φ(p^j) Galois conjugates, i.e. Σ over primitive p^j-th
    /// roots of unity; fails with NotRational if that sum is not a constant.
    pub fn trace(&self) -> Result<u64> {
        let ring = &self.ring;
        let mut acc = Self::zero(ring);
        for b in 1..ring.order {
            if b % ring.p != 0 {
                acc = acc.add(&self.conjugate(b));
            }
        }
        acc.as_rational()
            .ok_or_else(|| Error::NotRational(format!("conjugate sum at level {} has nonconstant part", ring.level)))
    }

    /// The trace from the linear formula Tr(ζ^e) = φ(p^j), −p^{j−1} or 0
    /// according as p^j | e, p^{j−1} ∥ e, or otherwise.
    pub fn trace_linear(&self) -> u64 {
        let ring = &self.ring;
        let m = ring.modulus;
        let mut acc = 0u64;
        // coefficients live in degrees < φ(p^j) < p^j, so p^j | e only at e = 0
        for (e, c) in self.coeffs.iter().enumerate() {
            let t = if e == 0 {
                ring.dim as u64 % m
            } else if e % ring.step == 0 {
                neg_mod(ring.step as u64 % m, m)
            } else {
                0
            };
            acc = add_mod(acc, mul_mod(*c, t, m), m);
        }
        acc
    }
}
