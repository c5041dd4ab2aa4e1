//! Residues modulo p^M stored as u64 in [0, p^M), with products in u128.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// p^e, failing when it does not stay below 2^62.
pub fn prime_power(p: u64, e: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc
            .checked_mul(p)
            .filter(|v| *v < (1u64 << 62))
            .ok_or_else(|| Error::PrecisionOverflow(format!("{p}^{e} does not fit in 62 bits")))?;
    }
    Ok(acc)
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

pub fn from_i64(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// p-adic valuation of a residue x mod p^prec (prec when x = 0).
pub fn valuation(mut x: u64, p: u64, prec: u32) -> u32 {
    if x == 0 {
        return prec;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// v_p(n!).
pub fn factorial_valuation(n: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q as u32;
        q /= p;
    }
    v
}

/// Pascal's triangle C(i, j) mod m for i ≤ n.
pub fn binomial_table(n: usize, m: u64) -> Vec<Vec<u64>> {
    let mut t: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![0u64; i + 1];
        row[0] = 1 % m;
        row[i] = 1 % m;
        for j in 1..i {
            row[j] = add_mod(t[i - 1][j - 1], t[i - 1][j], m);
        }
        t.push(row);
    }
    t
}

/// Signed Stirling numbers of the first kind s(n, k) mod m for n ≤ max:
/// x(x−1)…(x−n+1) = Σ_k s(n,k)·x^k.
pub fn stirling_first(max: usize, m: u64) -> Vec<Vec<u64>> {
    let mut t = vec![vec![1 % m]];
    for n in 0..max {
        let prev = &t[n];
        let mut row = vec![0u64; n + 2];
        for (k, &c) in prev.iter().enumerate() {
            row[k + 1] = add_mod(row[k + 1], c, m);
            row[k] = sub_mod(row[k], mul_mod(c, n as u64 % m, m), m);
        }
        t.push(row);
    }
    t
}
