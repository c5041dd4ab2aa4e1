use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use rug::Complex;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// The point (a·ω₁ + b·ω₂)/N, kept as exact integers and embedded into C
/// only on demand.
///
/// Equality and hashing use the reduced form of (a/N, b/N) mod 1, so
/// `(1,0,5)`, `(6,0,5)` and `(2,0,10)` are the same point of C/Γ, while
/// [`TorsionPoint::embed`] still honours the literal representative.
#[derive(Debug, Clone, Copy)]
pub struct TorsionPoint {
    pub a: i64,
    pub b: i64,
    pub order_n: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    gcd(a, b)
}

impl TorsionPoint {
    pub fn new(a: i64, b: i64, order_n: u64) -> Result<Self> {
        if order_n == 0 {
            return Err(Error::InvalidTorsion("order must be positive".into()));
        }
        Ok(Self { a, b, order_n })
    }

    pub fn zero() -> Self {
        Self { a: 0, b: 0, order_n: 1 }
    }

    /// (a mod N', b mod N', N') with gcd(a, b, N') = 1.
    pub fn canonical(&self) -> (u64, u64, u64) {
        let n = self.order_n;
        let a = self.a.rem_euclid(n as i64) as u64;
        let b = self.b.rem_euclid(n as i64) as u64;
        let g = gcd(gcd(a, b), n);
        (a / g, b / g, n / g)
    }

    /// Exact order in C/Γ; divides `order_n`.
    pub fn order(&self) -> u64 {
        self.canonical().2
    }

    pub fn is_zero(&self) -> bool {
        self.order() == 1
    }

    /// k·P with the same denominator.
    pub fn scale(&self, k: i64) -> Self {
        Self { a: self.a * k, b: self.b * k, order_n: self.order_n }
    }

    pub fn embed(&self, lat: &Lattice) -> Complex {
        let wp = lat.prec();
        let p = Complex::with_val(wp, lat.omega1() * self.a) + Complex::with_val(wp, lat.omega2() * self.b);
        p / self.order_n
    }

    /// All points of E[D], including 0, in lexicographic (c, d) order.
    pub fn all_of_order_dividing(d: u64) -> Vec<Self> {
        let mut out = Vec::with_capacity((d * d) as usize);
        for c in 0..d as i64 {
            for e in 0..d as i64 {
                out.push(Self { a: c, b: e, order_n: d });
            }
        }
        out
    }

    /// The D² − 1 nonzero points of E[D].
    pub fn nonzero_of_order_dividing(d: u64) -> Vec<Self> {
        Self::all_of_order_dividing(d).into_iter().filter(|t| !t.is_zero()).collect()
    }
}

impl PartialEq for TorsionPoint {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for TorsionPoint {}

impl Hash for TorsionPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

impl PartialOrd for TorsionPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TorsionPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b, n) = self.canonical();
        let (c, d, m) = other.canonical();
        (n, a, b).cmp(&(m, c, d))
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{},{}/{}", self.a, self.order_n, self.b, self.order_n)
    }
}

fn parse_fraction(s: &str) -> Result<(i64, u64)> {
    let bad = || Error::InvalidTorsion(format!("cannot parse coordinate `{s}`"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: u64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok((num, den))
        }
        None => Ok((s.trim().parse().map_err(|_| bad())?, 1)),
    }
}

/// Accepts `0`, `a/N,b/N` (coordinates on ω₁, ω₂) and `(a,b,N)`.
impl FromStr for TorsionPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::InvalidTorsion(format!("expected (a,b,N), got `{s}`")));
            }
            let parse = |p: &str| p.parse::<i64>().map_err(|_| Error::InvalidTorsion(format!("bad integer `{p}`")));
            let n = parse(parts[2])?;
            if n <= 0 {
                return Err(Error::InvalidTorsion("order must be positive".into()));
            }
            return Self::new(parse(parts[0])?, parse(parts[1])?, n as u64);
        }
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidTorsion(format!("expected `a/N,b/N`, got `{s}`")))?;
        let (a, n1) = parse_fraction(x)?;
        let (b, n2) = parse_fraction(y)?;
        let n = n1 / gcd(n1, n2) * n2;
        Self::new(a * (n / n1) as i64, b * (n / n2) as i64, n)
    }
}
