//! Algebraic Eisenstein–Kronecker classes as vectors of Sym^{k+r+1} in the
//! Hodge basis [dz̄]^i ⊗ [dz]^{k+r+1−i}, their Hodge projection, the
//! D-variant summed over D-torsion, and the comparison with Katz's
//! Eisenstein measure at the level of complex values.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::ek::{ek_normalized, ek_normalized_dual, Route};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numerics::{abs, binomial, CompensatedSum};
use crate::torsion::{gcd_u64, TorsionPoint};

/// Σ_i coeffs[i]·[dz̄]^i ⊗ [dz]^{k+r+1−i}, i ≤ min(k, r).
#[derive(Debug, Clone, PartialEq)]
pub struct SymHodgeVector {
    pub k: u32,
    pub r: u32,
    pub coeffs: Vec<Complex>,
}

impl SymHodgeVector {
    pub fn new(k: u32, r: u32, coeffs: Vec<Complex>) -> Self {
        assert_eq!(coeffs.len(), k.min(r) as usize + 1, "a weight-{} class has order min(k, r)", k + r + 1);
        Self { k, r, coeffs }
    }

    pub fn zero(k: u32, r: u32, prec: u32) -> Self {
        Self::new(k, r, vec![Complex::new(prec); k.min(r) as usize + 1])
    }

    pub fn weight(&self) -> u32 {
        self.k + self.r + 1
    }

    /// Component of [dz]^{⊗(k+r+1)}.
    pub fn hodge_projection(&self) -> Complex {
        self.coeffs[0].clone()
    }

    /// Index of the coefficient of largest modulus.
    pub fn dominant_index(&self) -> usize {
        let mut best = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if abs(c) > abs(&self.coeffs[best]) {
                best = i;
            }
        }
        best
    }
}

pub fn hodge_projection(v: &SymHodgeVector) -> Complex {
    v.hodge_projection()
}

fn check_levels(s: &TorsionPoint, t: &TorsionPoint) -> Result<(u64, u64)> {
    let (n, d) = (s.order_n, t.order_n);
    if n < 2 || d < 2 {
        return Err(Error::InvalidTorsion("levels N and D must exceed 1".into()));
    }
    if gcd_u64(n, d) != 1 {
        return Err(Error::InvalidTorsion(format!("levels N = {n} and D = {d} are not coprime")));
    }
    if s.is_zero() || t.is_zero() {
        return Err(Error::InvalidTorsion("s and t must be nonzero".into()));
    }
    Ok((n, d))
}

/// E^{k,r+1}_{s,t} for s ∈ E[N], t ∈ E[D] (N, D the declared denominators):
///
///   c[i] = C(r,i)·C(k,i)·(−1)^i/A^i · ẽ_{k−i,r−i+1}(D·s, N·t).
pub fn algebraic_ek(k: u32, r: u32, s: &TorsionPoint, t: &TorsionPoint, lat: &Lattice, route: Route) -> Result<SymHodgeVector> {
    let (n, d) = check_levels(s, t)?;
    let ds = s.scale(d as i64);
    let nt = t.scale(n as i64);
    let wp = lat.prec();
    let mut coeffs = Vec::with_capacity(k.min(r) as usize + 1);
    for i in 0..=k.min(r) {
        let e = ek_normalized(k - i, r - i, &ds, &nt, lat, route)?;
        let c = Float::with_val(wp, binomial(r, i) * binomial(k, i)) / Float::with_val(wp, lat.area().pow(i));
        let c = if i % 2 == 1 { -c } else { c };
        coeffs.push(e.value * c);
    }
    Ok(SymHodgeVector::new(k, r, coeffs))
}

/// Σ over the given t of E^{k,r+1}_{s,t}, accumulated in sorted order so the
/// result does not depend on how the torsion points were listed.
pub fn d_variant_over(k: u32, r: u32, s: &TorsionPoint, ts: &[TorsionPoint], lat: &Lattice, route: Route) -> Result<SymHodgeVector> {
    let wp = lat.prec();
    let mut ts = ts.to_vec();
    ts.sort();
    let len = k.min(r) as usize + 1;
    let mut sums: Vec<CompensatedSum> = (0..len).map(|_| CompensatedSum::new(wp)).collect();
    for t in &ts {
        let v = algebraic_ek(k, r, s, t, lat, route)?;
        for (acc, c) in sums.iter_mut().zip(&v.coeffs) {
            acc.add(c);
        }
    }
    Ok(SymHodgeVector::new(k, r, sums.iter().map(CompensatedSum::value).collect()))
}

/// _D E^{k,r+1}_s = Σ_{t ∈ E[D], t ≠ 0} E^{k,r+1}_{s,t}.
pub fn d_variant(k: u32, r: u32, s: &TorsionPoint, d: u64, lat: &Lattice, route: Route) -> Result<SymHodgeVector> {
    if d < 2 {
        return Err(Error::InvalidTorsion("D must exceed 1".into()));
    }
    d_variant_over(k, r, s, &TorsionPoint::nonzero_of_order_dividing(d), lat, route)
}

#[derive(Debug, Clone)]
pub struct KatzComparison {
    /// Hodge projection of the D-variant.
    pub lhs: Complex,
    /// D^{k−r+1}·ẽ_{k,r+1}(s̃,0) − ẽ_{k,r+1}(D·s̃,0) through the dual Lerch form.
    pub rhs: Complex,
    /// |lhs − rhs| relative to |D^{k−r+1}ẽ(s̃,0)| + |ẽ(Ds̃,0)|.
    pub defect: f64,
}

/// Compares the Hodge projection of _D E^{k,r+1}_{(a,b)} with
/// D^{k−r+1}ẽ_{k,r+1}(s̃,0) − ẽ_{k,r+1}(Ds̃,0), s̃ = (aω₁+bω₂)/N. The right side
/// is evaluated through K*_{k+r+1}(0, ·, k+1), a route independent of the
/// one used on the left.
#[allow(clippy::too_many_arguments)]
pub fn katz_comparison_check(k: u32, r: u32, a: i64, b: i64, n: u64, d: u64, lat: &Lattice, route: Route) -> Result<KatzComparison> {
    let s = TorsionPoint::new(a, b, n)?;
    let lhs = d_variant(k, r, &s, d, lat, route)?.hodge_projection();
    let wp = lat.prec();
    let x = s.embed(lat);
    let dx = Complex::with_val(wp, &x * d);
    let e1 = ek_normalized_dual(k, r, &x, lat)?.value;
    let e2 = ek_normalized_dual(k, r, &dx, lat)?.value;
    let dpow = Float::with_val(wp, d).pow(k as i32 - r as i32 + 1);
    let e1 = e1 * dpow;
    // the two terms can cancel exactly (e.g. D·s̃ ≡ i·s̃ on the square
    // lattice), so the defect is taken relative to their size
    let scale = Float::with_val(wp, abs(&e1) + abs(&e2));
    let rhs = e1 - e2;
    let diff = abs(&Complex::with_val(wp, &lhs - &rhs));
    let defect = if scale.is_zero() { diff.to_f64() } else { (diff / scale).to_f64() };
    Ok(KatzComparison { lhs, rhs, defect })
}
