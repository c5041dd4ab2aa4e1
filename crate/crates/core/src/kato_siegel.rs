//! Differentials attached to torsion points: ω_t with residue ⟨γ,t⟩ at each
//! γ ∈ Γ, the D-summed ω^D = dlog of the Kato–Siegel function, and the
//! distribution relations of the Kronecker theta function.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numerics::{abs, abs_defect, conj, contour_residue, rel_defect, CompensatedSum};
use crate::theta::{kronecker_theta, translated_theta, ThetaTranslate};
use crate::torsion::{gcd_u64, TorsionPoint};

/// f_t(z) = exp(z·t̄/A)·Θ(z, −t): simple poles on Γ with residue ⟨γ,t⟩ at
/// γ, and f_t(z+γ) = ⟨γ,t⟩·f_t(z).
pub fn omega_t_at(z: &Complex, t: &Complex, lat: &Lattice) -> Result<Complex> {
    let wp = lat.prec();
    if lat.near_lattice(t) {
        return Err(Error::InvalidTorsion("ω_t needs t outside the lattice".into()));
    }
    let th = kronecker_theta(z, &Complex::with_val(wp, -t), lat)?;
    let e = Complex::with_val(wp, z * conj(t)) / lat.area();
    Ok(e.exp() * th)
}

pub fn omega_t(z: &Complex, t: &TorsionPoint, lat: &Lattice) -> Result<Complex> {
    if t.is_zero() {
        return Err(Error::InvalidTorsion("ω_t needs a nonzero t".into()));
    }
    omega_t_at(z, &t.embed(lat), lat)
}

/// ω^{[D]}_t(z) = D·f_t(Dz) for t ∈ E[D] (D the declared denominator of t),
/// the pullback along multiplication by D.
pub fn omega_t_pullback(z: &Complex, t: &TorsionPoint, lat: &Lattice) -> Result<Complex> {
    let d = t.order_n;
    let dz = Complex::with_val(lat.prec(), z * d);
    Ok(omega_t(&dz, t, lat)? * d)
}

/// ω^D(z) = Σ_{t ∈ E[D], t ≠ 0} ω^{[D]}_t(z), summed in canonical order.
pub fn omega_d(z: &Complex, d: u64, lat: &Lattice) -> Result<Complex> {
    if d < 2 {
        return Err(Error::InvalidArgument("D must be at least 2".into()));
    }
    let wp = lat.prec();
    let dz = Complex::with_val(wp, z * d);
    if lat.near_lattice(&dz) {
        return Err(Error::Pole("ω^D on the D-torsion".into()));
    }
    let mut acc = CompensatedSum::new(wp);
    let mut ts = TorsionPoint::nonzero_of_order_dividing(d);
    ts.sort();
    for t in &ts {
        acc.add(&omega_t(&dz, t, lat)?);
    }
    Ok(acc.value() * d)
}

/// D²·Z(z) − D·Z(Dz) with Z = θ′/θ, the logarithmic derivative of
/// D²Z(z) − D·Z(Dz), the logarithmic derivative of θ(z)^{D²}/θ(Dz).
pub fn omega_d_closed(z: &Complex, d: u64, lat: &Lattice) -> Result<Complex> {
    let wp = lat.prec();
    let dz = Complex::with_val(wp, z * d);
    let a = lat.log_derivative_z(z)?;
    let b = lat.log_derivative_z(&dz)?;
    Ok(a * (d * d) - b * d)
}

/// Which of the two differentials a [`KsDifferential`] stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsKind {
    Single(TorsionPoint),
    Summed(u64),
}

/// f(z)·dz for one of the differentials above.
#[derive(Debug, Clone, Copy)]
pub struct KsDifferential<'a> {
    pub kind: KsKind,
    pub lattice: &'a Lattice,
}

impl<'a> KsDifferential<'a> {
    pub fn single(t: TorsionPoint, lattice: &'a Lattice) -> Self {
        Self { kind: KsKind::Single(t), lattice }
    }

    pub fn summed(d: u64, lattice: &'a Lattice) -> Self {
        Self { kind: KsKind::Summed(d), lattice }
    }

    pub fn eval(&self, z: &Complex) -> Result<Complex> {
        match self.kind {
            KsKind::Single(t) => omega_t(z, &t, self.lattice),
            KsKind::Summed(d) => omega_d(z, d, self.lattice),
        }
    }

    /// Poles modulo Γ: Γ itself for ω_t, (1/D)Γ for ω^D.
    pub fn pole_spacing(&self) -> u64 {
        match self.kind {
            KsKind::Single(_) => 1,
            KsKind::Summed(d) => d,
        }
    }

    /// Residue at `center` on a circle of radius min(0.1, half the distance
    /// to the nearest other pole).
    pub fn residue(&self, center: &Complex) -> Result<Complex> {
        let lat = self.lattice;
        let wp = lat.prec();
        let gap = Float::with_val(wp, shortest_vector(lat) / self.pole_spacing());
        let rho = Float::with_val(wp, &gap / 2u32).min(&Float::with_val(wp, 0.1));
        let tol = (lat.ctx().tol_rel * lat.ctx().tol_rel).max(f64::MIN_POSITIVE);
        let (res, _) = contour_residue(center, &rho, tol, |z| self.eval(z))?;
        Ok(res)
    }
}

/// Length of the shortest nonzero vector of Γ.
pub fn shortest_vector(lat: &Lattice) -> Float {
    let mut best: Option<Float> = None;
    for m in -3i64..=3 {
        for n in -3i64..=3 {
            if m == 0 && n == 0 {
                continue;
            }
            let v = abs(&lat.point(m, n));
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best.expect("nonempty search")
}

#[derive(Debug, Clone)]
pub struct ResidueEntry {
    pub point: TorsionPoint,
    pub residue: Complex,
    pub expected: i64,
    pub defect: f64,
}

/// Integrated residues of ω^D over (1/D)Γ/Γ: D² − 1 at 0 and −1 elsewhere.
pub fn residue_law(d: u64, lat: &Lattice) -> Result<Vec<ResidueEntry>> {
    let form = KsDifferential::summed(d, lat);
    let wp = lat.prec();
    let mut out = Vec::new();
    for p in TorsionPoint::all_of_order_dividing(d) {
        let center = p.embed(lat);
        let residue = form.residue(&center)?;
        let expected = if p.is_zero() { (d * d) as i64 - 1 } else { -1 };
        let defect = abs_defect(&residue, &Complex::with_val(wp, expected));
        out.push(ResidueEntry { point: p, residue, expected, defect });
    }
    Ok(out)
}

/// Residue of ω_t at γ = mω₁ + nω₂ with the expected value ⟨γ,t⟩.
pub fn omega_t_residue(t: &TorsionPoint, m: i64, n: i64, lat: &Lattice) -> Result<(Complex, Complex)> {
    let gamma = lat.point(m, n);
    let res = KsDifferential::single(*t, lat).residue(&gamma)?;
    Ok((res, lat.pairing(&gamma, &t.embed(lat))))
}

#[derive(Debug, Clone)]
pub struct TranslationCheck {
    pub expected: Complex,
    pub ratios: Vec<Complex>,
    /// Largest |ratio − expected| over the samples.
    pub defect: f64,
}

/// ω^{[D]}_t(z + t̃)/ω^{[D]}_t(z) for t̃ = shift ∈ (1/D)Γ against the Weil
/// pairing value ⟨D·t̃, t⟩.
pub fn translation_check(t: &TorsionPoint, shift: &TorsionPoint, samples: &[Complex], lat: &Lattice) -> Result<TranslationCheck> {
    let wp = lat.prec();
    let d = t.order_n;
    let sh = shift.embed(lat);
    let expected = lat.pairing(&Complex::with_val(wp, &sh * d), &t.embed(lat));
    let mut ratios = Vec::with_capacity(samples.len());
    let mut defect = 0.0f64;
    for z in samples {
        let moved = Complex::with_val(wp, z + &sh);
        let ratio = omega_t_pullback(&moved, t, lat)? / omega_t_pullback(z, t, lat)?;
        defect = defect.max(abs_defect(&ratio, &expected));
        ratios.push(ratio);
    }
    Ok(TranslationCheck { expected, ratios, defect })
}

/// Relative defect of Tr_{[N]} ω^D = ω^D at z:
/// (1/N)·Σ_{i,j<N} ω^D((z + iω₁ + jω₂)/N) against ω^D(z).
pub fn trace_check(d: u64, n: u64, z: &Complex, lat: &Lattice) -> Result<f64> {
    if gcd_u64(n, d) != 1 {
        return Err(Error::InvalidArgument(format!("N = {n} is not coprime to D = {d}")));
    }
    let wp = lat.prec();
    let target = omega_d(z, d, lat)?;
    let mut acc = CompensatedSum::new(wp);
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            let w = Complex::with_val(wp, z + lat.point(i, j)) / n;
            acc.add(&omega_d(&w, d, lat)?);
        }
    }
    let tr = acc.value() / n;
    Ok(rel_defect(&tr, &target))
}

/// Deterministic generic sample points x·ω₁ + y·ω₂, (x, y) from a
/// low-discrepancy sequence shifted by `salt`.
pub fn sample_points(lat: &Lattice, count: usize, salt: u32) -> Vec<Complex> {
    let wp = lat.prec();
    let g1 = 0.754_877_666_246_692_7_f64;
    let g2 = 0.569_840_290_998_053_2_f64;
    (0..count)
        .map(|j| {
            let jj = (j as f64) + 1.0 + salt as f64 * 7.0;
            let x = (0.137 + jj * g1).fract();
            let y = (0.291 + jj * g2).fract();
            let p = Complex::with_val(wp, lat.omega1() * Float::with_val(wp, x));
            p + Complex::with_val(wp, lat.omega2() * Float::with_val(wp, y))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct IdentityResult {
    pub name: &'static str,
    /// None when a hypothesis of the identity fails.
    pub defect: Option<f64>,
    pub samples: usize,
    pub note: String,
}

impl IdentityResult {
    fn not_applicable(name: &'static str, why: &str) -> Self {
        Self { name, defect: None, samples: 0, note: why.to_string() }
    }
}

/// Evaluates lhs and rhs at sample points, skipping points where either
/// side hits a pole, until `count` samples are in.
fn sampled<F>(name: &'static str, lat: &Lattice, count: usize, salt: u32, mut sides: F) -> Result<IdentityResult>
where
    F: FnMut(&Complex, &Complex) -> Result<(Complex, Complex)>,
{
    let pool_z = sample_points(lat, count * 4, salt);
    let pool_w = sample_points(lat, count * 4, salt + 1);
    let mut used = 0;
    let mut defect = 0.0f64;
    for (z, w) in pool_z.iter().zip(&pool_w) {
        match sides(z, w) {
            Ok((lhs, rhs)) => {
                defect = defect.max(rel_defect(&lhs, &rhs));
                used += 1;
                if used == count {
                    break;
                }
            }
            Err(Error::Pole(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if used < count {
        return Err(Error::Pole(format!("{name}: too many sample points on poles")));
    }
    Ok(IdentityResult { name, defect: Some(defect), samples: used, note: String::new() })
}

/// Σ_{t ∈ E[D]} Θ_{0,t}(Dz, w) = D·Θ(z, Dw).
pub fn distribution_cor(d: u64, count: usize, lat: &Lattice) -> Result<IdentityResult> {
    let wp = lat.prec();
    let ts = TorsionPoint::all_of_order_dividing(d);
    sampled("theta torsion-sum distribution", lat, count, 3, |z, w| {
        let dz = Complex::with_val(wp, z * d);
        let mut acc = CompensatedSum::new(wp);
        for t in &ts {
            let tr = ThetaTranslate::new(&Complex::new(wp), &t.embed(lat));
            acc.add(&translated_theta(&tr, &dz, w, lat)?);
        }
        let dw = Complex::with_val(wp, w * d);
        let rhs = kronecker_theta(z, &dw, lat)? * d;
        Ok((acc.value(), rhs))
    })
}

/// Σ_{β ∈ E[D′]} DD′·Θ_{DD′s, N(t+β)}(DD′z, Nw) = D·D′²·Θ_{Ds, ND′t}(Dz, ND′w)
/// for gcd(N, D′) = 1.
#[allow(clippy::too_many_arguments)]
pub fn distribution_thm(
    d: u64,
    d2: u64,
    n: u64,
    s: &TorsionPoint,
    t: &TorsionPoint,
    count: usize,
    lat: &Lattice,
) -> Result<IdentityResult> {
    const NAME: &str = "theta distribution relation";
    if gcd_u64(n, d2) != 1 {
        return Ok(IdentityResult::not_applicable(NAME, "N and D′ are not coprime"));
    }
    let wp = lat.prec();
    let se = s.embed(lat);
    let te = t.embed(lat);
    let dd = d * d2;
    let z0 = Complex::with_val(wp, &se * dd);
    let betas = TorsionPoint::all_of_order_dividing(d2);
    let rhs_tr = ThetaTranslate::new(&Complex::with_val(wp, &se * d), &Complex::with_val(wp, &te * (n * d2)));
    sampled(NAME, lat, count, 5, |z, w| {
        let zz = Complex::with_val(wp, z * dd);
        let ww = Complex::with_val(wp, w * n);
        let mut acc = CompensatedSum::new(wp);
        for beta in &betas {
            let w0 = Complex::with_val(wp, &te + beta.embed(lat)) * n;
            let tr = ThetaTranslate::new(&z0, &w0);
            acc.add(&translated_theta(&tr, &zz, &ww, lat)?);
        }
        let lhs = acc.value() * dd;
        let rz = Complex::with_val(wp, z * d);
        let rw = Complex::with_val(wp, w * (n * d2));
        let rhs = translated_theta(&rhs_tr, &rz, &rw, lat)? * (d * d2 * d2);
        Ok((lhs, rhs))
    })
}

/// Trace of ω along [2] against [3]: Σ_{s ∈ E[2]} ω^{[6]}_{t+s} = 4·ω^{[3]}_{2t}
/// for t ∈ E[6] with 2t ≠ 0.
pub fn distribution_trace_lemma(t: &TorsionPoint, count: usize, lat: &Lattice) -> Result<IdentityResult> {
    const NAME: &str = "trace of omega along multiplication by 2";
    if 6 % t.order() != 0 {
        return Err(Error::InvalidTorsion("the trace instance needs t of order dividing 6".into()));
    }
    let (a, b, m) = t.canonical();
    let scale = (6 / m) as i64;
    let t6 = TorsionPoint::new(a as i64 * scale, b as i64 * scale, 6)?;
    // 2·(a,b)/6 = (a,b)/3
    let two_t = TorsionPoint::new(t6.a, t6.b, 3)?;
    if two_t.is_zero() {
        return Ok(IdentityResult::not_applicable(NAME, "2t is zero"));
    }
    let halves: Vec<TorsionPoint> = TorsionPoint::all_of_order_dividing(2)
        .into_iter()
        .map(|s| TorsionPoint { a: t6.a + 3 * s.a, b: t6.b + 3 * s.b, order_n: 6 })
        .collect();
    sampled(NAME, lat, count, 9, |z, _| {
        let wp = lat.prec();
        let mut acc = CompensatedSum::new(wp);
        for ts in &halves {
            acc.add(&omega_t_pullback(z, ts, lat)?);
        }
        let rhs = omega_t_pullback(z, &two_t, lat)? * 4u32;
        Ok((acc.value(), rhs))
    })
}

#[derive(Debug, Clone)]
pub struct DistributionReport {
    pub entries: Vec<IdentityResult>,
}

impl DistributionReport {
    pub fn max_defect(&self) -> f64 {
        self.entries.iter().filter_map(|e| e.defect).fold(0.0, f64::max)
    }
}

/// The three distribution instances at `count` sample points each: the
/// relation for (D, D′, N, s, t), the torsion-sum corollary at level D, and
/// the trace lemma at the 6-torsion point `t6`.
#[allow(clippy::too_many_arguments)]
pub fn distribution_suite(
    d: u64,
    d2: u64,
    n: u64,
    s: &TorsionPoint,
    t: &TorsionPoint,
    t6: &TorsionPoint,
    count: usize,
    lat: &Lattice,
) -> Result<DistributionReport> {
    Ok(DistributionReport {
        entries: vec![
            distribution_thm(d, d2, n, s, t, count, lat)?,
            distribution_cor(d, count, lat)?,
            distribution_trace_lemma(t6, count, lat)?,
        ],
    })
}
