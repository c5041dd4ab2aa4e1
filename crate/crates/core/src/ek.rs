//! Eisenstein–Kronecker series
//!
//!   e*_{k,r}(s,t) = Σ_{γ ≠ −s} (s̄+γ̄)^k / (s+γ)^r · ⟨γ,t⟩
//!
//! by exact row summation in the absolutely convergent range, by the
//! incomplete-Gamma continuation of the Kronecker–Lerch sum
//!
//!   K*_a(z,w,s) = Σ_{γ ≠ −z} (z̄+γ̄)^a / |z+γ|^{2s} · ⟨γ,w⟩
//!
//! everywhere, and (through the Kronecker theta function) by Taylor
//! extraction. The normalization is ẽ_{k,r+1} = (−1)^{k+r} r!/A^k·e*_{k,r+1}.

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numerics::{
    abs, as_nonpositive_integer, as_positive_integer, bernoulli_poly, binomial, cis, cone, conj, factorial, gamma,
    mul_i, norm, pi, root_of_unity, two_pi_i, upper_gamma, CompensatedSum,
};
use crate::theta::{taylor_coeffs, ThetaTranslate};
use crate::torsion::TorsionPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    Lerch,
    ThetaTaylor,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Lerch => "lerch",
            Method::ThetaTaylor => "theta_taylor",
        }
    }
}

/// Evaluation route requested for ẽ; `Auto` uses direct summation when the
/// series converges absolutely and the Lerch continuation otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Route {
    #[default]
    Auto,
    Direct,
    Lerch,
    ThetaTaylor,
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Route::Auto),
            "direct" => Ok(Route::Direct),
            "lerch" => Ok(Route::Lerch),
            "theta_taylor" | "theta-taylor" => Ok(Route::ThetaTaylor),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EkValue {
    pub value: Complex,
    pub method: Method,
    /// Absolute error estimate.
    pub est_error: f64,
}

/// Coefficients (in y = 1/(1−q)) of P_j(y) = Σ_{l≥0} (ν₀+l)^j q^l, built
/// from P₀ = y and P_{j+1} = ν₀P_j + (y² − y)P_j′.
fn lerch_polys(nu0: &Rational, max_j: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![Rational::new(), Rational::from(1)]];
    for _ in 0..max_j {
        let prev = out.last().expect("nonempty");
        let mut next = vec![Rational::new(); prev.len() + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i] += Rational::from(nu0 * c);
            if i > 0 {
                let ic = Rational::from(c * i as u32);
                next[i + 1] += &ic;
                next[i] -= ic;
            }
        }
        out.push(next);
    }
    out
}

/// Σ_n e^{2πinc}/(x+n)^p for Im x ≥ 0, x ∉ Z, p ≥ 2, where ν₀ = 1 − c:
/// ((−2πi)^p/(p−1)!)·e^{2πiν₀x}·P_{p−1}(1/(1 − e^{2πix})).
fn lerch_row(x: &Complex, p: u32, nu0: &Float, polys: &[Vec<Rational>], wp: u32) -> Complex {
    let tpi = two_pi_i(wp);
    let q = Complex::with_val(wp, x * &tpi).exp();
    let y = Complex::with_val(wp, 1 / Complex::with_val(wp, 1 - &q));
    let poly = &polys[(p - 1) as usize];
    let mut acc = Complex::new(wp);
    for c in poly.iter().rev() {
        acc *= &y;
        acc += Float::with_val(wp, c);
    }
    let lead = Complex::with_val(wp, x * &tpi) * nu0;
    let pre = Complex::with_val(wp, (-tpi).pow(p)) / factorial(p - 1);
    acc * lead.exp() * pre
}

/// e*_{k,r}(s,t) for r > k + 2.
///
/// Rows γ = mτ + n (normalized lattice) are summed in closed form: with
/// x = s + mτ, (x̄+n)^k = Σ_j C(k,j)(x+n)^j(−2i·Im x)^{k−j}, and each
/// Σ_n e^{2πinc}/(x+n)^p is a rational function of e^{2πix}. Only the outer
/// sum over rows is truncated, with a geometric tail bound.
pub fn ek_direct(k: u32, r: u32, s: &TorsionPoint, t: &TorsionPoint, lat: &Lattice) -> Result<EkValue> {
    if r <= k + 2 {
        return Err(Error::NotConvergent { k, r });
    }
    let out_prec = lat.prec();
    let wp = out_prec + 64;
    let tau = Complex::with_val(wp, lat.tau());
    let im_tau = tau.imag().to_f64();
    let (a, b, n) = (s.a, s.b, s.order_n as i64);
    let (c, d, dd) = (t.a, t.b, t.order_n as i64);
    // ⟨1, t⟩ = e^{2πi·chat}, ⟨τ, t⟩ = e^{2πi·d/D}
    let chat = Rational::from(((-c).rem_euclid(dd), dd));
    let chat_neg = Rational::from((c.rem_euclid(dd), dd));
    let nu_up = Rational::from(1 - &chat);
    let nu_down = Rational::from(1 - &chat_neg);
    let polys_up = lerch_polys(&nu_up, r as usize);
    let polys_down = lerch_polys(&nu_down, r as usize);
    let nu_up_f = Float::with_val(wp, &nu_up);
    let nu_down_f = Float::with_val(wp, &nu_down);
    let s_n = (Complex::with_val(wp, &tau * a) + b) / n;

    let row = |m: i64| -> Complex {
        let h = a + m * n;
        let x = Complex::with_val(wp, &s_n + Complex::with_val(wp, &tau * m));
        let character = root_of_unity(m * d, dd as u64, wp);
        if h == 0 && b.rem_euclid(n) == 0 {
            // the row through −s: only j = k survives, n = −x excluded
            let n0 = b / n;
            let p = r - k;
            let bp = bernoulli_poly(p, &chat);
            let val = Complex::with_val(wp, two_pi_i(wp).pow(p)) * Float::with_val(wp, &bp) / factorial(p);
            let (cn, cd) = (chat.numer().to_i64().expect("small"), chat.denom().to_u64().expect("small"));
            let shift = root_of_unity(-n0 * cn, cd, wp);
            return -(val * shift) * character;
        }
        let im2 = mul_i(&Complex::with_val(wp, x.imag())) * -2i32; // −2i·Im x
        let mut acc = Complex::new(wp);
        for j in 0..=k {
            let p = r - j;
            let l = if h >= 0 {
                lerch_row(&x, p, &nu_up_f, &polys_up, wp)
            } else {
                let neg = Complex::with_val(wp, -&x);
                let v = lerch_row(&neg, p, &nu_down_f, &polys_down, wp);
                if p % 2 == 1 {
                    -v
                } else {
                    v
                }
            };
            let coef = Complex::with_val(wp, (&im2).pow(k - j)) * binomial(k, j);
            acc += coef * l;
        }
        acc * character
    };

    let m0 = (-(a as f64) / n as f64).round() as i64;
    let mut sum = CompensatedSum::new(wp);
    let mut scale = Float::new(wp);
    let mut tail = 0.0f64;
    let eps = Float::with_val(wp, Float::i_exp(1, -(out_prec as i32) - 16));
    let max_rows = lat.ctx().sum_radius as i64;
    let first = row(m0);
    scale = scale.max(&abs(&first));
    sum.add(&first);
    for dir in [1i64, -1] {
        let nu = if dir > 0 { nu_up.to_f64() } else { nu_down.to_f64() };
        let mut quiet = 0;
        let mut step = 1i64;
        loop {
            if step > max_rows {
                return Err(Error::PrecisionBudget(format!("row sum did not converge within {max_rows} rows")));
            }
            let m = m0 + dir * step;
            let v = row(m);
            let mag = abs(&v);
            sum.add(&v);
            if mag > scale {
                scale = Float::with_val(wp, &mag);
            }
            let height = ((a + m * n) as f64 / n as f64).abs() * im_tau;
            let past_peak = height * 2.0 * std::f64::consts::PI * nu > k as f64 + 1.0;
            if past_peak && mag <= Float::with_val(wp, &scale * &eps) {
                quiet += 1;
                if quiet >= 2 {
                    let rho = (-2.0 * std::f64::consts::PI * nu * im_tau).exp()
                        * (1.0 + im_tau / height.max(1e-300)).powi(k as i32);
                    tail += mag.to_f64() * rho / (1.0 - rho).max(1e-300);
                    break;
                }
            } else {
                quiet = 0;
            }
            step += 1;
        }
    }
    let lam = Complex::with_val(wp, lat.omega2());
    let factor = Complex::with_val(wp, conj(&lam).pow(k)) / Complex::with_val(wp, (&lam).pow(r));
    let value = Complex::with_val(out_prec, sum.value() * &factor);
    let fac = abs(&factor).to_f64();
    let rounding = scale.to_f64() * (-(wp as f64) + 16.0).exp2();
    Ok(EkValue { value, method: Method::Direct, est_error: (tail + rounding) * fac })
}

/// Partial sum of the defining series over |s+γ| ≤ radius (γ = −s excluded).
pub fn ek_shell_sum(k: u32, r: u32, z: &Complex, w: &Complex, lat: &Lattice, radius: f64) -> Complex {
    let wp = lat.prec();
    let lam = lat.omega2().clone();
    let zn = lat.to_normalized(z);
    let wn = lat.to_normalized(w);
    let rn = radius / abs(&lam).to_f64();
    let rn_f = Float::with_val(wp, rn);
    let tiny = Float::with_val(wp, Float::i_exp(1, -(lat.ctx().prec_bits as i32) / 2));
    let tau = lat.tau().clone();
    let mut acc = CompensatedSum::new(wp);
    for (m, n) in lat.points_in_disc(&zn, rn) {
        let g = Complex::with_val(wp, &tau * m) + n;
        let x = Complex::with_val(wp, &zn + &g);
        let ax = abs(&x);
        if ax > rn_f || ax < tiny {
            continue;
        }
        let num = Complex::with_val(wp, conj(&x).pow(k));
        let den = Complex::with_val(wp, (&x).pow(r));
        acc.add(&(num / den * lat.pairing(&g, &wn)));
    }
    let factor = Complex::with_val(wp, conj(&lam).pow(k)) / Complex::with_val(wp, (&lam).pow(r));
    acc.value() * factor
}

/// Σ_{|x|>R} |x|^{k−r} over a lattice of covolume πA, bounded by the
/// integral 2R^{k−r+2}/((r−k−2)A).
pub fn ek_tail_bound(k: u32, r: u32, radius: f64, lat: &Lattice) -> f64 {
    assert!(r > k + 2, "tail bound needs r > k + 2");
    let e = (r - k - 2) as f64;
    2.0 * radius.powf(-e) / (e * lat.area().to_f64())
}

/// Partial sum of the Kronecker–Lerch series over |z+γ| ≤ radius.
pub fn kstar_partial_sum(a: u32, z: &Complex, w: &Complex, s: &Complex, lat: &Lattice, radius: f64) -> Complex {
    let wp = lat.prec();
    let tiny = Float::with_val(wp, Float::i_exp(1, -(lat.ctx().prec_bits as i32) / 2));
    let rf = Float::with_val(wp, radius);
    let mut acc = CompensatedSum::new(wp);
    let zn = lat.to_normalized(z);
    let rn = radius / abs(lat.omega2()).to_f64();
    for (m, n) in lat.points_in_disc(&zn, rn * 1.01) {
        let g = lat.point(m, n);
        let x = Complex::with_val(wp, z + &g);
        let ax = abs(&x);
        if ax > rf || ax < tiny {
            continue;
        }
        let ln2 = Float::with_val(wp, norm(&x).ln());
        let mag = Complex::with_val(wp, -(Complex::with_val(wp, s * ln2))).exp();
        let num = Complex::with_val(wp, conj(&x).pow(a));
        acc.add(&(num * mag * lat.pairing(&g, w)));
    }
    acc.value()
}

/// Σ_{γ ≠ −z} (z̄+γ̄)^a ⟨γ,w⟩ Γ(s, |z+γ|²/A) / |z+γ|^{2s} on the normalized
/// lattice, with |Σ| of the terms.
fn lerch_piece(a: u32, zn: &Complex, wn: &Complex, s: &Complex, lat: &Lattice, wp: u32, xmax: f64) -> Result<(Complex, Float)> {
    let area = Float::with_val(wp, lat.tau().imag()) / pi(wp);
    let radius = (area.to_f64() * xmax).sqrt();
    let tau = Complex::with_val(wp, lat.tau());
    let tiny = Float::with_val(wp, Float::i_exp(1, -(lat.ctx().prec_bits as i32) / 2));
    let int_s = as_positive_integer(s);
    let mut acc = CompensatedSum::new(wp);
    let mut mass = Float::new(wp);
    let wbar = conj(wn);
    for (m, n) in lat.points_in_disc(zn, radius) {
        let g = Complex::with_val(wp, &tau * m) + n;
        let x = Complex::with_val(wp, zn + &g);
        let nx = norm(&x);
        if Float::with_val(wp, nx.sqrt_ref()) < tiny {
            continue;
        }
        let big_x = Float::with_val(wp, &nx / &area);
        if big_x.to_f64() > xmax {
            continue;
        }
        let weight = match int_s {
            Some(k) => {
                let g = upper_gamma(s, &big_x)?;
                g / Float::with_val(wp, (&nx).pow(k))
            }
            None => {
                let g = upper_gamma(s, &big_x)?;
                let ln = Float::with_val(wp, nx.ln_ref());
                g * Complex::with_val(wp, -(Complex::with_val(wp, s * ln))).exp()
            }
        };
        let gw = Complex::with_val(wp, &g * &wbar);
        let angle = Float::with_val(wp, gw.imag() * 2u32) / &area;
        let term = Complex::with_val(wp, conj(&x).pow(a)) * weight * cis(&angle);
        mass += abs(&term);
        acc.add(&term);
    }
    Ok((acc.value(), mass))
}

/// Continued Kronecker–Lerch sum K*_a(z, w, s) with an absolute error
/// estimate.
///
/// Γ(s)K*_a(z,w,s) = F(z,w,s) + A^{a+1−2s}⟨w,z⟩F(w,z,a+1−s)
///                   − δ_{a,0}δ_{w∈Γ}A^{−s}/(1−s) − δ_{a,0}δ_{z∈Γ}A^{−s}⟨w,z⟩/s,
/// F being the incomplete-Gamma-weighted sum split at |z+γ|² = A.
pub fn lerch_kstar_with_error(a: u32, z: &Complex, w: &Complex, s: &Complex, lat: &Lattice) -> Result<(Complex, f64)> {
    let out_prec = lat.prec();
    let wp = out_prec + 32;
    let s = Complex::with_val(wp, s);
    let z_in = lat.near_lattice(z);
    let w_in = lat.near_lattice(w);
    let zn = if z_in { Complex::with_val(wp, lat.to_normalized(&lat.point(lat.nearest_point(z).1 .0, lat.nearest_point(z).1 .1))) } else { Complex::with_val(wp, lat.to_normalized(z)) };
    let wn = if w_in { Complex::with_val(wp, lat.to_normalized(&lat.point(lat.nearest_point(w).1 .0, lat.nearest_point(w).1 .1))) } else { Complex::with_val(wp, lat.to_normalized(w)) };

    if a == 0 && w_in && s == 1u32 {
        return Err(Error::Pole("K*_0(z, w, s) at s = 1 with w in the lattice".into()));
    }
    let lam = Complex::with_val(wp, lat.omega2());
    let ln_abs_lam2 = Float::with_val(wp, norm(&lam).ln());
    let scale = Complex::with_val(wp, conj(&lam).pow(a))
        * Complex::with_val(wp, -(Complex::with_val(wp, &s * &ln_abs_lam2))).exp();

    let area = Float::with_val(wp, lat.tau().imag()) / pi(wp);
    let pair_wz = {
        let zw = Complex::with_val(wp, &wn * conj(&zn));
        cis(&(Float::with_val(wp, zw.imag() * 2u32) / &area))
    };
    if let Some(nn) = as_nonpositive_integer(&s) {
        let v = if nn == 0 && a == 0 && z_in { -pair_wz } else { Complex::new(wp) };
        return Ok((Complex::with_val(out_prec, v * scale), 0.0));
    }

    let s2 = Complex::with_val(wp, (a + 1) - s.clone());
    let ln_area = Float::with_val(wp, area.ln_ref());
    let spread = (a as f64 / 2.0 - s.real().to_f64()).abs() + (a as f64 / 2.0 - s2.real().to_f64()).abs();
    let target = (wp as f64 + 32.0) * std::f64::consts::LN_2 + spread * ln_area.to_f64().abs();
    let mut xmax = target;
    for _ in 0..8 {
        xmax = target + (a as f64 / 2.0 + 1.0) * xmax.ln().max(0.0);
    }

    let (f1, m1) = lerch_piece(a, &zn, &wn, &s, lat, wp, xmax)?;
    let (f2, m2) = lerch_piece(a, &wn, &zn, &s2, lat, wp, xmax)?;
    let a_pow = Complex::with_val(wp, Complex::with_val(wp, &s2 - &s) * &ln_area).exp();
    let mut total = f1 + Complex::with_val(wp, &a_pow * &pair_wz) * f2;
    if a == 0 {
        let a_s = Complex::with_val(wp, -(Complex::with_val(wp, &s * &ln_area))).exp();
        if w_in {
            total -= Complex::with_val(wp, &a_s / Complex::with_val(wp, 1 - s.clone()));
        }
        if z_in {
            total -= Complex::with_val(wp, &a_s * &pair_wz) / &s;
        }
    }
    let g = gamma(&s)?;
    let value = total / &g * &scale;
    let mass = (m1 + Float::with_val(wp, abs(&a_pow) * m2)) / abs(&g) * abs(&scale);
    let err = mass.to_f64() * (-(wp as f64) + 24.0).exp2();
    Ok((Complex::with_val(out_prec, value), err))
}

pub fn lerch_kstar(a: u32, z: &Complex, w: &Complex, s: &Complex, lat: &Lattice) -> Result<Complex> {
    lerch_kstar_with_error(a, z, w, s, lat).map(|(v, _)| v)
}

/// (−1)^{k+r} r!/A^k.
pub fn normalization(k: u32, r: u32, lat: &Lattice) -> Float {
    let wp = lat.prec();
    let f = Float::with_val(wp, factorial(r)) / Float::with_val(wp, lat.area().pow(k));
    if (k + r) % 2 == 1 {
        -f
    } else {
        f
    }
}

/// ẽ_{k,r+1}(s,t) through the Lerch continuation K*_{k+r+1}(s, t, r+1), for
/// arbitrary complex s, t.
pub fn ek_normalized_lerch(k: u32, r: u32, z: &Complex, w: &Complex, lat: &Lattice) -> Result<EkValue> {
    let wp = lat.prec();
    let sp = Complex::with_val(wp, r + 1);
    let (v, err) = lerch_kstar_with_error(k + r + 1, z, w, &sp, lat)?;
    let norm = normalization(k, r, lat);
    let nabs = Float::with_val(wp, norm.abs_ref()).to_f64();
    Ok(EkValue { value: v * norm, method: Method::Lerch, est_error: err * nabs })
}

/// ẽ_{k,r+1}(z,w) as k!·r!·(coefficient of z^r w^k of Θ_{z,w}).
pub fn ek_normalized_theta(k: u32, r: u32, z: &Complex, w: &Complex, lat: &Lattice) -> Result<EkValue> {
    let wp = lat.prec();
    let tr = ThetaTranslate::new(z, w);
    let grid = taylor_coeffs(&tr, k as usize, r as usize, lat)?;
    let f = Float::with_val(wp, factorial(k)) * factorial(r);
    let value = Complex::with_val(wp, &grid.coeffs[k as usize][r as usize] * &f);
    let est = grid.est_error * abs(&value).to_f64().max(1.0);
    Ok(EkValue { value, method: Method::ThetaTaylor, est_error: est })
}

/// ẽ_{k,r+1}(s,t) at torsion points along the requested route.
pub fn ek_normalized(k: u32, r: u32, s: &TorsionPoint, t: &TorsionPoint, lat: &Lattice, route: Route) -> Result<EkValue> {
    let direct_ok = r + 1 > k + 2;
    let route = match route {
        Route::Auto if direct_ok => Route::Direct,
        Route::Auto => Route::Lerch,
        other => other,
    };
    match route {
        Route::Direct => {
            let e = ek_direct(k, r + 1, s, t, lat)?;
            let norm = normalization(k, r, lat);
            let nabs = Float::with_val(lat.prec(), norm.abs_ref()).to_f64();
            Ok(EkValue { value: e.value * norm, method: Method::Direct, est_error: e.est_error * nabs })
        }
        Route::Lerch => ek_normalized_lerch(k, r, &s.embed(lat), &t.embed(lat), lat),
        Route::ThetaTaylor => ek_normalized_theta(k, r, &s.embed(lat), &t.embed(lat), lat),
        Route::Auto => unreachable!("resolved above"),
    }
}

/// The bridge used to evaluate ẽ_{k,r+1}(x, 0) through the functional
/// equation: (−1)^{k+r}·k!·K*_{k+r+1}(0, x, k+1)/A^r.
pub fn ek_normalized_dual(k: u32, r: u32, x: &Complex, lat: &Lattice) -> Result<EkValue> {
    let wp = lat.prec();
    let sp = Complex::with_val(wp, k + 1);
    let zero = Complex::new(wp);
    let (v, err) = lerch_kstar_with_error(k + r + 1, &zero, x, &sp, lat)?;
    let f = Float::with_val(wp, factorial(k)) / Float::with_val(wp, lat.area().pow(r));
    let f = if (k + r) % 2 == 1 { -f } else { f };
    let fabs = Float::with_val(wp, f.abs_ref()).to_f64();
    Ok(EkValue { value: v * f, method: Method::Lerch, est_error: err * fabs })
}

/// Unit helper for callers that need 1 at lattice precision.
pub fn one(lat: &Lattice) -> Complex {
    cone(lat.prec())
}
