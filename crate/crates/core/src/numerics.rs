//! Multiprecision kernels: constants, complex Gamma, upper incomplete Gamma,
//! Bernoulli numbers, compensated summation and trapezoid-rule Cauchy
//! coefficient extraction.

use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn two_pi_i(prec: u32) -> Complex {
    Complex::with_val(prec, (0, pi(prec) * 2u32))
}

pub fn cx(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn czero(prec: u32) -> Complex {
    Complex::new(prec)
}

pub fn cone(prec: u32) -> Complex {
    Complex::with_val(prec, 1)
}

pub fn prec_of(z: &Complex) -> u32 {
    z.prec().0
}

pub fn conj(z: &Complex) -> Complex {
    Complex::with_val(prec_of(z), z.conj_ref())
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(prec_of(z), z.abs_ref())
}

pub fn norm(z: &Complex) -> Float {
    Float::with_val(prec_of(z), z.norm_ref())
}

pub fn mul_i(z: &Complex) -> Complex {
    let prec = prec_of(z);
    Complex::with_val(prec, (-z.imag().clone(), z.real().clone()))
}

/// e^{iθ} for real θ.
pub fn cis(theta: &Float) -> Complex {
    let prec = theta.prec();
    let (s, c) = theta.clone().sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

/// e^{2πi·num/den} computed from the reduced fraction.
pub fn root_of_unity(num: i64, den: u64, prec: u32) -> Complex {
    let d = den as i64;
    let n = num.rem_euclid(d);
    if n == 0 {
        return cone(prec);
    }
    if 2 * n == d {
        return Complex::with_val(prec, -1);
    }
    if 4 * n == d {
        return Complex::with_val(prec, (0, 1));
    }
    if 4 * n == 3 * d {
        return Complex::with_val(prec, (0, -1));
    }
    let theta = pi(prec) * 2u32 * Float::with_val(prec, n) / Float::with_val(prec, d);
    cis(&theta)
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64()
}

/// |a − b| / |b|, falling back to the absolute difference when b = 0.
pub fn rel_defect(a: &Complex, b: &Complex) -> f64 {
    let prec = prec_of(a).max(prec_of(b));
    let d = Complex::with_val(prec, a - b);
    let nb = abs(b);
    let nd = abs(&d);
    if nb.is_zero() {
        nd.to_f64()
    } else {
        Float::with_val(prec, nd / nb).to_f64()
    }
}

pub fn abs_defect(a: &Complex, b: &Complex) -> f64 {
    let prec = prec_of(a).max(prec_of(b));
    abs(&Complex::with_val(prec, a - b)).to_f64()
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Neumaier-compensated accumulator for complex values.
#[derive(Debug, Clone)]
pub struct CompensatedSum {
    re: FloatSum,
    im: FloatSum,
}

#[derive(Debug, Clone)]
struct FloatSum {
    sum: Float,
    comp: Float,
}

impl FloatSum {
    fn new(prec: u32) -> Self {
        Self { sum: Float::new(prec), comp: Float::new(prec) }
    }

    fn add(&mut self, x: &Float) {
        let prec = self.sum.prec();
        let t = Float::with_val(prec, &self.sum + x);
        if self.sum.cmp_abs(x).is_none_or(|o| o.is_ge()) {
            let e = Float::with_val(prec, &self.sum - &t) + x;
            self.comp += e;
        } else {
            let e = Float::with_val(prec, x - &t) + &self.sum;
            self.comp += e;
        }
        self.sum = t;
    }

    fn value(&self) -> Float {
        Float::with_val(self.sum.prec(), &self.sum + &self.comp)
    }
}

impl CompensatedSum {
    pub fn new(prec: u32) -> Self {
        Self { re: FloatSum::new(prec), im: FloatSum::new(prec) }
    }

    pub fn add(&mut self, z: &Complex) {
        self.re.add(z.real());
        self.im.add(z.imag());
    }

    pub fn value(&self) -> Complex {
        let prec = self.re.sum.prec();
        Complex::with_val(prec, (self.re.value(), self.im.value()))
    }
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Bernoulli numbers B_0..=B_n with B_1 = −1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut table = bernoulli_cache().lock().expect("bernoulli cache poisoned");
    while table.len() <= n {
        let m = table.len() as u32;
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from(binomial(m + 1, j as u32)) * b;
        }
        let bm = -acc / Rational::from(m + 1);
        table.push(bm);
    }
    table[..=n].to_vec()
}

/// Bernoulli polynomial B_p(c) at a rational point.
pub fn bernoulli_poly(p: u32, c: &Rational) -> Rational {
    let b = bernoulli_numbers(p as usize);
    let mut acc = Rational::new();
    for (i, bi) in b.iter().enumerate() {
        let i = i as u32;
        let pow = Rational::from(c.pow(p - i));
        acc += Rational::from(binomial(p, i)) * bi * pow;
    }
    acc
}

/// Exact positive integer value of a complex number, if it has one.
pub fn as_positive_integer(s: &Complex) -> Option<u32> {
    if !s.imag().is_zero() || !s.real().is_integer() || *s.real() <= 0 {
        return None;
    }
    s.real().to_u32_saturating().filter(|&n| n < 1_000_000)
}

/// Exact nonpositive integer value of a complex number, if it has one.
pub fn as_nonpositive_integer(s: &Complex) -> Option<i64> {
    if !s.imag().is_zero() || !s.real().is_integer() || *s.real() > 0 {
        return None;
    }
    s.real().to_integer().and_then(|i| i.to_i64())
}

/// Γ(s) for complex s. Poles at the nonpositive integers are reported.
pub fn gamma(s: &Complex) -> Result<Complex> {
    let prec = prec_of(s);
    if as_nonpositive_integer(s).is_some() {
        return Err(Error::Pole(format!("Gamma at nonpositive integer {}", s.real())));
    }
    if let Some(n) = as_positive_integer(s) {
        return Ok(Complex::with_val(prec, factorial(n - 1)));
    }
    if s.imag().is_zero() {
        let g = Float::with_val(prec, s.real().gamma_ref());
        return Ok(Complex::with_val(prec, g));
    }
    let wp = prec + 32;
    let z = Complex::with_val(wp, s);
    let out = if *z.real() < 0.5 {
        // reflection
        let one_minus = Complex::with_val(wp, 1 - &z);
        let g = gamma_stirling(&one_minus);
        let pz = Complex::with_val(wp, &z * pi(wp));
        let sin = pz.sin();
        Complex::with_val(wp, pi(wp) / (sin * g))
    } else {
        gamma_stirling(&z)
    };
    Ok(Complex::with_val(prec, out))
}

/// Γ(z) for Re z ≥ 1/2 via an upward shift and the Stirling series.
fn gamma_stirling(z: &Complex) -> Complex {
    let wp = prec_of(z);
    // Stirling terms bottom out near e^{-2π|z|}; push |z| past that.
    let target = (wp as f64 * 0.1104).ceil() + 4.0;
    let re = z.real().to_f64();
    let shift = if re < target { (target - re).ceil() as u32 } else { 0 };
    let mut prod = cone(wp);
    for j in 0..shift {
        prod *= Complex::with_val(wp, z + j);
    }
    let w = Complex::with_val(wp, z + shift);
    let half = Float::with_val(wp, 0.5);
    let lnw = w.clone().ln();
    let mut lg = Complex::with_val(wp, &w - &half) * &lnw - &w;
    let ln2pi = Float::with_val(wp, pi(wp) * 2u32).ln();
    lg += ln2pi * &half;
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32) - 8));
    let w2 = Complex::with_val(wp, w.square_ref());
    let mut wpow = w.clone(); // w^{2k-1}
    let mut k = 1usize;
    loop {
        let b = bernoulli_numbers(2 * k);
        let coeff = &b[2 * k] / Rational::from((2 * k * (2 * k - 1)) as u64);
        let term = Complex::with_val(wp, Float::with_val(wp, &coeff) / &wpow);
        let small = abs(&term) < eps;
        lg += &term;
        if small || k > 4 * wp as usize {
            break;
        }
        wpow *= &w2;
        k += 1;
    }
    lg.exp() / prod
}

/// Upper incomplete Gamma Γ(s, x) for complex s and real x > 0.
pub fn upper_gamma(s: &Complex, x: &Float) -> Result<Complex> {
    let prec = prec_of(s);
    if *x <= 0 {
        return Err(Error::InvalidArgument("upper_gamma needs x > 0".into()));
    }
    if let Some(n) = as_positive_integer(s) {
        return Ok(Complex::with_val(prec, upper_gamma_int(n, x, prec)));
    }
    let xf = x.to_f64();
    let guard = 32 + if xf < 30.0 { (xf * std::f64::consts::LOG2_E).ceil() as u32 + 16 } else { 0 };
    let wp = prec + guard;
    let sw = Complex::with_val(wp, s);
    let xw = Float::with_val(wp, x);
    let out = if xf >= 30.0 {
        upper_gamma_cf(&sw, &xw)?
    } else if let Some(n) = as_nonpositive_integer(&sw) {
        let mut g = Complex::with_val(wp, expint_e1(&xw));
        let ex = Float::with_val(wp, -xw.clone()).exp();
        for sigma in (n..0).rev() {
            // Γ(σ, x) = (Γ(σ+1, x) − x^σ e^{−x}) / σ
            let xs = Float::with_val(wp, xw.clone().pow(sigma as i32)) * &ex;
            g = (g - xs) / Float::with_val(wp, sigma);
        }
        g
    } else {
        let re = sw.real().to_f64();
        let shift = if re < 0.5 { (0.5 - re).ceil() as u32 } else { 0 };
        let top = Complex::with_val(wp, &sw + shift);
        let mut g = Complex::with_val(wp, gamma(&top)? - lower_gamma_series(&top, &xw)?);
        let lnx = Float::with_val(wp, xw.ln_ref());
        let ex = Float::with_val(wp, -xw.clone()).exp();
        for j in (0..shift).rev() {
            let sigma = Complex::with_val(wp, &sw + j);
            let xs = Complex::with_val(wp, &sigma * &lnx).exp() * &ex;
            g = (g - xs) / sigma;
        }
        g
    };
    Ok(Complex::with_val(prec, out))
}

/// Γ(n, x) = (n−1)! e^{−x} Σ_{j<n} x^j/j!.
fn upper_gamma_int(n: u32, x: &Float, prec: u32) -> Float {
    let wp = prec + 16;
    let x = Float::with_val(wp, x);
    let mut term = Float::with_val(wp, 1);
    let mut sum = Float::with_val(wp, 1);
    for j in 1..n {
        term *= &x;
        term /= j;
        sum += &term;
    }
    let e = Float::with_val(wp, -x).exp();
    Float::with_val(prec, sum * e * factorial(n - 1))
}

/// γ(s, x) = x^s e^{−x} Σ_n x^n / (s(s+1)…(s+n)).
fn lower_gamma_series(s: &Complex, x: &Float) -> Result<Complex> {
    let wp = prec_of(s);
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let mut term = Complex::with_val(wp, 1 / s);
    let mut sum = term.clone();
    let xf = x.to_f64();
    let mut n = 1u32;
    loop {
        term *= x;
        term /= Complex::with_val(wp, s + n);
        sum += &term;
        if (n as f64) > xf && abs(&term) < Float::with_val(wp, abs(&sum) * &eps) {
            break;
        }
        n += 1;
        if n > 1_000_000 {
            return Err(Error::PrecisionBudget("lower gamma series did not converge".into()));
        }
    }
    let lnx = Float::with_val(wp, x.ln_ref());
    let pre = (Complex::with_val(wp, s * lnx) - x).exp();
    Ok(sum * pre)
}

/// E₁(x) = Γ(0, x) = −γ − ln x − Σ_{k≥1} (−x)^k/(k·k!) for 0 < x < 30.
fn expint_e1(x: &Float) -> Float {
    let wp = x.prec();
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let mut sum = Float::new(wp);
    let mut t = Float::with_val(wp, 1); // (−x)^k / k!
    let mut k = 1u32;
    loop {
        t *= x;
        t /= k;
        t = -t;
        let term = Float::with_val(wp, &t / k);
        sum += &term;
        if (k as f64) > x.to_f64() && term.abs() < eps {
            break;
        }
        k += 1;
    }
    let euler = Float::with_val(wp, Constant::Euler);
    let lnx = Float::with_val(wp, x.ln_ref());
    -euler - lnx - sum
}

/// Legendre continued fraction for Γ(s, x), evaluated by modified Lentz.
fn upper_gamma_cf(s: &Complex, x: &Float) -> Result<Complex> {
    let wp = prec_of(s);
    let tiny = Float::with_val(wp, Float::i_exp(1, -4 * wp as i32));
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let mut b = Complex::with_val(wp, x + 1u32) - s;
    let mut c = Complex::with_val(wp, 1 / &tiny);
    let mut d = Complex::with_val(wp, 1 / &b);
    let mut h = d.clone();
    let mut i = 1u32;
    loop {
        let an = -(Complex::with_val(wp, i - s.clone()) * i);
        b += 2u32;
        d = Complex::with_val(wp, &an * &d) + &b;
        if abs(&d) < tiny {
            d = Complex::with_val(wp, &tiny);
        }
        c = Complex::with_val(wp, &an / &c) + &b;
        if abs(&c) < tiny {
            c = Complex::with_val(wp, &tiny);
        }
        d = Complex::with_val(wp, 1 / &d);
        let del = Complex::with_val(wp, &d * &c);
        h *= &del;
        if abs(&Complex::with_val(wp, &del - 1u32)) < eps {
            break;
        }
        i += 1;
        if i > 200_000 {
            return Err(Error::PrecisionBudget("incomplete gamma fraction did not converge".into()));
        }
    }
    let lnx = Float::with_val(wp, x.ln_ref());
    let pre = (Complex::with_val(wp, s * lnx) - x).exp();
    Ok(h * pre)
}

/// The m-th roots of unity e^{2πij/m}, j < m.
pub fn unit_roots(m: usize, prec: u32) -> Vec<Complex> {
    (0..m).map(|j| root_of_unity(j as i64, m as u64, prec)).collect()
}

/// Coefficients c[a][b] of z^b w^a of a function analytic on the closed
/// bidisc |z| ≤ rho_z, |w| ≤ rho_w, by the m×m product trapezoid rule.
///
/// `values(zs, ws)` returns f(zs[p], ws[q]) at index q·m + p.
pub fn cauchy_grid<F>(
    rho_z: &Float,
    rho_w: &Float,
    max_a: usize,
    max_b: usize,
    m: usize,
    values: &mut F,
) -> Result<Vec<Vec<Complex>>>
where
    F: FnMut(&[Complex], &[Complex]) -> Result<Vec<Complex>>,
{
    let prec = rho_z.prec();
    if max_a >= m || max_b >= m {
        return Err(Error::InvalidArgument("too few contour nodes for the requested degree".into()));
    }
    let roots = unit_roots(m, prec);
    let zs: Vec<Complex> = roots.iter().map(|u| Complex::with_val(prec, u * rho_z)).collect();
    let ws: Vec<Complex> = roots.iter().map(|u| Complex::with_val(prec, u * rho_w)).collect();
    let f = values(&zs, &ws)?;
    if f.len() != m * m {
        return Err(Error::InvalidArgument("contour evaluator returned a wrong-sized grid".into()));
    }
    // row transform over z
    let mut rows = Vec::with_capacity(m);
    for q in 0..m {
        let mut row = Vec::with_capacity(max_b + 1);
        for b in 0..=max_b {
            let mut acc = CompensatedSum::new(prec);
            for p in 0..m {
                let idx = (m - (p * b) % m) % m;
                acc.add(&Complex::with_val(prec, &f[q * m + p] * &roots[idx]));
            }
            row.push(acc.value());
        }
        rows.push(row);
    }
    let mm = Float::with_val(prec, (m * m) as u64);
    let mut out = vec![Vec::with_capacity(max_b + 1); max_a + 1];
    for (a, out_row) in out.iter_mut().enumerate() {
        let rw = Float::with_val(prec, rho_w.pow(a as u32));
        for b in 0..=max_b {
            let mut acc = CompensatedSum::new(prec);
            for (q, row) in rows.iter().enumerate() {
                let idx = (m - (q * a) % m) % m;
                acc.add(&Complex::with_val(prec, &row[b] * &roots[idx]));
            }
            let rz = Float::with_val(prec, rho_z.pow(b as u32));
            let scale = Float::with_val(prec, &mm * &rw) * rz;
            out_row.push(acc.value() / scale);
        }
    }
    Ok(out)
}

/// Output of an adaptive trapezoid extraction.
#[derive(Debug, Clone)]
pub struct CauchyGrid {
    pub coeffs: Vec<Vec<Complex>>,
    pub nodes: usize,
    /// Estimated relative error of the returned level, measured against the
    /// largest scaled coefficient.
    pub est_error: f64,
}

/// Doubles the node count until the level-to-level change, which bounds the
/// coarse level's error, certifies the fine level: trapezoid errors decay
/// geometrically, so the fine level's error is about the square of the
/// relative change.
pub fn cauchy_grid_adaptive<F>(
    rho_z: &Float,
    rho_w: &Float,
    max_a: usize,
    max_b: usize,
    tol: f64,
    mut values: F,
) -> Result<CauchyGrid>
where
    F: FnMut(&[Complex], &[Complex]) -> Result<Vec<Complex>>,
{
    let prec = rho_z.prec();
    let mut m = 32usize.max((max_a.max(max_b) + 1).next_power_of_two() * 2);
    let mut prev = cauchy_grid(rho_z, rho_w, max_a, max_b, m, &mut values)?;
    loop {
        m *= 2;
        if m > 4096 {
            return Err(Error::PrecisionBudget("contour node budget exhausted".into()));
        }
        let next = cauchy_grid(rho_z, rho_w, max_a, max_b, m, &mut values)?;
        let mut scale = Float::new(prec);
        let mut diff = Float::new(prec);
        for a in 0..=max_a {
            let rw = Float::with_val(prec, rho_w.pow(a as u32));
            for b in 0..=max_b {
                let rz = Float::with_val(prec, rho_z.pow(b as u32));
                let r = Float::with_val(prec, &rw * &rz);
                let s = Float::with_val(prec, abs(&next[a][b]) * &r);
                let d = abs(&Complex::with_val(prec, &next[a][b] - &prev[a][b])) * &r;
                if s > scale {
                    scale = s;
                }
                if d > diff {
                    diff = d;
                }
            }
        }
        let rel = if scale.is_zero() { 0.0 } else { Float::with_val(prec, &diff / &scale).to_f64() };
        let est = rel * rel * 256.0;
        if est <= tol || rel == 0.0 {
            return Ok(CauchyGrid { coeffs: next, nodes: m, est_error: est });
        }
        prev = next;
    }
}

/// Residue of f at `center` from the trapezoid rule on |z − center| = rho,
/// with node doubling as in [`cauchy_grid_adaptive`]; `tol` is absolute.
pub fn contour_residue<F>(center: &Complex, rho: &Float, tol: f64, mut f: F) -> Result<(Complex, usize)>
where
    F: FnMut(&Complex) -> Result<Complex>,
{
    let prec = prec_of(center);
    let mut eval = |m: usize| -> Result<Complex> {
        let roots = unit_roots(m, prec);
        let mut acc = CompensatedSum::new(prec);
        for u in &roots {
            let dz = Complex::with_val(prec, u * rho);
            let z = Complex::with_val(prec, center + &dz);
            acc.add(&(f(&z)? * dz));
        }
        Ok(acc.value() / Float::with_val(prec, m as u64))
    };
    let mut m = 32usize;
    let mut prev = eval(m)?;
    loop {
        m *= 2;
        if m > 8192 {
            return Err(Error::PrecisionBudget("residue contour node budget exhausted".into()));
        }
        let next = eval(m)?;
        let d = abs_defect(&next, &prev);
        let scale = abs(&next).to_f64().max(1.0);
        let rel = d / scale;
        if rel * rel * 256.0 * scale <= tol || d == 0.0 {
            return Ok((next, m));
        }
        prev = next;
    }
}
