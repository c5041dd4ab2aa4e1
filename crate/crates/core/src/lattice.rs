//! Complex lattices Γ = ω₁Z + ω₂Z, the pairing ⟨z,w⟩, and the σ/ζ/θ kernel.
//!
//! Everything is evaluated on the normalized lattice Z + τZ (τ = ω₁/ω₂) with
//! q-products, then carried to Γ by homogeneity in λ = ω₂:
//! σ_Γ(z) = λσ(z/λ), ζ_Γ(z) = λ⁻¹ζ(z/λ), e₂*(Γ) = λ⁻²e₂*, A(Γ) = |λ|²A.

use rug::{Complex, Float};

use crate::context::PrecisionContext;
use crate::error::{Error, Result};
use crate::numerics::{abs, cone, conj, mul_i, norm, pi, two_pi_i};

/// Quasi-periods of the normalized lattice Z + τZ, the only state computed at
/// construction. Stored so that a cached copy reproduces a fresh lattice
/// bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeInvariants {
    /// ζ(z+1) − ζ(z).
    pub eta_one: Complex,
    /// ζ(z+τ) − ζ(z).
    pub eta_tau: Complex,
    /// e₂* of Z + τZ.
    pub e2star: Complex,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    ctx: PrecisionContext,
    wp: u32,
    omega1: Complex,
    omega2: Complex,
    tau: Complex,
    area: Float,
    area_n: Float,
    inv: LatticeInvariants,
    q: Complex,
    q_terms: u32,
    /// Π_{n ≤ q_terms} (1 − qⁿ)².
    den: Complex,
    /// (η − e₂*)/2 for the normalized lattice: θ = e^{c z²}·sin(πz)/π·Π.
    theta_quad: Complex,
}

/// Outcome of comparing θ(z+γ) with α(γ)·exp(zγ̄/A + γγ̄/(2A))·θ(z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformCheck {
    pub alpha: i32,
    /// (−1)^{m+n+mn}, recorded as a cross-check only.
    pub expected_alpha: i32,
    pub defect: f64,
    pub passed: bool,
}

impl Lattice {
    /// Lattice with generators ω₁, ω₂; requires Im(ω₁ω̄₂) > 0 so that
    /// A(Γ) = Im(ω₁ω̄₂)/π is positive.
    pub fn new(omega1: &Complex, omega2: &Complex, ctx: &PrecisionContext) -> Result<Self> {
        Self::build(omega1, omega2, ctx, None)
    }

    /// Γ = τZ + Z, i.e. ω₁ = τ, ω₂ = 1.
    pub fn from_tau(tau: &Complex, ctx: &PrecisionContext) -> Result<Self> {
        let wp = ctx.working_prec();
        Self::new(&Complex::with_val(wp, tau), &cone(wp), ctx)
    }

    /// Rebuilds a lattice from previously computed invariants, skipping the
    /// quasi-period calibration.
    pub fn with_invariants(
        omega1: &Complex,
        omega2: &Complex,
        ctx: &PrecisionContext,
        inv: LatticeInvariants,
    ) -> Result<Self> {
        Self::build(omega1, omega2, ctx, Some(inv))
    }

    fn build(
        omega1: &Complex,
        omega2: &Complex,
        ctx: &PrecisionContext,
        inv: Option<LatticeInvariants>,
    ) -> Result<Self> {
        ctx.validate()?;
        let wp = ctx.working_prec();
        let omega1 = Complex::with_val(wp, omega1);
        let omega2 = Complex::with_val(wp, omega2);
        if omega2.is_zero() {
            return Err(Error::InvalidLattice("ω₂ = 0".into()));
        }
        let cross = Complex::with_val(wp, &omega1 * conj(&omega2));
        if *cross.imag() <= 0 {
            return Err(Error::InvalidLattice(
                "generators must satisfy Im(ω₁·conj(ω₂)) > 0; swap ω₁ and ω₂".into(),
            ));
        }
        let tau = Complex::with_val(wp, &omega1 / &omega2);
        let pi = pi(wp);
        let area = Float::with_val(wp, cross.imag() / &pi);
        let area_n = Float::with_val(wp, tau.imag() / &pi);

        let im_tau = tau.imag().to_f64();
        if im_tau.is_nan() || im_tau <= 0.0 || !im_tau.is_finite() {
            return Err(Error::InvalidLattice("degenerate period ratio".into()));
        }
        let needed = ((wp as f64 * std::f64::consts::LN_2) / (2.0 * std::f64::consts::PI * im_tau)).ceil() as u32 + 2;
        if ctx.q_terms != 0 && ctx.q_terms < needed {
            return Err(Error::PrecisionBudget(format!(
                "q_terms = {} but |q|^n < 2^-{} needs n ≥ {}",
                ctx.q_terms, wp, needed
            )));
        }
        if needed > 100_000 {
            return Err(Error::PrecisionBudget("Im τ too small for the q-product".into()));
        }
        let q_terms = needed;
        let q = Complex::with_val(wp, &tau * two_pi_i(wp)).exp();

        let mut den = cone(wp);
        let mut qn = cone(wp);
        let mut e2sum = Complex::new(wp);
        for n in 1..=q_terms {
            qn *= &q;
            let one_minus = Complex::with_val(wp, 1 - &qn);
            e2sum += Complex::with_val(wp, &qn * n) / &one_minus;
            den *= Complex::with_val(wp, one_minus.square_ref());
        }

        let mut lat = Self {
            ctx: *ctx,
            wp,
            omega1,
            omega2,
            tau,
            area,
            area_n,
            inv: LatticeInvariants {
                eta_one: Complex::new(wp),
                eta_tau: Complex::new(wp),
                e2star: Complex::new(wp),
            },
            q,
            q_terms,
            den,
            theta_quad: Complex::new(wp),
        };
        lat.inv = match inv {
            Some(inv) => LatticeInvariants {
                eta_one: Complex::with_val(wp, inv.eta_one),
                eta_tau: Complex::with_val(wp, inv.eta_tau),
                e2star: Complex::with_val(wp, inv.e2star),
            },
            None => {
                // η(1) = G₂(τ) = (π²/3)(1 − 24 Σ n qⁿ/(1 − qⁿ))
                let pi2 = Float::with_val(wp, pi.square_ref()) / 3u32;
                let eta_one = Complex::with_val(wp, 1 - e2sum * 24u32) * pi2;
                lat.inv.eta_one = eta_one.clone();
                // η(τ) from ζ(z₀ + τ) − ζ(z₀) at a generic point.
                let z0 = Complex::with_val(wp, (0.3141, 0.2718 * im_tau));
                let z1 = Complex::with_val(wp, &z0 + &lat.tau);
                let eta_tau = lat.zeta_n(&z1) - lat.zeta_n(&z0);
                // calibrated on ω₁ (τ in normalized coordinates)
                let taubar = conj(&lat.tau);
                let e2star = Complex::with_val(wp, &eta_tau / &lat.tau)
                    - Complex::with_val(wp, &taubar / &lat.tau) / &lat.area_n;
                LatticeInvariants { eta_one, eta_tau, e2star }
            }
        };
        lat.theta_quad = Complex::with_val(wp, &lat.inv.eta_one - &lat.inv.e2star) / 2u32;
        Ok(lat)
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Working precision of all returned values.
    pub fn prec(&self) -> u32 {
        self.wp
    }

    pub fn omega1(&self) -> &Complex {
        &self.omega1
    }

    pub fn omega2(&self) -> &Complex {
        &self.omega2
    }

    /// τ = ω₁/ω₂, Im τ > 0.
    pub fn tau(&self) -> &Complex {
        &self.tau
    }

    /// A(Γ) = Im(ω₁ω̄₂)/π.
    pub fn area(&self) -> &Float {
        &self.area
    }

    pub fn invariants(&self) -> &LatticeInvariants {
        &self.inv
    }

    /// ζ(z + ω₁) − ζ(z).
    pub fn eta1(&self) -> Complex {
        Complex::with_val(self.wp, &self.inv.eta_tau / &self.omega2)
    }

    /// ζ(z + ω₂) − ζ(z).
    pub fn eta2(&self) -> Complex {
        Complex::with_val(self.wp, &self.inv.eta_one / &self.omega2)
    }

    pub fn e2star(&self) -> Complex {
        let l2 = Complex::with_val(self.wp, self.omega2.square_ref());
        Complex::with_val(self.wp, &self.inv.e2star / l2)
    }

    /// |η₁ω₂ − η₂ω₁ + 2πi|; the orientation Im(ω₁/ω₂) > 0 fixes the sign.
    pub fn legendre_residual(&self) -> f64 {
        let wp = self.wp;
        let lhs = Complex::with_val(wp, self.eta1() * &self.omega2) - Complex::with_val(wp, self.eta2() * &self.omega1);
        abs(&(lhs + two_pi_i(wp))).to_f64()
    }

    pub fn point(&self, m: i64, n: i64) -> Complex {
        let wp = self.wp;
        Complex::with_val(wp, &self.omega1 * m) + Complex::with_val(wp, &self.omega2 * n)
    }

    pub fn to_normalized(&self, z: &Complex) -> Complex {
        Complex::with_val(self.wp, z / &self.omega2)
    }

    /// Real coordinates (x, y) with z = x·ω₁ + y·ω₂.
    pub fn coordinates(&self, z: &Complex) -> (Float, Float) {
        let zn = self.to_normalized(z);
        let x = Float::with_val(self.wp, zn.imag() / self.tau.imag());
        let y = Float::with_val(self.wp, zn.real() - Float::with_val(self.wp, &x * self.tau.real()));
        (x, y)
    }

    /// Distance from z to the nearest lattice point, and that point's
    /// coordinates.
    pub fn nearest_point(&self, z: &Complex) -> (Float, (i64, i64)) {
        let (x, y) = self.coordinates(z);
        let (x0, y0) = (x.to_f64().round() as i64, y.to_f64().round() as i64);
        let mut best: Option<(Float, (i64, i64))> = None;
        // wide enough for any reasonably reduced basis
        let reach = 2 + (self.tau.real().to_f64().abs() / self.tau.imag().to_f64()).ceil() as i64;
        for m in x0 - reach..=x0 + reach {
            for n in y0 - reach..=y0 + reach {
                let d = abs(&Complex::with_val(self.wp, z - self.point(m, n)));
                if best.as_ref().is_none_or(|(b, _)| d < *b) {
                    best = Some((d, (m, n)));
                }
            }
        }
        best.expect("search window is nonempty")
    }

    pub fn dist_to_lattice(&self, z: &Complex) -> Float {
        self.nearest_point(z).0
    }

    /// Pole guard used by Z, Θ and friends: dist(z, Γ) < 2^{−prec/2}·|ω₂|.
    pub fn near_lattice(&self, z: &Complex) -> bool {
        let d = self.dist_to_lattice(z);
        let thresh = Float::with_val(self.wp, Float::i_exp(1, -(self.ctx.prec_bits as i32) / 2)) * abs(&self.omega2);
        d < thresh
    }

    /// ⟨z,w⟩ = exp((z·w̄ − w·z̄)/A).
    pub fn pairing(&self, z: &Complex, w: &Complex) -> Complex {
        let wp = self.wp;
        // z·w̄ − w·z̄ = 2i·Im(z·w̄)
        let zw = Complex::with_val(wp, z * conj(w));
        let angle = Float::with_val(wp, zw.imag() * 2u32) / &self.area;
        crate::numerics::cis(&angle)
    }

    fn product_terms(&self, zn: &Complex) -> u32 {
        let extra = (zn.imag().to_f64().abs() / self.tau.imag().to_f64()).ceil() as u32;
        self.q_terms + extra + 1
    }

    /// Π_{n≥1} (1 − qⁿu)(1 − qⁿ/u) / (1 − qⁿ)² and sin(πz)/π for the
    /// normalized argument.
    fn product_parts(&self, zn: &Complex) -> (Complex, Complex) {
        let wp = self.wp;
        let half = Complex::with_val(wp, zn * pi(wp));
        let sqrt_u = mul_i(&half).exp();
        let inv_sqrt_u = Complex::with_val(wp, 1 / &sqrt_u);
        let u = Complex::with_val(wp, sqrt_u.square_ref());
        let inv_u = Complex::with_val(wp, inv_sqrt_u.square_ref());
        let sin_over_pi = Complex::with_val(wp, &sqrt_u - &inv_sqrt_u) / two_pi_i(wp);
        let mut prod = cone(wp);
        let mut qn = cone(wp);
        for _ in 0..self.product_terms(zn) {
            qn *= &self.q;
            let a = 1 - Complex::with_val(wp, &qn * &u);
            let b = 1 - Complex::with_val(wp, &qn * &inv_u);
            prod *= a * b;
        }
        (prod / &self.den, sin_over_pi)
    }

    /// σ on Z + τZ.
    fn sigma_n(&self, zn: &Complex) -> Complex {
        let wp = self.wp;
        let (prod, s) = self.product_parts(zn);
        let z2 = Complex::with_val(wp, zn.square_ref());
        let quad = Complex::with_val(wp, &self.inv.eta_one * z2) / 2u32;
        quad.exp() * s * prod
    }

    /// θ on Z + τZ.
    fn theta_n(&self, zn: &Complex) -> Complex {
        let wp = self.wp;
        let (prod, s) = self.product_parts(zn);
        let z2 = Complex::with_val(wp, zn.square_ref());
        let quad = Complex::with_val(wp, &self.theta_quad * z2);
        quad.exp() * s * prod
    }

    /// Weierstrass ζ on Z + τZ as the logarithmic derivative of the product.
    fn zeta_n(&self, zn: &Complex) -> Complex {
        let wp = self.wp;
        let tpi = two_pi_i(wp);
        let u = Complex::with_val(wp, zn * &tpi).exp();
        let inv_u = Complex::with_val(wp, 1 / &u);
        // π cot(πz) = πi(u + 1)/(u − 1)
        let cot = Complex::with_val(wp, &u + 1u32) / Complex::with_val(wp, &u - 1u32) * &tpi / 2u32;
        let mut acc = Complex::with_val(wp, &self.inv.eta_one * zn) + cot;
        let mut qn = cone(wp);
        let mut series = Complex::new(wp);
        for _ in 0..self.product_terms(zn) {
            qn *= &self.q;
            let a = Complex::with_val(wp, &qn * &inv_u);
            let b = Complex::with_val(wp, &qn * &u);
            series += Complex::with_val(wp, &a / Complex::with_val(wp, 1 - &a));
            series -= Complex::with_val(wp, &b / Complex::with_val(wp, 1 - &b));
        }
        acc += series * tpi;
        acc
    }

    fn lift(&self, z: &Complex) -> Complex {
        Complex::with_val(self.wp, z)
    }

    /// Weierstrass σ(z; Γ).
    pub fn sigma(&self, z: &Complex) -> Complex {
        let zn = self.to_normalized(&self.lift(z));
        self.sigma_n(&zn) * &self.omega2
    }

    /// θ(z) = exp(−e₂*z²/2)·σ(z); θ′(0) = 1.
    pub fn theta(&self, z: &Complex) -> Complex {
        let zn = self.to_normalized(&self.lift(z));
        self.theta_n(&zn) * &self.omega2
    }

    /// Weierstrass ζ(z; Γ).
    pub fn weierstrass_zeta(&self, z: &Complex) -> Result<Complex> {
        if self.near_lattice(z) {
            return Err(Error::Pole("ζ at a lattice point".into()));
        }
        let zn = self.to_normalized(&self.lift(z));
        Ok(self.zeta_n(&zn) / &self.omega2)
    }

    /// Z(z) = θ′(z)/θ(z) = ζ(z) − e₂*·z.
    pub fn log_derivative_z(&self, z: &Complex) -> Result<Complex> {
        if self.near_lattice(z) {
            return Err(Error::Pole("θ′/θ at a lattice point".into()));
        }
        let wp = self.wp;
        let zn = self.to_normalized(&self.lift(z));
        let zeta = self.zeta_n(&zn);
        let lin = Complex::with_val(wp, &self.inv.e2star * &zn);
        Ok((zeta - lin) / &self.omega2)
    }

    /// The automorphy factor exp(zγ̄/A + γγ̄/(2A)) of θ.
    pub fn theta_factor(&self, gamma: &Complex, z: &Complex) -> Complex {
        let wp = self.wp;
        let gbar = conj(gamma);
        let lin = Complex::with_val(wp, z * &gbar);
        let quad = Complex::with_val(wp, norm(gamma)) / 2u32;
        ((lin + quad) / &self.area).exp()
    }

    /// Computes α(γ) for γ = mω₁ + nω₂ and the relative defect of the θ
    /// transformation law at z.
    pub fn theta_transform_check(&self, m: i64, n: i64, z: &Complex) -> TransformCheck {
        let wp = self.wp;
        let gamma = self.point(m, n);
        let z = self.lift(z);
        let lhs = self.theta(&Complex::with_val(wp, &z + &gamma));
        let base = self.theta_factor(&gamma, &z) * self.theta(&z);
        let ratio = Complex::with_val(wp, &lhs / &base);
        let alpha = if *ratio.real() >= 0 { 1 } else { -1 };
        let defect = if lhs.is_zero() && base.is_zero() {
            0.0
        } else {
            let diff = Complex::with_val(wp, &lhs - Complex::with_val(wp, &base * alpha));
            Float::with_val(wp, abs(&diff) / abs(&lhs)).to_f64()
        };
        let parity = (m + n + m * n).rem_euclid(2);
        TransformCheck {
            alpha,
            expected_alpha: if parity == 0 { 1 } else { -1 },
            defect,
            passed: defect <= self.ctx.tol_rel,
        }
    }

    /// Lattice coordinates (m, n) of normalized points mτ + n with
    /// |c + mτ + n| ≤ radius, c given in normalized coordinates.
    pub fn points_in_disc(&self, center_n: &Complex, radius: f64) -> Vec<(i64, i64)> {
        let t_re = self.tau.real().to_f64();
        let t_im = self.tau.imag().to_f64();
        let c_re = center_n.real().to_f64();
        let c_im = center_n.imag().to_f64();
        let r = radius * (1.0 + 1e-9) + 1e-9;
        let m_lo = ((-r - c_im) / t_im).floor() as i64;
        let m_hi = ((r - c_im) / t_im).ceil() as i64;
        let mut out = Vec::new();
        for m in m_lo..=m_hi {
            let y = c_im + m as f64 * t_im;
            let h2 = r * r - y * y;
            if h2 < 0.0 {
                continue;
            }
            let h = h2.sqrt();
            let x0 = c_re + m as f64 * t_re;
            let n_lo = (-h - x0).floor() as i64;
            let n_hi = (h - x0).ceil() as i64;
            for n in n_lo..=n_hi {
                out.push((m, n));
            }
        }
        out
    }
}
