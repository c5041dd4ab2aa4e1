//! The Kronecker theta function Θ(z,w) = θ(z+w)/(θ(z)θ(w)), its translates
//! Θ_{z₀,w₀}, and two-variable Taylor extraction at the origin.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numerics::{cauchy_grid_adaptive, conj};
use crate::torsion::TorsionPoint;

/// Largest Taylor degree accepted by [`taylor_coeffs`].
pub const MAX_TAYLOR_DEGREE: usize = 24;

pub fn kronecker_theta(z: &Complex, w: &Complex, lat: &Lattice) -> Result<Complex> {
    if lat.near_lattice(z) || lat.near_lattice(w) {
        return Err(Error::Pole("Θ(z,w) with z or w on the lattice".into()));
    }
    let wp = lat.prec();
    let num = lat.theta(&Complex::with_val(wp, z + w));
    Ok(num / (lat.theta(z) * lat.theta(w)))
}

/// Θ_{z₀,w₀}(z,w) = exp(−(z·w̄₀ + w·z̄₀ + z₀·w̄₀)/A)·Θ(z+z₀, w+w₀).
#[derive(Debug, Clone)]
pub struct ThetaTranslate {
    pub z0: Complex,
    pub w0: Complex,
}

impl ThetaTranslate {
    pub fn new(z0: &Complex, w0: &Complex) -> Self {
        Self { z0: z0.clone(), w0: w0.clone() }
    }

    pub fn from_torsion(s: &TorsionPoint, t: &TorsionPoint, lat: &Lattice) -> Self {
        Self { z0: s.embed(lat), w0: t.embed(lat) }
    }

    /// The translate with the roles of the two variables exchanged.
    pub fn swapped(&self) -> Self {
        Self { z0: self.w0.clone(), w0: self.z0.clone() }
    }
}

fn translate_exponent(z: &Complex, w: &Complex, tr: &ThetaTranslate, lat: &Lattice) -> Complex {
    let wp = lat.prec();
    let e = Complex::with_val(wp, z * conj(&tr.w0))
        + Complex::with_val(wp, w * conj(&tr.z0))
        + Complex::with_val(wp, &tr.z0 * conj(&tr.w0));
    -(e / lat.area())
}

pub fn translated_theta(tr: &ThetaTranslate, z: &Complex, w: &Complex, lat: &Lattice) -> Result<Complex> {
    let wp = lat.prec();
    let zz = Complex::with_val(wp, z + &tr.z0);
    let ww = Complex::with_val(wp, w + &tr.w0);
    let th = kronecker_theta(&zz, &ww, lat)?;
    Ok(translate_exponent(z, w, tr, lat).exp() * th)
}

/// Coefficients c[a][b] of z^b·w^a of Θ_{z₀,w₀} at the origin.
#[derive(Debug, Clone)]
pub struct TaylorGrid {
    pub coeffs: Vec<Vec<Complex>>,
    pub nodes: usize,
    pub est_error: f64,
    pub rho_z: Float,
    pub rho_w: Float,
}

/// Extracts c[a][b] for a ≤ max_a, b ≤ max_b on circles of radius one
/// quarter of the distance from the origin to the nearest pole in each
/// variable. By the Laurent expansion of the translate,
/// a!·b!·c[a][b] = ẽ_{a,b+1}(z₀, w₀).
pub fn taylor_coeffs(tr: &ThetaTranslate, max_a: usize, max_b: usize, lat: &Lattice) -> Result<TaylorGrid> {
    let dz = lat.dist_to_lattice(&tr.z0);
    let dw = lat.dist_to_lattice(&tr.w0);
    let rho_z = dz / 4u32;
    let rho_w = dw / 4u32;
    taylor_coeffs_with_radii(tr, max_a, max_b, &rho_z, &rho_w, lat)
}

pub fn taylor_coeffs_with_radii(
    tr: &ThetaTranslate,
    max_a: usize,
    max_b: usize,
    rho_z: &Float,
    rho_w: &Float,
    lat: &Lattice,
) -> Result<TaylorGrid> {
    let wp = lat.prec();
    if max_a > MAX_TAYLOR_DEGREE || max_b > MAX_TAYLOR_DEGREE {
        return Err(Error::InvalidArgument(format!("Taylor degree above the cap {MAX_TAYLOR_DEGREE}")));
    }
    let dz = lat.dist_to_lattice(&tr.z0);
    let dw = lat.dist_to_lattice(&tr.w0);
    if lat.near_lattice(&tr.z0) || lat.near_lattice(&tr.w0) {
        return Err(Error::ContourTooLarge("the translate has a pole at the origin".into()));
    }
    if *rho_z <= 0 || *rho_w <= 0 || *rho_z >= dz || *rho_w >= dw {
        return Err(Error::ContourTooLarge("contour radius must lie strictly below the pole distance".into()));
    }
    let rho_z = Float::with_val(wp, rho_z);
    let rho_w = Float::with_val(wp, rho_w);
    let z0w0 = Complex::with_val(wp, &tr.z0 * conj(&tr.w0));
    let base = Complex::with_val(wp, -(z0w0 / lat.area())).exp();
    let shift = Complex::with_val(wp, &tr.z0 + &tr.w0);
    let evaluator = |zs: &[Complex], ws: &[Complex]| -> Result<Vec<Complex>> {
        // θ(z+z₀) and the z-part of the exponential depend on one variable only
        let zpart: Vec<(Complex, Complex)> = zs
            .iter()
            .map(|z| {
                let e = Complex::with_val(wp, -(Complex::with_val(wp, z * conj(&tr.w0)) / lat.area())).exp();
                let th = lat.theta(&Complex::with_val(wp, z + &tr.z0));
                (e, th)
            })
            .collect();
        let wpart: Vec<(Complex, Complex)> = ws
            .iter()
            .map(|w| {
                let e = Complex::with_val(wp, -(Complex::with_val(wp, w * conj(&tr.z0)) / lat.area())).exp();
                let th = lat.theta(&Complex::with_val(wp, w + &tr.w0));
                (e, th)
            })
            .collect();
        let mut out = Vec::with_capacity(zs.len() * ws.len());
        for (w, (ew, thw)) in ws.iter().zip(&wpart) {
            let wfac = Complex::with_val(wp, &base * ew) / thw;
            for (z, (ez, thz)) in zs.iter().zip(&zpart) {
                let arg = Complex::with_val(wp, z + w) + &shift;
                let num = lat.theta(&arg);
                out.push(num * &wfac * ez / thz);
            }
        }
        Ok(out)
    };
    let grid = cauchy_grid_adaptive(&rho_z, &rho_w, max_a, max_b, lat.ctx().tol_rel, evaluator)?;
    Ok(TaylorGrid { coeffs: grid.coeffs, nodes: grid.nodes, est_error: grid.est_error, rho_z, rho_w })
}
