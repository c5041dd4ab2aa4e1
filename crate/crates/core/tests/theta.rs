use eisenkron::ek::ek_normalized_lerch;
use eisenkron::numerics::{cauchy_grid, conj, cx, factorial, rel_defect};
use eisenkron::theta::{taylor_coeffs_with_radii, translated_theta};
use eisenkron::{ek_normalized, kronecker_theta, taylor_coeffs, Lattice, PrecisionContext, Route, ThetaTranslate, TorsionPoint};
use rug::{Complex, Float};

const PREC: u32 = 256;

fn square() -> Lattice {
    Lattice::from_tau(&cx(PREC, 0.0, 1.0), &PrecisionContext::default()).unwrap()
}

fn fact(n: usize) -> Float {
    Float::with_val(PREC, factorial(n as u32))
}

#[test]
fn theta_symmetry_and_residue() {
    let lat = square();
    let z = cx(PREC, 0.21, 0.13);
    let w = cx(PREC, 0.05, -0.31);
    let a = kronecker_theta(&z, &w, &lat).unwrap();
    assert!(rel_defect(&a, &kronecker_theta(&w, &z, &lat).unwrap()) < 1e-60);
    let h = cx(PREC, 1e-30, 0.0);
    let near = kronecker_theta(&h, &w, &lat).unwrap() * &h;
    assert!(rel_defect(&near, &cx(PREC, 1.0, 0.0)) < 1e-25);
    assert!(kronecker_theta(&cx(PREC, 0.0, 0.0), &w, &lat).is_err());
}

#[test]
fn theta_precision_doubling() {
    let lat = square();
    let hi = Lattice::from_tau(lat.tau(), &PrecisionContext::default().doubled()).unwrap();
    let z = cx(PREC, 0.21, 0.13);
    let w = cx(PREC, 0.05, -0.31);
    let lo = kronecker_theta(&z, &w, &lat).unwrap();
    let up = kronecker_theta(&Complex::with_val(hi.prec(), &z), &Complex::with_val(hi.prec(), &w), &hi).unwrap();
    assert!(rel_defect(&lo, &up) < 1e-70);
}

#[test]
fn translate_basics() {
    let lat = square();
    let z = cx(PREC, 0.11, -0.07);
    let w = cx(PREC, -0.2, 0.16);
    let zero = ThetaTranslate::new(&cx(PREC, 0.0, 0.0), &cx(PREC, 0.0, 0.0));
    assert!(rel_defect(&translated_theta(&zero, &z, &w, &lat).unwrap(), &kronecker_theta(&z, &w, &lat).unwrap()) < 1e-60);

    let s = TorsionPoint::new(1, 0, 5).unwrap();
    let t = TorsionPoint::new(0, 1, 3).unwrap();
    let tr = ThetaTranslate::from_torsion(&s, &t, &lat);
    // exchanging the variables costs the pairing ⟨w₀, z₀⟩
    let a = translated_theta(&tr, &z, &w, &lat).unwrap();
    let b = translated_theta(&tr.swapped(), &w, &z, &lat).unwrap();
    let pair = lat.pairing(&tr.w0, &tr.z0);
    assert!(rel_defect(&a, &(b * pair)) < 1e-60);

    // quasi-periodicity in z: factor exp(((w + w₀)γ̄ − γw̄₀)/A)
    for (m, n) in [(1, 0), (0, 1), (1, -1)] {
        let g = lat.point(m, n);
        let zg = Complex::with_val(PREC, &z + &g);
        let ratio = translated_theta(&tr, &zg, &w, &lat).unwrap() / &a;
        let ww = Complex::with_val(PREC, &w + &tr.w0);
        let e = Complex::with_val(PREC, ww * conj(&g)) - Complex::with_val(PREC, &g * conj(&tr.w0));
        let want = (e / lat.area()).exp();
        assert!(rel_defect(&ratio, &want) < 1e-50, "({m},{n})");
    }
}

#[test]
fn taylor_grid_matches_series() {
    let lat = square();
    let s = TorsionPoint::new(1, 0, 5).unwrap();
    let t = TorsionPoint::new(0, 1, 3).unwrap();
    let tr = ThetaTranslate::from_torsion(&s, &t, &lat);
    let grid = taylor_coeffs(&tr, 2, 4, &lat).unwrap();
    assert!(grid.est_error < 1e-40);
    let z0 = s.embed(&lat);
    let w0 = t.embed(&lat);
    for a in 0..=2usize {
        for b in 0..=2usize {
            let scaled = Complex::with_val(PREC, &grid.coeffs[a][b] * fact(a)) * fact(b);
            let want = ek_normalized_lerch(a as u32, b as u32, &z0, &w0, &lat).unwrap().value;
            assert!(rel_defect(&scaled, &want) < 1e-25, "({a},{b}): {:e}", rel_defect(&scaled, &want));
        }
    }
    // the absolutely convergent corner comes from the direct sum
    let direct = ek_normalized(0, 4, &s, &t, &lat, Route::Direct).unwrap().value;
    let scaled = Complex::with_val(PREC, &grid.coeffs[0][4] * fact(4));
    assert!(rel_defect(&scaled, &direct) < 1e-25);
}

#[test]
fn taylor_grid_independent_of_radius() {
    let lat = square();
    let tr = ThetaTranslate::from_torsion(&TorsionPoint::new(2, 1, 5).unwrap(), &TorsionPoint::new(1, 1, 2).unwrap(), &lat);
    let r1 = Float::with_val(PREC, 0.05);
    let r2 = Float::with_val(PREC, 0.09);
    let a = taylor_coeffs_with_radii(&tr, 2, 2, &r1, &r1, &lat).unwrap();
    let b = taylor_coeffs_with_radii(&tr, 2, 2, &r2, &r2, &lat).unwrap();
    for i in 0..=2 {
        for j in 0..=2 {
            assert!(rel_defect(&a.coeffs[i][j], &b.coeffs[i][j]) < 1e-30, "({i},{j})");
        }
    }
    let too_big = Float::with_val(PREC, 5.0);
    assert!(taylor_coeffs_with_radii(&tr, 2, 2, &too_big, &r1, &lat).is_err());
}

#[test]
fn contour_extraction_on_exponential() {
    let rho = Float::with_val(PREC, 0.5);
    let mut f = |zs: &[Complex], ws: &[Complex]| -> eisenkron::Result<Vec<Complex>> {
        let mut out = Vec::new();
        for w in ws {
            for z in zs {
                out.push(Complex::with_val(PREC, z + w).exp());
            }
        }
        Ok(out)
    };
    let c = cauchy_grid(&rho, &rho, 4, 4, 64, &mut f).unwrap();
    for a in 0..=4 {
        for b in 0..=4 {
            let want = Complex::with_val(PREC, Float::with_val(PREC, 1) / (fact(a) * fact(b)));
            assert!(rel_defect(&c[a][b], &want) < 1e-40, "({a},{b})");
        }
    }
}
