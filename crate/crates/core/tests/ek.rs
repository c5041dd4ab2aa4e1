use eisenkron::ek::{ek_normalized_dual, ek_normalized_lerch, ek_shell_sum, kstar_partial_sum, lerch_kstar_with_error};
use eisenkron::numerics::{abs, conj, cx, rel_defect, to_f64};
use eisenkron::{ek_direct, ek_normalized, lerch_kstar, Error, Lattice, Method, PrecisionContext, Route, TorsionPoint};
use rug::ops::Pow;
use rug::{Complex, Float};

const PREC: u32 = 256;

fn lattice(x: f64, y: f64) -> Lattice {
    Lattice::from_tau(&cx(PREC, x, y), &PrecisionContext::default()).unwrap()
}

fn zero() -> TorsionPoint {
    TorsionPoint::zero()
}

#[test]
fn g6_of_i_vanishes() {
    let v = ek_direct(0, 6, &zero(), &zero(), &lattice(0.0, 1.0)).unwrap();
    assert!(to_f64(&abs(&v.value)) < 1e-60);
}

#[test]
fn g4_of_i_closed_form() {
    // G₄(i) = Γ(1/4)⁸/(960π²)
    let v = ek_direct(0, 4, &zero(), &zero(), &lattice(0.0, 1.0)).unwrap();
    let g = Float::with_val(PREC, 0.25f64).gamma();
    let pi = Float::with_val(PREC, rug::float::Constant::Pi);
    let want = Float::with_val(PREC, (&g).pow(8u32)) / (Float::with_val(PREC, pi.square_ref()) * 960u32);
    assert!(rel_defect(&v.value, &Complex::with_val(PREC, want)) < 1e-60);
    assert_eq!(v.method, Method::Direct);
    // the raw shell sum approaches it with the advertised tail bound
    let lat = lattice(0.0, 1.0);
    let z0 = cx(PREC, 0.0, 0.0);
    for radius in [20.0, 40.0] {
        let partial = ek_shell_sum(0, 4, &z0, &z0, &lat, radius);
        let err = to_f64(&abs(&Complex::with_val(PREC, &partial - &v.value)));
        assert!(err <= eisenkron::ek::ek_tail_bound(0, 4, radius, &lat), "{radius}: {err:e}");
    }
}

#[test]
fn direct_requires_absolute_convergence() {
    let lat = lattice(0.0, 1.0);
    assert!(matches!(ek_direct(1, 3, &zero(), &zero(), &lat), Err(Error::NotConvergent { .. })));
}

#[test]
fn conjugation_symmetry() {
    // on a lattice stable under conjugation, e*(0,t̄) is the conjugate of e*(0,t)
    let lat = lattice(0.0, 1.0);
    let t = TorsionPoint::new(1, 0, 5).unwrap();
    let e = t.embed(&lat);
    assert!(to_f64(e.real()).abs() < 1e-60, "t should be imaginary");
    let a = ek_direct(0, 4, &zero(), &t, &lat).unwrap().value;
    let b = ek_direct(0, 4, &zero(), &t.scale(-1), &lat).unwrap().value;
    assert!(rel_defect(&b, &conj(&a)) < 1e-60);
}

#[test]
fn normalization_k0() {
    let lat = lattice(0.0, 1.0);
    let e = ek_normalized(0, 3, &zero(), &zero(), &lat, Route::Direct).unwrap().value;
    let raw = ek_direct(0, 4, &zero(), &zero(), &lat).unwrap().value;
    assert!(rel_defect(&e, &Complex::with_val(PREC, raw * -6i32)) < 1e-60);
}

#[test]
fn direct_and_lerch_overlap() {
    let lat = lattice(0.0, 2.0);
    let s = TorsionPoint::new(1, 0, 5).unwrap();
    let d = ek_normalized(0, 5, &s, &zero(), &lat, Route::Direct).unwrap();
    let l = ek_normalized(0, 5, &s, &zero(), &lat, Route::Lerch).unwrap();
    assert_eq!(l.method, Method::Lerch);
    assert!(rel_defect(&d.value, &l.value) < 1e-60);
    let sq = lattice(0.0, 1.0);
    let t = TorsionPoint::new(1, 2, 3).unwrap();
    for (k, r) in [(0, 3), (1, 4), (2, 5), (2, 6)] {
        let d = ek_normalized(k, r, &s, &t, &sq, Route::Direct).unwrap();
        let l = ek_normalized(k, r, &s, &t, &sq, Route::Lerch).unwrap();
        assert!(rel_defect(&d.value, &l.value) < 1e-25, "({k},{r})");
        assert!(d.est_error < 1e-25 && l.est_error < 1e-25);
    }
}

#[test]
fn auto_routing() {
    let lat = lattice(0.0, 1.0);
    let s = TorsionPoint::new(1, 0, 5).unwrap();
    assert_eq!(ek_normalized(0, 4, &s, &zero(), &lat, Route::Auto).unwrap().method, Method::Direct);
    assert_eq!(ek_normalized(1, 1, &s, &zero(), &lat, Route::Auto).unwrap().method, Method::Lerch);
}

#[test]
fn kstar_matches_raw_sum_where_convergent() {
    let lat = lattice(0.3, 1.1);
    let z = cx(PREC, 0.13, 0.05);
    let w = cx(PREC, 0.2, -0.4);
    for a in [0u32, 1, 3] {
        let s = cx(PREC, 7.0, 0.0);
        let (v, err) = lerch_kstar_with_error(a, &z, &w, &s, &lat).unwrap();
        let raw = kstar_partial_sum(a, &z, &w, &s, &lat, 60.0);
        assert!(rel_defect(&v, &raw) < 1e-14, "a = {a}: {:e}", rel_defect(&v, &raw));
        assert!(err < 1e-60);
    }
}

#[test]
fn kstar_character_is_periodic() {
    let lat = lattice(0.0, 1.0);
    let z = cx(PREC, 0.0, 0.0);
    let w = cx(PREC, 0.2, 0.1);
    let s = cx(PREC, 2.0, 0.0);
    let base = lerch_kstar(3, &z, &w, &s, &lat).unwrap();
    for (m, n) in [(1, 0), (0, 1), (2, -3)] {
        let shifted = Complex::with_val(lat.prec(), &w + lat.point(m, n));
        assert!(rel_defect(&lerch_kstar(3, &z, &shifted, &s, &lat).unwrap(), &base) < 1e-60);
    }
}

#[test]
fn functional_equation() {
    // ẽ_{k,r+1}(x,0) through K*(x,0,·) and through the dual K*(0,x,k+1)
    for lat in [lattice(0.0, 1.0), lattice(0.5, 3f64.sqrt() / 2.0)] {
        let x = TorsionPoint::new(1, 2, 5).unwrap().embed(&lat);
        let z0 = cx(PREC, 0.0, 0.0);
        for k in 0..=3 {
            for r in 0..=3 {
                let a = ek_normalized_lerch(k, r, &x, &z0, &lat).unwrap().value;
                let b = ek_normalized_dual(k, r, &x, &lat).unwrap().value;
                assert!(rel_defect(&a, &b) < 1e-25, "({k},{r}): {:e}", rel_defect(&a, &b));
            }
        }
    }
}

#[test]
fn homogeneity_under_scaling() {
    // e*_{k,r}(cs, ct; cΓ) = c̄^k c^{−r} e*_{k,r}(s, t; Γ): compare a lattice with its rescaling
    let ctx = PrecisionContext::default();
    let w1 = cx(PREC, 0.0, 1.0);
    let w2 = cx(PREC, 1.0, 0.0);
    let c = cx(PREC, 1.3, 0.4);
    let a = Lattice::new(&w1, &w2, &ctx).unwrap();
    let b = Lattice::new(&Complex::with_val(PREC, &w1 * &c), &Complex::with_val(PREC, &w2 * &c), &ctx).unwrap();
    let s = TorsionPoint::new(1, 1, 5).unwrap();
    let t = TorsionPoint::new(0, 1, 3).unwrap();
    let (k, r) = (1u32, 5u32);
    let va = ek_direct(k, r, &s, &t, &a).unwrap().value;
    let vb = ek_direct(k, r, &s, &t, &b).unwrap().value;
    let factor = Complex::with_val(PREC, conj(&c).pow(k as i32)) / Complex::with_val(PREC, (&c).pow(r as i32));
    assert!(rel_defect(&vb, &Complex::with_val(PREC, va * factor)) < 1e-50);
}
