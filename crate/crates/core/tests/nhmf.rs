use eisenkron::nhmf::d_variant_over;
use eisenkron::numerics::{cx, rel_defect};
use eisenkron::{
    algebraic_ek, d_variant, ek_normalized, hodge_projection, katz_comparison_check, Lattice, PrecisionContext, Route,
    SymHodgeVector, TorsionPoint,
};
use rug::Complex;

const PREC: u32 = 256;

fn square() -> Lattice {
    Lattice::from_tau(&cx(PREC, 0.0, 1.0), &PrecisionContext::default()).unwrap()
}

#[test]
#[should_panic]
fn vector_length_is_checked() {
    SymHodgeVector::new(2, 1, vec![cx(PREC, 1.0, 0.0)]);
}

#[test]
fn vector_shape() {
    let v = SymHodgeVector::zero(3, 2, PREC);
    assert_eq!(v.coeffs.len(), 3);
    assert_eq!(v.weight(), 6);
    let w = SymHodgeVector::new(1, 1, vec![cx(PREC, 1.0, 0.0), cx(PREC, 0.0, -3.0)]);
    assert_eq!(w.dominant_index(), 1);
    assert_eq!(hodge_projection(&w), cx(PREC, 1.0, 0.0));
}

#[test]
fn projection_and_lower_terms() {
    let lat = square();
    let s = TorsionPoint::new(1, 2, 5).unwrap();
    let t = TorsionPoint::new(1, 0, 3).unwrap();
    let v = algebraic_ek(1, 1, &s, &t, &lat, Route::Lerch).unwrap();
    let ds = s.scale(3);
    let nt = t.scale(5);
    let top = ek_normalized(1, 1, &ds, &nt, &lat, Route::Lerch).unwrap().value;
    assert!(rel_defect(&v.hodge_projection(), &top) < 1e-60);
    // c[1] = −C(1,1)C(1,1)/A·ẽ_{0,1}(Ds, Nt)
    let low = ek_normalized(0, 0, &ds, &nt, &lat, Route::Lerch).unwrap().value;
    let want = Complex::with_val(PREC, -(low / lat.area()));
    assert!(rel_defect(&v.coeffs[1], &want) < 1e-60);
}

#[test]
fn level_conditions() {
    let lat = square();
    let s = TorsionPoint::new(1, 0, 4).unwrap();
    let t = TorsionPoint::new(1, 0, 2).unwrap();
    assert!(algebraic_ek(1, 1, &s, &t, &lat, Route::Lerch).is_err());
    let s5 = TorsionPoint::new(0, 0, 5).unwrap();
    assert!(algebraic_ek(1, 1, &s5, &t, &lat, Route::Lerch).is_err());
    assert!(d_variant(1, 1, &TorsionPoint::new(1, 0, 5).unwrap(), 1, &lat, Route::Lerch).is_err());
}

#[test]
fn d_variant_ignores_listing_order() {
    let lat = square();
    let s = TorsionPoint::new(1, 0, 5).unwrap();
    let mut ts = TorsionPoint::nonzero_of_order_dividing(3);
    let a = d_variant_over(1, 1, &s, &ts, &lat, Route::Lerch).unwrap();
    ts.reverse();
    ts.swap(0, 3);
    let b = d_variant_over(1, 1, &s, &ts, &lat, Route::Lerch).unwrap();
    assert_eq!(a, b);
}

#[test]
fn katz_comparison_small_cases() {
    let lat = square();
    for (k, r, d) in [(1u32, 1u32, 2u64), (1, 2, 2)] {
        let c = katz_comparison_check(k, r, 1, 2, 5, d, &lat, Route::Auto).unwrap();
        assert!(c.defect < 1e-20, "({k},{r}) D={d}: {:e}", c.defect);
    }
}
