//! Eisenstein–Kronecker numbers and Katz comparisons on the square lattice.

use eisenkron::ek::ek_normalized;
use eisenkron::nhmf::katz_comparison_check;
use eisenkron::numerics::cx;
use eisenkron::{Lattice, PrecisionContext, Route, TorsionPoint};

fn main() {
    let ctx = PrecisionContext::default();
    let lat = Lattice::from_tau(&cx(ctx.working_prec(), 0.0, 1.0), &ctx).expect("square lattice");
    let s = TorsionPoint::new(1, 2, 5).unwrap();
    let t = TorsionPoint::new(1, 1, 3).unwrap();
    for (k, r) in [(0u32, 1u32), (1, 2), (2, 3), (2, 5)] {
        let e = ek_normalized(k, r, &s, &t, &lat, Route::Auto).unwrap();
        println!("e~[{k},{}]({s}; {t}) = {}", r + 1, e.value.to_string_radix(10, Some(20)));
    }
    for (k, r, d) in [(1u32, 1u32, 2u64), (2, 1, 3)] {
        let c = katz_comparison_check(k, r, 1, 2, 5, d, &lat, Route::Auto).unwrap();
        println!("katz k={k} r={r} D={d}: defect {:.3e}", c.defect);
    }
}
