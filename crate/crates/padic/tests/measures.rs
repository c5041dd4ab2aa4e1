use eisenkron_padic::{
    frob_relation_check, measure_eval, measure_eval_2d, moment, restrict_unit_s, CyclotomicElt, CyclotomicRing, Error,
    TruncatedSeries2, Var,
};
use proptest::prelude::*;

const P: u64 = 5;

fn pm(e: u32) -> u64 {
    P.pow(e)
}

/// μ(a + p^n Z_p) for a one-variable f: the coefficient of X^a in f(X − 1)
/// reduced mod X^{p^n} − 1 (the image of f in the group ring of Z/p^n).
fn fold_oracle(coeffs: &[u64], n: u32, a: u64, modulus: u64) -> u64 {
    let size = pm(n) as usize;
    let m = modulus as u128;
    let mut acc = vec![0u128; size];
    // (X − 1)^i mod X^{size} − 1, built incrementally
    let mut pw = vec![0u128; size];
    pw[0] = 1;
    for c in coeffs {
        for (k, v) in pw.iter().enumerate() {
            acc[k] = (acc[k] + v * *c as u128) % m;
        }
        let mut next = vec![0u128; size];
        for (k, v) in pw.iter().enumerate() {
            next[(k + 1) % size] = (next[(k + 1) % size] + v) % m;
            next[k] = (next[k] + m - v) % m;
        }
        pw = next;
    }
    acc[a as usize % size] as u64
}

fn column(f: &TruncatedSeries2, j: usize) -> Vec<u64> {
    (0..=f.deg_s()).map(|i| f.get(i, j)).collect()
}

#[test]
fn cyclotomic_trace_matches_linear_formula() {
    for level in 1..=3u32 {
        let ring = CyclotomicRing::new(P, level, pm(6)).unwrap();
        let x = CyclotomicElt::monomial(&ring, 1);
        let y = CyclotomicElt::monomial(&ring, 7).add(&x.mul(&x).scale(3)).add(&CyclotomicElt::constant(&ring, 11));
        assert_eq!(y.trace().unwrap(), y.trace_linear(), "level {level}");
        // ζ^{p^level} = 1
        let mut z = CyclotomicElt::constant(&ring, 1);
        for _ in 0..ring.order() {
            z = z.mul(&x);
        }
        assert_eq!(z.as_rational(), Some(1));
    }
}

#[test]
fn trace_of_nonsymmetric_sum_is_caught() {
    // an element whose conjugate sum is rational must still be reported
    // correctly; a non-Galois-stable partial sum is not rational
    let ring = CyclotomicRing::new(P, 1, pm(4)).unwrap();
    let x = CyclotomicElt::monomial(&ring, 1);
    let partial = x.add(&x.conjugate(2));
    assert!(partial.as_rational().is_none());
    assert!(x.trace().is_ok());
}

#[test]
fn restriction_examples() {
    let one = TruncatedSeries2::constant(P, 6, 1).unwrap();
    let r = restrict_unit_s(&one).unwrap();
    assert!(r.coeffs().iter().all(|c| *c == 0));
    let unit = TruncatedSeries2::dirac(P, 6, 3, 0).unwrap();
    assert_eq!(restrict_unit_s(&unit).unwrap(), unit);
    let at_p = TruncatedSeries2::dirac(P, 6, 5, 2).unwrap();
    assert!(restrict_unit_s(&at_p).unwrap().coeffs().iter().all(|c| *c == 0));
}

#[test]
fn restriction_rejects_truncations() {
    let f = TruncatedSeries2::constant(P, 6, 1).unwrap().truncated(Some(0), None);
    assert!(matches!(restrict_unit_s(&f), Err(Error::DegreeExhausted(_))));
}

#[test]
fn dirac_cylinder_values() {
    let f = TruncatedSeries2::dirac(P, 6, 7, 0).unwrap();
    for a in 0..25 {
        let v = measure_eval(&f, 2, a, Var::S).unwrap().constant_term();
        assert_eq!(v, u64::from(a == 7), "class {a}");
    }
}

#[test]
fn frob_hook_trivial_instance() {
    let c = TruncatedSeries2::constant(P, 6, 4).unwrap();
    assert!(frob_relation_check(&c, |g| g.clone()).unwrap().holds);
    // a unit Dirac mass has no part on pZ_p, so the relation fails
    let d = TruncatedSeries2::dirac(P, 6, 2, 0).unwrap();
    let chk = frob_relation_check(&d, |g| g.clone()).unwrap();
    assert!(!chk.holds);
    assert!(chk.first_mismatch.is_some());
}

fn series(max_ds: usize, max_dt: usize, prec: u32) -> impl Strategy<Value = TruncatedSeries2> {
    (0..=max_ds, 0..=max_dt).prop_flat_map(move |(ds, dt)| {
        proptest::collection::vec(0..pm(prec) as i64, (ds + 1) * (dt + 1))
            .prop_map(move |c| TruncatedSeries2::from_coeffs(P, prec, ds, dt, &c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cylinder_values_match_group_ring_fold(f in series(10, 2, 6), level in 1u32..=2, a in 0u64..25) {
        let g = measure_eval(&f, level, a as i64, Var::S).unwrap();
        for j in 0..=f.deg_t() {
            prop_assert_eq!(g.get(0, j), fold_oracle(&column(&f, j), level, a, f.modulus()));
        }
    }

    #[test]
    fn classes_partition_the_total_mass(f in series(8, 2, 6)) {
        let mut sums = vec![0u64; f.deg_t() + 1];
        for a in 0..25 {
            let g = measure_eval(&f, 2, a, Var::S).unwrap();
            for (j, s) in sums.iter_mut().enumerate() {
                *s = (*s + g.get(0, j)) % f.modulus();
            }
        }
        for (j, s) in sums.iter().enumerate() {
            prop_assert_eq!(*s, f.get(0, j));
        }
    }

    #[test]
    fn restriction_is_idempotent(f in series(10, 3, 6)) {
        let r = restrict_unit_s(&f).unwrap();
        prop_assert_eq!(restrict_unit_s(&r).unwrap(), r);
    }

    #[test]
    fn restriction_complement_lives_on_p_zp(f in series(10, 2, 6)) {
        let r = restrict_unit_s(&f).unwrap();
        let rest = f.sub(&r).unwrap();
        for a in 0..25i64 {
            let on_rest = measure_eval(&rest, 2, a, Var::S).unwrap();
            let on_r = measure_eval(&r, 2, a, Var::S).unwrap();
            let on_f = measure_eval(&f, 2, a, Var::S).unwrap();
            for j in 0..=f.deg_t() {
                if a % 5 == 0 {
                    prop_assert_eq!(on_r.get(0, j), 0);
                    prop_assert_eq!(on_rest.get(0, j), on_f.get(0, j));
                } else {
                    prop_assert_eq!(on_rest.get(0, j), 0);
                    prop_assert_eq!(on_r.get(0, j), on_f.get(0, j));
                }
            }
        }
    }

    #[test]
    fn unit_mass_two_routes(f in series(10, 0, 6)) {
        let r = restrict_unit_s(&f).unwrap();
        let mut acc = 0u64;
        for a in (0..25).filter(|a| a % 5 != 0) {
            acc = (acc + measure_eval(&f, 2, a, Var::S).unwrap().constant_term()) % f.modulus();
        }
        prop_assert_eq!(acc, r.constant_term());
    }

    #[test]
    fn p_part_moments_are_divisible(f in series(10, 2, 6), k in 0usize..5, l in 0usize..3) {
        // moments over pZ_p × Z_p are divisible by p^k, and unit moments plus
        // p-part moments recover the full moment
        let r = restrict_unit_s(&f).unwrap();
        let rest = f.sub(&r).unwrap();
        let mk = moment(&rest, k, l).unwrap();
        prop_assert_eq!(mk % pm(k.min(6) as u32), 0);
        let total = (moment(&r, k, l).unwrap() + mk) % f.modulus();
        prop_assert_eq!(total, moment(&f, k, l).unwrap());
    }

    #[test]
    fn moments_match_riemann_sums_mod_p3(f in series(6, 6, 6), k in 1usize..4, l in 1usize..4) {
        // ∫x^k y^l ≡ Σ_{a,b mod p^3} a^k b^l μ(a+p^3, b+p^3) mod p^3
        let m3 = pm(3);
        let mut acc = 0u64;
        let size = pm(3) as i64;
        let by_a: Vec<TruncatedSeries2> = (0..size).map(|a| measure_eval(&f, 3, a, Var::S).unwrap()).collect();
        for (a, g) in by_a.iter().enumerate() {
            let ak = (a as u64).pow(k as u32) % m3;
            if ak == 0 { continue; }
            for b in 0..size {
                let bl = (b as u64).pow(l as u32) % m3;
                if bl == 0 { continue; }
                let mu = measure_eval(g, 3, b, Var::T).unwrap().constant_term() % m3;
                acc = (acc + ak * bl % m3 * mu) % m3;
            }
        }
        prop_assert_eq!(acc, moment(&f, k, l).unwrap() % m3);
    }
}

#[test]
fn amice_round_trip_at_level_two() {
    // c[i][j] = ∫C(x,i)C(y,j)dμ ≡ Σ_{a,b<p²} C(a,i)C(b,j)·μ(a+p², b+p²) mod p²
    // for i, j < p
    let f = TruncatedSeries2::from_fn(P, 6, 12, 12, |i, j| ((i * 31 + j * 17 + i * j * 7) as i64 * 101) % 15625).unwrap();
    let m2 = pm(2);
    let binom = |n: u64, r: usize| -> u64 {
        if r as u64 > n {
            return 0;
        }
        let mut c = 1u128;
        for t in 0..r as u128 {
            c = c * (n as u128 - t) / (t + 1);
        }
        (c % m2 as u128) as u64
    };
    let by_a: Vec<TruncatedSeries2> = (0..25).map(|a| measure_eval(&f, 2, a, Var::S).unwrap()).collect();
    let mu: Vec<Vec<u64>> = by_a
        .iter()
        .map(|g| (0..25).map(|b| measure_eval(g, 2, b, Var::T).unwrap().constant_term() % m2).collect())
        .collect();
    for i in 0..P as usize {
        for j in 0..P as usize {
            let mut acc = 0u64;
            for a in 0..25u64 {
                for b in 0..25u64 {
                    acc = (acc + binom(a, i) * binom(b, j) % m2 * mu[a as usize][b as usize]) % m2;
                }
            }
            assert_eq!(acc, f.get(i, j) % m2, "coefficient ({i},{j})");
        }
    }
    assert_eq!(measure_eval_2d(&f, 2, 3, 4).unwrap() % m2, mu[3][4]);
}
