use eisenkron_padic::{invariant_derive, moment, moments, pushforward_p, Error, TruncatedSeries2, Var};
use proptest::prelude::*;

const P: u64 = 5;

fn pm(e: u32) -> u64 {
    P.pow(e)
}

/// S2(k, i)·i! as integers, k ≤ 12.
fn surjections(k: usize, i: usize) -> i128 {
    let mut s = vec![vec![0i128; k + 1]; k + 1];
    s[0][0] = 1;
    for n in 1..=k {
        for j in 1..=n {
            s[n][j] = j as i128 * s[n - 1][j] + s[n - 1][j - 1];
        }
    }
    let fact: i128 = (1..=i as i128).product();
    if i > k {
        0
    } else {
        s[k][i] * fact
    }
}

/// ∫x^k y^l dμ for μ with ∫C(x,i)C(y,j)dμ = c[i][j]: Σ S2(k,i)i!·S2(l,j)j!·c[i][j].
fn moment_oracle(f: &TruncatedSeries2, k: usize, l: usize) -> u64 {
    let m = f.modulus() as i128;
    let mut acc = 0i128;
    for i in 0..=f.deg_s() {
        for j in 0..=f.deg_t() {
            let term = surjections(k, i) % m * (surjections(l, j) % m) % m * f.get(i, j) as i128 % m;
            acc = (acc + term) % m;
        }
    }
    acc as u64
}

#[test]
fn derive_t_is_one_plus_t() {
    let f = TruncatedSeries2::from_coeffs(P, 4, 0, 1, &[0, 1]).unwrap();
    let g = invariant_derive(&f, Var::T).unwrap();
    assert_eq!(g.coeffs(), &[1, 1]);
}

#[test]
fn power_of_one_plus_t_is_an_eigenfunction() {
    for c in 0..6u64 {
        let f = TruncatedSeries2::dirac(P, 4, 0, c).unwrap();
        let g = invariant_derive(&f, Var::T).unwrap();
        assert_eq!(g, f.scale(c as i64), "c = {c}");
    }
}

#[test]
fn geometric_polynomial_matches_symbolic_derivative() {
    // Σ_{n≤4} T^n; (1+T)·d/dT gives coefficient (d+1)[d+1 ≤ 4] + d at T^d
    let f = TruncatedSeries2::from_coeffs(P, 4, 0, 4, &[1, 1, 1, 1, 1]).unwrap();
    let g = invariant_derive(&f, Var::T).unwrap();
    let expected: Vec<u64> = (0..=4u64).map(|d| (if d < 4 { d + 1 } else { 0 }) + d).collect();
    assert_eq!(g.coeffs(), expected.as_slice());
}

#[test]
fn truncation_is_consumed_by_derivation() {
    let f = TruncatedSeries2::from_coeffs(P, 3, 2, 0, &[1, 2, 3]).unwrap().truncated(Some(1), None);
    let g = invariant_derive(&f, Var::S).unwrap();
    assert_eq!(g.valid_s(), Some(0));
    assert!(matches!(invariant_derive(&g, Var::S), Err(Error::DegreeExhausted(_))));
    assert!(matches!(moment(&f, 2, 0), Err(Error::DegreeExhausted(_))));
    // exact polynomials never run out
    let e = TruncatedSeries2::from_coeffs(P, 3, 2, 0, &[1, 2, 3]).unwrap();
    assert!(moment(&e, 10, 0).is_ok());
}

#[test]
fn dirac_moments_are_powers() {
    let f = TruncatedSeries2::dirac(P, 6, 3, 7).unwrap();
    for k in 0..5u32 {
        for l in 0..5u32 {
            let want = (3u64.pow(k) * 7u64.pow(l)) % pm(6);
            assert_eq!(moment(&f, k as usize, l as usize).unwrap(), want);
        }
    }
}

#[test]
fn constant_is_the_dirac_at_origin() {
    let f = TruncatedSeries2::constant(P, 6, 1).unwrap();
    let m = moments(&f, 3, 3).unwrap();
    for k in 0..=3 {
        for l in 0..=3 {
            assert_eq!(m.m[k][l], u64::from(k == 0 && l == 0));
        }
    }
}

#[test]
fn text_round_trip_and_errors() {
    let f = TruncatedSeries2::from_coeffs(P, 6, 1, 2, &[1, -1, 7, 0, 3, 15624]).unwrap();
    let text = f.to_text();
    assert!(text.starts_with("5 6 1 2\n"));
    assert_eq!(TruncatedSeries2::from_text(&text).unwrap(), f);
    let with_comments = format!("# synthetic series\n\n{text}");
    assert_eq!(TruncatedSeries2::from_text(&with_comments).unwrap(), f);
    for (bad, line) in [
        ("5 6 1\n1 2\n", 1),
        ("4 6 0 0\n1\n", 1),
        ("5 6 1 1\n1 2\n3\n", 3),
        ("5 6 0 1\n1 x\n", 2),
        ("5 6 1 0\n1\n", 2),
    ] {
        match TruncatedSeries2::from_text(bad) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{bad:?}"),
            other => panic!("{bad:?} parsed as {other:?}"),
        }
    }
}

#[test]
fn pushforward_of_dirac() {
    let f = TruncatedSeries2::dirac(P, 6, 2, 1).unwrap();
    let g = pushforward_p(&f).unwrap();
    assert_eq!(g, TruncatedSeries2::dirac(P, 6, 10, 1).unwrap());
    let one = TruncatedSeries2::constant(P, 6, 1).unwrap();
    assert_eq!(pushforward_p(&one).unwrap(), one);
}

#[test]
fn pushforward_degree_cap() {
    let f = TruncatedSeries2::zero(P, 2, 1000, 0).unwrap();
    assert!(matches!(pushforward_p(&f), Err(Error::DegreeExhausted(_))));
}

fn series(max_deg: usize, prec: u32) -> impl Strategy<Value = TruncatedSeries2> {
    (0..=max_deg, 0..=max_deg).prop_flat_map(move |(ds, dt)| {
        proptest::collection::vec(0..pm(prec) as i64, (ds + 1) * (dt + 1))
            .prop_map(move |c| TruncatedSeries2::from_coeffs(P, prec, ds, dt, &c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moments_match_stirling_oracle(f in series(6, 6), k in 0usize..5, l in 0usize..5) {
        prop_assert_eq!(moment(&f, k, l).unwrap(), moment_oracle(&f, k, l));
    }

    #[test]
    fn pushforward_scales_moments(f in series(5, 6), k in 0usize..4, l in 0usize..3) {
        let g = pushforward_p(&f).unwrap();
        let want = (moment(&f, k, l).unwrap() as u128 * P.pow(k as u32) as u128 % pm(6) as u128) as u64;
        prop_assert_eq!(moment(&g, k, l).unwrap(), want);
    }

    #[test]
    fn derivations_commute(f in series(6, 4)) {
        let a = invariant_derive(&invariant_derive(&f, Var::S).unwrap(), Var::T).unwrap();
        let b = invariant_derive(&invariant_derive(&f, Var::T).unwrap(), Var::S).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn text_round_trip(f in series(6, 6)) {
        prop_assert_eq!(TruncatedSeries2::from_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn product_of_transforms_is_convolution(a in 0u64..6, b in 0u64..6, c in 0u64..6, d in 0u64..6) {
        let f = TruncatedSeries2::dirac(P, 6, a, b).unwrap();
        let g = TruncatedSeries2::dirac(P, 6, c, d).unwrap();
        prop_assert_eq!(f.mul(&g).unwrap(), TruncatedSeries2::dirac(P, 6, a + c, b + d).unwrap());
    }
}
