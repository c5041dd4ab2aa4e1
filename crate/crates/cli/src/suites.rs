//! Verification batteries. Every check compares two independent routes to
//! the same quantity, or a computed quantity with a known closed form, and
//! records the identity it instantiates.

use std::time::Instant;

use eisenkron::ek::{ek_normalized_dual, ek_normalized_lerch};
use eisenkron::kato_siegel::{
    distribution_suite, omega_d, omega_d_closed, omega_t_residue, residue_law, sample_points, trace_check,
    translation_check,
};
use eisenkron::numerics::{factorial, rel_defect};
use eisenkron::{ek_normalized, katz_comparison_check, taylor_coeffs, Lattice, Route, ThetaTranslate, TorsionPoint};
use eisenkron_padic::{
    frob_relation_check, kummer_check, measure_eval, moment, moments, pushforward_p, restrict_unit_s, MeasureMoments,
    TruncatedSeries2, Var,
};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};
use serde_json::{Map, Value};

use crate::config::Suite;
use crate::record::small_string;

/// A threshold stated at 256 bits, rescaled to `prec_bits` so that it asks
/// for the same fraction of the available digits.
pub fn scaled_threshold(base: f64, prec_bits: u32) -> f64 {
    10f64.powf(base.log10() * prec_bits as f64 / 256.0)
}

pub mod thresholds {
    pub const LAURENT: f64 = 1e-25;
    pub const OVERLAP: f64 = 1e-25;
    pub const FUNCTIONAL_EQ: f64 = 1e-25;
    pub const KATZ: f64 = 1e-20;
    pub const KATO_SIEGEL: f64 = 1e-20;
    pub const DISTRIBUTION: f64 = 1e-18;
    pub const THETA_LAW: f64 = 1e-30;
    pub const THETA_DERIVATIVE: f64 = 1e-30;
    pub const LEGENDRE: f64 = 1e-35;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub anchor: &'static str,
    /// Measured defect; exact checks report the number of mismatches.
    pub defect: f64,
    pub threshold: f64,
    pub exact: bool,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn measured(suite: Suite, name: impl Into<String>, anchor: &'static str, r: Result<f64, String>, threshold: f64) -> Self {
        let name = name.into();
        match r {
            Ok(d) => Check {
                suite,
                name,
                anchor,
                defect: d,
                threshold,
                exact: false,
                passed: d.is_finite() && d <= threshold,
                detail: String::new(),
            },
            Err(e) => Check { suite, name, anchor, defect: f64::INFINITY, threshold, exact: false, passed: false, detail: e },
        }
    }

    fn exact(suite: Suite, name: impl Into<String>, anchor: &'static str, r: Result<(usize, String), String>) -> Self {
        let name = name.into();
        match r {
            Ok((mismatches, detail)) => Check {
                suite,
                name,
                anchor,
                defect: mismatches as f64,
                threshold: 0.0,
                exact: true,
                passed: mismatches == 0,
                detail,
            },
            Err(e) => Check { suite, name, anchor, defect: f64::INFINITY, threshold: 0.0, exact: true, passed: false, detail: e },
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("suite".into(), Value::String(self.suite.name().into()));
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("anchor".into(), Value::String(self.anchor.into()));
        let defect = if self.defect.is_finite() { small_string(self.defect) } else { "inf".into() };
        m.insert("defect".into(), Value::String(defect));
        let threshold = if self.exact { "exact".into() } else { small_string(self.threshold) };
        m.insert("threshold".into(), Value::String(threshold));
        m.insert("passed".into(), Value::Bool(self.passed));
        if !self.detail.is_empty() {
            m.insert("detail".into(), Value::String(self.detail.clone()));
        }
        Value::Object(m)
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn tp(a: i64, b: i64, n: u64) -> TorsionPoint {
    TorsionPoint::new(a, b, n).expect("positive order")
}

fn fact(n: usize, prec: u32) -> Float {
    Float::with_val(prec, factorial(n as u32))
}

fn max_over<I: IntoIterator<Item = Result<f64, String>>>(items: I) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for d in items {
        let d = d?;
        if d.is_nan() {
            return Err("defect is NaN".into());
        }
        worst = worst.max(d);
    }
    Ok(worst)
}

pub const ANCHOR_LAURENT: &str = "Laurent expansion of the translated Kronecker theta function in normalized Eisenstein-Kronecker series";
pub const ANCHOR_THETA_LAW: &str = "transformation law of the normalized theta function under lattice translation";
pub const ANCHOR_THETA_DERIV: &str = "normalization of the theta function: derivative 1 at the origin";
pub const ANCHOR_LEGENDRE: &str = "Legendre relation between periods and quasi-periods";
pub const ANCHOR_OVERLAP: &str = "absolutely convergent Eisenstein-Kronecker sum against its Lerch continuation";
pub const ANCHOR_FE: &str = "functional equation of the Eisenstein-Kronecker-Lerch series (dual form at t = 0)";
pub const ANCHOR_KATZ: &str =
    "Hodge projection of the D-variant equals D^(k-r+1) e(s,0) - e(Ds,0) (comparison with Katz's Eisenstein measure)";
pub const ANCHOR_RESIDUE: &str = "residue divisor D^2[e] - E[D] of the Kato-Siegel differential";
pub const ANCHOR_RESIDUE_T: &str = "residue of the single Kato-Siegel differential at a lattice point is the pairing value";
pub const ANCHOR_TRANSLATION: &str = "translation by a D-torsion point multiplies the differential by the Weil pairing";
pub const ANCHOR_TRACE: &str = "trace compatibility of the Kato-Siegel differential along multiplication by N";
pub const ANCHOR_CLOSED: &str = "closed form of the summed Kato-Siegel differential: D^2 Z(z) - D Z(Dz)";
pub const ANCHOR_DIST_THM: &str = "distribution relation for translated Kronecker theta functions";
pub const ANCHOR_DIST_COR: &str = "torsion-sum distribution relation for the Kronecker theta function";
pub const ANCHOR_DIST_LEMMA: &str = "trace of the Kato-Siegel differential along multiplication by 2";
pub const ANCHOR_MOMENTS: &str = "moments of a measure as iterated invariant derivations of its Amice transform";
pub const ANCHOR_RESTRICT: &str = "restriction to Z_p^x realized on power series by f - (1/p) sum over p-th roots of unity";
pub const ANCHOR_PUSHFORWARD: &str = "pushforward along multiplication by p scales the k-th moment by p^k";
pub const ANCHOR_KUMMER: &str = "Kummer congruences for moments of measures supported on Z_p^x";
pub const ANCHOR_FROB: &str = "Frobenius relation between pushforward and restriction (trivial-Frobenius instance)";

/// Laurent grids for two torsion pairs, followed by [`theta_kernel`].
pub fn laurent(lat: &Lattice) -> Vec<Check> {
    let mut out = laurent_grids(lat);
    out.extend(theta_kernel(lat));
    out
}

/// a!b!·c[a][b] of the translated theta against ẽ_{a,b+1} from the Lerch
/// route, a, b ≤ 4, for torsion pairs of orders (5,3) and (7,4).
pub fn laurent_grids(lat: &Lattice) -> Vec<Check> {
    let prec = lat.ctx().prec_bits;
    let s = Suite::Laurent;
    let mut out = Vec::new();
    for (sp, tq) in [(tp(1, 2, 5), tp(1, 1, 3)), (tp(1, 3, 7), tp(1, 2, 4))] {
        let name = format!("grid a,b <= 4 at s = ({},{})/{}, t = ({},{})/{}", sp.a, sp.b, sp.order_n, tq.a, tq.b, tq.order_n);
        let r = (|| {
            let tr = ThetaTranslate::from_torsion(&sp, &tq, lat);
            let grid = taylor_coeffs(&tr, 4, 4, lat).map_err(e2s)?;
            let wp = lat.prec();
            max_over((0..=4usize).flat_map(|a| (0..=4usize).map(move |b| (a, b))).map(|(a, b)| {
                let scaled = Complex::with_val(wp, &grid.coeffs[a][b] * fact(a, wp)) * fact(b, wp);
                let want = ek_normalized_lerch(a as u32, b as u32, &tr.z0, &tr.w0, lat).map_err(e2s)?;
                Ok(rel_defect(&scaled, &want.value))
            }))
        })();
        out.push(Check::measured(s, name, ANCHOR_LAURENT, r, scaled_threshold(thresholds::LAURENT, prec)));
    }
    out
}

/// Transformation law, θ′(0) = 1 and the Legendre relation.
pub fn theta_kernel(lat: &Lattice) -> Vec<Check> {
    let prec = lat.ctx().prec_bits;
    let wp = lat.prec();
    let s = Suite::Laurent;
    let zs = sample_points(lat, 4, 11);
    let gammas = [(1, 0), (0, 1), (1, 1), (-2, 1), (3, -2)];
    let law = max_over(zs.iter().flat_map(|z| {
        gammas.iter().map(move |(m, n)| {
            let c = lat.theta_transform_check(*m, *n, z);
            if c.alpha != c.expected_alpha {
                return Err(format!("sign α({m},{n}) = {} but (−1)^(m+n+mn) = {}", c.alpha, c.expected_alpha));
            }
            Ok(c.defect)
        })
    }));
    let h = Complex::with_val(wp, Float::with_val(wp, 2f64.powi(-(wp as i32) / 3)));
    let deriv = Complex::with_val(wp, lat.theta(&h) - lat.theta(&Complex::with_val(wp, -&h))) / Complex::with_val(wp, &h * 2u32);
    vec![
        Check::measured(s, "theta transformation law, 4 points x 5 translations", ANCHOR_THETA_LAW, law, scaled_threshold(thresholds::THETA_LAW, prec)),
        Check::measured(
            s,
            "theta'(0) = 1 by central difference",
            ANCHOR_THETA_DERIV,
            Ok(rel_defect(&deriv, &Complex::with_val(wp, 1))),
            scaled_threshold(thresholds::THETA_DERIVATIVE, prec),
        ),
        Check::measured(s, "Legendre relation residual", ANCHOR_LEGENDRE, Ok(lat.legendre_residual()), scaled_threshold(thresholds::LEGENDRE, prec)),
    ]
}

/// The configured lattice and the one with τ doubled.
fn two_lattices(lat: &Lattice) -> Result<Vec<(String, Lattice)>, String> {
    let wp = lat.prec();
    let doubled = Lattice::new(&Complex::with_val(wp, lat.omega1() * 2u32), lat.omega2(), lat.ctx()).map_err(e2s)?;
    Ok(vec![("configured lattice".into(), lat.clone()), ("lattice with tau doubled".into(), doubled)])
}

pub fn functional_eq(lat: &Lattice) -> Vec<Check> {
    let prec = lat.ctx().prec_bits;
    let s = Suite::FunctionalEq;
    let mut out = Vec::new();
    let sp = tp(1, 2, 5);
    let tq = tp(1, 1, 3);
    for (k, r) in [(0u32, 3u32), (0, 4), (1, 4), (1, 5), (2, 5), (2, 6)] {
        let res = (|| {
            let d = ek_normalized(k, r, &sp, &tq, lat, Route::Direct).map_err(e2s)?;
            let l = ek_normalized(k, r, &sp, &tq, lat, Route::Lerch).map_err(e2s)?;
            Ok(rel_defect(&d.value, &l.value))
        })();
        out.push(Check::measured(
            s,
            format!("direct vs Lerch, (k,r) = ({k},{r}), s = (1,2)/5, t = (1,1)/3"),
            ANCHOR_OVERLAP,
            res,
            scaled_threshold(thresholds::OVERLAP, prec),
        ));
    }
    match two_lattices(lat) {
        Err(e) => out.push(Check::measured(s, "functional equation", ANCHOR_FE, Err(e), 0.0)),
        Ok(lats) => {
            for (label, l) in lats {
                let x = sp.embed(&l);
                let z0 = Complex::new(l.prec());
                let res = max_over((0..=3u32).flat_map(|k| (0..=3u32).map(move |r| (k, r))).map(|(k, r)| {
                    let a = ek_normalized_lerch(k, r, &x, &z0, &l).map_err(e2s)?;
                    let b = ek_normalized_dual(k, r, &x, &l).map_err(e2s)?;
                    Ok(rel_defect(&a.value, &b.value))
                }));
                out.push(Check::measured(
                    s,
                    format!("functional equation, k,r <= 3, s = (1,2)/5, {label}"),
                    ANCHOR_FE,
                    res,
                    scaled_threshold(thresholds::FUNCTIONAL_EQ, prec),
                ));
            }
        }
    }
    out
}

pub fn katz(lat: &Lattice) -> Vec<Check> {
    let prec = lat.ctx().prec_bits;
    let mut out = Vec::new();
    for d in [2u64, 3] {
        for (k, r) in [(1u32, 1u32), (2, 1), (1, 2)] {
            let res = katz_comparison_check(k, r, 1, 2, 5, d, lat, Route::Auto).map(|c| c.defect).map_err(e2s);
            out.push(Check::measured(
                Suite::Katz,
                format!("(k,r) = ({k},{r}), D = {d}, s = (1,2)/5"),
                ANCHOR_KATZ,
                res,
                scaled_threshold(thresholds::KATZ, prec),
            ));
        }
    }
    out
}

pub fn kato_siegel(lat: &Lattice) -> Vec<Check> {
    let prec = lat.ctx().prec_bits;
    let thr = scaled_threshold(thresholds::KATO_SIEGEL, prec);
    let s = Suite::KatoSiegel;
    let mut out = Vec::new();
    for d in [2u64, 3] {
        let res = residue_law(d, lat)
            .map_err(e2s)
            .and_then(|entries| max_over(entries.iter().map(|e| Ok(e.defect))));
        out.push(Check::measured(s, format!("integrated residues of omega^D, D = {d}"), ANCHOR_RESIDUE, res, thr));
    }
    let t = tp(0, 1, 3);
    let res = max_over([(0, 0), (1, 0), (0, 1)].into_iter().map(|(m, n)| {
        let (r, want) = omega_t_residue(&t, m, n, lat).map_err(e2s)?;
        Ok(rel_defect(&r, &want))
    }));
    out.push(Check::measured(s, "residues of omega_t, t = (0,1)/3, at 0, w1, w2", ANCHOR_RESIDUE_T, res, thr));
    for (t, shift) in [(tp(0, 1, 3), tp(1, 2, 3)), (tp(1, 1, 2), tp(1, 0, 2))] {
        let res = translation_check(&t, &shift, &sample_points(lat, 5, 1), lat).map(|c| c.defect).map_err(e2s);
        out.push(Check::measured(
            s,
            format!("translation character, t = ({},{})/{}, shift = ({},{})/{}", t.a, t.b, t.order_n, shift.a, shift.b, shift.order_n),
            ANCHOR_TRANSLATION,
            res,
            thr,
        ));
    }
    let zs = sample_points(lat, 2, 4);
    for (d, n) in [(2u64, 3u64), (3, 2), (2, 5)] {
        let res = max_over(zs.iter().map(|z| trace_check(d, n, z, lat).map_err(e2s)));
        out.push(Check::measured(s, format!("trace compatibility, (D,N) = ({d},{n})"), ANCHOR_TRACE, res, thr));
    }
    let zs = sample_points(lat, 3, 6);
    for d in [2u64, 3, 4, 6] {
        let res = max_over(zs.iter().map(|z| {
            let a = omega_d(z, d, lat).map_err(e2s)?;
            let b = omega_d_closed(z, d, lat).map_err(e2s)?;
            Ok(rel_defect(&a, &b))
        }));
        out.push(Check::measured(s, format!("torsion sum vs closed form, D = {d}"), ANCHOR_CLOSED, res, thr));
    }
    out
}

pub fn distribution(lat: &Lattice) -> Vec<Check> {
    let prec = lat.ctx().prec_bits;
    let thr = scaled_threshold(thresholds::DISTRIBUTION, prec);
    let mut out = Vec::new();
    let instances = [(2u64, 3u64, 5u64, tp(1, 0, 5), tp(1, 1, 2), tp(1, 2, 6)), (3, 2, 5, tp(2, 1, 5), tp(1, 2, 3), tp(1, 0, 6))];
    for (d, d2, n, sp, t, t6) in instances {
        match distribution_suite(d, d2, n, &sp, &t, &t6, 5, lat) {
            Err(e) => out.push(Check::measured(Suite::Distribution, format!("instances at D = {d}"), ANCHOR_DIST_THM, Err(e2s(e)), thr)),
            Ok(rep) => {
                let anchors = [ANCHOR_DIST_THM, ANCHOR_DIST_COR, ANCHOR_DIST_LEMMA];
                let labels = [
                    format!("(D,D',N) = ({d},{d2},{n}), s = ({},{})/{}, t = ({},{})/{}", sp.a, sp.b, sp.order_n, t.a, t.b, t.order_n),
                    format!("D = {d}"),
                    format!("t = ({},{})/6", t6.a, t6.b),
                ];
                for ((entry, anchor), label) in rep.entries.iter().zip(anchors).zip(labels) {
                    let res = entry.defect.ok_or_else(|| format!("not applicable: {}", entry.note));
                    let mut c = Check::measured(Suite::Distribution, format!("{}, {label}, {} samples", entry.name, entry.samples), anchor, res, thr);
                    if entry.samples < 5 && c.passed {
                        c.passed = false;
                        c.detail = "fewer than 5 usable sample points".into();
                    }
                    out.push(c);
                }
            }
        }
    }
    out
}

pub const PADIC_P: u64 = 5;
pub const PADIC_M: u32 = 6;

/// The synthetic measure of the p-adic battery: pseudo-random coefficients
/// from a fixed seed.
pub fn synthetic_series(seed: u64, deg_s: usize, deg_t: usize) -> TruncatedSeries2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = PADIC_P.pow(PADIC_M);
    TruncatedSeries2::from_fn(PADIC_P, PADIC_M, deg_s, deg_t, |_, _| (rng.next_u64() % m) as i64).expect("valid parameters")
}

/// The grid m[k][0] = k, which violates the Kummer congruences.
pub fn adversarial_grid(kmax: usize) -> MeasureMoments {
    let col: Vec<i64> = (0..=kmax as i64).collect();
    MeasureMoments::from_column(PADIC_P, PADIC_M, &col).expect("valid parameters")
}

fn riemann_check(f: &TruncatedSeries2) -> Result<(usize, String), String> {
    let level = 3u32;
    let m3 = PADIC_P.pow(level);
    let size = m3 as i64;
    let mut mu = vec![vec![0u64; size as usize]; size as usize];
    for a in 0..size {
        let g = measure_eval(f, level, a, Var::S).map_err(e2s)?;
        for b in 0..size {
            mu[a as usize][b as usize] = measure_eval(&g, level, b, Var::T).map_err(e2s)?.constant_term() % m3;
        }
    }
    let mut bad = 0;
    let mut first = String::new();
    for k in 0..=3usize {
        for l in 0..=3usize {
            let mut acc = 0u64;
            for (a, row) in mu.iter().enumerate() {
                let ak = (a as u64).pow(k as u32) % m3;
                for (b, v) in row.iter().enumerate() {
                    let bl = (b as u64).pow(l as u32) % m3;
                    acc = (acc + ak * bl % m3 * v) % m3;
                }
            }
            let want = moment(f, k, l).map_err(e2s)? % m3;
            if acc != want {
                bad += 1;
                if first.is_empty() {
                    first = format!("first mismatch at (k,l) = ({k},{l})");
                }
            }
        }
    }
    Ok((bad, first))
}

fn series_mismatches(a: &TruncatedSeries2, b: &TruncatedSeries2) -> usize {
    let ds = a.deg_s().max(b.deg_s());
    let dt = a.deg_t().max(b.deg_t());
    (0..=ds).flat_map(|i| (0..=dt).map(move |j| (i, j))).filter(|(i, j)| a.get(*i, *j) != b.get(*i, *j)).count()
}

pub fn padic() -> Vec<Check> {
    let s = Suite::Padic;
    let f = synthetic_series(0x5eed, 6, 4);
    let mut out = Vec::new();
    out.push(Check::exact(
        s,
        "moments vs Riemann sums mod p^3 on level-3 cylinders, p = 5, M = 6, k,l <= 3",
        ANCHOR_MOMENTS,
        riemann_check(&f),
    ));
    let restricted = restrict_unit_s(&f).map_err(e2s);
    out.push(Check::exact(
        s,
        "restriction is idempotent",
        ANCHOR_RESTRICT,
        restricted.clone().and_then(|r| Ok((series_mismatches(&restrict_unit_s(&r).map_err(e2s)?, &r), String::new()))),
    ));
    out.push(Check::exact(
        s,
        "restriction and its complement live on Z_p^x and pZ_p (level-2 cylinders)",
        ANCHOR_RESTRICT,
        restricted.clone().and_then(|r| {
            let rest = f.sub(&r).map_err(e2s)?;
            let mut bad = 0;
            for a in 0..25i64 {
                let on_r = measure_eval(&r, 2, a, Var::S).map_err(e2s)?;
                let on_rest = measure_eval(&rest, 2, a, Var::S).map_err(e2s)?;
                let on_f = measure_eval(&f, 2, a, Var::S).map_err(e2s)?;
                for j in 0..=f.deg_t() {
                    let (zero, full) = if a % PADIC_P as i64 == 0 { (&on_r, &on_rest) } else { (&on_rest, &on_r) };
                    bad += usize::from(zero.get(0, j) != 0) + usize::from(full.get(0, j) != on_f.get(0, j));
                }
            }
            Ok((bad, String::new()))
        }),
    ));
    out.push(Check::exact(s, "pushforward scales moments by p^k, k <= 4, l <= 2", ANCHOR_PUSHFORWARD, {
        (|| {
            let g = pushforward_p(&f).map_err(e2s)?;
            let m = f.modulus() as u128;
            let mut bad = 0;
            for k in 0..=4usize {
                for l in 0..=2usize {
                    let want = (moment(&f, k, l).map_err(e2s)? as u128 * PADIC_P.pow(k as u32) as u128 % m) as u64;
                    bad += usize::from(moment(&g, k, l).map_err(e2s)? != want);
                }
            }
            Ok((bad, String::new()))
        })()
    }));
    out.push(Check::exact(
        s,
        "Kummer congruences hold for the restricted synthetic measure, K = 12, L = 2",
        ANCHOR_KUMMER,
        restricted.and_then(|r| {
            let rep = kummer_check(&moments(&r, 12, 2).map_err(e2s)?).map_err(e2s)?;
            Ok((rep.violations.len(), format!("{} congruences, {} integrality sums", rep.congruences_checked, rep.mahler_checked)))
        }),
    ));
    out.push(Check::exact(s, "Kummer check rejects the grid m[k] = k", ANCHOR_KUMMER, {
        kummer_check(&adversarial_grid(12)).map_err(e2s).map(|rep| {
            if rep.passed() {
                (1, "adversarial grid was accepted".into())
            } else {
                (0, format!("{} violations reported, first {:?}", rep.violations.len(), rep.violations[0]))
            }
        })
    }));
    out.push(Check::exact(s, "Frobenius hook with the identity on a constant series", ANCHOR_FROB, {
        TruncatedSeries2::constant(PADIC_P, PADIC_M, 3)
            .map_err(e2s)
            .and_then(|c| frob_relation_check(&c, |g| g.clone()).map_err(e2s))
            .map(|chk| (usize::from(!chk.holds), String::new()))
    }));
    out
}

pub fn run_suite(suite: Suite, lat: &Lattice) -> Vec<Check> {
    match suite {
        Suite::Laurent => laurent(lat),
        Suite::FunctionalEq => functional_eq(lat),
        Suite::Katz => katz(lat),
        Suite::KatoSiegel => kato_siegel(lat),
        Suite::Distribution => distribution(lat),
        Suite::Padic => padic(),
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub prec_bits: u32,
    pub lattice: String,
    pub checks: Vec<Check>,
    /// Per-suite wall time in milliseconds, when requested.
    pub timings: Option<Vec<(Suite, u128)>>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("prec_bits".into(), Value::String(self.prec_bits.to_string()));
        m.insert("lattice".into(), Value::String(self.lattice.clone()));
        m.insert("checks".into(), Value::Array(self.checks.iter().map(Check::to_json).collect()));
        m.insert("passed".into(), Value::Bool(self.passed()));
        if let Some(t) = &self.timings {
            let mut tm = Map::new();
            for (s, ms) in t {
                tm.insert(s.name().into(), Value::String(ms.to_string()));
            }
            m.insert("wall_ms".into(), Value::Object(tm));
        }
        Value::Object(m)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,defect,threshold,passed\n");
        for c in &self.checks {
            let j = c.to_json();
            out.push_str(&format!(
                "{},\"{}\",{},{},{}\n",
                c.suite.name(),
                c.name.replace('"', "'"),
                j["defect"].as_str().unwrap_or(""),
                j["threshold"].as_str().unwrap_or(""),
                c.passed
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("lattice {} at {} bits\n", self.lattice, self.prec_bits);
        for c in &self.checks {
            let j = c.to_json();
            out.push_str(&format!(
                "{} [{}] {}: defect {} (threshold {})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.suite.name(),
                c.name,
                j["defect"].as_str().unwrap_or(""),
                j["threshold"].as_str().unwrap_or("")
            ));
            if !c.detail.is_empty() {
                out.push_str(&format!("     {}\n", c.detail));
            }
        }
        if let Some(t) = &self.timings {
            for (s, ms) in t {
                out.push_str(&format!("time {}: {ms} ms\n", s.name()));
            }
        }
        out.push_str(if self.passed() { "all checks passed\n" } else { "some checks FAILED\n" });
        out
    }
}

/// Runs the suites on worker threads and gathers the checks in suite order,
/// so the report does not depend on scheduling.
pub fn run_suites(suites: &[Suite], lat: &Lattice, label: &str, timings: bool) -> VerifyReport {
    let results: Vec<(Vec<Check>, u128)> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&suite| {
                scope.spawn(move || {
                    let t0 = Instant::now();
                    let checks = run_suite(suite, lat);
                    (checks, t0.elapsed().as_millis())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut checks = Vec::new();
    let mut times = Vec::new();
    for (suite, (c, ms)) in suites.iter().zip(results) {
        checks.extend(c);
        times.push((*suite, ms));
    }
    VerifyReport { prec_bits: lat.ctx().prec_bits, lattice: label.to_string(), checks, timings: timings.then_some(times) }
}
