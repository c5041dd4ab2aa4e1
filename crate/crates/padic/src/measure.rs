//! Operations on measures carried out on their Amice transforms.

use crate::cyclotomic::{CyclotomicElt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::modular::{add_mod, binomial_table, mul_mod, prime_power, sub_mod};
use crate::series::{TruncatedSeries2, Var};

/// Largest S-degree [`pushforward_p`] will produce.
pub const MAX_PUSHFORWARD_DEGREE: usize = 1 << 12;

fn require_exact_in(f: &TruncatedSeries2, var: Var, what: &str) -> Result<()> {
    if f.valid(var).is_some() {
        return Err(Error::DegreeExhausted(format!(
            "{what} needs every {var:?}-coefficient; the input is a truncation"
        )));
    }
    Ok(())
}

/// Lifts the coefficients of f to Z/p^{M+extra} by their canonical
/// representatives.
fn lift(f: &TruncatedSeries2, extra: u32) -> Result<(u64, Vec<Vec<u64>>)> {
    let big = prime_power(f.p(), f.prec() + extra)?;
    let rows = (0..=f.deg_s()).map(|i| (0..=f.deg_t()).map(|j| f.get(i, j)).collect()).collect();
    Ok((big, rows))
}

/// The measure restricted to Z_p^× × Z_p:
///
///   f(S,T) − (1/p)·Σ_{ζ^p=1} f((1+S)ζ − 1, T).
///
/// The sum over primitive ζ is taken as the sum of Galois conjugates in
/// Z/p^{M+1}[ζ] and checked to be rational and divisible by p; since the
/// restriction is integral, working one digit deeper keeps the output at
/// the input precision M. Requires f exact in S.
pub fn restrict_unit_s(f: &TruncatedSeries2) -> Result<TruncatedSeries2> {
    require_exact_in(f, Var::S, "restriction to the units")?;
    let p = f.p();
    let (big, c) = lift(f, 1)?;
    let ring = CyclotomicRing::new(p, 1, big)?;
    let ds = f.deg_s();
    let binom = binomial_table(ds, big);
    // ((1+S)ζ − 1)^i = Σ_l S^l · Σ_{m≥l} C(i,m)C(m,l)(−1)^{i−m} ζ^m
    let mut subst: Vec<Vec<CyclotomicElt>> = Vec::with_capacity(ds + 1);
    for i in 0..=ds {
        let mut row = Vec::with_capacity(i + 1);
        for l in 0..=i {
            let mut poly = vec![0u64; i + 1];
            for m in l..=i {
                let mut v = mul_mod(binom[i][m], binom[m][l], big);
                if (i - m) % 2 == 1 {
                    v = sub_mod(0, v, big);
                }
                poly[m] = v;
            }
            row.push(CyclotomicElt::from_poly(&ring, &poly));
        }
        subst.push(row);
    }
    let mut out = f.clone();
    let m_out = f.modulus();
    for j in 0..=f.deg_t() {
        for l in 0..=ds {
            let mut h = CyclotomicElt::zero(&ring);
            for (i, row) in subst.iter().enumerate().skip(l) {
                if c[i][j] != 0 {
                    h = h.add(&row[l].scale(c[i][j]));
                }
            }
            // ζ = 1 contributes f itself
            let total = add_mod(h.trace()?, c[l][j], big);
            if !total.is_multiple_of(p) {
                return Err(Error::NotDivisible(format!("Σ_ζ f at S^{l} T^{j} is not divisible by p")));
            }
            let avg = (total / p) % m_out;
            out.set(l, j, sub_mod(c[l][j], avg, m_out));
        }
    }
    Ok(out)
}

/// g(S,T) = f((1+S)^p − 1, T), the pushforward along x ↦ px.
///
/// An exact polynomial of S-degree d becomes one of degree pd (at most
/// [`MAX_PUSHFORWARD_DEGREE`]). A truncation keeps its validity, since
/// (1+S)^p − 1 has no constant term.
pub fn pushforward_p(f: &TruncatedSeries2) -> Result<TruncatedSeries2> {
    let p = f.p() as usize;
    let m = f.modulus();
    let out_deg = match f.valid_s() {
        Some(v) => v,
        None => f.deg_s() * p,
    };
    if out_deg > MAX_PUSHFORWARD_DEGREE {
        return Err(Error::DegreeExhausted(format!("pushforward would reach S-degree {out_deg}")));
    }
    let base = binomial_table(p, m).pop().expect("row p");
    // u = (1+S)^p − 1 truncated at out_deg
    let mut u = vec![0u64; out_deg + 1];
    for (k, b) in base.iter().enumerate().skip(1) {
        if k <= out_deg {
            u[k] = *b;
        }
    }
    let mut out = TruncatedSeries2::zero(f.p(), f.prec(), out_deg, f.deg_t())?;
    let mut power = vec![0u64; out_deg + 1];
    power[0] = 1 % m;
    for i in 0..=f.deg_s().min(out_deg) {
        for (k, pk) in power.iter().enumerate() {
            if *pk == 0 {
                continue;
            }
            for j in 0..=f.deg_t() {
                let c = f.get(i, j);
                if c != 0 {
                    let v = add_mod(out.get(k, j), mul_mod(c, *pk, m), m);
                    out.set(k, j, v);
                }
            }
        }
        // power ← power·u
        let mut next = vec![0u64; out_deg + 1];
        for (a, pa) in power.iter().enumerate() {
            if *pa == 0 {
                continue;
            }
            for (b, ub) in u.iter().enumerate().skip(1) {
                if a + b > out_deg {
                    break;
                }
                next[a + b] = add_mod(next[a + b], mul_mod(*pa, *ub, m), m);
            }
        }
        power = next;
    }
    Ok(out.truncated(f.valid_s(), f.valid_t()))
}

/// μ(a + p^n Z_p) in the variable `var`, as a series in the other variable:
///
///   p^{−n}·Σ_{ζ^{p^n}=1} ζ^{−a}·f(ζ − 1, ·).
///
/// Roots of each exact order p^j, j ≤ n, are summed as Galois traces in
/// Z/p^{M+n}[X]/Φ_{p^j}; the total is checked rational and divisible by
/// p^n, and the result is returned at precision M. Requires f exact in
/// `var`. The result has degree 0 in `var`.
pub fn measure_eval(f: &TruncatedSeries2, level: u32, a: i64, var: Var) -> Result<TruncatedSeries2> {
    require_exact_in(f, var, "cylinder evaluation")?;
    let p = f.p();
    let (big, c) = lift(f, level)?;
    let pn = prime_power(p, level)?;
    let deg = f.deg(var);
    let other = match var {
        Var::S => f.deg_t(),
        Var::T => f.deg_s(),
    };
    let coeff = |i: usize, j: usize| match var {
        Var::S => c[i][j],
        Var::T => c[j][i],
    };
    let mut totals = vec![0u64; other + 1];
    for (j, t) in totals.iter_mut().enumerate() {
        *t = coeff(0, j) % big;
    }
    for lv in 1..=level {
        let ring = CyclotomicRing::new(p, lv, big)?;
        let x_minus_1 = CyclotomicElt::monomial(&ring, 1).sub(&CyclotomicElt::constant(&ring, 1));
        let mut powers = Vec::with_capacity(deg + 1);
        let mut pw = CyclotomicElt::constant(&ring, 1);
        for _ in 0..=deg {
            powers.push(pw.clone());
            pw = pw.mul(&x_minus_1);
        }
        for (j, t) in totals.iter_mut().enumerate() {
            let mut h = CyclotomicElt::zero(&ring);
            for (i, pi) in powers.iter().enumerate() {
                let ci = coeff(i, j);
                if ci != 0 {
                    h = h.add(&pi.scale(ci));
                }
            }
            let tr = h.mul_monomial(-a).trace()?;
            *t = add_mod(*t, tr, big);
        }
    }
    let m_out = f.modulus();
    let (ds, dt) = match var {
        Var::S => (0, other),
        Var::T => (other, 0),
    };
    let mut out = TruncatedSeries2::zero(p, f.prec(), ds, dt)?;
    for (j, t) in totals.iter().enumerate() {
        if t % pn != 0 {
            return Err(Error::NotDivisible(format!("class {a} mod p^{level}: Σ_ζ is not divisible by p^{level}")));
        }
        let v = (t / pn) % m_out;
        match var {
            Var::S => out.set(0, j, v),
            Var::T => out.set(j, 0, v),
        }
    }
    let valid_other = match var {
        Var::S => f.valid_t(),
        Var::T => f.valid_s(),
    };
    Ok(match var {
        Var::S => out.truncated(None, valid_other),
        Var::T => out.truncated(valid_other, None),
    })
}

/// μ((a + p^n Z_p) × (b + p^n Z_p)).
pub fn measure_eval_2d(f: &TruncatedSeries2, level: u32, a: i64, b: i64) -> Result<u64> {
    let g = measure_eval(f, level, a, Var::S)?;
    Ok(measure_eval(&g, level, b, Var::T)?.constant_term())
}

#[derive(Debug, Clone)]
pub struct FrobCheck {
    pub holds: bool,
    /// First (S-degree, T-degree) where the two sides differ.
    pub first_mismatch: Option<(usize, usize)>,
}

/// Checks p·Frob(ϑ([p]S, T)) = Σ_{ζ^p=1} ϑ((1+S)ζ − 1, T) for a user-supplied
/// coefficient endomorphism `frob`. Both sides are divided by p, i.e.
/// compared as Frob(pushforward_p(ϑ)) = ϑ − restrict_unit_s(ϑ).
pub fn frob_relation_check<F>(theta: &TruncatedSeries2, frob: F) -> Result<FrobCheck>
where
    F: Fn(&TruncatedSeries2) -> TruncatedSeries2,
{
    let lhs = frob(&pushforward_p(theta)?);
    let rhs = theta.sub(&restrict_unit_s(theta)?)?;
    let ds = lhs.deg_s().max(rhs.deg_s());
    let dt = lhs.deg_t().max(rhs.deg_t());
    for i in 0..=ds {
        for j in 0..=dt {
            if lhs.get(i, j) != rhs.get(i, j) {
                return Ok(FrobCheck { holds: false, first_mismatch: Some((i, j)) });
            }
        }
    }
    Ok(FrobCheck { holds: true, first_mismatch: None })
}
