//! Torsion points on the command line: `a/N,b/M` means
//! (a/N)·ω₁ + (b/M)·ω₂; a bare `0` is the origin.

use eisenkron::TorsionPoint;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn fraction(s: &str) -> Result<(i64, u64), String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: i64 = num.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: u64 = den.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if den == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok((num, den))
}

pub fn parse_torsion(s: &str) -> Result<TorsionPoint, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(TorsionPoint::zero());
    }
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected a/N,b/N or 0, got {s:?}"))?;
    let (a, n1) = fraction(x)?;
    let (b, n2) = fraction(y)?;
    let n = n1 / gcd(n1, n2) * n2;
    if n > 1 << 20 {
        return Err(format!("denominator of {s:?} is too large"));
    }
    TorsionPoint::new(a * (n / n1) as i64, b * (n / n2) as i64, n).map_err(|e| e.to_string())
}

pub fn format_torsion(t: &TorsionPoint) -> String {
    let (a, b, n) = t.canonical();
    if n == 1 {
        "0".into()
    } else {
        format!("{a}/{n},{b}/{n}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_torsion("1/5,2/5").unwrap(), TorsionPoint::new(1, 2, 5).unwrap());
        assert_eq!(parse_torsion("1/2,1/3").unwrap(), TorsionPoint::new(3, 2, 6).unwrap());
        assert!(parse_torsion("0").unwrap().is_zero());
        assert_eq!(format_torsion(&parse_torsion("2/10,4/10").unwrap()), "1/5,2/5");
        assert_eq!(format_torsion(&parse_torsion("-1/5,0").unwrap()), "4/5,0/5");
        for bad in ["1/0,1", "x", "1/5", "a/5,1/5"] {
            assert!(parse_torsion(bad).is_err(), "{bad}");
        }
    }
}
