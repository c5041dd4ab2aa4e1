//! File-level p-adic operations. Inputs and outputs use the series text
//! format of [`TruncatedSeries2::to_text`]; moment grids are written in the
//! same format with the S^k T^l coefficient holding ∫x^k y^l.

use eisenkron_padic::{kummer_check, moments, pushforward_p, restrict_unit_s, KummerReport, MeasureMoments, TruncatedSeries2};

#[derive(Debug)]
pub enum PadicCmdError {
    /// Malformed input; carries the line number.
    Parse(String),
    Compute(String),
}

impl std::fmt::Display for PadicCmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PadicCmdError::Parse(m) | PadicCmdError::Compute(m) => f.write_str(m),
        }
    }
}

fn parse(text: &str) -> Result<TruncatedSeries2, PadicCmdError> {
    TruncatedSeries2::from_text(text).map_err(|e| PadicCmdError::Parse(e.to_string()))
}

fn compute<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, PadicCmdError> {
    r.map_err(|e| PadicCmdError::Compute(e.to_string()))
}

pub fn cmd_moments(text: &str, kmax: usize, lmax: usize) -> Result<String, PadicCmdError> {
    let f = parse(text)?;
    let grid = compute(moments(&f, kmax, lmax))?;
    Ok(compute(grid.to_series())?.to_text())
}

pub fn cmd_restrict(text: &str) -> Result<String, PadicCmdError> {
    Ok(compute(restrict_unit_s(&parse(text)?))?.to_text())
}

pub fn cmd_pushforward(text: &str) -> Result<String, PadicCmdError> {
    Ok(compute(pushforward_p(&parse(text)?))?.to_text())
}

/// Kummer check of a series' moments up to (K, L), or of a moment grid
/// given directly when `is_grid`.
pub fn cmd_kummer(text: &str, kmax: usize, lmax: usize, is_grid: bool) -> Result<KummerReport, PadicCmdError> {
    let f = parse(text)?;
    let grid = if is_grid {
        let m = (0..=f.deg_s()).map(|k| (0..=f.deg_t()).map(|l| f.get(k, l)).collect()).collect();
        compute(MeasureMoments::new(f.p(), f.prec(), m))?
    } else {
        compute(moments(&f, kmax, lmax))?
    };
    compute(kummer_check(&grid))
}

pub fn kummer_report_text(rep: &KummerReport) -> String {
    let mut out = format!(
        "congruences checked: {}\nintegrality sums checked: {}\nviolations: {}\n",
        rep.congruences_checked,
        rep.mahler_checked,
        rep.violations.len()
    );
    for v in &rep.violations {
        out.push_str(&format!("  {v:?}\n"));
    }
    out.push_str(if rep.passed() { "PASS\n" } else { "FAIL\n" });
    out
}
