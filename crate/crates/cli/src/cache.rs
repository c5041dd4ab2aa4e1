//! Lattice construction with an optional on-disk cache of the calibrated
//! quasi-periods. Only [`LatticeInvariants`] are stored — never computed
//! values — and they are written in exact hexadecimal so a cached lattice
//! reproduces a fresh one bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use eisenkron::{Lattice, LatticeInvariants, PrecisionContext};
use rug::Complex;
use sha2::{Digest, Sha256};

use crate::config::LatticeSpec;
use crate::expr::{parse_complex, ExprError};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "EISENKRON_CACHE_DIR";

#[derive(Debug)]
pub enum LatticeError {
    Expr(String, ExprError),
    Engine(eisenkron::Error),
}

impl std::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeError::Expr(what, e) => write!(f, "{what}: {e}"),
            LatticeError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LatticeError {}

/// The cache directory: the environment variable wins over the configured
/// path; None disables caching.
pub fn cache_dir(configured: Option<&str>) -> Option<PathBuf> {
    match std::env::var_os(CACHE_ENV) {
        Some(v) if !v.is_empty() => Some(PathBuf::from(v)),
        _ => configured.map(PathBuf::from),
    }
}

/// ω₁, ω₂ at the working precision of `ctx`.
pub fn periods(spec: &LatticeSpec, ctx: &PrecisionContext) -> Result<(Complex, Complex), LatticeError> {
    let wp = ctx.working_prec();
    match spec {
        LatticeSpec::Tau(t) => {
            let tau = parse_complex(t, wp).map_err(|e| LatticeError::Expr("tau".into(), e))?;
            Ok((tau, Complex::with_val(wp, 1)))
        }
        LatticeSpec::Periods { omega1, omega2 } => Ok((
            parse_complex(omega1, wp).map_err(|e| LatticeError::Expr("omega1".into(), e))?,
            parse_complex(omega2, wp).map_err(|e| LatticeError::Expr("omega2".into(), e))?,
        )),
    }
}

fn hex(z: &Complex) -> String {
    format!("{} {}", z.real().to_string_radix(16, None), z.imag().to_string_radix(16, None))
}

fn unhex(line: &str, prec: u32) -> Option<Complex> {
    let (re, im) = line.split_once(' ')?;
    let re = rug::Float::with_val(prec, rug::Float::parse_radix(re, 16).ok()?);
    let im = rug::Float::with_val(prec, rug::Float::parse_radix(im, 16).ok()?);
    Some(Complex::with_val(prec, (re, im)))
}

/// Cache key: the exact generators and the working precision.
pub fn cache_key(omega1: &Complex, omega2: &Complex, ctx: &PrecisionContext) -> String {
    let mut h = Sha256::new();
    h.update(format!("v1|{}|{}|{}", hex(omega1), hex(omega2), ctx.working_prec()).as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn load(path: &Path, prec: u32) -> Option<LatticeInvariants> {
    let text = fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next()? != "eisenkron-invariants v1" {
        return None;
    }
    let eta_one = unhex(lines.next()?, prec)?;
    let eta_tau = unhex(lines.next()?, prec)?;
    let e2star = unhex(lines.next()?, prec)?;
    Some(LatticeInvariants { eta_one, eta_tau, e2star })
}

fn store(path: &Path, inv: &LatticeInvariants) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let body = format!("eisenkron-invariants v1\n{}\n{}\n{}\n", hex(&inv.eta_one), hex(&inv.eta_tau), hex(&inv.e2star));
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, body)?;
    fs::rename(tmp, path)
}

/// Builds the lattice, reading and refreshing the cache when a directory is
/// given. Unreadable or corrupt entries are recomputed; a failed write is
/// not an error.
pub fn build_lattice(spec: &LatticeSpec, ctx: &PrecisionContext, dir: Option<&Path>) -> Result<Lattice, LatticeError> {
    let (w1, w2) = periods(spec, ctx)?;
    let Some(dir) = dir else {
        return Lattice::new(&w1, &w2, ctx).map_err(LatticeError::Engine);
    };
    let path = dir.join(format!("{}.inv", cache_key(&w1, &w2, ctx)));
    if let Some(inv) = load(&path, ctx.working_prec()) {
        return Lattice::with_invariants(&w1, &w2, ctx, inv).map_err(LatticeError::Engine);
    }
    let lat = Lattice::new(&w1, &w2, ctx).map_err(LatticeError::Engine)?;
    let _ = store(&path, lat.invariants());
    Ok(lat)
}
