//! Run configuration and its `key=value` file format.
//!
//! ```text
//! # comments and blank lines are ignored
//! prec_bits=256
//! sum_radius=4096
//! q_terms=0
//! tol_rel=auto
//! tau=i
//! format=json
//! suites=laurent,katz
//! cache=/tmp/eisenkron-cache
//! ```
//!
//! The lattice is given either by `tau` (Γ = τZ + Z) or by the pair
//! `omega1`, `omega2`; values are expressions as accepted by
//! [`crate::expr::parse_complex`]. [`RunConfig::to_text`] writes every key in
//! the fixed order above, so parsing its output and writing again is the
//! identity.

use std::fmt;
use std::str::FromStr;

use eisenkron::PrecisionContext;

use crate::expr::canonical;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?} (json, csv, text)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Laurent,
    FunctionalEq,
    Katz,
    KatoSiegel,
    Distribution,
    Padic,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Laurent, Suite::FunctionalEq, Suite::Katz, Suite::KatoSiegel, Suite::Distribution, Suite::Padic];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Laurent => "laurent",
            Suite::FunctionalEq => "functional-eq",
            Suite::Katz => "katz",
            Suite::KatoSiegel => "kato-siegel",
            Suite::Distribution => "distribution",
            Suite::Padic => "padic",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, String> {
        let mut out = Vec::new();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            if name == "all" {
                out.extend(Suite::ALL);
                continue;
            }
            match Suite::ALL.iter().find(|x| x.name() == name) {
                Some(x) => out.push(*x),
                None => return Err(format!("unknown suite {name:?}")),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeSpec {
    Tau(String),
    Periods { omega1: String, omega2: String },
}

impl LatticeSpec {
    pub fn tau(expr: &str) -> Self {
        LatticeSpec::Tau(canonical(expr))
    }

    pub fn periods(omega1: &str, omega2: &str) -> Self {
        LatticeSpec::Periods { omega1: canonical(omega1), omega2: canonical(omega2) }
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSpec::Tau(t) => write!(f, "tau={t}"),
            LatticeSpec::Periods { omega1, omega2 } => write!(f, "omega1={omega1};omega2={omega2}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub prec_bits: u32,
    pub sum_radius: u32,
    pub q_terms: u32,
    /// None: derived from the precision.
    pub tol_rel: Option<f64>,
    pub lattice: Option<LatticeSpec>,
    pub format: Format,
    pub suites: Vec<Suite>,
    pub cache: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ctx = PrecisionContext::default();
        Self {
            prec_bits: ctx.prec_bits,
            sum_radius: ctx.sum_radius,
            q_terms: ctx.q_terms,
            tol_rel: None,
            lattice: None,
            format: Format::Json,
            suites: Vec::new(),
            cache: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        let (mut tau, mut om1, mut om2) = (None, None, None);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| ConfigError { line, msg };
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| err("expected key=value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(err(format!("duplicate key {key:?}")));
            }
            seen.push(key.to_string());
            let num = |v: &str| v.parse::<u32>().map_err(|e| err(format!("{key}: {e}")));
            match key {
                "prec_bits" => cfg.prec_bits = num(value)?,
                "sum_radius" => cfg.sum_radius = num(value)?,
                "q_terms" => cfg.q_terms = num(value)?,
                "tol_rel" => {
                    cfg.tol_rel = match value {
                        "auto" => None,
                        v => Some(v.parse::<f64>().map_err(|e| err(format!("tol_rel: {e}")))?),
                    }
                }
                "tau" => tau = Some(value.to_string()),
                "omega1" => om1 = Some(value.to_string()),
                "omega2" => om2 = Some(value.to_string()),
                "format" => cfg.format = value.parse().map_err(err)?,
                "suites" => cfg.suites = Suite::parse_list(value).map_err(err)?,
                "cache" => cfg.cache = if value.is_empty() { None } else { Some(value.to_string()) },
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        cfg.lattice = match (tau, om1, om2) {
            (None, None, None) => None,
            (Some(t), None, None) => Some(LatticeSpec::tau(&t)),
            (None, Some(a), Some(b)) => Some(LatticeSpec::periods(&a, &b)),
            _ => return Err(ConfigError { line: 0, msg: "give either tau or both omega1 and omega2".into() }),
        };
        cfg.context().map_err(|e| ConfigError { line: 0, msg: e })?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("prec_bits={}\n", self.prec_bits));
        out.push_str(&format!("sum_radius={}\n", self.sum_radius));
        out.push_str(&format!("q_terms={}\n", self.q_terms));
        match self.tol_rel {
            None => out.push_str("tol_rel=auto\n"),
            // `{:e}` prints the shortest representation that parses back exactly
            Some(t) => out.push_str(&format!("tol_rel={t:e}\n")),
        }
        match &self.lattice {
            None => {}
            Some(LatticeSpec::Tau(t)) => out.push_str(&format!("tau={t}\n")),
            Some(LatticeSpec::Periods { omega1, omega2 }) => {
                out.push_str(&format!("omega1={omega1}\nomega2={omega2}\n"));
            }
        }
        out.push_str(&format!("format={}\n", self.format.name()));
        let names: Vec<&str> = self.suites.iter().map(|s| s.name()).collect();
        out.push_str(&format!("suites={}\n", names.join(",")));
        if let Some(c) = &self.cache {
            out.push_str(&format!("cache={c}\n"));
        }
        out
    }

    pub fn context(&self) -> Result<PrecisionContext, String> {
        let mut ctx = PrecisionContext::new(self.prec_bits).map_err(|e| e.to_string())?;
        ctx.sum_radius = self.sum_radius;
        ctx.q_terms = self.q_terms;
        if let Some(t) = self.tol_rel {
            ctx.tol_rel = t;
        }
        ctx.validate().map_err(|e| e.to_string())?;
        Ok(ctx)
    }
}
