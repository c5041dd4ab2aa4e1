//! Acceptance battery: one PASS/FAIL line per criterion at its stated
//! tolerance and time budget. Exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use eisenkron::{Lattice, PrecisionContext};
use eisenkron_cli::suites::{self, Check, ANCHOR_FE, ANCHOR_LEGENDRE, ANCHOR_OVERLAP, ANCHOR_THETA_DERIV, ANCHOR_THETA_LAW};

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    summary: String,
}

fn lattice(tau: &str) -> Lattice {
    let ctx = PrecisionContext::default();
    let tau = eisenkron_cli::expr::parse_complex(tau, ctx.working_prec()).unwrap();
    Lattice::from_tau(&tau, &ctx).unwrap()
}

/// Every check must pass its own threshold, which must be no looser than
/// `tol`; the whole block must finish within `budget`.
fn judge(id: u32, title: &'static str, checks: &[Check], tol: Option<f64>, elapsed: Duration, budget: Option<Duration>) -> Outcome {
    let mut worst = 0.0f64;
    let mut passed = !checks.is_empty();
    let mut notes = Vec::new();
    for c in checks {
        worst = worst.max(c.defect);
        if !c.passed {
            passed = false;
            notes.push(format!("failed: {} {}", c.name, c.detail));
        }
        if let Some(t) = tol {
            if c.defect > t || c.threshold > t {
                passed = false;
            }
        }
    }
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            notes.push(format!("over the {} s budget", b.as_secs()));
        }
    }
    let tol_text = tol.map_or("exact".to_string(), |t| format!("{t:.0e}"));
    let mut summary = format!("{} checks, worst defect {worst:.3e}, tolerance {tol_text}, {:.1} s", checks.len(), elapsed.as_secs_f64());
    if !notes.is_empty() {
        summary.push_str("; ");
        summary.push_str(&notes.join("; "));
    }
    Outcome { id, title, passed, summary }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let v = f();
    (v, t0.elapsed())
}

fn main() {
    let sq = lattice("i");
    let hex = lattice("(1+i*sqrt(3))/2");
    let mut out = Vec::new();

    let (c1, t1) = timed(|| {
        let mut v = suites::laurent_grids(&sq);
        v.extend(suites::laurent_grids(&hex));
        v
    });
    out.push(judge(1, "Laurent expansion grid, tau in {i, (1+i sqrt 3)/2}", &c1, Some(1e-25), t1, Some(Duration::from_secs(60))));

    let (fe, t_fe) = timed(|| suites::functional_eq(&sq));
    let overlap: Vec<Check> = fe.iter().filter(|c| c.anchor == ANCHOR_OVERLAP).cloned().collect();
    let feq: Vec<Check> = fe.iter().filter(|c| c.anchor == ANCHOR_FE).cloned().collect();
    out.push(judge(2, "direct sum vs Lerch continuation, r > k+2, k <= 2", &overlap, Some(1e-25), t_fe, Some(Duration::from_secs(30))));
    out.push(judge(3, "functional equation, k,r <= 3, two lattices", &feq, Some(1e-25), t_fe, None));

    let (c4, t4) = timed(|| suites::katz(&sq));
    out.push(judge(4, "Katz comparison via the D-variant, D in {2,3}, N = 5", &c4, Some(1e-20), t4, Some(Duration::from_secs(120))));

    let (c5, t5) = timed(|| suites::kato_siegel(&sq));
    out.push(judge(5, "Kato-Siegel residues, translation, trace, closed form", &c5, Some(1e-20), t5, None));

    let (c6, t6) = timed(|| suites::distribution(&sq));
    let enough = c6.iter().all(|c| c.name.contains("5 samples"));
    let mut o6 = judge(6, "distribution relations at 5 sample points", &c6, Some(1e-18), t6, Some(Duration::from_secs(120)));
    o6.passed &= enough;
    out.push(o6);

    let (c7, t7) = timed(|| {
        let mut v = suites::theta_kernel(&sq);
        v.extend(suites::theta_kernel(&hex));
        v
    });
    let law: Vec<Check> = c7.iter().filter(|c| c.anchor == ANCHOR_THETA_LAW || c.anchor == ANCHOR_THETA_DERIV).cloned().collect();
    let leg: Vec<Check> = c7.iter().filter(|c| c.anchor == ANCHOR_LEGENDRE).cloned().collect();
    let mut o7 = judge(7, "theta kernel: transformation law and theta'(0) = 1", &law, Some(1e-30), t7, None);
    let o7b = judge(7, "", &leg, Some(1e-35), t7, None);
    o7.passed &= o7b.passed;
    o7.summary = format!("{}; Legendre residual {}", o7.summary, o7b.summary);
    out.push(o7);

    let (c8, t8) = timed(suites::padic);
    out.push(judge(8, "p-adic suite, p = 5, M = 6", &c8, None, t8, Some(Duration::from_secs(30))));

    let exe = env!("CARGO_BIN_EXE_eisenkron");
    let (runs, t9) = timed(|| {
        (0..2)
            .map(|_| Command::new(exe).args(["verify", "all", "--tau", "i", "--prec", "256"]).env_remove("EISENKRON_CACHE_DIR").output())
            .collect::<Vec<_>>()
    });
    let o9 = match (&runs[0], &runs[1]) {
        (Ok(a), Ok(b)) => {
            let same = a.stdout == b.stdout && !a.stdout.is_empty();
            Outcome {
                id: 9,
                title: "determinism of `verify all`",
                passed: same && a.status.success() && b.status.success(),
                summary: format!(
                    "{} bytes, identical: {same}, exit codes {:?}/{:?}, {:.1} s",
                    a.stdout.len(),
                    a.status.code(),
                    b.status.code(),
                    t9.as_secs_f64()
                ),
            }
        }
        _ => Outcome { id: 9, title: "determinism of `verify all`", passed: false, summary: "could not run the binary".into() },
    };
    out.push(o9);

    let mut all = true;
    for o in &out {
        all &= o.passed;
        println!("criterion {}: {} — {} ({})", o.id, if o.passed { "PASS" } else { "FAIL" }, o.title, o.summary);
    }
    if !all {
        std::process::exit(1);
    }
}
