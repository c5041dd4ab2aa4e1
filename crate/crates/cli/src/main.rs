use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use eisenkron::{ek_normalized, taylor_coeffs, Lattice, Route, ThetaTranslate};
use eisenkron_cli::cache::{build_lattice, cache_dir, periods};
use eisenkron_cli::config::{Format, LatticeSpec, RunConfig, Suite};
use eisenkron_cli::padic_cmd::{self, PadicCmdError};
use eisenkron_cli::record::{RecordValue, ResultRecord};
use eisenkron_cli::suites::run_suites;
use eisenkron_cli::torsion_arg::{format_torsion, parse_torsion};
use eisenkron_cli::exit;

#[derive(Parser)]
#[command(name = "eisenkron", version, about = "Eisenstein-Kronecker series, Kronecker theta functions, Kato-Siegel differentials and p-adic measures")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// key=value run configuration; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// working precision in bits
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// period ratio: the lattice τZ + Z (e.g. i, rho, "(1+i*sqrt(3))/2")
    #[arg(long, global = true, conflicts_with_all = ["omega1", "omega2"])]
    tau: Option<String>,
    /// first period (with --omega2; Im(ω₁·conj ω₂) > 0)
    #[arg(long, global = true, requires = "omega2")]
    omega1: Option<String>,
    #[arg(long, global = true, requires = "omega1")]
    omega2: Option<String>,
    /// json (default), csv or text
    #[arg(long, global = true)]
    format: Option<String>,
    /// directory for cached lattice invariants (overridden by EISENKRON_CACHE_DIR)
    #[arg(long, global = true)]
    cache: Option<String>,
    /// report wall-clock times (makes output run-dependent)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the normalized series ẽ_{k,r+1}(s,t)
    EvalEk {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        /// torsion point a/N,b/N (coefficients of ω₁, ω₂) or 0
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        /// auto, direct, lerch or theta_taylor
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Taylor coefficients c[a][b] of z^b w^a of the translated Kronecker theta function
    TaylorGrid {
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 4)]
        max_a: usize,
        #[arg(long, default_value_t = 4)]
        max_b: usize,
    },
    /// Run verification suites: laurent, functional-eq, katz, kato-siegel, distribution, padic, all
    Verify { suites: Vec<String> },
    /// Operations on p-adic series files
    #[command(subcommand)]
    Padic(PadicCommand),
    /// Print the effective configuration in key=value form
    ShowConfig,
}

#[derive(Subcommand)]
enum PadicCommand {
    /// Moment grid ∫x^k y^l for k ≤ K, l ≤ L
    Moments {
        file: PathBuf,
        #[arg(long = "K", default_value_t = 4)]
        kmax: usize,
        #[arg(long = "L", default_value_t = 4)]
        lmax: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Restriction of the measure to Z_p^× in the first variable
    Restrict {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pushforward along x ↦ px in the first variable
    Pushforward {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Kummer congruences and integrality of the moments
    Kummer {
        file: PathBuf,
        #[arg(long = "K", default_value_t = 12)]
        kmax: usize,
        #[arg(long = "L", default_value_t = 0)]
        lmax: usize,
        /// the file already holds a moment grid
        #[arg(long)]
        grid: bool,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: exit::USAGE, msg: msg.into() }
}

fn engine(e: eisenkron::Error) -> Failure {
    use eisenkron::Error as E;
    let code = match e {
        E::PrecisionBudget(_) | E::ContourTooLarge(_) => exit::COMPUTE,
        _ => exit::USAGE,
    };
    Failure { code, msg: e.to_string() }
}

fn resolve_config(g: &GlobalOpts) -> Result<RunConfig, Failure> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(p) = g.prec {
        cfg.prec_bits = p;
    }
    if let Some(t) = &g.tau {
        cfg.lattice = Some(LatticeSpec::tau(t));
    }
    if let (Some(a), Some(b)) = (&g.omega1, &g.omega2) {
        cfg.lattice = Some(LatticeSpec::periods(a, b));
    }
    if let Some(f) = &g.format {
        cfg.format = f.parse::<Format>().map_err(usage)?;
    }
    if let Some(c) = &g.cache {
        cfg.cache = Some(c.clone());
    }
    cfg.context().map_err(usage)?;
    Ok(cfg)
}

fn lattice_for(cfg: &RunConfig, spec: &LatticeSpec) -> Result<Lattice, Failure> {
    let ctx = cfg.context().map_err(usage)?;
    let dir = cache_dir(cfg.cache.as_deref());
    build_lattice(spec, &ctx, dir.as_deref()).map_err(|e| match e {
        eisenkron_cli::cache::LatticeError::Engine(e) => engine(e),
        other => usage(other.to_string()),
    })
}

fn required_lattice(cfg: &RunConfig) -> Result<(LatticeSpec, Lattice), Failure> {
    let spec = cfg.lattice.clone().ok_or_else(|| usage("missing lattice: give --tau or --omega1/--omega2"))?;
    let lat = lattice_for(cfg, &spec)?;
    Ok((spec, lat))
}

fn write_out(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure { code: exit::USAGE, msg: format!("{}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_in(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn padic_err(path: &std::path::Path, e: PadicCmdError) -> Failure {
    match e {
        PadicCmdError::Parse(m) => usage(format!("{}: {m}", path.display())),
        PadicCmdError::Compute(m) => Failure { code: exit::COMPUTE, msg: m },
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let cfg = resolve_config(&cli.global)?;
    let timings = cli.global.timings;
    match cli.command {
        Command::EvalEk { k, r, s, t, method } => {
            let route: Route = method.parse().map_err(|e: eisenkron::Error| usage(e.to_string()))?;
            let sp = parse_torsion(&s).map_err(usage)?;
            let tq = parse_torsion(&t).map_err(usage)?;
            let (spec, lat) = required_lattice(&cfg)?;
            let t0 = Instant::now();
            let v = ek_normalized(k, r, &sp, &tq, &lat, route).map_err(engine)?;
            let rec = ResultRecord {
                operation: "eval-ek".into(),
                anchor: "normalized Eisenstein-Kronecker series e~_{k,r+1}(s,t) of the lattice".into(),
                inputs: vec![
                    ("k".into(), k.to_string()),
                    ("r".into(), r.to_string()),
                    ("s".into(), format_torsion(&sp)),
                    ("t".into(), format_torsion(&tq)),
                    ("lattice".into(), spec.to_string()),
                    ("route".into(), method),
                ],
                values: vec![("value".into(), RecordValue::Complex(v.value)), ("method".into(), RecordValue::Text(v.method.name().into()))],
                est_error: Some(v.est_error),
                prec_bits: cfg.prec_bits,
                wall_ms: timings.then(|| t0.elapsed().as_millis()),
            };
            print!("{}", rec.render(cfg.format));
            Ok(exit::PASS)
        }
        Command::TaylorGrid { s, t, max_a, max_b } => {
            let sp = parse_torsion(&s).map_err(usage)?;
            let tq = parse_torsion(&t).map_err(usage)?;
            let (spec, lat) = required_lattice(&cfg)?;
            let t0 = Instant::now();
            let grid = taylor_coeffs(&ThetaTranslate::from_torsion(&sp, &tq, &lat), max_a, max_b, &lat).map_err(engine)?;
            let rec = ResultRecord {
                operation: "taylor-grid".into(),
                anchor: "Taylor coefficients of the translated Kronecker theta function; a!b! c[a][b] = e~_{a,b+1}(s,t)".into(),
                inputs: vec![
                    ("s".into(), format_torsion(&sp)),
                    ("t".into(), format_torsion(&tq)),
                    ("lattice".into(), spec.to_string()),
                    ("max_a".into(), max_a.to_string()),
                    ("max_b".into(), max_b.to_string()),
                ],
                values: vec![("c".into(), RecordValue::Grid(grid.coeffs))],
                est_error: Some(grid.est_error),
                prec_bits: cfg.prec_bits,
                wall_ms: timings.then(|| t0.elapsed().as_millis()),
            };
            print!("{}", rec.render(cfg.format));
            Ok(exit::PASS)
        }
        Command::Verify { suites } => {
            let list: Vec<Suite> = if suites.is_empty() {
                cfg.suites.clone()
            } else {
                Suite::parse_list(&suites.join(",")).map_err(usage)?
            };
            if list.is_empty() {
                return Err(usage("no suite given (laurent, functional-eq, katz, kato-siegel, distribution, padic, all)"));
            }
            let spec = cfg.lattice.clone().unwrap_or_else(|| LatticeSpec::tau("i"));
            let ctx = cfg.context().map_err(usage)?;
            periods(&spec, &ctx).map_err(|e| usage(e.to_string()))?;
            let lat = lattice_for(&cfg, &spec)?;
            let report = run_suites(&list, &lat, &spec.to_string(), timings);
            let text = match cfg.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("json")),
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            };
            print!("{text}");
            Ok(if report.passed() { exit::PASS } else { exit::CHECK_FAILED })
        }
        Command::Padic(cmd) => match cmd {
            PadicCommand::Moments { file, kmax, lmax, output } => {
                let out = padic_cmd::cmd_moments(&read_in(&file)?, kmax, lmax).map_err(|e| padic_err(&file, e))?;
                write_out(&output, &out)?;
                Ok(exit::PASS)
            }
            PadicCommand::Restrict { file, output } => {
                let out = padic_cmd::cmd_restrict(&read_in(&file)?).map_err(|e| padic_err(&file, e))?;
                write_out(&output, &out)?;
                Ok(exit::PASS)
            }
            PadicCommand::Pushforward { file, output } => {
                let out = padic_cmd::cmd_pushforward(&read_in(&file)?).map_err(|e| padic_err(&file, e))?;
                write_out(&output, &out)?;
                Ok(exit::PASS)
            }
            PadicCommand::Kummer { file, kmax, lmax, grid } => {
                let rep = padic_cmd::cmd_kummer(&read_in(&file)?, kmax, lmax, grid).map_err(|e| padic_err(&file, e))?;
                print!("{}", padic_cmd::kummer_report_text(&rep));
                Ok(if rep.passed() { exit::PASS } else { exit::CHECK_FAILED })
            }
        },
        Command::ShowConfig => {
            print!("{}", cfg.to_text());
            Ok(exit::PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("eisenkron: {}", f.msg);
            ExitCode::from(f.code as u8)
        }
    }
}
