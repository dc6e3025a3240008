//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when `verify-tables` finds a
//! failing identity.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classifier::{
    classify, classify_j, sorted_by_abs, twist_candidates, twist_set, Options, Report, Verdict, DEFAULT_FROBENIUS_BOUND,
    DEFAULT_TRIAL_BOUND,
};
use crate::ec::WeierstrassCurve;
use crate::exactmath::{parse_rational, rat_to_string, Rational};
use crate::gl2::is_applicable;
use crate::tables::{emit, tables, verify_all};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "galrep", version, about = "Mod-l Galois images of elliptic curves over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the mod-l image at each requested prime
    Classify {
        #[command(flatten)]
        curve: CurveArgs,
        /// Comma separated primes
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11,13,17,37")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_FROBENIUS_BOUND)]
        frobenius_bound: u64,
        #[arg(long, default_value_t = DEFAULT_TRIAL_BOUND)]
        trial_bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check every identity of the embedded tables
    VerifyTables {
        /// Print the constants instead of checking them
        #[arg(long)]
        emit: bool,
    },
    /// Show generators and invariants of a named group
    Group {
        #[arg(long)]
        prime: u64,
        /// G3, H5.2, Ns, CM.H1, ... or a full label such as 7.G1
        #[arg(long)]
        label: String,
    },
    /// Trace of Frobenius at a good prime
    Ap {
        #[command(flatten)]
        curve: ModelArgs,
        #[arg(long)]
        p: u64,
    },
    /// The twist set D_r at an odd prime
    TwistSet {
        #[command(flatten)]
        curve: ModelArgs,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = DEFAULT_TRIAL_BOUND)]
        trial_bound: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CurveArgs {
    /// a1,a2,a3,a4,a6
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    /// A,B for y^2 = x^3 + Ax + B
    #[arg(long, allow_hyphen_values = true)]
    short: Option<String>,
    /// j-invariant only
    #[arg(long, allow_hyphen_values = true)]
    j: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    short: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

enum Input {
    Model(WeierstrassCurve),
    J(Rational),
}

fn parse_list(s: &str, n: usize) -> Result<Vec<Rational>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(format!("expected {n} comma separated rationals, got {:?}", s));
    }
    parts.iter().map(|p| parse_rational(p).map_err(|e| format!("{p:?}: {e}"))).collect()
}

fn parse_model(curve: Option<&str>, short: Option<&str>) -> Result<WeierstrassCurve, String> {
    let built = if let Some(c) = curve {
        let a = parse_list(c, 5)?;
        let [a1, a2, a3, a4, a6]: [Rational; 5] = a.try_into().expect("five entries");
        WeierstrassCurve::new(a1, a2, a3, a4, a6)
    } else if let Some(s) = short {
        let v = parse_list(s, 2)?;
        WeierstrassCurve::short(v[0].clone(), v[1].clone())
    } else {
        return Err("no curve given".into());
    };
    built.map_err(|e| e.to_string())
}

fn parse_input(c: &CurveArgs) -> Result<Input, String> {
    if let Some(j) = &c.j {
        return parse_rational(j).map(Input::J).map_err(|e| format!("{j:?}: {e}"));
    }
    parse_model(c.curve.as_deref(), c.short.as_deref()).map(Input::Model)
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            if code == EXIT_OK {
                let _ = write!(out, "{}", e.render());
            } else {
                let _ = write!(err, "{}", e.render());
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match cmd {
        Command::Classify { curve, primes, frobenius_bound, trial_bound, format } => {
            let opts = Options { primes, frobenius_bound, trial_bound };
            let report = match parse_input(&curve)? {
                Input::Model(e) => classify(&e, &opts),
                Input::J(j) => classify_j(&j, &opts),
            }
            .map_err(|e| e.to_string())?;
            match format {
                Format::Json => {
                    let s = serde_json::to_string_pretty(&report.to_json()).map_err(|e| e.to_string())?;
                    writeln!(out, "{s}").map_err(io)?;
                }
                Format::Text => write_text(&report, out).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::VerifyTables { emit: true } => {
            write!(out, "{}", emit()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::VerifyTables { emit: false } => {
            let r = verify_all();
            for c in &r.checks {
                let tag = if c.passed { "ok  " } else { "FAIL" };
                if c.detail.is_empty() {
                    writeln!(out, "{tag} {}", c.name).map_err(io)?;
                } else {
                    writeln!(out, "{tag} {} ({})", c.name, c.detail).map_err(io)?;
                }
            }
            let failed = r.failures().len();
            writeln!(out, "{} checks, {} failed", r.checks.len(), failed).map_err(io)?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Group { prime, label } => {
            let full = if label.starts_with(|c: char| c.is_ascii_digit()) { label } else { format!("{prime}.{label}") };
            let g = tables().group(&full).map_err(|e| e.to_string())?;
            if g.prime() as u64 != prime {
                return Err(format!("label {full} is not at prime {prime}"));
            }
            let inv = g.invariants();
            writeln!(out, "{full}").map_err(io)?;
            let gens: Vec<String> = g.generators().iter().map(|m| m.to_string()).collect();
            writeln!(out, "generators {}", gens.join(" ")).map_err(io)?;
            writeln!(out, "order {}", inv.order).map_err(io)?;
            writeln!(out, "index {}", inv.index).map_err(io)?;
            writeln!(out, "det surjective {}", inv.det_is_full).map_err(io)?;
            writeln!(out, "contains -I {}", inv.has_minus_i).map_err(io)?;
            writeln!(out, "applicable {}", is_applicable(&g)).map_err(io)?;
            writeln!(out, "fingerprints {}", inv.fingerprints.len()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Ap { curve, p } => {
            let e = parse_model(curve.curve.as_deref(), curve.short.as_deref())?;
            let ap = e.ap(p).map_err(|e| e.to_string())?;
            writeln!(out, "{ap}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::TwistSet { curve, prime, r, trial_bound } => {
            let e = parse_model(curve.curve.as_deref(), curve.short.as_deref())?;
            let m = twist_candidates(&e, prime, trial_bound).map_err(|e| e.to_string())?;
            let d = twist_set(&e, prime, r, trial_bound).map_err(|e| e.to_string())?;
            let show = |s| sorted_by_abs(s).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
            writeln!(out, "M_E = {{{}}}", show(&m)).map_err(io)?;
            writeln!(out, "D_{r} = {{{}}}", show(&d)).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn write_text(report: &Report, out: &mut dyn Write) -> std::io::Result<()> {
    let json = report.to_json();
    if let Some(c) = &json.curve {
        writeln!(out, "curve {c}")?;
    }
    writeln!(out, "j {}", json.j)?;
    if let Some(cm) = report.cm {
        writeln!(out, "cm D={} f={}", cm.d, cm.f)?;
    }
    for r in &report.results {
        let body = match &r.verdict {
            Verdict::Surjective => "GL2".to_string(),
            Verdict::Group { label, witness_t: Some(t) } => format!("{label} (t = {})", rat_to_string(t)),
            Verdict::Group { label, witness_t: None } => label.clone(),
            Verdict::ConditionalSurjective { possible } => format!("GL2 unless one of {}", possible.join(", ")),
            Verdict::Undetermined13 { possible } => format!("undetermined, one of GL2, {}", possible.join(", ")),
            Verdict::ModelRequired { possible } => format!("one of {}", possible.join(", ")),
        };
        write!(out, "{:>3}: {body} [{}]", r.prime, r.status.as_str())?;
        if !r.certificates.is_empty() {
            let c: Vec<String> =
                r.certificates.iter().map(|c| format!("{}@p={} ({},{})", c.kind.name(), c.p, c.trace, c.det)).collect();
            write!(out, " excluded: {}", c.join(" "))?;
        }
        if let Some(n) = &r.note {
            write!(out, " -- {n}")?;
        }
        writeln!(out)?;
    }
    let s: Vec<String> = json.exceptional_primes.iter().map(|p| p.to_string()).collect();
    writeln!(out, "non-surjective primes: {{{}}}", s.join(", "))
}
