//! `piforge`: singular moduli, the elliptic alpha function and
//! Ramanujan-type series for `1/π^{2ν}` from the command line.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use piforge::alpha::{alpha_direct, alpha_via, AlphaRoute};
use piforge::bigreal::{matched_digits, BigReal, MIN_PREC};
use piforge::elliptic::singular_modulus;
use piforge::identities::{identity_suite, literal_sentinels};
use piforge::rr::{r68_example, y_table, y_value};
use piforge::series::{build_series, max_terms_for, replay_paper, spec_to_json, verify, SCHEMA};
use piforge::{Error, PosRational};
use serde_json::{json, Value};

const DEFAULT_PREC: usize = 512;
const MAX_DEFAULT_TERMS: usize = 200;
/// Precision at which the verify-paper digit targets apply unscaled.
const REFERENCE_PREC: f64 = 512.0;

#[derive(Parser, Debug)]
#[command(name = "piforge", version, about = "Singular moduli, elliptic alpha values and Ramanujan-type series for 1/pi^(2nu)")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "PIFORGE_PREC_BITS", default_value_t = DEFAULT_PREC, value_parser = parse_prec)]
    prec: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singular modulus k_r and its complete elliptic integrals.
    Modulus {
        /// Positive rational as "p" or "p/q".
        r: PosRational,
    },
    /// Elliptic alpha function a(r), directly or through a reduction.
    Alpha {
        r: PosRational,
        #[arg(long, default_value = "direct", value_parser = parse_route)]
        route: AlphaRoute,
    },
    /// Build, evaluate and verify the series for (nu, r).
    Series {
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        r: PosRational,
        /// Terms to sum; defaults to as many as the precision can check.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        terms: Option<u64>,
        /// Write the series as JSON to this path.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Replay the printed series, the Y-value table and the identity suite.
    VerifyPaper,
}

fn parse_prec(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < MIN_PREC {
        return Err(format!("precision must be at least {MIN_PREC} bits"));
    }
    Ok(v)
}

fn parse_route(s: &str) -> Result<AlphaRoute, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::NonConvergent(_) | Error::Parse(_) | Error::LengthMismatch { .. } => 2,
        Error::InsufficientPrecision(_) | Error::PrecisionTooLow { .. } => 3,
        _ => 1,
    }
}

struct Ctx {
    prec: usize,
    format: Format,
}

impl Ctx {
    fn digits(&self) -> usize {
        BigReal::decimal_digits(self.prec)
    }

    fn dec(&self, v: &BigReal) -> String {
        v.to_sci_string(self.digits())
    }

    fn emit(&self, text: &[String], doc: Value) {
        match self.format {
            Format::Text => {
                for l in text {
                    println!("{l}");
                }
            }
            Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("json value")),
        }
    }
}

fn cmd_modulus(c: &Ctx, r: &PosRational) -> Result<bool, Error> {
    let m = singular_modulus(r, c.prec)?;
    let a = alpha_direct(r, c.prec)?;
    let ratio = m.big_k_complement() / &m.big_k;
    let resid = (&ratio - m.sqrt_r()).abs().log2_abs();
    let threshold = -(c.prec as i64) + 16;
    let ok = resid < threshold as f64;
    let text = vec![
        format!("r       = {r}"),
        format!("q       = {}", c.dec(&m.q)),
        format!("k       = {}", c.dec(&m.k)),
        format!("k'      = {}", c.dec(&m.kprime)),
        format!("K       = {}", c.dec(&m.big_k)),
        format!("E       = {}", c.dec(&m.big_e)),
        format!("a(r)    = {}", c.dec(&a.value)),
        format!("K'/K - sqrt(r): residual 2^{resid:.1}, threshold 2^{threshold}"),
    ];
    let doc = json!({
        "schema": SCHEMA,
        "command": "modulus",
        "r": r.to_string(),
        "prec_bits": c.prec,
        "q": c.dec(&m.q),
        "k": c.dec(&m.k),
        "kprime": c.dec(&m.kprime),
        "big_k": c.dec(&m.big_k),
        "big_e": c.dec(&m.big_e),
        "alpha": c.dec(&a.value),
        "residual_log2": round1(resid),
        "threshold_log2": threshold,
        "passed": ok,
    });
    c.emit(&text, doc);
    Ok(ok)
}

fn round1(v: f64) -> Value {
    if v.is_finite() {
        json!((v * 10.0).round() / 10.0)
    } else {
        Value::Null
    }
}

fn cmd_alpha(c: &Ctx, r: &PosRational, route: AlphaRoute) -> Result<bool, Error> {
    let v = alpha_via(route, r, c.prec)?;
    let mut text = vec![format!("a({r}) = {}", c.dec(&v.value)), format!("route = {route}")];
    let mut doc = json!({
        "schema": SCHEMA,
        "command": "alpha",
        "r": r.to_string(),
        "prec_bits": c.prec,
        "route": route.to_string(),
        "value": c.dec(&v.value),
        "in_sanity_window": v.in_sanity_window(),
    });
    let mut ok = true;
    if route != AlphaRoute::Direct {
        let d = alpha_direct(r, c.prec)?;
        let resid = (&v.value - &d.value).abs().log2_abs();
        let threshold = -(c.prec as i64) + 32;
        ok = resid < threshold as f64;
        text.push(format!("direct = {}", c.dec(&d.value)));
        text.push(format!("|via {route} - direct|: residual 2^{resid:.1}, threshold 2^{threshold}"));
        doc["direct"] = json!(c.dec(&d.value));
        doc["residual_log2"] = round1(resid);
        doc["threshold_log2"] = json!(threshold);
    }
    doc["passed"] = json!(ok);
    text.push(if ok { "PASS" } else { "FAIL" }.to_string());
    c.emit(&text, doc);
    Ok(ok)
}

fn cmd_series(c: &Ctx, nu: u32, r: &PosRational, terms: Option<u64>, emit: Option<&PathBuf>) -> Result<bool, Error> {
    let spec = build_series(nu, r, c.prec)?;
    let dpt = spec.dpt();
    let n = match terms {
        Some(t) => t as usize,
        None => max_terms_for(dpt, c.prec).min(MAX_DEFAULT_TERMS),
    };
    let rep = verify(&spec, n, c.prec)?;
    if let Some(path) = emit {
        fs::write(path, spec_to_json(&spec) + "\n")
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = vec![
        format!("nu = {nu}, r = {r}, terms = {n}"),
        format!("x   = {}", c.dec(&spec.x)),
        format!("dpt = {dpt:.6}"),
        format!("g   = {}", c.dec(&spec.g)),
        format!(
            "digits matched = {:.1} (independent pi {:.1}), predicted {:.1}, threshold {:.1}",
            rep.matched_digits, rep.matched_digits_reference, rep.predicted_digits, rep.threshold_digits
        ),
        format!("{}", if rep.passed { "PASS" } else { "FAIL" }),
    ];
    let doc = json!({
        "schema": SCHEMA,
        "command": "series",
        "nu": nu,
        "r": r.to_string(),
        "prec_bits": c.prec,
        "terms": n,
        "x": c.dec(&spec.x),
        "dpt": dpt,
        "g": c.dec(&spec.g),
        "bracket": spec.bracket.iter().map(|b| c.dec(b)).collect::<Vec<_>>(),
        "matched_digits": round1(rep.matched_digits),
        "matched_digits_reference": round1(rep.matched_digits_reference),
        "predicted_digits": round1(rep.predicted_digits),
        "threshold_digits": round1(rep.threshold_digits),
        "passed": rep.passed,
    });
    c.emit(&text, doc);
    Ok(rep.passed)
}

struct Item {
    name: String,
    digits: f64,
    target: f64,
    passed: bool,
}

impl Item {
    fn check(name: impl Into<String>, digits: f64, target: f64) -> Self {
        Self { name: name.into(), digits, target, passed: digits >= target }
    }

    fn line(&self) -> String {
        format!(
            "{} {}: {:.1} digits, target {:.1}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.digits,
            self.target
        )
    }
}

fn cmd_verify_paper(c: &Ctx) -> Result<bool, Error> {
    let scale = (c.prec as f64 / REFERENCE_PREC).min(1.0);
    let mut items: Vec<Item> = Vec::new();
    let mut series = Vec::new();
    for rep in replay_paper(c.prec)? {
        items.push(Item {
            name: format!("series {} (N={}, independent pi {:.1})", rep.name, rep.terms, rep.matched_digits_reference),
            digits: rep.matched_digits,
            target: rep.threshold_digits,
            passed: rep.passed,
        });
        series.push(rep);
    }
    for e in y_table() {
        let v = y_value(&e.s, c.prec)?;
        items.push(Item::check(e.label, matched_digits(&v, &(e.closed_form)(c.prec)), 40.0 * scale));
    }
    let r68 = r68_example(c.prec)?;
    let d68 = (r68.half_gap.log10_abs() - r68.residual.log10_abs()).max(0.0);
    items.push(Item::check("Y(68/5) / Y(17/5) example", d68.min(BigReal::decimal_digits(c.prec) as f64), 30.0 * scale));
    for chk in identity_suite(c.prec)? {
        let d = chk.digits();
        items.push(Item::check(chk.name.clone(), d, 60.0 * scale));
    }
    for chk in literal_sentinels(c.prec)? {
        let d = chk.digits();
        items.push(Item {
            name: format!("literal form rejected: {}", chk.name),
            digits: d,
            target: 2.0,
            passed: d < 2.0,
        });
    }
    let ok = items.iter().all(|i| i.passed);
    let mut text: Vec<String> = items.iter().map(Item::line).collect();
    text.push(format!(
        "{}: {} of {} checks passed",
        if ok { "PASS" } else { "FAIL" },
        items.iter().filter(|i| i.passed).count(),
        items.len()
    ));
    let doc = json!({
        "schema": SCHEMA,
        "command": "verify-paper",
        "prec_bits": c.prec,
        "series": series,
        "checks": items.iter().map(|i| json!({
            "name": i.name,
            "digits": round1(i.digits),
            "target": round1(i.target),
            "passed": i.passed,
        })).collect::<Vec<_>>(),
        "passed": ok,
    });
    c.emit(&text, doc);
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = Ctx { prec: cli.prec, format: cli.format };
    let res = match &cli.command {
        Command::Modulus { r } => cmd_modulus(&c, r),
        Command::Alpha { r, route } => cmd_alpha(&c, r, *route),
        Command::Series { nu, r, terms, emit } => cmd_series(&c, *nu, r, *terms, emit.as_ref()),
        Command::VerifyPaper => cmd_verify_paper(&c),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
