//! The `belcalc` command line.
//!
//! Exit codes: 0 on success, 1 on parse or domain errors, 2 on usage
//! errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

use crate::beta::{opinion_to_beta, BetaShape};
use crate::expr::{evaluate_program, parse_str, Env, Snippet, Span};
use crate::frames::Bba;
use crate::operators::LimitParams;
use crate::opinion::Opinion;
use crate::oracle::mc_check_beta;
use crate::{fmt_sig, round_sig};

#[derive(Debug, Parser)]
#[command(name = "belcalc", version, about = "Belief calculus over binary frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a belief expression.
    Eval {
        /// Expression, optionally preceded by `let name = expr;` bindings.
        expr: String,
        #[command(flatten)]
        ctx: ExprContext,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
        /// Monte-Carlo check of the result's Beta density with N samples.
        #[arg(long, value_name = "N")]
        samples: Option<u64>,
        /// Seed for the Monte-Carlo check.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert a value between opinion, Beta and probability-vector form.
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        /// Opinion literal, `beta(r,s,a)` or `pv(e,u,a)`.
        value: String,
    },
    /// Coarsen a frame's belief mass assignment into an opinion.
    Coarsen {
        /// Frame file: `{"atoms": [...], "masses": {"t1,t2": 0.6, "*": 0.4}}`.
        frame: PathBuf,
        /// Comma-separated atoms of the target subset.
        #[arg(long)]
        target: String,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
    },
    /// Emit the Beta density of an expression's result as CSV.
    Plot {
        /// Expression whose result supplies the density.
        expr: String,
        #[command(flatten)]
        ctx: ExprContext,
        /// Number of grid points on [0, 1].
        #[arg(long, value_name = "N")]
        samples: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ExprContext {
    /// JSON object mapping names to expression strings.
    #[arg(long, value_name = "FILE")]
    env: Option<PathBuf>,
    /// Limit of (1 - a_x)/(1 - a_y) for `*` when both base rates are 1.
    #[arg(long)]
    eta: Option<f64>,
    /// Limit of a_x/a_y for `|` when both base rates are 0.
    #[arg(long)]
    zeta: Option<f64>,
    /// Belief share of `/` when the base rates are equal.
    #[arg(long)]
    gamma: Option<f64>,
    /// Disbelief share of `%` when the base rates are equal.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Beta,
    Pv,
    Opinion,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Smooth,
    Stable,
}

/// A number written with at most 12 significant digits; integral values
/// carry no fraction.
#[derive(Debug, Clone, Copy)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = round_sig(self.0);
        if !r.is_finite() {
            s.serialize_none()
        } else if r.fract() == 0.0 && r.abs() < 1e15 {
            s.serialize_i64(r as i64)
        } else {
            s.serialize_f64(r)
        }
    }
}

#[derive(Serialize)]
struct OpinionJson {
    b: Num,
    d: Num,
    u: Num,
    a: Num,
}

impl From<&Opinion> for OpinionJson {
    fn from(w: &Opinion) -> Self {
        Self {
            b: Num(w.b()),
            d: Num(w.d()),
            u: Num(w.u()),
            a: Num(w.a()),
        }
    }
}

#[derive(Serialize)]
struct BetaJson {
    r: Num,
    s: Num,
    alpha: Num,
    beta: Num,
}

#[derive(Serialize)]
struct ConvertBetaJson {
    r: Num,
    s: Num,
    a: Num,
    alpha: Num,
    beta: Num,
}

#[derive(Serialize)]
struct PvJson {
    e: Num,
    u: Num,
    a: Num,
}

impl From<&Opinion> for PvJson {
    fn from(w: &Opinion) -> Self {
        let pv = w.to_pv();
        Self {
            e: Num(pv.e()),
            u: Num(pv.u()),
            a: Num(pv.a()),
        }
    }
}

#[derive(Serialize)]
struct Report {
    opinion: OpinionJson,
    expectation: Num,
    beta: Option<BetaJson>,
    pv: PvJson,
    diagnostics: Vec<String>,
}

impl Report {
    fn new(w: &Opinion, diagnostics: Vec<String>) -> Self {
        let beta = opinion_to_beta(w).ok().and_then(|ab| {
            let shape = ab.to_shape().ok()?;
            Some(BetaJson {
                r: Num(ab.r()),
                s: Num(ab.s()),
                alpha: Num(shape.alpha()),
                beta: Num(shape.beta()),
            })
        });
        Self {
            opinion: w.into(),
            expectation: Num(w.expectation().value()),
            beta,
            pv: w.into(),
            diagnostics,
        }
    }
}

/// Failure carrying an optional source excerpt.
struct Failure {
    message: String,
    source: Option<(String, Span)>,
}

impl Failure {
    fn plain(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            source: None,
        }
    }

    fn at(message: impl Into<String>, src: &str, span: Span) -> Self {
        Self {
            message: message.into(),
            source: Some((src.to_string(), span)),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if let Some((src, span)) = f.source {
                let _ = writeln!(err, "{}", Snippet { src: &src, span });
            }
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Eval {
            expr,
            ctx,
            output,
            samples,
            seed,
        } => {
            let (w, mut diagnostics) = eval_expr(&expr, &ctx)?;
            if let Some(n) = samples {
                diagnostics.push(monte_carlo_note(&w, n, seed));
            }
            emit(&w, diagnostics, output, out, err)
        }
        Command::Convert { to, value } => convert(to, &value, out),
        Command::Coarsen {
            frame,
            target,
            method,
            output,
        } => {
            let text = read(&frame)?;
            let bba = Bba::from_json_str(&text)
                .map_err(|e| Failure::plain(format!("{}: {e}", frame.display())))?;
            let x = bba
                .frame()
                .parse_subset(&target)
                .map_err(|e| Failure::plain(format!("--target {target}: {e}")))?;
            let w = match method {
                Method::Smooth => bba.smooth_coarsen(x),
                Method::Stable => bba.stable_coarsen(x),
            }
            .map_err(|e| Failure::plain(e.to_string()))?;
            emit(&w, Vec::new(), output, out, err)
        }
        Command::Plot {
            expr,
            ctx,
            samples,
            out: path,
        } => {
            let (w, _) = eval_expr(&expr, &ctx)?;
            let shape = opinion_to_beta(&w)
                .and_then(|ab| ab.to_shape())
                .map_err(|e| Failure::plain(e.to_string()))?;
            let csv = plot_csv(&shape, samples, err)?;
            match path {
                Some(p) => fs::write(&p, csv)
                    .map_err(|e| Failure::plain(format!("{}: {e}", p.display()))),
                None => out
                    .write_all(csv.as_bytes())
                    .map_err(|e| Failure::plain(e.to_string())),
            }
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::plain(format!("{}: {e}", path.display())))
}

fn limit_params(ctx: &ExprContext) -> Result<LimitParams, Failure> {
    LimitParams::new(ctx.eta, ctx.zeta, ctx.gamma, ctx.delta)
        .map_err(|e| Failure::plain(e.to_string()))
}

/// Evaluates each entry of an environment file on its own; entries cannot
/// refer to each other.
fn load_env(path: &PathBuf, lp: &LimitParams) -> Result<Env, Failure> {
    let text = read(path)?;
    let raw: BTreeMap<String, String> = serde_json::from_str(&text)
        .map_err(|e| Failure::plain(format!("{}: {e}", path.display())))?;
    let empty = Env::new();
    let mut env = Env::new();
    for (name, src) in raw {
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Failure::plain(format!(
                "{}: `{name}` is not a valid identifier",
                path.display()
            )));
        }
        let prog = parse_str(&src)
            .map_err(|e| Failure::at(format!("in `{name}`: {e}"), &src, e.span()))?;
        let ev = evaluate_program(&prog, &empty, lp)
            .map_err(|e| Failure::at(format!("in `{name}`: {e}"), &src, e.span))?;
        env.insert(name, ev.opinion);
    }
    Ok(env)
}

fn eval_expr(src: &str, ctx: &ExprContext) -> Result<(Opinion, Vec<String>), Failure> {
    let lp = limit_params(ctx)?;
    let env = match &ctx.env {
        Some(p) => load_env(p, &lp)?,
        None => Env::new(),
    };
    let prog = parse_str(src).map_err(|e| Failure::at(e.to_string(), src, e.span()))?;
    let ev = evaluate_program(&prog, &env, &lp)
        .map_err(|e| Failure::at(format!("{e} at {}", e.span.start), src, e.span))?;
    Ok((ev.opinion, ev.diagnostics))
}

fn monte_carlo_note(w: &Opinion, n: u64, seed: u64) -> String {
    match mc_check_beta(w, n, seed) {
        Ok(r) => format!(
            "monte-carlo: {} samples, mean {} vs expectation {} (stderr {}): {}",
            r.samples,
            fmt_sig(r.mean),
            fmt_sig(r.expected),
            fmt_sig(r.stderr),
            if r.pass { "pass" } else { "FAIL" }
        ),
        Err(e) => format!("monte-carlo skipped: {e}"),
    }
}

fn emit(
    w: &Opinion,
    diagnostics: Vec<String>,
    output: Output,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let io = |e: std::io::Error| Failure::plain(e.to_string());
    match output {
        Output::Json => {
            let json = serde_json::to_string(&Report::new(w, diagnostics))
                .map_err(|e| Failure::plain(e.to_string()))?;
            writeln!(out, "{json}").map_err(io)
        }
        Output::Text => {
            writeln!(out, "{w}").map_err(io)?;
            writeln!(out, "E={}", fmt_sig(w.expectation().value())).map_err(io)?;
            for d in diagnostics {
                writeln!(err, "note: {d}").map_err(io)?;
            }
            Ok(())
        }
    }
}

fn convert(to: Target, value: &str, out: &mut dyn Write) -> CmdResult {
    let ctx = ExprContext {
        env: None,
        eta: None,
        zeta: None,
        gamma: None,
        delta: None,
    };
    let (w, _) = eval_expr(value, &ctx)?;
    let json = match to {
        Target::Opinion => serde_json::to_string(&OpinionJson::from(&w)),
        Target::Pv => serde_json::to_string(&PvJson::from(&w)),
        Target::Beta => {
            let ab = opinion_to_beta(&w).map_err(|e| Failure::plain(e.to_string()))?;
            let shape = ab.to_shape().map_err(|e| Failure::plain(e.to_string()))?;
            serde_json::to_string(&ConvertBetaJson {
                r: Num(ab.r()),
                s: Num(ab.s()),
                a: Num(ab.a()),
                alpha: Num(shape.alpha()),
                beta: Num(shape.beta()),
            })
        }
    }
    .map_err(|e| Failure::plain(e.to_string()))?;
    writeln!(out, "{json}").map_err(|e| Failure::plain(e.to_string()))
}

fn plot_csv(shape: &BetaShape, n: usize, err: &mut dyn Write) -> Result<String, Failure> {
    let grid = shape.grid(n).map_err(|e| Failure::plain(e.to_string()))?;
    let mut csv = String::from("p,density\n");
    for g in &grid {
        if g.substituted {
            let _ = writeln!(
                err,
                "note: density is singular at the endpoint; evaluated at p={} instead",
                fmt_sig(g.p)
            );
        }
        csv.push_str(&format!("{},{}\n", fmt_sig(g.p), fmt_sig(g.density)));
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("belcalc").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_json() {
        let (code, out, _) = call(&["eval", "(0.7,0.1,0.2,0.5)*(0.5,0.3,0.2,0.4)"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["expectation"].as_f64(), Some(0.464));
        assert_eq!(v["opinion"]["b"].as_f64(), Some(0.4225));
        assert_eq!(v["beta"]["r"].as_f64(), Some(4.07228915663));
        assert!(out.starts_with(r#"{"opinion":{"b":0.4225,"d":0.37,"u":0.2075,"a":0.2},"#));
    }

    #[test]
    fn convert_to_beta() {
        let (code, out, _) = call(&["convert", "--to", "beta", "(0.7,0.1,0.2,0.5)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "{\"r\":7,\"s\":1,\"a\":0.5,\"alpha\":8,\"beta\":2}\n");
        let (code, _, err) = call(&["convert", "--to", "beta", "(0.3,0.7,0,0.5)"]);
        assert_eq!(code, 1);
        assert!(err.contains("dogmatic"));
    }

    #[test]
    fn dogmatic_result_has_null_beta() {
        let (_, out, _) = call(&["eval", "(0.3,0.7,0,0.5)"]);
        assert!(out.contains("\"beta\":null"));
    }

    #[test]
    fn text_output() {
        let (code, out, _) = call(&["eval", "--output", "text", "!(0.7,0.1,0.2,0.5)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "(0.1,0.7,0.2,0.5)\nE=0.2\n");
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = call(&["eval", "0.7 @ 0.1"]);
        assert_eq!(code, 1);
        assert!(err.contains("1 | 0.7 @ 0.1\n  |     ^"), "{err}");
        let (code, _, err) = call(&["eval", "(0.5,0.2,0.3,0.2)/(0.5,0.3,0.2,0.4)"]);
        assert_eq!(code, 1);
        assert!(err.contains("not divisible"), "{err}");
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        let (code, _, _) = call(&["eval", "x", "--gamma", "2"]);
        assert_eq!(code, 1);
        let (code, _, _) = call(&["eval", "x", "--gamma", "abc"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn monte_carlo_flag() {
        let (code, out, _) = call(&[
            "eval",
            "beta(7,1,0.5)",
            "--samples",
            "1000",
            "--seed",
            "3",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let note = v["diagnostics"][0].as_str().unwrap();
        assert!(note.starts_with("monte-carlo: 1000 samples"), "{note}");
        let (_, again, _) = call(&[
            "eval",
            "beta(7,1,0.5)",
            "--samples",
            "1000",
            "--seed",
            "3",
        ]);
        assert_eq!(out, again);
    }

    #[test]
    fn plot_integrates_to_one() {
        let (code, out, _) = call(&["plot", "beta(7,1,0.5)", "--samples", "2001"]);
        assert_eq!(code, 0);
        let rows: Vec<(f64, f64)> = out
            .lines()
            .skip(1)
            .map(|l| {
                let (p, d) = l.split_once(',').unwrap();
                (p.parse().unwrap(), d.parse().unwrap())
            })
            .collect();
        assert_eq!(rows.len(), 2001);
        let area: f64 = rows
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum();
        assert!((area - 1.0).abs() < 1e-3, "{area}");
    }

    #[test]
    fn files() {
        let dir = tempfile::tempdir().unwrap();
        let env = dir.path().join("env.json");
        fs::write(&env, r#"{"x":"(0.7,0.1,0.2,0.5)","y":"beta(7,1,0.5)"}"#).unwrap();
        let env = env.to_str().unwrap();
        let (code, out, _) = call(&["eval", "--env", env, "--output", "text", "x-y|x"]);
        assert_eq!(code, 1, "{out}");
        let (code, out, _) = call(&["eval", "--env", env, "--output", "text", "!x*y"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("E=0.16\n"), "{out}");

        let frame = dir.path().join("frame.json");
        fs::write(&frame, r#"{"atoms":["t1","t2","t3"],"masses":{"t1,t2":0.6,"*":0.4}}"#).unwrap();
        let frame = frame.to_str().unwrap();
        let args = ["coarsen", frame, "--target", "t1", "--method", "smooth", "--output", "text"];
        let (code, out, _) = call(&args);
        assert_eq!(code, 0);
        assert_eq!(out, "(0.15,0,0.85,0.333333333333)\nE=0.433333333333\n");
        let (code, _, err) = call(&["coarsen", frame, "--target", "t1", "--method", "stable"]);
        assert_eq!(code, 1);
        assert!(err.contains("not a focal element"), "{err}");

        let csv = dir.path().join("pdf.csv");
        let args = ["plot", "beta(0,0,0.5)", "--samples", "3", "--out", csv.to_str().unwrap()];
        let (code, out, _) = call(&args);
        assert_eq!((code, out.as_str()), (0, ""));
        assert_eq!(fs::read_to_string(&csv).unwrap(), "p,density\n0,1\n0.5,1\n1,1\n");
    }
}
