//! Independent checks of the belief calculus against plain probability.
//!
//! Every belief operator has a probability counterpart, and the expectation
//! of a belief expression must equal the probability expression evaluated on
//! the expectations of its leaves. [`scalar_eval`] evaluates that probability
//! expression directly, without touching opinions beyond their
//! expectations.

pub mod gen;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::beta::{opinion_to_beta, BetaError};
use crate::expr::{
    evaluate_with_diagnostics, format_expr, BinOp, Env, EvalError, Expr, ExprKind, Func, Program,
    UnOp,
};
use crate::frames::{Bba, FrameError, Subset};
use crate::operators::LimitParams;
use crate::opinion::Opinion;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("division by zero probability")]
    DivisionByZero,
    #[error("codivision by probability one")]
    CodivisionByOne,
}

/// Expectation of a belief expression computed with probability arithmetic.
pub fn scalar_eval(expr: &Expr, env: &Env) -> Result<f64, ScalarError> {
    let scope: BTreeMap<&str, f64> = env
        .iter()
        .map(|(k, w)| (k.as_str(), w.expectation().value()))
        .collect();
    eval(expr, &scope)
}

/// [`scalar_eval`] over a program; bindings are evaluated in order.
pub fn scalar_eval_program(program: &Program, env: &Env) -> Result<f64, ScalarError> {
    let mut scope: BTreeMap<&str, f64> = env
        .iter()
        .map(|(k, w)| (k.as_str(), w.expectation().value()))
        .collect();
    for b in &program.bindings {
        let v = eval(&b.value, &scope)?;
        scope.insert(b.name.as_str(), v);
    }
    eval(&program.body, &scope)
}

fn eval(expr: &Expr, scope: &BTreeMap<&str, f64>) -> Result<f64, ScalarError> {
    Ok(match &expr.kind {
        ExprKind::OpinionLit([b, _, u, a]) => b + a * u,
        ExprKind::BetaLit([r, s, a]) => (r + 2.0 * a) / (r + s + 2.0),
        ExprKind::PvLit([e, _, _]) => *e,
        ExprKind::Var(name) => *scope
            .get(name.as_str())
            .ok_or_else(|| ScalarError::UnboundVariable(name.clone()))?,
        ExprKind::Unary(UnOp::Not, x) => 1.0 - eval(x, scope)?,
        ExprKind::Binary(op, lhs, rhs) => {
            let p = eval(lhs, scope)?;
            let q = eval(rhs, scope)?;
            match op {
                BinOp::Add => p + q,
                BinOp::Sub => p - q,
                BinOp::Mult => p * q,
                BinOp::Div => {
                    if q == 0.0 {
                        return Err(ScalarError::DivisionByZero);
                    }
                    p / q
                }
                BinOp::Comult => p + q - p * q,
                BinOp::Codiv => {
                    if q == 1.0 {
                        return Err(ScalarError::CodivisionByOne);
                    }
                    (p - q) / (1.0 - q)
                }
            }
        }
        ExprKind::Call { func, args, scalar } => {
            let v = args
                .iter()
                .map(|a| eval(a, scope))
                .collect::<Result<Vec<_>, _>>()?;
            match func {
                Func::Deduce => total_probability(v[0], v[1], v[2]),
                Func::Abduce => {
                    let a_y = scalar.unwrap_or(f64::NAN);
                    let (pos, neg) = bayes(v[1], v[2], a_y)?;
                    total_probability(v[0], pos, neg)
                }
            }
        }
    })
}

fn total_probability(px: f64, p_pos: f64, p_neg: f64) -> f64 {
    px * p_pos + (1.0 - px) * p_neg
}

/// `P(y|x)` and `P(y|x̄)` from `P(x|y)`, `P(x|ȳ)` and `P(y)`.
fn bayes(px_y: f64, px_ny: f64, py: f64) -> Result<(f64, f64), ScalarError> {
    let den_pos = py * px_y + (1.0 - py) * px_ny;
    let den_neg = py * (1.0 - px_y) + (1.0 - py) * (1.0 - px_ny);
    if den_pos == 0.0 || den_neg == 0.0 {
        return Err(ScalarError::DivisionByZero);
    }
    Ok((py * px_y / den_pos, py * (1.0 - px_y) / den_neg))
}

/// Comparison of a belief expression's expectation with its probability
/// counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomomorphismReport {
    pub expression: String,
    pub belief: f64,
    pub probability: f64,
    pub difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Evaluates both sides. Fails only when the belief expression itself does
/// not evaluate; a mismatch is reported through `pass`.
pub fn check_homomorphism(
    expr: &Expr,
    env: &Env,
    lp: &LimitParams,
    tol: f64,
) -> Result<HomomorphismReport, EvalError> {
    let belief = evaluate_with_diagnostics(expr, env, lp)?
        .opinion
        .expectation()
        .value();
    let probability = scalar_eval(expr, env).unwrap_or(f64::NAN);
    let difference = (belief - probability).abs();
    Ok(HomomorphismReport {
        expression: format_expr(expr),
        belief,
        probability,
        difference,
        tolerance: tol,
        pass: difference <= tol,
    })
}

/// Number of independent random streams used by [`mc_check_beta`]. Fixed,
/// so results do not depend on the number of worker threads.
pub const MC_STREAMS: u64 = 16;

/// Monte-Carlo comparison of an opinion's expectation with the mean of its
/// Beta density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub samples: u64,
    pub seed: u64,
    pub expected: f64,
    pub mean: f64,
    pub stderr: f64,
    pub pass: bool,
}

/// Draws `n` samples from the Beta density of `w`. Passes iff the sample
/// mean lies within four standard errors of `E(w)`; the standard error comes
/// from the exact Beta variance.
pub fn mc_check_beta(w: &Opinion, n: u64, seed: u64) -> Result<McReport, BetaError> {
    let shape = opinion_to_beta(w)?.to_shape()?;
    let n = n.max(1);
    let sums: Vec<f64> = (0..MC_STREAMS)
        .into_par_iter()
        .map(|stream| {
            let count = n / MC_STREAMS + u64::from(stream < n % MC_STREAMS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            (0..count).map(|_| shape.sample(&mut rng)).sum::<f64>()
        })
        .collect();
    let mean = sums.iter().sum::<f64>() / n as f64;
    let expected = w.expectation().value();
    let stderr = (shape.variance() / n as f64).sqrt();
    Ok(McReport {
        samples: n,
        seed,
        expected,
        mean,
        stderr,
        pass: (mean - expected).abs() <= 4.0 * stderr,
    })
}

/// Frame functions of one subset computed by enumerating the power set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameReadout {
    pub b: f64,
    pub d: f64,
    pub u: f64,
    pub a: f64,
    pub e: f64,
}

/// Largest frame [`brute_force_frame`] will enumerate.
pub const BRUTE_FORCE_MAX_ATOMS: usize = 16;

pub fn brute_force_frame(bba: &Bba, x: Subset) -> Result<FrameReadout, FrameError> {
    let n = bba.frame().len();
    if n > BRUTE_FORCE_MAX_ATOMS {
        return Err(FrameError::PreconditionViolated(format!(
            "brute force needs at most {BRUTE_FORCE_MAX_ATOMS} atoms, frame has {n}"
        )));
    }
    let xb = x.bits();
    if xb == 0 {
        return Err(FrameError::EmptyTarget);
    }
    if xb >> n != 0 {
        return Err(FrameError::ForeignSubset);
    }
    let mut r = FrameReadout {
        b: 0.0,
        d: 0.0,
        u: 0.0,
        a: xb.count_ones() as f64 / n as f64,
        e: 0.0,
    };
    for bits in 1u64..(1 << n) {
        let m = bba.mass(Subset::from_bits(bits));
        if m == 0.0 {
            continue;
        }
        let common = bits & xb;
        if common == bits {
            r.b += m;
        } else if common == 0 {
            r.d += m;
        } else {
            r.u += m;
        }
        r.e += m * common.count_ones() as f64 / bits.count_ones() as f64;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_str;
    use crate::frames::FrameOfDiscernment;

    fn op(b: f64, d: f64, u: f64, a: f64) -> Opinion {
        Opinion::new(b, d, u, a).unwrap()
    }

    fn scalar(s: &str, env: &Env) -> f64 {
        scalar_eval_program(&parse_str(s).unwrap(), env).unwrap()
    }

    #[test]
    fn scalar_fixtures() {
        let mut env = Env::new();
        env.insert("x".into(), op(0.7, 0.1, 0.2, 0.5));
        env.insert("h".into(), op(0.5, 0.5, 0.0, 0.5));
        assert!((scalar("(0.7,0.1,0.2,0.5)*(0.5,0.3,0.2,0.4)", &env) - 0.464).abs() < 1e-15);
        assert!((scalar("!x", &env) - 0.2).abs() < 1e-15);
        assert!((scalar("h|h", &env) - 0.75).abs() < 1e-15);
        assert!((scalar("x+h", &env) - 1.3).abs() < 1e-15);
        assert!((scalar("x-h", &env) - 0.3).abs() < 1e-15);
        assert!((scalar("h/x", &env) - 0.625).abs() < 1e-15);
        assert!((scalar("x%h", &env) - 0.6).abs() < 1e-15);
        assert!((scalar("beta(7,1,0.5)", &env) - 0.8).abs() < 1e-15);
        assert!((scalar("deduce(x, h, (0,1,0,0.5))", &env) - 0.4).abs() < 1e-15);
        // P(y|x) = 0.1*0.9 / (0.1*0.9 + 0.9*0.2) = 1/3 and P(x) = 1
        let s = scalar("abduce((1,0,0,0.5), (0.9,0.1,0,0.5), (0.2,0.8,0,0.5), 0.1)", &env);
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
        let err = scalar_eval(&parse_str("x/(0,1,0,0.5)").unwrap().body, &env);
        assert_eq!(err, Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn homomorphism_on_product() {
        let e = parse_str("(0.7,0.1,0.2,0.5)*(0.5,0.3,0.2,0.4)").unwrap().body;
        let r = check_homomorphism(&e, &Env::new(), &LimitParams::default(), 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.expression, "(0.7,0.1,0.2,0.5)*(0.5,0.3,0.2,0.4)");
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let w = op(0.7, 0.1, 0.2, 0.5);
        let a = mc_check_beta(&w, 20_000, 7).unwrap();
        let b = mc_check_beta(&w, 20_000, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.pass, "{a:?}");
        let want = (0.8f64 * 0.2 / 11.0).sqrt() / 20_000f64.sqrt();
        assert!((a.stderr - want).abs() < 1e-15);
        assert!(mc_check_beta(&op(0.3, 0.7, 0.0, 0.5), 10, 1).is_err());
    }

    #[test]
    fn brute_force_simple_bbas() {
        let frame = FrameOfDiscernment::numbered(3).unwrap();
        let x = frame.parse_subset("t1,t2").unwrap();
        let v = brute_force_frame(&Bba::vacuous(frame.clone()), x).unwrap();
        assert_eq!((v.b, v.d, v.u), (0.0, 0.0, 1.0));
        assert!((v.a - 2.0 / 3.0).abs() < 1e-15 && (v.e - 2.0 / 3.0).abs() < 1e-15);
        let bayes = Bba::new(
            frame.clone(),
            [
                (Subset::atom(0), 0.2),
                (Subset::atom(1), 0.3),
                (Subset::atom(2), 0.5),
            ],
        )
        .unwrap();
        let r = brute_force_frame(&bayes, x).unwrap();
        assert_eq!(r.u, 0.0);
        assert!((r.b - 0.5).abs() < 1e-15);
    }
}
