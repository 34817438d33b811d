use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{BinOp, Expr, ExprKind, Func, Program, Span, UnOp};
use crate::beta::{AugmentedBeta, BetaError};
use crate::conditional::{self, ConditionalPair};
use crate::operators::{self, LimitParams, OpError};
use crate::opinion::{BasicProbabilityVector, Opinion, OpinionError};

/// Variable bindings visible to an expression.
pub type Env = BTreeMap<String, Opinion>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("invalid opinion literal: {0}")]
    Opinion(#[from] OpinionError),
    #[error("invalid beta literal: {0}")]
    Beta(#[from] BetaError),
    #[error("{0}")]
    Operator(#[from] OpError),
}

/// Evaluation failure located at the node that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: Span,
}

/// Result of a successful evaluation plus non-fatal notes such as clipping
/// inside abduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub opinion: Opinion,
    pub diagnostics: Vec<String>,
}

struct Evaluator<'a> {
    env: &'a Env,
    lp: &'a LimitParams,
    diagnostics: Vec<String>,
}

pub fn evaluate(expr: &Expr, env: &Env, lp: &LimitParams) -> Result<Opinion, EvalError> {
    evaluate_with_diagnostics(expr, env, lp).map(|e| e.opinion)
}

pub fn evaluate_with_diagnostics(
    expr: &Expr,
    env: &Env,
    lp: &LimitParams,
) -> Result<Evaluation, EvalError> {
    let mut ev = Evaluator {
        env,
        lp,
        diagnostics: Vec::new(),
    };
    let opinion = ev.eval(expr)?;
    Ok(Evaluation {
        opinion,
        diagnostics: ev.diagnostics,
    })
}

/// Evaluates the `let` bindings in order, each seeing the ones before it,
/// then the body.
pub fn evaluate_program(
    program: &Program,
    env: &Env,
    lp: &LimitParams,
) -> Result<Evaluation, EvalError> {
    let mut scope = env.clone();
    let mut diagnostics = Vec::new();
    for binding in &program.bindings {
        let ev = evaluate_with_diagnostics(&binding.value, &scope, lp)?;
        diagnostics.extend(ev.diagnostics);
        scope.insert(binding.name.clone(), ev.opinion);
    }
    let mut ev = evaluate_with_diagnostics(&program.body, &scope, lp)?;
    diagnostics.append(&mut ev.diagnostics);
    ev.diagnostics = diagnostics;
    Ok(ev)
}

impl Evaluator<'_> {
    fn eval(&mut self, expr: &Expr) -> Result<Opinion, EvalError> {
        let at = |kind: EvalErrorKind| EvalError {
            kind,
            span: expr.span,
        };
        match &expr.kind {
            ExprKind::OpinionLit([b, d, u, a]) => {
                Opinion::new(*b, *d, *u, *a).map_err(|e| at(e.into()))
            }
            ExprKind::BetaLit([r, s, a]) => AugmentedBeta::new(*r, *s, *a)
                .map(|ab| ab.to_opinion())
                .map_err(|e| at(e.into())),
            ExprKind::PvLit([e, u, a]) => BasicProbabilityVector::new(*e, *u, *a)
                .and_then(|pv| pv.to_opinion())
                .map_err(|e| at(e.into())),
            ExprKind::Var(name) => self
                .env
                .get(name)
                .copied()
                .ok_or_else(|| at(EvalErrorKind::UnboundVariable(name.clone()))),
            ExprKind::Unary(UnOp::Not, operand) => Ok(self.eval(operand)?.negate()),
            ExprKind::Binary(op, lhs, rhs) => {
                let x = self.eval(lhs)?;
                let y = self.eval(rhs)?;
                let lp = self.lp;
                let r = match op {
                    BinOp::Add => operators::add(&x, &y),
                    BinOp::Sub => operators::subtract(&x, &y),
                    BinOp::Mult => operators::multiply(&x, &y, lp),
                    BinOp::Div => operators::divide(&x, &y, lp),
                    BinOp::Comult => operators::comultiply(&x, &y, lp),
                    BinOp::Codiv => operators::codivide(&x, &y, lp),
                };
                r.map_err(|e| at(e.into()))
            }
            ExprKind::Call { func, args, scalar } => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a))
                    .collect::<Result<Vec<_>, _>>()?;
                match func {
                    Func::Deduce => {
                        let cond = ConditionalPair::new(vals[1], vals[2]);
                        conditional::deduce(&vals[0], &cond, self.lp).map_err(|e| at(e.into()))
                    }
                    Func::Abduce => {
                        let a_y = scalar.unwrap_or(f64::NAN);
                        let (w, notes) =
                            conditional::abduce(&vals[0], &vals[1], &vals[2], a_y, self.lp)
                                .map_err(|e| at(e.into()))?;
                        let here = format!("{}", expr.span.start);
                        self.diagnostics
                            .extend(notes.into_iter().map(|n| format!("abduce at {here}: {n}")));
                        Ok(w)
                    }
                }
            }
        }
    }
}
