//! Conditional deduction and abduction built from the operator algebra.
//!
//! Abduction reverses the conditionals `ω_{x|y}`, `ω_{x|ȳ}` with a
//! Bayes-style quotient. The complement term in the denominator is read as
//! the opinion `ω_ȳ = ¬(0, 0, 1, a_y)` multiplied by `ω_{x|ȳ}`; this is the
//! reading that reproduces `P(ȳ) P(x|ȳ)` at expectation level.

use crate::operators::{self, LimitParams, OpError};
use crate::opinion::Opinion;

/// Positive and negative conditionals `ω_{y|x}` and `ω_{y|x̄}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalPair {
    pub pos: Opinion,
    pub neg: Opinion,
}

impl ConditionalPair {
    pub fn new(pos: Opinion, neg: Opinion) -> Self {
        Self { pos, neg }
    }
}

/// Reversed conditionals together with notes about any clipping applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Reversed {
    pub pair: ConditionalPair,
    pub diagnostics: Vec<String>,
}

/// `ω_{y‖x} = ω_x · ω_{y|x} + ω_x̄ · ω_{y|x̄}`.
pub fn deduce(
    wx: &Opinion,
    cond: &ConditionalPair,
    lp: &LimitParams,
) -> Result<Opinion, OpError> {
    let pos = operators::multiply(wx, &cond.pos, lp)?;
    let neg = operators::multiply(&wx.negate(), &cond.neg, lp)?;
    operators::add(&pos, &neg)
}

/// Derives `ω_{y|x}`, `ω_{y|x̄}` from `ω_{x|y}`, `ω_{x|ȳ}` and the base rate
/// of `y`.
pub fn reverse_conditionals(
    cx_pos: &Opinion,
    cx_neg: &Opinion,
    a_y: f64,
    lp: &LimitParams,
) -> Result<Reversed, OpError> {
    if !(a_y > 0.0 && a_y < 1.0) {
        return Err(OpError::DegenerateBaseRate(a_y));
    }
    let wy = Opinion::vacuous(a_y).map_err(|_| OpError::DegenerateBaseRate(a_y))?;
    let wny = wy.negate();
    let mut diagnostics = Vec::new();
    let mut quotient = |p: &Opinion, n: &Opinion, label: &str| -> Result<Opinion, OpError> {
        let num = operators::multiply(&wy, p, lp)?;
        let den = operators::add(&num, &operators::multiply(&wny, n, lp)?)?;
        let (q, note) = operators::divide_clipped(&num, &den, lp)?;
        if let Some(note) = note {
            diagnostics.push(format!("{label}: {note}"));
        }
        Ok(q)
    };
    let pos = quotient(cx_pos, cx_neg, "ω_{y|x}")?;
    let neg = quotient(&cx_pos.negate(), &cx_neg.negate(), "ω_{y|x̄}")?;
    Ok(Reversed {
        pair: ConditionalPair { pos, neg },
        diagnostics,
    })
}

/// Deduction through reversed conditionals: `ω_{y‖x}` from `ω_x`,
/// `ω_{x|y}`, `ω_{x|ȳ}` and `a_y`.
pub fn abduce(
    wx: &Opinion,
    cx_pos: &Opinion,
    cx_neg: &Opinion,
    a_y: f64,
    lp: &LimitParams,
) -> Result<(Opinion, Vec<String>), OpError> {
    let rev = reverse_conditionals(cx_pos, cx_neg, a_y, lp)?;
    let w = deduce(wx, &rev.pair, lp)?;
    Ok((w, rev.diagnostics))
}
