//! The binary opinion algebra.
//!
//! | operator        | symbol | logic        |
//! |-----------------|--------|--------------|
//! | addition        | `+`    | union        |
//! | subtraction     | `-`    | difference   |
//! | multiplication  | `*`    | AND          |
//! | division        | `/`    | UN-AND       |
//! | comultiplication| `\|`   | OR           |
//! | codivision      | `%`    | UN-OR        |
//! | negation        | `!`    | NOT          |
//!
//! Every operator evaluates its closed-form formulas into a [`Raw`]
//! quadruple which is then projected onto the opinion triangle along the
//! line of constant expectation. Legal raw values pass through unchanged up
//! to rounding; values outside the `EPS_PRE` band signal a domain bug.

mod product;
mod quotient;
mod range;
mod sum;

use thiserror::Error;

use crate::opinion::{clip, Opinion};

pub use product::{
    cartesian_product_bba, comultiply, multiply, ProductBba, ProductCell, NX_NY, NX_Y, XY, X_NY,
};
pub use quotient::{
    codivide, codivisibility_check, divide, divide_clipped, divisibility_check, Divisibility,
};
pub use range::{divisible_range_contains, product_range_contains, ProductRange};
pub use sum::{add, subtract};

/// Slack allowed on operator preconditions and raw output ranges.
pub const EPS_PRE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpError {
    #[error("base rates sum to {0} > 1; addends must model disjoint subsets")]
    BaseRateOverflow(f64),
    #[error("expectations sum to {0} > 1; addends must model disjoint subsets")]
    ExpectationOverflow(f64),
    #[error("both base rates are zero")]
    DegenerateBaseRates,
    #[error("equal base rates: the difference would be an opinion about the empty set")]
    EqualBaseRates,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("missing limit parameter {0}")]
    MissingLimitParam(&'static str),
    #[error("invalid limit parameter {name} = {value}")]
    InvalidLimitParam { name: &'static str, value: f64 },
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("division by an opinion with d = 1")]
    DivisionByFalse,
    #[error("not codivisible: {0}")]
    NotCodivisible(String),
    #[error("codivision by an opinion with b = 1")]
    CodivisionByTrue,
    #[error("base rate {0} must lie strictly inside (0, 1)")]
    DegenerateBaseRate(f64),
    #[error("denominator opinion has zero expectation")]
    ZeroDenominator,
    #[error("internal range error in {op}: {detail}")]
    InternalRangeError { op: &'static str, detail: String },
}

/// Limit values for the operators whose formulas degenerate at extreme base
/// rates.
///
/// * `eta`: limit of `(1 - a_x) / (1 - a_y)` for multiplication at `a_x = a_y = 1`
/// * `zeta`: limit of `a_x / a_y` for comultiplication at `a_x = a_y = 0`
/// * `gamma`: belief share of the quotient when `a_x = a_y`
/// * `delta`: disbelief share of the co-quotient when `a_x = a_y`
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LimitParams {
    pub eta: Option<f64>,
    pub zeta: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
}

impl LimitParams {
    pub fn new(
        eta: Option<f64>,
        zeta: Option<f64>,
        gamma: Option<f64>,
        delta: Option<f64>,
    ) -> Result<Self, OpError> {
        let lp = Self {
            eta,
            zeta,
            gamma,
            delta,
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn validate(&self) -> Result<(), OpError> {
        let checks: [(&'static str, Option<f64>, f64); 4] = [
            ("eta", self.eta, f64::INFINITY),
            ("zeta", self.zeta, f64::INFINITY),
            ("gamma", self.gamma, 1.0),
            ("delta", self.delta, 1.0),
        ];
        for (name, value, upper) in checks {
            if let Some(v) = value {
                if !(v.is_finite() && v >= 0.0 && v <= upper) {
                    return Err(OpError::InvalidLimitParam { name, value: v });
                }
            }
        }
        Ok(())
    }
}

/// Unprojected operator output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Raw {
    pub b: f64,
    pub d: f64,
    pub u: f64,
    pub a: f64,
}

impl Raw {
    pub fn expectation(&self) -> f64 {
        self.b + self.a * self.u
    }

    fn in_unit_range(&self) -> bool {
        [self.b, self.d, self.u, self.a]
            .iter()
            .all(|v| (0.0..=1.0).contains(v))
    }

    /// Projects onto the triangle, keeping the raw expectation and base rate.
    fn project(&self) -> Opinion {
        clip(self.expectation(), self.a, self.u)
    }

    /// Strict finishing step: components must lie within `EPS_PRE` of the
    /// unit interval and the masses within `EPS_PRE` of summing to one.
    pub(crate) fn finish(self, op: &'static str) -> Result<Opinion, OpError> {
        let components = [("b", self.b), ("d", self.d), ("u", self.u), ("a", self.a)];
        for (name, v) in components {
            if !(-EPS_PRE..=1.0 + EPS_PRE).contains(&v) {
                return Err(OpError::InternalRangeError {
                    op,
                    detail: format!("{name} = {v}"),
                });
            }
        }
        let sum = self.b + self.d + self.u;
        if (sum - 1.0).abs() > EPS_PRE {
            return Err(OpError::InternalRangeError {
                op,
                detail: format!("b + d + u = {sum}"),
            });
        }
        Ok(self.project())
    }

    /// Lenient finishing step used where out-of-range raw values are an
    /// expected consequence of valid inputs. Returns whether clipping moved
    /// any component.
    pub(crate) fn finish_clipped(self, op: &'static str) -> Result<(Opinion, bool), OpError> {
        let e = self.expectation();
        let finite = [self.b, self.d, self.u, self.a, e].iter().all(|v| v.is_finite());
        if !finite || !(-EPS_PRE..=1.0 + EPS_PRE).contains(&e) {
            return Err(OpError::InternalRangeError {
                op,
                detail: format!("expectation {e} outside [0, 1]"),
            });
        }
        let legal = self.in_unit_range() && (self.b + self.d + self.u - 1.0).abs() <= EPS_PRE;
        let w = self.project();
        let moved = !legal || (w.u() - self.u).abs() > EPS_PRE;
        Ok((w, moved))
    }
}

/// NOT.
pub fn negate(w: &Opinion) -> Opinion {
    w.negate()
}

/// Orders two operands canonically; `swapped` reports whether they were
/// exchanged.
pub(crate) fn canonical<'a>(x: &'a Opinion, y: &'a Opinion) -> (&'a Opinion, &'a Opinion, bool) {
    if x.canonical_cmp(y).is_gt() {
        (y, x, true)
    } else {
        (x, y, false)
    }
}

pub(crate) fn le(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + EPS_PRE
}
