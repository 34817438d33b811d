//! Binary-frame opinions and their companion representations.
//!
//! An [`Opinion`] is the quadruple `(b, d, u, a)`: belief, disbelief and
//! uncertainty masses over the binary frame `{x, not x}` plus the base rate
//! of `x`. The three masses always sum to one, so an opinion has three
//! degrees of freedom; [`BasicProbabilityVector`] re-expresses the same
//! information as `(e, u, a)` with the probability expectation up front.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Tolerance for the `b + d + u = 1` check and for range checks at API
/// boundaries.
pub const EPS_ADD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpinionError {
    #[error("{component} = {value} is outside [0, 1]")]
    OutOfRange { component: &'static str, value: f64 },
    #[error("b + d + u = {sum}, expected 1")]
    AdditivityViolation { sum: f64 },
    #[error("probability vector (e={e}, u={u}, a={a}) has no valid opinion: {reason}")]
    InvalidVector {
        e: f64,
        u: f64,
        a: f64,
        reason: &'static str,
    },
}

fn check_unit(component: &'static str, value: f64) -> Result<f64, OpinionError> {
    if !(-EPS_ADD..=1.0 + EPS_ADD).contains(&value) {
        return Err(OpinionError::OutOfRange { component, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Opinion `(b, d, u, a)` about a proposition on a binary frame.
///
/// The complement's base rate is kept alongside `a`, so negating twice
/// restores the original bit for bit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Opinion {
    b: f64,
    d: f64,
    u: f64,
    a: f64,
    #[serde(skip)]
    a_not: f64,
}

/// Compares `(b, d, u, a)` only.
impl PartialEq for Opinion {
    fn eq(&self, other: &Self) -> bool {
        self.components() == other.components()
    }
}

impl Opinion {
    /// Validates and builds an opinion. Masses are checked, never renormalized.
    pub fn new(b: f64, d: f64, u: f64, a: f64) -> Result<Self, OpinionError> {
        let b = check_unit("b", b)?;
        let d = check_unit("d", d)?;
        let u = check_unit("u", u)?;
        let a = check_unit("a", a)?;
        let sum = b + d + u;
        if (sum - 1.0).abs() > EPS_ADD {
            return Err(OpinionError::AdditivityViolation { sum });
        }
        Ok(Self::from_parts_unchecked(b, d, u, a))
    }

    /// The vacuous opinion `(0, 0, 1, a)`.
    pub fn vacuous(a: f64) -> Result<Self, OpinionError> {
        Self::new(0.0, 0.0, 1.0, a)
    }

    /// Dogmatic opinion `(p, 1 - p, 0, a)`.
    pub fn dogmatic(p: f64, a: f64) -> Result<Self, OpinionError> {
        let p = check_unit("b", p)?;
        Self::new(p, 1.0 - p, 0.0, a)
    }

    /// Builds without validation. Callers guarantee the invariants.
    pub(crate) fn from_parts_unchecked(b: f64, d: f64, u: f64, a: f64) -> Self {
        debug_assert!([b, d, u, a].iter().all(|v| (0.0..=1.0).contains(v)));
        Self {
            b,
            d,
            u,
            a,
            a_not: 1.0 - a,
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn components(&self) -> [f64; 4] {
        [self.b, self.d, self.u, self.a]
    }

    /// Probability expectation `E = b + a u`.
    pub fn expectation(&self) -> ProbabilityExpectation {
        ProbabilityExpectation((self.b + self.a * self.u).clamp(0.0, 1.0))
    }

    /// NOT: swaps belief and disbelief and complements the base rate.
    pub fn negate(&self) -> Self {
        Self {
            b: self.d,
            d: self.b,
            u: self.u,
            a: self.a_not,
            a_not: self.a,
        }
    }

    pub fn to_pv(&self) -> BasicProbabilityVector {
        BasicProbabilityVector {
            e: self.expectation().value(),
            u: self.u,
            a: self.a,
        }
    }

    pub fn from_pv(pv: &BasicProbabilityVector) -> Result<Self, OpinionError> {
        pv.to_opinion()
    }

    /// Shaferian belief / plausibility pair `(b, b + u)`.
    pub fn bel_pl(&self) -> (f64, f64) {
        (self.b, self.b + self.u)
    }

    pub fn is_dogmatic(&self) -> bool {
        self.u == 0.0
    }

    /// Largest component-wise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &Opinion) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Lexicographic total order on `(b, d, u, a)`, used to fix argument
    /// order for the symmetric operators.
    pub fn canonical_cmp(&self, other: &Opinion) -> Ordering {
        self.components()
            .iter()
            .zip(other.components())
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for Opinion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            crate::fmt_sig(self.b),
            crate::fmt_sig(self.d),
            crate::fmt_sig(self.u),
            crate::fmt_sig(self.a)
        )
    }
}

/// Probability expectation of an opinion, always within `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct ProbabilityExpectation(f64);

impl ProbabilityExpectation {
    pub fn new(value: f64) -> Result<Self, OpinionError> {
        check_unit("E", value).map(Self)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<ProbabilityExpectation> for f64 {
    fn from(e: ProbabilityExpectation) -> f64 {
        e.0
    }
}

/// `(e, u, a)`: expectation, uncertainty and base rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasicProbabilityVector {
    e: f64,
    u: f64,
    a: f64,
}

impl BasicProbabilityVector {
    pub fn new(e: f64, u: f64, a: f64) -> Result<Self, OpinionError> {
        let pv = Self {
            e: check_unit("e", e)?,
            u: check_unit("u", u)?,
            a: check_unit("a", a)?,
        };
        pv.to_opinion()?;
        Ok(pv)
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn to_opinion(&self) -> Result<Opinion, OpinionError> {
        let (e, u, a) = (self.e, self.u, self.a);
        let b = e - a * u;
        let d = 1.0 - e - u * (1.0 - a);
        let invalid = |reason| OpinionError::InvalidVector { e, u, a, reason };
        if b < -EPS_ADD {
            return Err(invalid("derived belief is negative"));
        }
        if d < -EPS_ADD {
            return Err(invalid("derived disbelief is negative"));
        }
        Ok(Opinion::from_parts_unchecked(
            b.clamp(0.0, 1.0),
            d.clamp(0.0, 1.0),
            u,
            a,
        ))
    }
}

/// Largest uncertainty an opinion with expectation `e` and base rate `a`
/// can carry: `min(e / a, (1 - e) / (1 - a))`, with `x / 0 = +inf`.
pub fn max_uncertainty(e: f64, a: f64) -> f64 {
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { f64::INFINITY };
    ratio(e, a).min(ratio(1.0 - e, 1.0 - a)).min(1.0)
}

/// Projects `(e, a, u_raw)` onto the opinion triangle along the line of
/// constant expectation. The result has base rate `a`, expectation `e` and
/// uncertainty `u_raw` clamped to `[0, max_uncertainty(e, a)]`.
pub fn clip(e: f64, a: f64, u_raw: f64) -> Opinion {
    let e = e.clamp(0.0, 1.0);
    let a = a.clamp(0.0, 1.0);
    let u_max = max_uncertainty(e, a);
    let u = if u_raw.is_nan() {
        0.0
    } else {
        u_raw.clamp(0.0, u_max)
    };
    let b = (e - a * u).clamp(0.0, 1.0);
    let d = (1.0 - b - u).clamp(0.0, 1.0);
    Opinion::from_parts_unchecked(b, d, u, a)
}
