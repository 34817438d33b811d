//! Belief calculus over binary frames.
//!
//! Opinions `(b, d, u, a)` with their Beta-PDF and probability-vector
//! equivalents, coarsening of general belief mass assignments into
//! opinions, the opinion operator algebra (`+ - * / | % !`), conditional
//! deduction and abduction, a small expression language, and verification
//! oracles that check the algebra against plain probability arithmetic.
//!
//! ```
//! use belief_calculus::{operators, Opinion, LimitParams};
//!
//! let x = Opinion::new(0.7, 0.1, 0.2, 0.5).unwrap();
//! let y = Opinion::new(0.5, 0.3, 0.2, 0.4).unwrap();
//! let xy = operators::multiply(&x, &y, &LimitParams::default()).unwrap();
//! assert!((xy.expectation().value() - 0.8 * 0.58).abs() < 1e-12);
//! ```

pub mod beta;
pub mod cli;
pub mod conditional;
pub mod expr;
pub mod frames;
pub mod operators;
pub mod opinion;
pub mod oracle;

pub use beta::{AugmentedBeta, BetaShape};
pub use conditional::ConditionalPair;
pub use frames::{Bba, FrameOfDiscernment, Subset};
pub use operators::LimitParams;
pub use opinion::{clip, BasicProbabilityVector, Opinion, ProbabilityExpectation};

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.11e}", x).parse().unwrap_or(x)
}

/// Formats with at most 12 significant digits and no trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        return "0".to_string();
    }
    let exp = r.abs().log10().floor() as i32;
    if !(-6..15).contains(&exp) {
        let s = format!("{:.11e}", r);
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        return format!("{}e{}", trim_zeros(mantissa), e);
    }
    let prec = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", prec, r)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
