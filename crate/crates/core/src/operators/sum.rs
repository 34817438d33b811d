//! Addition and subtraction: opinions about disjoint subsets of one frame.

use super::{canonical, le, OpError, Raw, EPS_PRE};
use crate::opinion::Opinion;

/// UNION: opinion about `x ∪ y` for disjoint `x` and `y`.
///
/// The result is clipped onto the triangle when the raw disbelief leaves
/// `[0, 1]`; its expectation is always `E(x) + E(y)`.
pub fn add(wx: &Opinion, wy: &Opinion) -> Result<Opinion, OpError> {
    let (x, y, _) = canonical(wx, wy);
    let a = x.a() + y.a();
    if a > 1.0 + EPS_PRE {
        return Err(OpError::BaseRateOverflow(a));
    }
    if a == 0.0 {
        return Err(OpError::DegenerateBaseRates);
    }
    if !le(x.b() + y.b(), 1.0) {
        return Err(OpError::PreconditionViolated("b_x + b_y ≤ 1".into()));
    }
    let e = x.expectation().value() + y.expectation().value();
    if e > 1.0 + EPS_PRE {
        return Err(OpError::ExpectationOverflow(e));
    }
    let raw = add_raw(x, y);
    raw.finish_clipped("add").map(|(w, _)| w)
}

pub(crate) fn add_raw(x: &Opinion, y: &Opinion) -> Raw {
    let a = x.a() + y.a();
    Raw {
        b: x.b() + y.b(),
        d: (x.a() * (x.d() - y.b()) + y.a() * (y.d() - x.b())) / a,
        u: (x.a() * x.u() + y.a() * y.u()) / a,
        a: a.min(1.0),
    }
}

/// DIFFERENCE: opinion about `x \ y` where `y ⊆ x`.
pub fn subtract(wx: &Opinion, wy: &Opinion) -> Result<Opinion, OpError> {
    let (x, y) = (wx, wy);
    if !le(y.a(), x.a()) {
        return Err(OpError::PreconditionViolated("a_y < a_x".into()));
    }
    if (x.a() - y.a()).abs() <= EPS_PRE {
        return Err(OpError::EqualBaseRates);
    }
    let mut failed = Vec::new();
    if !le(y.b(), x.b()) {
        failed.push("b_y ≤ b_x");
    }
    if !le(x.d(), y.d()) {
        failed.push("d_x ≤ d_y");
    }
    if !le(y.a() * y.u(), x.a() * x.u()) {
        failed.push("a_y u_y ≤ a_x u_x");
    }
    if !le(y.a() * (1.0 + y.b() - x.b() - y.u()), x.a() * (x.d() + y.b())) {
        failed.push("a_x (d_x + b_y) ≥ a_y (1 + b_y − b_x − u_y)");
    }
    if !failed.is_empty() {
        return Err(OpError::PreconditionViolated(failed.join("; ")));
    }
    subtract_raw(x, y).finish("subtract")
}

pub(crate) fn subtract_raw(x: &Opinion, y: &Opinion) -> Raw {
    let da = x.a() - y.a();
    Raw {
        b: x.b() - y.b(),
        d: (x.a() * (x.d() + y.b()) - y.a() * (1.0 + y.b() - x.b() - y.u())) / da,
        u: (x.a() * x.u() - y.a() * y.u()) / da,
        a: da,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(b: f64, d: f64, u: f64, a: f64) -> Opinion {
        Opinion::new(b, d, u, a).unwrap()
    }

    #[test]
    fn equal_uncertainty_addition() {
        let x = op(0.3, 0.5, 0.2, 0.25);
        let y = op(0.1, 0.7, 0.2, 0.25);
        let s = add(&x, &y).unwrap();
        assert!(s.max_abs_diff(&op(0.4, 0.4, 0.2, 0.5)) < 1e-12);
        // with u_x = u_y the disbelief is d_x - b_y = d_y - b_x
        assert!((s.d() - (x.d() - y.b())).abs() < 1e-12);
        assert!((s.d() - (y.d() - x.b())).abs() < 1e-12);
    }

    #[test]
    fn adding_a_false_opinion() {
        // (0, 1, 0, a) + w_y keeps E(y) and raises the base rate to a + a_y
        let y = op(0.2, 0.3, 0.5, 0.4);
        let s = add(&op(0.0, 1.0, 0.0, 0.2), &y).unwrap();
        let raw = add_raw(&op(0.0, 1.0, 0.0, 0.2), &y);
        assert!((s.a() - 0.6).abs() < 1e-15);
        assert!((s.b() - 0.2).abs() < 1e-12);
        assert!((s.u() - 0.4 * 0.5 / 0.6).abs() < 1e-12);
        assert!((s.d() - raw.d).abs() < 1e-12);
        assert!((s.expectation().value() - y.expectation().value()).abs() < 1e-12);
    }

    #[test]
    fn addition_errors() {
        let w = op(0.1, 0.1, 0.8, 0.6);
        assert!(matches!(add(&w, &w), Err(OpError::BaseRateOverflow(_))));
        let z = op(0.1, 0.1, 0.8, 0.0);
        assert_eq!(add(&z, &z), Err(OpError::DegenerateBaseRates));
        let big = op(0.7, 0.1, 0.2, 0.3);
        assert!(matches!(add(&big, &big), Err(OpError::PreconditionViolated(_))));
        let e = op(0.4, 0.0, 0.6, 0.5);
        assert!(matches!(add(&e, &e), Err(OpError::ExpectationOverflow(_))));
    }

    #[test]
    fn addition_clips_negative_disbelief() {
        let x = op(0.4, 0.0, 0.6, 0.1);
        let y = op(0.3, 0.1, 0.6, 0.1);
        assert!(add_raw(&x, &y).d < 0.0);
        let s = add(&x, &y).unwrap();
        let want = x.expectation().value() + y.expectation().value();
        assert!((s.expectation().value() - want).abs() < 1e-12);
        assert!(s.d() >= 0.0);
    }

    #[test]
    fn subtraction_inverts_addition() {
        let d = subtract(&op(0.4, 0.4, 0.2, 0.5), &op(0.1, 0.7, 0.2, 0.25)).unwrap();
        assert!(d.max_abs_diff(&op(0.3, 0.5, 0.2, 0.25)) < 1e-12);
    }

    #[test]
    fn subtracting_an_empty_opinion() {
        let x = op(0.3, 0.3, 0.4, 0.6);
        let d = subtract(&x, &op(0.0, 1.0, 0.0, 0.0)).unwrap();
        assert!(d.max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn subtraction_errors() {
        let x = op(0.1, 0.5, 0.4, 0.6);
        let y = op(0.3, 0.5, 0.2, 0.3);
        match subtract(&x, &y) {
            Err(OpError::PreconditionViolated(msg)) => assert!(msg.contains("b_y ≤ b_x")),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(subtract(&x, &op(0.0, 0.6, 0.4, 0.6)), Err(OpError::EqualBaseRates));
        assert!(matches!(
            subtract(&y, &x),
            Err(OpError::PreconditionViolated(msg)) if msg == "a_y < a_x"
        ));
    }
}
