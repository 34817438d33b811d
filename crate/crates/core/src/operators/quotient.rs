//! Division and codivision, the inverses of multiplication and
//! comultiplication.

use super::{le, LimitParams, OpError, Raw, EPS_PRE};
use crate::opinion::{clip, Opinion};

/// Outcome of a precondition check. `failures` names every violated
/// condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisibility {
    pub divisible: bool,
    pub failures: Vec<String>,
}

impl Divisibility {
    fn from_failures(failures: Vec<&str>) -> Self {
        Self {
            divisible: failures.is_empty(),
            failures: failures.into_iter().map(|f| format!("{f} violated")).collect(),
        }
    }

    pub fn diagnosis(&self) -> String {
        self.failures.join("; ")
    }
}

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() <= EPS_PRE
}

/// Whether `wx` can be divided by `wy`.
pub fn divisibility_check(wx: &Opinion, wy: &Opinion) -> Divisibility {
    let (x, y) = (wx, wy);
    let (ax, ay) = (x.a(), y.a());
    let mut failed = Vec::new();
    if !le(ax, ay) {
        failed.push("a_x ≤ a_y");
    }
    if ay <= 0.0 {
        failed.push("a_y > 0");
    }
    if y.d() >= 1.0 {
        failed.push("d_y < 1");
    }
    if !le(y.d(), x.d()) {
        failed.push("d_x ≥ d_y");
    }
    if !failed.is_empty() {
        return Divisibility::from_failures(failed);
    }
    let (kx, ky) = (1.0 - x.d(), 1.0 - y.d());
    if near(ax, ay) {
        if !near(x.b() * ky, kx * y.b()) {
            failed.push("b_x = (1 − d_x) b_y / (1 − d_y)");
        }
        if !near(x.u() * ky, kx * y.u()) {
            failed.push("u_x = (1 − d_x) u_y / (1 − d_y)");
        }
    } else {
        if !le(ax * (1.0 - ay) * kx * y.b(), x.b() * (1.0 - ax) * ay * ky) {
            failed.push("b_x ≥ a_x (1 − a_y)(1 − d_x) b_y / ((1 − a_x) a_y (1 − d_y))");
        }
        if !le((1.0 - ay) * kx * y.u(), x.u() * (1.0 - ax) * ky) {
            failed.push("u_x ≥ (1 − a_y)(1 − d_x) u_y / ((1 − a_x)(1 − d_y))");
        }
    }
    Divisibility::from_failures(failed)
}

/// Whether `wx` can be codivided by `wy`.
pub fn codivisibility_check(wx: &Opinion, wy: &Opinion) -> Divisibility {
    let (x, y) = (wx, wy);
    let (ax, ay) = (x.a(), y.a());
    let mut failed = Vec::new();
    if !le(ay, ax) {
        failed.push("a_x ≥ a_y");
    }
    if ay >= 1.0 {
        failed.push("a_y < 1");
    }
    if y.b() >= 1.0 {
        failed.push("b_y < 1");
    }
    if !le(y.b(), x.b()) {
        failed.push("b_x ≥ b_y");
    }
    if !failed.is_empty() {
        return Divisibility::from_failures(failed);
    }
    let (kx, ky) = (1.0 - x.b(), 1.0 - y.b());
    if near(ax, ay) {
        if !near(x.d() * ky, kx * y.d()) {
            failed.push("d_x = (1 − b_x) d_y / (1 − b_y)");
        }
        if !near(x.u() * ky, kx * y.u()) {
            failed.push("u_x = (1 − b_x) u_y / (1 − b_y)");
        }
    } else {
        if !le((1.0 - ax) * ay * kx * y.d(), x.d() * ax * (1.0 - ay) * ky) {
            failed.push("d_x ≥ (1 − a_x) a_y (1 − b_x) d_y / (a_x (1 − a_y)(1 − b_y))");
        }
        if !le(ay * kx * y.u(), x.u() * ax * ky) {
            failed.push("u_x ≥ a_y (1 − b_x) u_y / (a_x (1 − b_y))");
        }
    }
    Divisibility::from_failures(failed)
}

/// UN-AND: the opinion `z`, independent of `y`, with `ω_x = ω_{y ∧ z}`.
///
/// With equal base rates only `b + u` is determined; `lp.gamma` splits it,
/// defaulting to `b_y / (b_y + a_y u_y)`.
pub fn divide(wx: &Opinion, wy: &Opinion, lp: &LimitParams) -> Result<Opinion, OpError> {
    lp.validate()?;
    if wy.d() >= 1.0 {
        return Err(OpError::DivisionByFalse);
    }
    let check = divisibility_check(wx, wy);
    if !check.divisible {
        return Err(OpError::NotDivisible(check.diagnosis()));
    }
    divide_raw(wx, wy, lp).finish("divide")
}

fn default_gamma(y: &Opinion) -> f64 {
    y.b() / (y.b() + y.a() * y.u())
}

fn default_delta(y: &Opinion) -> f64 {
    y.d() / (y.d() + (1.0 - y.a()) * y.u())
}

/// Formula branch selected by the base rates; assumes `a_y > 0`, `d_y < 1`.
fn divide_raw(x: &Opinion, y: &Opinion, lp: &LimitParams) -> Raw {
    let (ax, ay) = (x.a(), y.a());
    let (kx, ky) = (1.0 - x.d(), 1.0 - y.d());
    let d = (x.d() - y.d()) / ky;
    if near(ax, ay) || ax > ay {
        let gamma = lp.gamma.unwrap_or_else(|| default_gamma(y));
        let k = kx / ky;
        return Raw {
            b: gamma * k,
            d,
            u: (1.0 - gamma) * k,
            a: 1.0,
        };
    }
    let (ex, ey) = (x.expectation().value(), y.expectation().value());
    let da = ay - ax;
    let t1 = ay * ex / (da * ey);
    let t2 = ay * kx / (da * ky);
    Raw {
        b: t1 - ax * kx / (da * ky),
        d,
        u: t2 - t1,
        a: ax / ay,
    }
}

/// Division that never rejects: the quotient is projected onto the line of
/// constant expectation `E(x) / E(y)` with base rate `a_x / a_y`. The second
/// element describes the adjustment when preconditions failed or clipping
/// moved the raw value.
pub fn divide_clipped(
    wx: &Opinion,
    wy: &Opinion,
    lp: &LimitParams,
) -> Result<(Opinion, Option<String>), OpError> {
    lp.validate()?;
    let (ex, ey) = (wx.expectation().value(), wy.expectation().value());
    if ey <= 0.0 {
        return Err(OpError::ZeroDenominator);
    }
    if wy.a() <= 0.0 {
        return Err(OpError::NotDivisible("a_y > 0 violated".into()));
    }
    let check = divisibility_check(wx, wy);
    let raw = divide_raw(wx, wy, lp);
    let e = (ex / ey).clamp(0.0, 1.0);
    let a = (wx.a() / wy.a()).min(1.0);
    let w = clip(e, a, raw.u);
    let moved = (w.u() - raw.u).abs() > EPS_PRE || (w.b() - raw.b).abs() > EPS_PRE;
    let note = match (check.divisible, moved) {
        (true, false) => None,
        (true, true) => Some("quotient clipped onto the opinion triangle".to_string()),
        (false, _) => Some(format!("quotient clipped: {}", check.diagnosis())),
    };
    Ok((w, note))
}

/// UN-OR: the opinion `z`, independent of `y`, with `ω_x = ω_{y ∨ z}`.
///
/// With equal base rates only `d + u` is determined; `lp.delta` splits it,
/// defaulting to `d_y / (d_y + (1 − a_y) u_y)`.
pub fn codivide(wx: &Opinion, wy: &Opinion, lp: &LimitParams) -> Result<Opinion, OpError> {
    lp.validate()?;
    if wy.b() >= 1.0 {
        return Err(OpError::CodivisionByTrue);
    }
    let check = codivisibility_check(wx, wy);
    if !check.divisible {
        return Err(OpError::NotCodivisible(check.diagnosis()));
    }
    codivide_raw(wx, wy, lp).finish("codivide")
}

fn codivide_raw(x: &Opinion, y: &Opinion, lp: &LimitParams) -> Raw {
    let (ax, ay) = (x.a(), y.a());
    let (kx, ky) = (1.0 - x.b(), 1.0 - y.b());
    let b = (x.b() - y.b()) / ky;
    if near(ax, ay) || ax < ay {
        let delta = lp.delta.unwrap_or_else(|| default_delta(y));
        let k = kx / ky;
        return Raw {
            b,
            d: delta * k,
            u: (1.0 - delta) * k,
            a: 0.0,
        };
    }
    let (ex, ey) = (x.expectation().value(), y.expectation().value());
    let da = ax - ay;
    let t1 = (1.0 - ay) * (1.0 - ex) / (da * (1.0 - ey));
    let t2 = (1.0 - ay) * kx / (da * ky);
    Raw {
        b,
        d: t1 - (1.0 - ax) * kx / (da * ky),
        u: t2 - t1,
        a: da / (1.0 - ay),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{comultiply, multiply, negate};

    fn op(b: f64, d: f64, u: f64, a: f64) -> Opinion {
        Opinion::new(b, d, u, a).unwrap()
    }

    fn none() -> LimitParams {
        LimitParams::default()
    }

    #[test]
    fn worked_quotient() {
        let q = divide(&op(0.4225, 0.37, 0.2075, 0.2), &op(0.5, 0.3, 0.2, 0.4), &none()).unwrap();
        assert!(q.max_abs_diff(&op(0.7, 0.1, 0.2, 0.5)) < 1e-12);
    }

    #[test]
    fn worked_co_quotient() {
        let x = negate(&op(0.4225, 0.37, 0.2075, 0.2));
        let y = negate(&op(0.5, 0.3, 0.2, 0.4));
        let q = codivide(&x, &y, &none()).unwrap();
        assert!(q.max_abs_diff(&negate(&op(0.7, 0.1, 0.2, 0.5))) < 1e-12);
    }

    #[test]
    fn quotient_expectation() {
        let x = op(0.2, 0.5, 0.3, 0.1);
        let y = op(0.5, 0.2, 0.3, 0.6);
        let p = multiply(&x, &y, &none()).unwrap();
        let q = divide(&p, &y, &none()).unwrap();
        let want = p.expectation().value() / y.expectation().value();
        assert!((q.expectation().value() - want).abs() < 1e-12);
        assert!(q.max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn co_quotient_round_trip() {
        let x = op(0.2, 0.5, 0.3, 0.7);
        let y = op(0.1, 0.4, 0.5, 0.3);
        let c = comultiply(&x, &y, &none()).unwrap();
        let q = codivide(&c, &y, &none()).unwrap();
        assert!(q.max_abs_diff(&x) < 1e-12);
        let (ec, ey) = (c.expectation().value(), y.expectation().value());
        assert!((q.expectation().value() - (ec - ey) / (1.0 - ey)).abs() < 1e-12);
    }

    #[test]
    fn division_failures() {
        let y = op(0.5, 0.3, 0.2, 0.4);
        match divide(&op(0.5, 0.2, 0.3, 0.2), &y, &none()) {
            Err(OpError::NotDivisible(msg)) => assert!(msg.contains("d_x ≥ d_y violated")),
            other => panic!("unexpected {other:?}"),
        }
        let check = divisibility_check(&op(0.5, 0.3, 0.2, 0.6), &y);
        assert!(!check.divisible);
        assert_eq!(check.failures, vec!["a_x ≤ a_y violated".to_string()]);
        assert_eq!(
            divide(&op(0.0, 1.0, 0.0, 0.2), &op(0.0, 1.0, 0.0, 0.4), &none()),
            Err(OpError::DivisionByFalse)
        );
    }

    #[test]
    fn codivision_failures() {
        let y = op(0.5, 0.3, 0.2, 0.4);
        match codivide(&op(0.3, 0.4, 0.3, 0.6), &y, &none()) {
            Err(OpError::NotCodivisible(msg)) => assert!(msg.contains("b_x ≥ b_y violated")),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            codivide(&op(1.0, 0.0, 0.0, 0.6), &op(1.0, 0.0, 0.0, 0.4), &none()),
            Err(OpError::CodivisionByTrue)
        );
    }

    #[test]
    fn equal_base_rate_division() {
        // x = y ∧ z with z = (0.6, 0.1, 0.3, 1): the product has a_x = a_y
        let y = op(0.3, 0.3, 0.4, 0.6);
        let z = op(0.6, 0.1, 0.3, 1.0);
        let x = multiply(&y, &z, &none()).unwrap();
        assert!((x.a() - y.a()).abs() < 1e-15);
        let check = divisibility_check(&x, &y);
        assert!(check.divisible, "{:?}", check);
        let q = divide(&x, &y, &none()).unwrap();
        let k = (1.0 - x.d()) / (1.0 - y.d());
        assert!((q.b() + q.u() - k).abs() < 1e-12);
        assert_eq!(q.a(), 1.0);
        let gamma = 0.3 / (0.3 + 0.6 * 0.4);
        assert!((q.b() - gamma * k).abs() < 1e-12);
        let lp = LimitParams {
            gamma: Some(0.25),
            ..none()
        };
        let q = divide(&x, &y, &lp).unwrap();
        assert!((q.b() - 0.25 * k).abs() < 1e-12);
        // unequal splits are rejected
        let bad = op(x.b() + 0.01, x.d(), x.u() - 0.01, x.a());
        assert!(matches!(divide(&bad, &y, &none()), Err(OpError::NotDivisible(_))));
    }

    #[test]
    fn gamma_default_is_the_limit() {
        // keep b_x : u_x on the equality line and let a_x approach a_y
        let y = op(0.3, 0.3, 0.4, 0.6);
        let k = 0.8;
        let dx = 1.0 - k * (1.0 - y.d());
        let at = op(k * y.b(), dx, k * y.u(), y.a());
        let near = op(k * y.b(), dx, k * y.u(), y.a() - 1e-6);
        let at_q = divide(&at, &y, &none()).unwrap();
        let near_q = divide(&near, &y, &none()).unwrap();
        assert!(near_q.max_abs_diff(&at_q) < 1e-5, "{near_q} vs {at_q}");
    }

    #[test]
    fn equal_base_rate_codivision() {
        let y = op(0.3, 0.3, 0.4, 0.6);
        let z = op(0.2, 0.5, 0.3, 0.0);
        let x = comultiply(&y, &z, &none()).unwrap();
        let q = codivide(&x, &y, &none()).unwrap();
        let k = (1.0 - x.b()) / (1.0 - y.b());
        let delta = 0.3 / (0.3 + 0.4 * 0.4);
        assert!((q.d() - delta * k).abs() < 1e-12);
        assert_eq!(q.a(), 0.0);
    }

    #[test]
    fn clipped_division_keeps_expectation_ratio() {
        let x = op(0.5, 0.2, 0.3, 0.2);
        let y = op(0.5, 0.3, 0.2, 0.4);
        assert!(!divisibility_check(&x, &y).divisible);
        let (q, note) = divide_clipped(&x, &y, &none()).unwrap();
        let want = x.expectation().value() / y.expectation().value();
        assert!((q.expectation().value() - want.min(1.0)).abs() < 1e-12);
        assert!(note.is_some());
        let (q, note) = divide_clipped(&op(0.4225, 0.37, 0.2075, 0.2), &y, &none()).unwrap();
        assert!(note.is_none());
        assert!(q.max_abs_diff(&op(0.7, 0.1, 0.2, 0.5)) < 1e-12);
        assert_eq!(
            divide_clipped(&x, &op(0.0, 1.0, 0.0, 0.4), &none()),
            Err(OpError::ZeroDenominator)
        );
    }
}
