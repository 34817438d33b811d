//! Random inputs for property tests and fuzzing.

use rand::Rng;

use crate::expr::{BinOp, Expr, ExprKind, Func};
use crate::frames::{Bba, FrameOfDiscernment, Subset};
use crate::opinion::Opinion;

/// Base rates are kept away from 0 and 1, where limit parameters engage.
pub const BASE_RATE_RANGE: (f64, f64) = (0.05, 0.95);

/// Uniform point on the opinion triangle with the given base rate.
pub fn opinion_with_base_rate<R: Rng + ?Sized>(rng: &mut R, a: f64) -> Opinion {
    let u = 1.0 - rng.random::<f64>().sqrt();
    let b = rng.random::<f64>() * (1.0 - u);
    let d = (1.0 - b - u).max(0.0);
    Opinion::new(b, d, u, a).expect("triangle sample is a valid opinion")
}

pub fn base_rate<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(BASE_RATE_RANGE.0..=BASE_RATE_RANGE.1)
}

/// Uniform point on the triangle with a base rate from [`BASE_RATE_RANGE`].
pub fn opinion<R: Rng + ?Sized>(rng: &mut R) -> Opinion {
    let a = base_rate(rng);
    opinion_with_base_rate(rng, a)
}

/// Bba with up to six random focal elements over `n` atoms.
pub fn bba<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Bba {
    let frame = FrameOfDiscernment::numbered(n).expect("frame size in range");
    let full = frame.theta().bits();
    let k = rng.random_range(1..=6);
    let mut focal: Vec<(Subset, f64)> = (0..k)
        .map(|_| {
            let bits = loop {
                let bits = rng.random::<u64>() & full;
                if bits != 0 {
                    break bits;
                }
            };
            (Subset::from_bits(bits), rng.random::<f64>() + 1e-3)
        })
        .collect();
    let total: f64 = focal.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut focal {
        *w /= total;
    }
    Bba::new(frame, focal).expect("normalized masses")
}

/// Non-empty random subset of the frame with `n` atoms.
pub fn subset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Subset {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    loop {
        let bits = rng.random::<u64>() & full;
        if bits != 0 {
            return Subset::from_bits(bits);
        }
    }
}

/// Random expression tree of at most `depth` operator levels over opinion
/// literals and the given variable names.
pub fn expr<R: Rng + ?Sized>(rng: &mut R, depth: usize, vars: &[&str]) -> Expr {
    if depth == 0 || rng.random_bool(0.2) {
        return leaf(rng, vars);
    }
    let sub = |rng: &mut R| expr(rng, depth - 1, vars);
    match rng.random_range(0..9) {
        0 => Expr::negation(sub(rng)),
        k @ 1..=6 => {
            let op = [
                BinOp::Add,
                BinOp::Sub,
                BinOp::Mult,
                BinOp::Div,
                BinOp::Comult,
                BinOp::Codiv,
            ][k - 1];
            let lhs = sub(rng);
            let rhs = sub(rng);
            Expr::binary(op, lhs, rhs)
        }
        7 => {
            let args = (0..3).map(|_| sub(rng)).collect();
            Expr::bare(ExprKind::Call {
                func: Func::Deduce,
                args,
                scalar: None,
            })
        }
        _ => {
            let args = (0..3).map(|_| sub(rng)).collect();
            Expr::bare(ExprKind::Call {
                func: Func::Abduce,
                args,
                scalar: Some(base_rate(rng)),
            })
        }
    }
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, vars: &[&str]) -> Expr {
    if !vars.is_empty() && rng.random_bool(0.5) {
        let name = vars[rng.random_range(0..vars.len())];
        return Expr::var(name);
    }
    let w = opinion(rng);
    Expr::opinion(w.b(), w.d(), w.u(), w.a())
}
