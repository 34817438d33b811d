use super::ast::{Expr, ExprKind, Program, UnOp};

/// Shortest text that parses back to the same `f64`.
fn number(v: f64) -> String {
    let plain = format!("{v}");
    let sci = format!("{v:e}");
    if sci.len() < plain.len() {
        sci
    } else {
        plain
    }
}

fn tuple(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| number(*v)).collect();
    format!("({})", parts.join(","))
}

/// Canonical text with the minimal parentheses needed to keep the tree.
pub fn format_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::OpinionLit(v) => tuple(v),
        ExprKind::BetaLit(v) => format!("beta{}", tuple(v)),
        ExprKind::PvLit(v) => format!("pv{}", tuple(v)),
        ExprKind::Var(name) => name.clone(),
        ExprKind::Unary(UnOp::Not, operand) => {
            format!("!{}", wrap(operand, operand.precedence() < e.precedence()))
        }
        ExprKind::Binary(op, lhs, rhs) => {
            let p = op.precedence();
            format!(
                "{}{}{}",
                wrap(lhs, lhs.precedence() < p),
                op.symbol(),
                wrap(rhs, rhs.precedence() <= p)
            )
        }
        ExprKind::Call { func, args, scalar } => {
            let mut parts: Vec<String> = args.iter().map(format_expr).collect();
            if let Some(s) = scalar {
                parts.push(number(*s));
            }
            format!("{}({})", func.name(), parts.join(","))
        }
    }
}

fn wrap(e: &Expr, paren: bool) -> String {
    let s = format_expr(e);
    if paren {
        format!("({s})")
    } else {
        s
    }
}

pub fn format_program(p: &Program) -> String {
    let mut out = String::new();
    for b in &p.bindings {
        out.push_str(&format!("let {}={}; ", b.name, format_expr(&b.value)));
    }
    out.push_str(&format_expr(&p.body));
    out
}
