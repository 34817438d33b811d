use super::lexer::Pos;

/// Source range of a node: `start` is the first character, `end` is just
/// past the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn to(self, other: Span) -> Span {
        Span {
            start: self.start,
            end: other.end,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mult,
    Div,
    Comult,
    Codiv,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mult => '*',
            BinOp::Div => '/',
            BinOp::Comult => '|',
            BinOp::Codiv => '%',
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Comult | BinOp::Codiv => 2,
            BinOp::Mult | BinOp::Div => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Deduce,
    Abduce,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Deduce => "deduce",
            Func::Abduce => "abduce",
        }
    }

    /// Number of expression arguments and whether a trailing scalar follows.
    pub fn arity(self) -> (usize, bool) {
        match self {
            Func::Deduce => (3, false),
            Func::Abduce => (3, true),
        }
    }
}

/// Names with literal or call syntax; they cannot be bound by `let`.
pub const RESERVED: [&str; 4] = ["beta", "pv", "deduce", "abduce"];

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    OpinionLit([f64; 4]),
    BetaLit([f64; 3]),
    PvLit([f64; 3]),
    Var(String),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call {
        func: Func,
        args: Vec<Expr>,
        scalar: Option<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// Structural equality; spans are ignored.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Self { kind, span }
    }

    /// Same as [`new`](Self::new) with an empty span, for building trees in
    /// code.
    pub fn bare(kind: ExprKind) -> Self {
        Self {
            kind,
            span: Span::default(),
        }
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Self::bare(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)))
    }

    pub fn negation(e: Expr) -> Self {
        Self::bare(ExprKind::Unary(UnOp::Not, Box::new(e)))
    }

    pub fn var(name: &str) -> Self {
        Self::bare(ExprKind::Var(name.to_string()))
    }

    pub fn opinion(b: f64, d: f64, u: f64, a: f64) -> Self {
        Self::bare(ExprKind::OpinionLit([b, d, u, a]))
    }

    /// Binding strength of the node's outermost construct.
    pub fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(op, _, _) => op.precedence(),
            ExprKind::Unary(..) => 4,
            _ => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub name: String,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub bindings: Vec<Binding>,
    pub body: Expr,
}
