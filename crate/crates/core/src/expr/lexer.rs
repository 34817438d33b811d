use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Number,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Bar,
    Percent,
    Bang,
    Ident,
    Let,
    Equals,
    Semicolon,
    End,
}

impl TokenKind {
    pub fn describe(self) -> &'static str {
        match self {
            TokenKind::Number => "number",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::Comma => "`,`",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::Bar => "`|`",
            TokenKind::Percent => "`%`",
            TokenKind::Bang => "`!`",
            TokenKind::Ident => "identifier",
            TokenKind::Let => "`let`",
            TokenKind::Equals => "`=`",
            TokenKind::Semicolon => "`;`",
            TokenKind::End => "end of input",
        }
    }
}

/// 1-based line and column, counted in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub pos: Pos,
}

impl Token {
    /// Position just past the last character.
    pub fn end(&self) -> Pos {
        Pos {
            line: self.pos.line,
            column: self.pos.column + self.lexeme.chars().count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unexpected character `{ch}` at {pos}")]
pub struct LexError {
    pub ch: char,
    pub pos: Pos,
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let (mut line, mut column) = (1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_ascii_digit() {
            i = scan_number(&chars, i);
            TokenKind::Number
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if chars[start..i].iter().collect::<String>() == "let" {
                TokenKind::Let
            } else {
                TokenKind::Ident
            }
        } else {
            i += 1;
            match c {
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                ',' => TokenKind::Comma,
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '|' => TokenKind::Bar,
                '%' => TokenKind::Percent,
                '!' => TokenKind::Bang,
                '=' => TokenKind::Equals,
                ';' => TokenKind::Semicolon,
                _ => return Err(LexError { ch: c, pos }),
            }
        };
        let lexeme: String = chars[start..i].iter().collect();
        column += i - start;
        tokens.push(Token { kind, lexeme, pos });
    }
    tokens.push(Token {
        kind: TokenKind::End,
        lexeme: String::new(),
        pos: Pos { line, column },
    });
    Ok(tokens)
}

/// `digits [. digits] [(e|E) [+|-] digits]`, consuming the optional parts
/// only when complete.
fn scan_number(chars: &[char], mut i: usize) -> usize {
    let digits = |mut j: usize| {
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    let is_digit = |j: usize| j < chars.len() && chars[j].is_ascii_digit();
    i = digits(i);
    if i < chars.len() && chars[i] == '.' && is_digit(i + 1) {
        i = digits(i + 1);
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if is_digit(j) {
            i = digits(j);
        }
    }
    i
}
