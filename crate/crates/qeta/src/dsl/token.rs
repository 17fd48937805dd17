//! Lexer for the job language: hand-rolled, position-tracking, total.
//!
//! Every byte sequence either tokenizes or produces a [`Diagnostic`] with a
//! 1-based line and column; the lexer never panics. `U` followed immediately
//! by digits splits into the `U` keyword and an integer token so that
//! `U3(F)` reads as the operator application it looks like. All keywords are
//! reserved and cannot name bindings.

use std::fmt;

/// Parse or lex failure, carrying the 1-based position and offending text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl Diagnostic {
    pub fn new(line: usize, column: usize, message: impl Into<String>, token: impl Into<String>) -> Self {
        Diagnostic { line, column, message: message.into(), token: token.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " at '{}'", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(u64),
    KwLet,
    KwAssert,
    KwEta,
    KwLevel,
    KwModular,
    KwCongruence,
    KwBase,
    KwAlpha,
    KwUpto,
    KwOrders,
    KwTo,
    KwTerms,
    KwZ,
    KwU,
    Assign,
    EqEq,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    At,
    LBracket,
    RBracket,
    Comma,
    Minus,
    Eof,
}

impl TokenKind {
    /// Human-readable name for diagnostics.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("name '{s}'"),
            TokenKind::Int(n) => format!("integer {n}"),
            TokenKind::KwLet => "'let'".into(),
            TokenKind::KwAssert => "'assert'".into(),
            TokenKind::KwEta => "'eta'".into(),
            TokenKind::KwLevel => "'level'".into(),
            TokenKind::KwModular => "'modular'".into(),
            TokenKind::KwCongruence => "'congruence'".into(),
            TokenKind::KwBase => "'base'".into(),
            TokenKind::KwAlpha => "'alpha'".into(),
            TokenKind::KwUpto => "'upto'".into(),
            TokenKind::KwOrders => "'orders'".into(),
            TokenKind::KwTo => "'to'".into(),
            TokenKind::KwTerms => "'terms'".into(),
            TokenKind::KwZ => "'z'".into(),
            TokenKind::KwU => "'U'".into(),
            TokenKind::Assign => "'='".into(),
            TokenKind::EqEq => "'=='".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::Caret => "'^'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::At => "'@'".into(),
            TokenKind::LBracket => "'['".into(),
            TokenKind::RBracket => "']'".into(),
            TokenKind::Comma => "','".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "let" => TokenKind::KwLet,
        "assert" => TokenKind::KwAssert,
        "eta" => TokenKind::KwEta,
        "level" => TokenKind::KwLevel,
        "modular" => TokenKind::KwModular,
        "congruence" => TokenKind::KwCongruence,
        "base" => TokenKind::KwBase,
        "alpha" => TokenKind::KwAlpha,
        "upto" => TokenKind::KwUpto,
        "orders" => TokenKind::KwOrders,
        "to" => TokenKind::KwTo,
        "terms" => TokenKind::KwTerms,
        "z" => TokenKind::KwZ,
        "U" => TokenKind::KwU,
        _ => return None,
    })
}

struct Cursor {
    chars: Vec<char>,
    index: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.index).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.index += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

/// Tokenize a full source text, appending a final [`TokenKind::Eof`].
pub fn tokenize(source: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor { chars: source.chars().collect(), index: 0, line: 1, column: 1 };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        let (tok_line, tok_col) = (cur.line, cur.column);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while let Some(ch) = cur.bump() {
                if ch == '\n' {
                    break;
                }
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut value: u64 = 0;
            while let Some(d) = cur.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                let digit = d as u64 - '0' as u64;
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(digit))
                    .ok_or_else(|| {
                        Diagnostic::new(tok_line, tok_col, "integer literal too large", d.to_string())
                    })?;
                cur.bump();
            }
            tokens.push(Token { kind: TokenKind::Int(value), line: tok_line, column: tok_col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(ch) = cur.peek() {
                if !(ch.is_ascii_alphanumeric() || ch == '_') {
                    break;
                }
                word.push(ch);
                cur.bump();
            }
            // "U3" is the operator keyword followed by its order
            if let Some(rest) = word.strip_prefix('U') {
                if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                    let value: u64 = rest.parse().map_err(|_| {
                        Diagnostic::new(tok_line, tok_col, "integer literal too large", rest)
                    })?;
                    tokens.push(Token { kind: TokenKind::KwU, line: tok_line, column: tok_col });
                    tokens.push(Token {
                        kind: TokenKind::Int(value),
                        line: tok_line,
                        column: tok_col + 1,
                    });
                    continue;
                }
            }
            let kind = keyword(&word).unwrap_or(TokenKind::Ident(word));
            tokens.push(Token { kind, line: tok_line, column: tok_col });
            continue;
        }
        cur.bump();
        let kind = match c {
            '=' => {
                if cur.peek() == Some('=') {
                    cur.bump();
                    TokenKind::EqEq
                } else {
                    TokenKind::Assign
                }
            }
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '@' => TokenKind::At,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ',' => TokenKind::Comma,
            '-' => TokenKind::Minus,
            other => {
                return Err(Diagnostic::new(
                    tok_line,
                    tok_col,
                    "unexpected character",
                    other.to_string(),
                ));
            }
        };
        tokens.push(Token { kind, line: tok_line, column: tok_col });
    }
    tokens.push(Token { kind: TokenKind::Eof, line: cur.line, column: cur.column });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(source: &str) -> Vec<TokenKind> {
        tokenize(source).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn splits_u_operator() {
        assert_eq!(
            kinds("U3(F)"),
            vec![
                TokenKind::KwU,
                TokenKind::Int(3),
                TokenKind::LParen,
                TokenKind::Ident("F".into()),
                TokenKind::RParen,
                TokenKind::Eof,
            ]
        );
        // U followed by letters stays an identifier
        assert_eq!(kinds("U3x")[0], TokenKind::Ident("U3x".into()));
        assert_eq!(kinds("U")[0], TokenKind::KwU);
    }

    #[test]
    fn comments_and_positions() {
        let tokens = tokenize("let F = 1 # trailing\nassert").unwrap();
        let assert_tok = tokens.iter().find(|t| t.kind == TokenKind::KwAssert).unwrap();
        assert_eq!((assert_tok.line, assert_tok.column), (2, 1));
    }

    #[test]
    fn eq_vs_eqeq() {
        assert_eq!(kinds("= ==")[..2], [TokenKind::Assign, TokenKind::EqEq]);
    }

    #[test]
    fn rejects_unknown_characters() {
        let err = tokenize("let F = $").unwrap_err();
        assert_eq!((err.line, err.column), (1, 9));
        assert_eq!(err.token, "$");
    }

    #[test]
    fn rejects_huge_integers() {
        let err = tokenize("99999999999999999999999").unwrap_err();
        assert_eq!(err.message, "integer literal too large");
    }

    #[test]
    fn eta_and_z_are_keywords() {
        assert_eq!(
            kinds("eta(9z)"),
            vec![
                TokenKind::KwEta,
                TokenKind::LParen,
                TokenKind::Int(9),
                TokenKind::KwZ,
                TokenKind::RParen,
                TokenKind::Eof,
            ]
        );
    }
}
