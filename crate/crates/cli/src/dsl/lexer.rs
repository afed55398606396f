//! Tokens with source positions.

use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const SYMBOLS: [&str; 16] = ["->", "{", "}", "(", ")", "[", "]", ";", ":", ",", "=", "+", "-", "*", "/", "^"];

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = Span::new(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), span });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let n = s
                .parse()
                .map_err(|_| ParseError::syntax(span, format!("integer literal `{s}` is too large")))?;
            out.push(Token { tok: Tok::Int(n), span });
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(**s))
                .ok_or_else(|| ParseError::syntax(span, format!("unexpected character `{c}`")))?;
            i += sym.len();
            col += sym.len();
            out.push(Token { tok: Tok::Sym(sym), span });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(line, col),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_primes() {
        let t = lex("d e1' = -x^2;\n  [a,b]").unwrap();
        assert_eq!(t[1].tok, Tok::Ident("e1'".into()));
        assert_eq!(t[1].span, Span::new(1, 3));
        assert_eq!(t[3].tok, Tok::Sym("-"));
        let open = t.iter().find(|k| k.tok == Tok::Sym("[")).unwrap();
        assert_eq!((open.span.line, open.span.col), (2, 3));
    }

    #[test]
    fn arrow_is_one_token() {
        let t = lex("x -> y").unwrap();
        assert_eq!(t[1].tok, Tok::Sym("->"));
    }

    #[test]
    fn rejects_stray_characters() {
        let e = lex("x = $").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
    }
}
