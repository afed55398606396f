//! Recursive-descent parser for model files.

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::ParseError;

pub fn parse_model(src: &str) -> Result<ModelFile, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        items.push(p.item()?);
    }
    Ok(ModelFile { items })
}

/// Parse a standalone expression (used by tests and the printer fixpoint).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        Err(ParseError::syntax(
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        ))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.unexpected(&format!("`{s}`"))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == kw)
    }

    fn kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let at = At(self.bump().span);
                Ok(Ident { name, at })
            }
            _ => self.unexpected("a name"),
        }
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let span = self.span();
        let neg = self.eat_sym("-");
        let n = i64::try_from(self.uint()?).map_err(|_| ParseError::syntax(span, "integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn small_int(&mut self) -> Result<i32, ParseError> {
        let span = self.span();
        i32::try_from(self.int()?).map_err(|_| ParseError::syntax(span, "integer out of range"))
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.unexpected("a declaration"),
        };
        match kw.as_str() {
            "algebra" => {
                self.bump();
                let name = self.ident()?;
                Ok(Item::Algebra(self.block_body(name, None, None)?))
            }
            "module" | "cdga" => {
                self.bump();
                let name = self.ident()?;
                self.kw("over")?;
                let over = self.ident()?;
                let cutoff = if kw == "cdga" {
                    self.kw("cutoff")?;
                    let span = self.span();
                    Some(u32::try_from(self.uint()?).map_err(|_| ParseError::syntax(span, "cutoff out of range"))?)
                } else {
                    None
                };
                let b = self.block_body(name, Some(over), cutoff)?;
                Ok(if kw == "cdga" { Item::Cdga(b) } else { Item::Module(b) })
            }
            "brackets" => {
                self.bump();
                let module = self.ident()?;
                self.sym("{")?;
                let mut stmts = Vec::new();
                while !self.eat_sym("}") {
                    stmts.push(self.bracket_stmt()?);
                }
                Ok(Item::Brackets(BracketsBlock { module, stmts }))
            }
            "morphism" => {
                self.bump();
                let name = self.ident()?;
                self.sym(":")?;
                let src = self.ident()?;
                self.sym("->")?;
                let tgt = self.ident()?;
                self.sym("{")?;
                let mut maps = Vec::new();
                while !self.eat_sym("}") {
                    let g = self.ident()?;
                    self.sym("->")?;
                    let e = self.expr()?;
                    self.sym(";")?;
                    maps.push((g, e));
                }
                Ok(Item::Morphism(MorphismBlock { name, src, tgt, maps }))
            }
            "config" => {
                self.bump();
                self.sym("{")?;
                let mut entries = Vec::new();
                while !self.eat_sym("}") {
                    let key = self.ident()?;
                    self.sym("=")?;
                    let lo = self.int()?;
                    let value = if self.eat_sym(":") {
                        let span = self.span();
                        let hi = self.small_int()?;
                        let lo = i32::try_from(lo).map_err(|_| ParseError::syntax(span, "integer out of range"))?;
                        ConfigValue::Range(lo, hi)
                    } else {
                        ConfigValue::Int(lo)
                    };
                    self.sym(";")?;
                    entries.push((key, value));
                }
                Ok(Item::Config(ConfigBlock { entries }))
            }
            _ => self.unexpected("`algebra`, `module`, `cdga`, `brackets`, `morphism` or `config`"),
        }
    }

    fn block_body(&mut self, name: Ident, over: Option<Ident>, cutoff: Option<u32>) -> Result<Block, ParseError> {
        self.sym("{")?;
        let mut stmts = Vec::new();
        while !self.eat_sym("}") {
            if self.is_kw("d") && matches!(self.peek_at(1), Tok::Ident(_)) {
                self.bump();
                let name = self.ident()?;
                self.sym("=")?;
                let value = self.expr()?;
                self.sym(";")?;
                stmts.push(Stmt::Diff { name, value });
            } else {
                let name = self.ident()?;
                self.sym(":")?;
                let degree = self.small_int()?;
                self.sym(";")?;
                stmts.push(Stmt::Gen { name, degree });
            }
        }
        Ok(Block {
            name,
            over,
            cutoff,
            stmts,
        })
    }

    fn bracket_stmt(&mut self) -> Result<BracketStmt, ParseError> {
        let anchor = if self.eat_sym("[") {
            false
        } else if self.is_kw("anchor") {
            self.bump();
            self.sym("(")?;
            true
        } else {
            return self.unexpected("`[` or `anchor`");
        };
        let close = if anchor { ")" } else { "]" };
        let mut args = vec![self.ident()?];
        while self.eat_sym(",") {
            args.push(self.ident()?);
        }
        self.sym(close)?;
        self.sym("=")?;
        let value = self.expr()?;
        self.sym(";")?;
        Ok(if anchor {
            BracketStmt::Anchor { args, value }
        } else {
            BracketStmt::Bracket { args, value }
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut negative = if self.eat_sym("-") {
            true
        } else {
            self.eat_sym("+");
            false
        };
        loop {
            let mut factors = vec![self.factor()?];
            while self.eat_sym("*") {
                factors.push(self.factor()?);
            }
            terms.push(Term { negative, factors });
            if self.eat_sym("+") {
                negative = false;
            } else if self.eat_sym("-") {
                negative = true;
            } else {
                return Ok(Expr { terms });
            }
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        if self.eat_sym("^") {
            let span = self.span();
            let e = self.uint()?;
            u32::try_from(e).map_err(|_| ParseError::syntax(span, "exponent out of range"))
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(num) => {
                self.bump();
                let den = if self.eat_sym("/") { self.uint()? } else { 1 };
                if den == 0 {
                    return Err(ParseError::syntax(span, "zero denominator"));
                }
                Ok(Factor::Number { num, den, at: At(span) })
            }
            Tok::Ident(s) if s == "D" && matches!(self.peek_at(1), Tok::Sym("[")) => {
                self.bump();
                self.sym("[")?;
                let g = self.ident()?;
                self.sym("]")?;
                Ok(Factor::Deriv(g))
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                let exp = self.exponent()?;
                Ok(Factor::Var { name, exp })
            }
            Tok::Sym("(") => {
                self.bump();
                let expr = self.expr()?;
                self.sym(")")?;
                let exp = self.exponent()?;
                Ok(Factor::Group { expr, exp, at: At(span) })
            }
            _ => self.unexpected("a number, a name or `(`"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_algebra() {
        let m = parse_model("algebra A { x : 0; }").unwrap();
        let Item::Algebra(b) = &m.items[0] else { panic!() };
        assert_eq!(b.name.name, "A");
        assert!(matches!(&b.stmts[0], Stmt::Gen { degree: 0, .. }));
    }

    #[test]
    fn expressions() {
        let e = parse_expr("-2/3*x^2 + (a - b)^2*y - D[x]").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert!(e.terms[0].negative && e.terms[2].negative);
        assert!(matches!(e.terms[2].factors[0], Factor::Deriv(_)));
    }

    #[test]
    fn d_can_be_a_generator_name() {
        let m = parse_model("algebra A { d : 0; d d = 0; }").unwrap();
        let Item::Algebra(b) = &m.items[0] else { panic!() };
        assert_eq!(b.stmts.len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_model("algebra A {\n  x : ;\n}").unwrap_err();
        assert_eq!((e.line, e.col), (2, 7));
        assert!(e.message.contains("expected an integer"));
    }
}
