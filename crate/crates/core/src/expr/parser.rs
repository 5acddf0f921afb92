//! Precedence-climbing parser.
//!
//! Binding powers, loosest first: `+ -` (left), `* /` (left), unary `-`,
//! `^` (right).

use super::lexer::{tokenize, Spanned, Token};
use super::{BinOp, Expr, Func, ParseError, ParseErrorKind};

const ADD_BP: (u8, u8) = (1, 2);
const MUL_BP: (u8, u8) = (3, 4);
const NEG_BP: u8 = 5;
const POW_BP: (u8, u8) = (7, 6);

struct Parser<'a> {
    tokens: Vec<Spanned>,
    cursor: usize,
    end: usize,
    coords: &'a [String],
    params: &'a [String],
}

pub fn parse(text: &str, coords: &[String], params: &[String]) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError { position: 0, kind: ParseErrorKind::Empty });
    }
    let mut p = Parser { tokens, cursor: 0, end: text.len(), coords, params };
    let expr = p.expr(0)?;
    if let Some(t) = p.peek() {
        return Err(ParseError { position: t.pos, kind: ParseErrorKind::UnexpectedToken(t.token.describe()) });
    }
    Ok(expr)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.cursor)
    }

    fn next(&mut self) -> Result<Spanned, ParseError> {
        let t = self
            .tokens
            .get(self.cursor)
            .cloned()
            .ok_or(ParseError { position: self.end, kind: ParseErrorKind::UnexpectedEnd })?;
        self.cursor += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        let t = self.next()?;
        if t.token == want {
            Ok(())
        } else {
            Err(ParseError { position: t.pos, kind: ParseErrorKind::UnexpectedToken(t.token.describe()) })
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.prefix()?;
        while let Some(t) = self.peek() {
            let (op, (lbp, rbp)) = match t.token {
                Token::Plus => (BinOp::Add, ADD_BP),
                Token::Minus => (BinOp::Sub, ADD_BP),
                Token::Star => (BinOp::Mul, MUL_BP),
                Token::Slash => (BinOp::Div, MUL_BP),
                Token::Caret => (BinOp::Pow, POW_BP),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.cursor += 1;
            let rhs = self.expr(rbp)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let t = self.next()?;
        match t.token {
            Token::Number(v) => Ok(Expr::Num(v)),
            Token::Minus => Ok(Expr::Neg(Box::new(self.expr(NEG_BP)?))),
            Token::LParen => {
                let inner = self.expr(0)?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::Ident(name) => self.identifier(name, t.pos),
            other => Err(ParseError { position: t.pos, kind: ParseErrorKind::UnexpectedToken(other.describe()) }),
        }
    }

    fn identifier(&mut self, name: String, pos: usize) -> Result<Expr, ParseError> {
        if let Some(func) = Func::from_name(&name) {
            self.expect(Token::LParen)?;
            let arg = self.expr(0)?;
            self.expect(Token::RParen)?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        if let Some(index) = self.coords.iter().position(|c| *c == name) {
            return Ok(Expr::Coord { index, name });
        }
        if self.params.contains(&name) {
            return Ok(Expr::Param(name));
        }
        Err(ParseError { position: pos, kind: ParseErrorKind::UnknownIdentifier(name) })
    }
}
