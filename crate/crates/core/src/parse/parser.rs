use num::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{axis_from_name, Kind, SymbolFamily};
use crate::coeff::Rational;

use super::lexer::{tokenize, Tok, Token};
use super::{Expr, ParseError, Pos, VExpr, MAX_EXPRESSION_BYTES};

const MAX_DEPTH: usize = 200;

pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    if text.len() > MAX_EXPRESSION_BYTES {
        return Err(ParseError::TooLong(text.len()));
    }
    let mut p = Parser { toks: tokenize(text)?, at: 0, depth: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected(&["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"]));
    }
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            message: format!("unexpected {}", self.peek().describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&[&tok.describe()]))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::TooDeep(self.pos()));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.leave();
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    let d = self.nonzero_number()?;
                    lhs = Expr::Div(Box::new(lhs), d);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.leave();
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            let e = match self.peek().clone() {
                Tok::Number(n) if n.is_integer() && n.is_positive() => n.to_integer().to_u32(),
                _ => None,
            };
            let Some(e) = e else {
                return Err(ParseError::Syntax {
                    pos,
                    message: "power exponent must be a positive integer".into(),
                    expected: vec!["integer ≥ 1".into()],
                });
            };
            self.bump();
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn nonzero_number(&mut self) -> Result<Rational, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) if !n.is_zero() => {
                self.bump();
                Ok(n)
            }
            Tok::Number(_) => Err(ParseError::Syntax {
                pos: self.pos(),
                message: "division by zero".into(),
                expected: vec!["nonzero number".into()],
            }),
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn axis(&mut self) -> Result<usize, ParseError> {
        self.expect(Tok::Dot)?;
        if let Tok::Ident(name) = self.peek() {
            let mut chars = name.chars();
            if let (Some(c), None) = (chars.next(), chars.next()) {
                if let Some(a) = axis_from_name(c) {
                    self.bump();
                    return Ok(a);
                }
            }
        }
        Err(ParseError::Syntax {
            pos: self.pos(),
            message: format!("invalid component {}", self.peek().describe()),
            expected: vec!["`x`".into(), "`y`".into(), "`z`".into()],
        })
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(n) => {
                self.bump();
                Ok(Expr::Number(n))
            }
            Tok::LParen => {
                let save = self.at;
                let depth = self.depth;
                if let Ok(v) = self.paren_vector_component() {
                    return Ok(v);
                }
                self.at = save;
                self.depth = depth;
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => {
                    self.bump();
                    Ok(Expr::ImaginaryUnit)
                }
                "dot" => {
                    let (mut args, _) = self.vector_call("dot", 2)?;
                    let b = args.pop().expect("arity checked");
                    let a = args.pop().expect("arity checked");
                    Ok(Expr::Dot(a, b))
                }
                "normfn" => self.normfn(),
                _ => {
                    let vector = self.vprim()?;
                    let axis = self.axis()?;
                    Ok(Expr::Component { vector, axis, pos })
                }
            },
            _ => Err(self.unexpected(&["number", "`i`", "`z[`", "`p[`", "`dot(`", "`cross(`", "`normfn(`", "`(`"])),
        }
    }

    fn paren_vector_component(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        self.expect(Tok::LParen)?;
        let vector = self.vexpr()?;
        self.expect(Tok::RParen)?;
        let axis = self.axis()?;
        Ok(Expr::Component { vector, axis, pos })
    }

    fn normfn(&mut self) -> Result<Expr, ParseError> {
        let pos = self.bump().pos;
        self.expect(Tok::LParen)?;
        let name = match self.peek().clone() {
            Tok::Ident(n) => {
                self.bump();
                n
            }
            _ => return Err(self.unexpected(&["potential name"])),
        };
        if *self.peek() == Tok::RParen {
            return Err(ParseError::Arity { pos, function: "normfn".into(), expected: 2, got: 1 });
        }
        self.expect(Tok::Comma)?;
        let arg = self.vexpr()?;
        let mut got = 2;
        while *self.peek() == Tok::Comma {
            self.bump();
            self.vexpr()?;
            got += 1;
        }
        self.expect(Tok::RParen)?;
        if got != 2 {
            return Err(ParseError::Arity { pos, function: "normfn".into(), expected: 2, got });
        }
        Ok(Expr::NormFn { name, arg, pos })
    }

    /// `name(vexpr, ...)` with an exact argument count.
    fn vector_call(&mut self, name: &str, arity: usize) -> Result<(Vec<VExpr>, Pos), ParseError> {
        let pos = self.bump().pos;
        self.expect(Tok::LParen)?;
        let mut args = vec![self.vexpr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.vexpr()?);
        }
        self.expect(Tok::RParen)?;
        if args.len() != arity {
            return Err(ParseError::Arity { pos, function: name.into(), expected: arity, got: args.len() });
        }
        Ok((args, pos))
    }

    fn vexpr(&mut self) -> Result<VExpr, ParseError> {
        self.enter()?;
        let mut lhs = self.vterm()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = VExpr::Add(Box::new(lhs), Box::new(self.vterm()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = VExpr::Sub(Box::new(lhs), Box::new(self.vterm()?));
                }
                _ => break,
            }
        }
        self.leave();
        Ok(lhs)
    }

    fn vterm(&mut self) -> Result<VExpr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            self.enter()?;
            let inner = self.vterm()?;
            self.leave();
            return Ok(VExpr::Neg(Box::new(inner)));
        }
        let mut scale = Rational::one();
        if let Tok::Number(n) = self.peek().clone() {
            self.bump();
            scale = n;
            if *self.peek() == Tok::Slash {
                self.bump();
                scale /= self.nonzero_number()?;
            }
            self.expect(Tok::Star)?;
        }
        let mut v = self.vprim()?;
        if *self.peek() == Tok::Slash {
            self.bump();
            scale /= self.nonzero_number()?;
        }
        if !scale.is_one() {
            v = VExpr::Scale(scale, Box::new(v));
        }
        Ok(v)
    }

    fn vprim(&mut self) -> Result<VExpr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let v = self.vexpr()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" | "p" => {
                    self.bump();
                    let kind = if name == "z" { Kind::Position } else { Kind::Momentum };
                    self.expect(Tok::LBracket)?;
                    let particle = match self.peek().clone() {
                        Tok::Number(n) if n.is_integer() && n.is_positive() => n.to_integer().to_usize(),
                        _ => None,
                    };
                    let Some(particle) = particle else {
                        return Err(self.unexpected(&["particle index ≥ 1"]));
                    };
                    self.bump();
                    self.expect(Tok::RBracket)?;
                    Ok(VExpr::Particle { kind, particle, pos })
                }
                "a" | "v" | "theta" => {
                    self.bump();
                    Ok(VExpr::Symbol(match name.as_str() {
                        "a" => SymbolFamily::Translation,
                        "v" => SymbolFamily::Boost,
                        _ => SymbolFamily::Rotation,
                    }))
                }
                "cross" => {
                    let (mut args, pos) = self.vector_call("cross", 2)?;
                    let b = args.pop().expect("arity checked");
                    let a = args.pop().expect("arity checked");
                    Ok(VExpr::Cross(Box::new(a), Box::new(b), pos))
                }
                _ => Err(ParseError::UnknownSymbol { pos, name }),
            },
            _ => Err(self.unexpected(&["`z[`", "`p[`", "`cross(`", "`(`"])),
        }
    }
}
