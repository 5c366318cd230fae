//! Textual syntax for exact constants: `3/2`, `i`, `1/2+3*i`, `sqrt(2)*(1+i)`.
//!
//! Grammar (no implicit multiplication):
//!   expr   := term (('+'|'-') term)*
//!   term   := factor (('*'|'/') factor)*
//!   factor := '-' factor | base ('^' uint)?
//!   base   := rational | 'i' | 'sqrt' '(' expr ')' | '(' expr ')'

use super::gauss::GaussRat;
use super::tower::{Ctx, FieldError, TowerElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LiteralError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }


    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, LiteralError> {
        Err(LiteralError::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn integer(&mut self) -> Result<BigInt, LiteralError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }
}

/// Parse a constant, extending `ctx` with square-root levels as needed.
pub fn parse_constant(ctx: &Ctx, text: &str) -> Result<(TowerElem, Ctx), LiteralError> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut ctx = ctx.clone();
    let v = expr(&mut lx, &mut ctx)?;
    lx.skip_ws();
    if lx.pos != lx.src.len() {
        return lx.err("trailing input");
    }
    Ok((v, ctx))
}

fn expr(lx: &mut Lexer, ctx: &mut Ctx) -> Result<TowerElem, LiteralError> {
    let mut acc = term(lx, ctx)?;
    loop {
        if lx.eat(b'+') {
            let t = term(lx, ctx)?;
            acc = acc.lift_to(ctx)?.try_add(&t)?;
        } else if lx.eat(b'-') {
            let t = term(lx, ctx)?;
            acc = acc.lift_to(ctx)?.try_sub(&t)?;
        } else {
            return Ok(acc);
        }
    }
}

fn term(lx: &mut Lexer, ctx: &mut Ctx) -> Result<TowerElem, LiteralError> {
    let mut acc = factor(lx, ctx)?;
    loop {
        if lx.eat(b'*') {
            let t = factor(lx, ctx)?;
            acc = acc.lift_to(ctx)?.try_mul(&t)?;
        } else if lx.peek() == Some(b'/') {
            // lookahead: '/' between factors, not inside a rational literal
            lx.pos += 1;
            let t = factor(lx, ctx)?;
            acc = acc.lift_to(ctx)?.try_div(&t)?;
        } else {
            return Ok(acc);
        }
    }
}

fn factor(lx: &mut Lexer, ctx: &mut Ctx) -> Result<TowerElem, LiteralError> {
    if lx.eat(b'-') {
        let f = factor(lx, ctx)?;
        return Ok(-f);
    }
    let b = base(lx, ctx)?;
    if lx.eat(b'^') {
        let n = lx.integer()?;
        let n: u32 = n
            .try_into()
            .map_err(|_| LiteralError::Parse { pos: lx.pos, msg: "exponent too large".into() })?;
        return Ok(b.pow(n));
    }
    Ok(b)
}

fn base(lx: &mut Lexer, ctx: &mut Ctx) -> Result<TowerElem, LiteralError> {
    match lx.peek() {
        Some(b'(') => {
            lx.pos += 1;
            let e = expr(lx, ctx)?;
            if !lx.eat(b')') {
                return lx.err("expected ')'");
            }
            Ok(e)
        }
        Some(b'i') => {
            lx.pos += 1;
            Ok(TowerElem::i(ctx))
        }
        Some(b's') => {
            let kw = b"sqrt";
            if lx.src.len() >= lx.pos + 4 && &lx.src[lx.pos..lx.pos + 4] == kw {
                lx.pos += 4;
                if !lx.eat(b'(') {
                    return lx.err("expected '(' after sqrt");
                }
                let e = expr(lx, ctx)?;
                if !lx.eat(b')') {
                    return lx.err("expected ')'");
                }
                let (root, newctx) = e.sqrt()?;
                *ctx = newctx;
                Ok(root)
            } else {
                lx.err("unknown identifier")
            }
        }
        Some(c) if c.is_ascii_digit() => {
            let num = lx.integer()?;
            // rational literal digits '/' digits
            let save = lx.pos;
            if lx.eat(b'/') {
                if lx.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                    let den = lx.integer()?;
                    if den == BigInt::from(0) {
                        return lx.err("zero denominator");
                    }
                    return Ok(TowerElem::from_gauss(
                        ctx,
                        GaussRat::from_rational(BigRational::new(num, den)),
                    ));
                }
                lx.pos = save; // '/' belongs to term level
            }
            Ok(TowerElem::from_gauss(ctx, GaussRat::from_rational(BigRational::from_integer(num))))
        }
        _ => lx.err("expected constant"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Tower;

    #[test]
    fn parses_basics() {
        let ctx = Tower::base();
        let (v, c) = parse_constant(&ctx, "1/2+3*i").unwrap();
        assert_eq!(c.depth(), 0);
        assert_eq!(v, TowerElem::from_gauss(&ctx, GaussRat::from_ratio(1, 2, 3, 1)));

        let (v, c) = parse_constant(&ctx, "sqrt(2)*(1+i)").unwrap();
        assert_eq!(c.depth(), 1);
        let sq = v.try_mul(&v).unwrap();
        assert_eq!(sq, TowerElem::from_gauss(&c, GaussRat::from_ratio(0, 1, 4, 1)));
    }

    #[test]
    fn rejects_garbage() {
        let ctx = Tower::base();
        assert!(parse_constant(&ctx, "1+").is_err());
        assert!(parse_constant(&ctx, "2 x").is_err());
        assert!(parse_constant(&ctx, "sqrt 2").is_err());
        assert!(parse_constant(&ctx, "1/0").is_err());
    }
}
