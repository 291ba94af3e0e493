//! Recursive-descent parser for the input language:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | 'x' | 'y' | 't' | '(' expr ')'
//! exponent := ['-'] integer | '(' ['-'] integer ')'
//! ```
//!
//! Juxtaposition ("2x", "(x)(y)") is rejected.

use num_bigint::BigInt;

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::poly::multi::{PolyQ, Var};
use crate::poly::upoly::RatFunc;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                out.push((start, Tok::Int(s.parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Int(BigInt),
    Var(Var, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    let at = self.here();
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return self.err("implicit multiplication is not allowed; use '*'");
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.here();
        self.bump();
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.bump();
        }
        let neg = self.peek() == Some(&Tok::Minus);
        if neg {
            self.bump();
        }
        let e = match self.bump() {
            Some(Tok::Int(n)) => n,
            _ => {
                self.pos -= 1;
                return self.err("expected an integer exponent");
            }
        };
        if paren && self.bump() != Some(Tok::RParen) {
            self.pos -= 1;
            return self.err("expected ')'");
        }
        let e: i64 = i64::try_from(&e)
            .ok()
            .filter(|e| *e <= 10_000)
            .ok_or(Error::Syntax {
                pos: at,
                msg: "exponent too large".into(),
            })?;
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, at))
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Ident(name)) => match Var::from_name(&name) {
                Some(v) => Ok(Expr::Var(v, at)),
                None => Err(Error::UnknownVariable { pos: at, name }),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(_) => {
                self.pos -= 1;
                self.err("expected a number, a variable or '('")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_expr(toks: Vec<(usize, Tok)>, end: usize) -> Result<Expr> {
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected token");
    }
    Ok(e)
}

fn check_vars(e: &Expr, allowed: &[Var]) -> Result<()> {
    match e {
        Expr::Int(_) => Ok(()),
        Expr::Var(v, pos) => {
            if allowed.contains(v) {
                Ok(())
            } else {
                Err(Error::UnknownVariable {
                    pos: *pos,
                    name: v.name().to_string(),
                })
            }
        }
        Expr::Neg(a) | Expr::Pow(a, _, _) => check_vars(a, allowed),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            check_vars(a, allowed)?;
            check_vars(b, allowed)
        }
    }
}

fn to_poly(e: &Expr) -> Result<PolyQ> {
    Ok(match e {
        Expr::Int(n) => PolyQ::constant(Rat::from_int(n.clone())),
        Expr::Var(v, _) => PolyQ::var(*v),
        Expr::Neg(a) => to_poly(a)?.neg(),
        Expr::Add(a, b) => to_poly(a)?.add(&to_poly(b)?),
        Expr::Sub(a, b) => to_poly(a)?.sub(&to_poly(b)?),
        Expr::Mul(a, b) => to_poly(a)?.mul(&to_poly(b)?),
        Expr::Div(a, b, pos) => {
            let d = to_poly(b)?;
            match d.constant_value() {
                Some(c) if !c.is_zero() => to_poly(a)?.scale(&c.recip()),
                Some(_) => {
                    return Err(Error::Syntax {
                        pos: *pos,
                        msg: "division by zero".into(),
                    })
                }
                None => {
                    return Err(Error::Syntax {
                        pos: *pos,
                        msg: "polynomials may only be divided by nonzero constants".into(),
                    })
                }
            }
        }
        Expr::Pow(a, k, pos) => {
            if *k < 0 {
                return Err(Error::Syntax {
                    pos: *pos,
                    msg: "negative exponent in a polynomial".into(),
                });
            }
            to_poly(a)?.pow(*k as u32)
        }
    })
}

fn to_ratfunc(e: &Expr) -> Result<RatFunc<Rat>> {
    Ok(match e {
        Expr::Int(n) => RatFunc::constant(Rat::from_int(n.clone())),
        Expr::Var(_, _) => RatFunc::var(),
        Expr::Neg(a) => to_ratfunc(a)?.neg(),
        Expr::Add(a, b) => to_ratfunc(a)?.add(&to_ratfunc(b)?),
        Expr::Sub(a, b) => to_ratfunc(a)?.sub(&to_ratfunc(b)?),
        Expr::Mul(a, b) => to_ratfunc(a)?.mul(&to_ratfunc(b)?),
        Expr::Div(a, b, pos) => to_ratfunc(a)?
            .div(&to_ratfunc(b)?)
            .map_err(|_| Error::Syntax {
                pos: *pos,
                msg: "division by zero".into(),
            })?,
        Expr::Pow(a, k, pos) => to_ratfunc(a)?.pow(*k).map_err(|_| Error::Syntax {
            pos: *pos,
            msg: "zero raised to a negative power".into(),
        })?,
    })
}

/// Parse a polynomial in x, y and t.
pub fn parse_poly(text: &str) -> Result<PolyQ> {
    let e = parse_expr(lex(text)?, text.chars().count())?;
    to_poly(&e)
}

/// Parse a plane curve equation f(x, y); t is rejected.
pub fn parse_curve(text: &str) -> Result<PolyQ> {
    let e = parse_expr(lex(text)?, text.chars().count())?;
    check_vars(&e, &[Var::X, Var::Y])?;
    to_poly(&e)
}

/// Parse a rational function of t.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc<Rat>> {
    let e = parse_expr(lex(text)?, text.chars().count())?;
    check_vars(&e, &[Var::T])?;
    to_ratfunc(&e)
}

/// Parse a comma-separated list of rational functions of t. Commas inside
/// parentheses do not split.
pub fn parse_ratfunc_list(text: &str) -> Result<Vec<RatFunc<Rat>>> {
    let toks = lex(text)?;
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = Vec::new();
    let mut last_end = 0usize;
    for (pos, tok) in toks {
        match tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Comma if depth == 0 => {
                let e = parse_expr(std::mem::take(&mut current), pos)?;
                check_vars(&e, &[Var::T])?;
                out.push(to_ratfunc(&e)?);
                last_end = pos + 1;
                continue;
            }
            Tok::Comma => {
                return Err(Error::Syntax {
                    pos,
                    msg: "unexpected ','".into(),
                })
            }
            _ => {}
        }
        current.push((pos, tok));
    }
    if current.is_empty() && !out.is_empty() {
        return Err(Error::Syntax {
            pos: last_end,
            msg: "empty coordinate after ','".into(),
        });
    }
    let e = parse_expr(current, text.chars().count())?;
    check_vars(&e, &[Var::T])?;
    out.push(to_ratfunc(&e)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::upoly::UPoly;

    #[test]
    fn parses_examples() {
        let f = parse_poly("x^2 - 2*y^2 - 1").unwrap();
        assert_eq!(f.to_string(), "x^2 - 2*y^2 - 1");
        assert!(parse_poly("0").unwrap().is_zero());
        let g = parse_poly("x^2 + (1/2)*y").unwrap();
        assert_eq!(g.coeff_xy(0, 1), Rat::new(1, 2));
        assert_eq!(parse_poly("-x^2").unwrap().coeff_xy(2, 0), Rat::from(-1));
        assert_eq!(
            parse_poly("(x+y)^2 - x*x - y^2").unwrap().to_string(),
            "2*x*y"
        );
        assert_eq!(parse_poly("x^2+y^2-0").unwrap().to_string(), "x^2 + y^2");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse_poly("2x"),
            Err(Error::Syntax {
                pos: 1,
                msg: "implicit multiplication is not allowed; use '*'".into()
            })
        );
        assert!(matches!(
            parse_poly("x +"),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_poly("(x + 1"),
            Err(Error::Syntax { pos: 6, .. })
        ));
        assert!(matches!(
            parse_poly("x $ 1"),
            Err(Error::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_poly("x/y"),
            Err(Error::Syntax { pos: 1, .. })
        ));
        assert!(matches!(parse_poly("x^-1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x/0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_variables() {
        assert_eq!(
            parse_poly("x + z"),
            Err(Error::UnknownVariable {
                pos: 4,
                name: "z".into()
            })
        );
        assert_eq!(
            parse_curve("x + t"),
            Err(Error::UnknownVariable {
                pos: 4,
                name: "t".into()
            })
        );
        assert_eq!(
            parse_ratfunc("t + x"),
            Err(Error::UnknownVariable {
                pos: 4,
                name: "x".into()
            })
        );
    }

    #[test]
    fn rational_functions() {
        let r = parse_ratfunc("(1 - t^2)/(1 + t^2)").unwrap();
        assert_eq!(
            r.den(),
            &UPoly::new(vec![Rat::one(), Rat::zero(), Rat::one()])
        );
        let s = parse_ratfunc("t^-1 + t").unwrap();
        assert_eq!(s, parse_ratfunc("(t^2 + 1)/t").unwrap());
        assert!(parse_ratfunc("1/(t - t)").is_err());
        let list = parse_ratfunc_list("t^2, t^3").unwrap();
        assert_eq!(list.len(), 2);
        let list = parse_ratfunc_list("(1-t^2)/(1+t^2), 2*t/(1+t^2)").unwrap();
        assert_eq!(list[1].to_string(), "((2)*t)/(t^2 + (1))");
        assert!(parse_ratfunc_list("t,").is_err());
    }

    fn corpus() -> Vec<&'static str> {
        vec![
            "x",
            "y",
            "t",
            "0",
            "1",
            "-1",
            "x + y",
            "x - y",
            "x*y - 1",
            "x^2 + y^2 - 1",
            "x^2 - 2*y^2 - 1",
            "x^2 - 2*y^2 - 3",
            "y - x^2",
            "x^2*y + x*y^2 - 1",
            "2*x + 4*y - 1",
            "x + 2*y - 5",
            "(1/2)*x",
            "x/2 + y/3",
            "(x - 1)^3",
            "(x + y)^4 - 1",
            "3*x^2 - 7*x*y + 2*y^2 + x - 5",
            "-x^2 - y^2",
            "x^3 - y^2",
            "x^5 + y^5 - x*y",
            "(2/3)*x^2 - (5/7)*y",
            "x*(x - 1)*(x + 1) - y^2",
            "1/2",
            "-3/4*x",
            "t^2 + 1",
            "t^3 - t",
            "100*x^100",
            "x^2 + x*y + y^2 - 7",
            "x*y*t",
            "(x + 1)*(y - 1)",
            "x - x",
            "x^2 - x^2 + y",
            "-(x - y)",
            "+x",
            "--x",
            "((x))",
            "x^0 + y^0",
            "12345678901234567890*x",
            "x^2/4 - y^2/9 - 1",
            "(1/3)*(x + y)^2",
            "y^2 - x^3 - 17",
            "x^4 + 4*y^4",
            "7",
            "-7/3",
            "x*y^2*t^3",
            "(t - 1)^2*(t + 2)",
        ]
    }

    #[test]
    fn print_parse_roundtrip() {
        let c = corpus();
        assert_eq!(c.len(), 50);
        for s in c {
            let p = parse_poly(s).unwrap();
            let printed = p.to_string();
            assert_eq!(parse_poly(&printed).unwrap(), p, "{s} -> {printed}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy() -> impl Strategy<Value = PolyQ> {
            prop::collection::vec(((0u32..4, 0u32..4), -20i64..20, 1i64..6), 0..6).prop_map(|ts| {
                PolyQ::from_terms(ts.into_iter().map(|((i, j), n, d)| {
                    (crate::poly::multi::Monomial([i, j, 0]), Rat::new(n, d))
                }))
            })
        }

        proptest! {
            #[test]
            fn printed_form_reparses(p in poly_strategy()) {
                prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
            }
        }
    }
}
