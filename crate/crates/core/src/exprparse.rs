//! Text front end for polynomials.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] integer)?
//! atom   := variable | integer ['/' integer] | '(' expr ')'
//! ```
//!
//! Gluing corrections use the variables `x`, `y1`, `y2` (only `x` may carry a
//! negative exponent); parameter polynomials use `a0 .. a{m}`. There are no
//! floating literals and no implicit multiplication. Error positions are
//! 1-based character offsets.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::XyExp;
use crate::{Error, GluingPoly, ParamPoly, Rat};

/// Parses a gluing correction `f`, `g` or `h`.
pub fn parse_expr(src: &str) -> Result<GluingPoly, Error> {
    let vars = VarSet {
        names: vec!["x".into(), "y1".into(), "y2".into()],
        laurent: vec![true, false, false],
    };
    let poly = Parser::new(src, &vars)?.parse()?;
    Ok(GluingPoly::from_terms(poly.into_iter().map(|(e, c)| {
        (XyExp::new(e[0], e[1] as u32, e[2] as u32), c)
    })))
}

/// Parses a polynomial in `a0 .. a{arity-1}`, as printed by [`print_canonical`].
pub fn parse_param_poly(src: &str, arity: usize) -> Result<ParamPoly, Error> {
    let vars = VarSet {
        names: (0..arity).map(|j| format!("a{j}")).collect(),
        laurent: vec![false; arity],
    };
    let poly = Parser::new(src, &vars)?.parse()?;
    ParamPoly::from_terms(
        arity,
        poly.into_iter()
            .map(|(e, c)| (e.into_iter().map(|v| v as u32).collect(), c)),
    )
}

/// Canonical text of a [`GluingPoly`] or [`ParamPoly`]: terms in ascending
/// graded order, coefficients as `p/q` with `/1` omitted.
pub fn print_canonical<P: Display>(p: &P) -> String {
    p.to_string()
}

struct VarSet {
    names: Vec<String>,
    laurent: Vec<bool>,
}

/// Exponent vector -> nonzero coefficient.
type Terms = BTreeMap<Vec<i64>, Rat>;

#[derive(Debug, Clone, PartialEq)]
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
    End,
}

impl Tok {
    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Int(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E') {
                    return Err(err(i + 1, "floating literals are not supported"));
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), pos));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                out.push((Tok::Ident(name), pos));
                continue;
            }
            other => return Err(err(pos, format!("unexpected character '{other}'"))),
        };
        out.push((tok, pos));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'v> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'v VarSet,
}

impl<'v> Parser<'v> {
    fn new(src: &str, vars: &'v VarSet) -> Result<Self, Error> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
            vars,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn parse(mut self) -> Result<Terms, Error> {
        let p = self.expr()?;
        match self.peek() {
            Tok::End => Ok(p),
            t if t.starts_atom() => Err(err(
                self.pos(),
                format!("missing operator before {} (implicit multiplication)", t.describe()),
            )),
            t => Err(err(self.pos(), format!("unexpected {}", t.describe()))),
        }
    }

    fn expr(&mut self) -> Result<Terms, Error> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = scale(&acc, &-Rat::one());
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = add(&acc, &t, &Rat::one());
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = add(&acc, &t, &-Rat::one());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Terms, Error> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let f = self.factor()?;
            acc = mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Terms, Error> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (negative, pos) = match self.peek() {
            Tok::Minus => {
                let p = self.pos();
                self.bump();
                (true, p)
            }
            _ => (false, self.pos()),
        };
        let k = match self.bump() {
            (Tok::Int(n), _) => n,
            (t, p) => {
                return Err(err(
                    p,
                    format!("exponent must be an integer, found {}", t.describe()),
                ))
            }
        };
        if *self.peek() == Tok::Slash {
            return Err(err(self.pos(), "exponent must be an integer"));
        }
        let k: u32 = k
            .try_into()
            .map_err(|_| err(pos, "exponent too large"))?;
        if !negative {
            return Ok(pow(&base, k, self.vars.names.len()));
        }
        self.invert_monomial(&base, pos)
            .map(|inv| pow(&inv, k, self.vars.names.len()))
    }

    /// Inverse of a single monomial in the Laurent variables.
    fn invert_monomial(&self, base: &Terms, pos: usize) -> Result<Terms, Error> {
        if base.len() != 1 {
            return Err(err(pos, "negative exponent on a non-monomial"));
        }
        let (e, c) = base.iter().next().expect("one term");
        for (j, &k) in e.iter().enumerate() {
            if k != 0 && !self.vars.laurent[j] {
                return Err(err(
                    pos,
                    format!("negative exponent on {}", self.vars.names[j]),
                ));
            }
        }
        let mut inv = Terms::new();
        inv.insert(e.iter().map(|k| -k).collect(), c.recip());
        Ok(inv)
    }

    fn atom(&mut self) -> Result<Terms, Error> {
        let arity = self.vars.names.len();
        match self.bump() {
            (Tok::Ident(name), pos) => {
                let j = self
                    .vars
                    .names
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| err(pos, format!("unknown variable '{name}'")))?;
                let mut e = vec![0; arity];
                e[j] = 1;
                Ok(Terms::from([(e, Rat::one())]))
            }
            (Tok::Int(num), _) => {
                let mut value = Rat::from_integer(num);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        (Tok::Int(den), p) => {
                            if den.is_zero() {
                                return Err(err(p, "zero denominator"));
                            }
                            value /= Rat::from_integer(den);
                        }
                        (t, p) => {
                            return Err(err(
                                p,
                                format!("expected denominator, found {}", t.describe()),
                            ))
                        }
                    }
                }
                let mut out = Terms::new();
                if !value.is_zero() {
                    out.insert(vec![0; arity], value);
                }
                Ok(out)
            }
            (Tok::LParen, _) => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (t, p) if t.starts_atom() => Err(err(
                        p,
                        format!("missing operator before {} (implicit multiplication)", t.describe()),
                    )),
                    (t, p) => Err(err(p, format!("expected ')', found {}", t.describe()))),
                }
            }
            (t, p) => Err(err(p, format!("expected a term, found {}", t.describe()))),
        }
    }
}

fn insert(out: &mut Terms, e: Vec<i64>, c: Rat) {
    let s = out.remove(&e).unwrap_or_else(Rat::zero) + c;
    if !s.is_zero() {
        out.insert(e, s);
    }
}

fn add(p: &Terms, q: &Terms, sign: &Rat) -> Terms {
    let mut out = p.clone();
    for (e, c) in q {
        insert(&mut out, e.clone(), c * sign);
    }
    out
}

fn scale(p: &Terms, c: &Rat) -> Terms {
    p.iter().map(|(e, v)| (e.clone(), v * c)).collect()
}

fn mul(p: &Terms, q: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ea, ca) in p {
        for (eb, cb) in q {
            let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
            insert(&mut out, e, ca * cb);
        }
    }
    out
}

fn pow(p: &Terms, k: u32, arity: usize) -> Terms {
    let one = Terms::from([(vec![0; arity], Rat::one())]);
    (0..k).fold(one, |acc, _| mul(&acc, p))
}

/// Renders a rational exactly as the canonical printer does.
pub fn format_rat(r: &Rat) -> String {
    if r.is_negative() {
        format!("-{}", r.abs())
    } else {
        r.to_string()
    }
}
