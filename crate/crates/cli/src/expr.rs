//! Expression syntax: `x[i,j]`, `xi[i,j]` (or the short forms `x11`,
//! `xi12`), `Dm`, `Dn`, `q`, rational literals, `+ - *`, parentheses and
//! integer powers. Negative powers are allowed on `Dm`, `Dn`, and on a
//! diagonal generator that is the whole of a `1×1` block.

use num_traits::Zero;
use serde::Serialize;
use superhopf::localization::{LocElement, LocKey, Localization};
use superhopf::presentation::{Element, Presentation};
use superhopf::ring::Ring;
use superhopf::scalars::{Laurent, Rational};
use superhopf::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()[],".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Rational),
    Q,
    Gen { row: usize, col: usize, xi: bool, pos: usize },
    Det { first: bool },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Neg(Box<Expr>),
    Pow { base: Box<Expr>, exp: i32, pos: usize },
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn integer(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Num(s)) => {
                let v = s.parse().or_else(|_| self.err("integer too large"))?;
                self.at += 1;
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(Expr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(Expr::Product(factors))
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.atom()?;
        let pos = self.pos();
        if self.eat('^') {
            let neg = self.eat('-');
            let k = self.integer()? as i32;
            return Ok(Expr::Pow {
                base: Box::new(base),
                exp: if neg { -k } else { k },
                pos,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(_)) => {
                let num = Rational::from_integer(self.integer()?.into());
                if self.eat('/') {
                    let den = self.integer()?;
                    if den == 0 {
                        return Err(Error::Parse {
                            pos,
                            msg: "zero denominator".into(),
                        });
                    }
                    return Ok(Expr::Num(num / Rational::from_integer(den.into())));
                }
                Ok(Expr::Num(num))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                self.ident(&name, pos)
            }
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of input"),
        }
    }

    fn ident(&mut self, name: &str, pos: usize) -> Result<Expr> {
        match name {
            "q" => return Ok(Expr::Q),
            "Dm" => return Ok(Expr::Det { first: true }),
            "Dn" => return Ok(Expr::Det { first: false }),
            "x" | "xi" => {
                self.expect('[')?;
                let row = self.integer()?;
                self.expect(',')?;
                let col = self.integer()?;
                self.expect(']')?;
                return Ok(Expr::Gen {
                    row,
                    col,
                    xi: name == "xi",
                    pos,
                });
            }
            _ => {}
        }
        let digits = name.strip_prefix("xi").or_else(|| name.strip_prefix('x'));
        match digits {
            Some(d) if d.len() == 2 && d.chars().all(|c| c.is_ascii_digit()) => {
                let b = d.as_bytes();
                Ok(Expr::Gen {
                    row: (b[0] - b'0') as usize,
                    col: (b[1] - b'0') as usize,
                    xi: name.starts_with("xi"),
                    pos,
                })
            }
            _ => Err(Error::Parse {
                pos,
                msg: format!("unknown name {name:?}"),
            }),
        }
    }
}

fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.chars().count(),
    };
    let e = p.sum()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// The algebra an expression is read into.
trait Target: Ring {
    fn presentation(&self) -> &Presentation;
    fn generator(&self, row: usize, col: usize) -> Self::Elem;
    fn det(&self, first: bool) -> Self::Elem;
    fn det_inverse(&self, first: bool) -> Option<Self::Elem>;
}

impl Target for Presentation {
    fn presentation(&self) -> &Presentation {
        self
    }
    fn generator(&self, row: usize, col: usize) -> Element {
        self.gen_element(self.a(row, col))
    }
    fn det(&self, first: bool) -> Element {
        use superhopf::determinants::{block_det, Block};
        block_det(self, if first { Block::B11 } else { Block::B22 })
    }
    fn det_inverse(&self, _first: bool) -> Option<Element> {
        None
    }
}

impl Target for Localization {
    fn presentation(&self) -> &Presentation {
        Localization::presentation(self)
    }
    fn generator(&self, row: usize, col: usize) -> LocElement {
        self.a(row, col)
    }
    fn det(&self, first: bool) -> LocElement {
        use superhopf::determinants::Block;
        LocElement::from_element(Localization::det(self, if first { Block::B11 } else { Block::B22 }))
    }
    fn det_inverse(&self, first: bool) -> Option<LocElement> {
        Some(if first {
            LocElement::dm_inv()
        } else {
            LocElement::dn_inv()
        })
    }
}

fn eval<T: Target>(t: &T, e: &Expr) -> Result<T::Elem> {
    let p = t.presentation();
    Ok(match e {
        Expr::Num(r) => t.scale(&t.one(), &Laurent::constant(r.clone())),
        Expr::Q => t.scale(&t.one(), &t.q_pow(1)),
        Expr::Gen { row, col, xi, pos } => {
            let (row, col) = (*row, *col);
            let name = if *xi { "xi" } else { "x" };
            if row == 0 || col == 0 || row > p.size() || col > p.size() {
                return Err(Error::UnknownGenerator(format!("{name}[{row},{col}] at {pos}")));
            }
            let odd = p.is_odd(p.a(row, col));
            if odd != *xi {
                let want = if odd { "xi" } else { "x" };
                return Err(Error::UnknownGenerator(format!(
                    "{name}[{row},{col}] at {pos}: the generator is {} and must be written {want}",
                    if odd { "odd" } else { "even" }
                )));
            }
            t.generator(row, col)
        }
        Expr::Det { first } => t.det(*first),
        Expr::Sum(xs) => {
            let mut acc = t.zero();
            for x in xs {
                acc = t.add(&acc, &eval(t, x)?);
            }
            acc
        }
        Expr::Product(xs) => {
            let mut acc = t.one();
            for x in xs {
                acc = t.mul(&acc, &eval(t, x)?);
            }
            acc
        }
        Expr::Neg(x) => t.scale(&eval(t, x)?, &Laurent::from_int(-1)),
        Expr::Pow { base, exp, pos } => {
            if matches!(**base, Expr::Q) {
                return Ok(t.scale(&t.one(), &t.q_pow(*exp)));
            }
            if let (Expr::Num(r), true) = (&**base, *exp < 0) {
                if r.is_zero() {
                    return Err(Error::Parse {
                        pos: *pos,
                        msg: "division by zero".into(),
                    });
                }
                let inv = superhopf::scalars::pow_rat(r, *exp);
                return Ok(t.scale(&t.one(), &Laurent::constant(inv)));
            }
            let factor = if *exp >= 0 {
                eval(t, base)?
            } else {
                let first = match **base {
                    Expr::Det { first } => Some(first),
                    Expr::Gen { row, col, .. } if row == col && p.m() == 1 && row == 1 => Some(true),
                    Expr::Gen { row, col, .. } if row == col && p.n() == 1 && row == p.size() => {
                        Some(false)
                    }
                    _ => None,
                };
                let Some(first) = first else {
                    return Err(Error::Parse {
                        pos: *pos,
                        msg: "only Dm, Dn or a 1x1 diagonal block can be inverted".into(),
                    });
                };
                t.det_inverse(first).ok_or_else(|| Error::Parse {
                    pos: *pos,
                    msg: "inverses need the localized algebra".into(),
                })?
            };
            let mut acc = t.one();
            for _ in 0..exp.unsigned_abs() {
                acc = t.mul(&acc, &factor);
            }
            acc
        }
    })
}

/// Parses into the polynomial algebra; the result is in normal form.
pub fn parse_element(p: &Presentation, src: &str) -> Result<Element> {
    eval(p, &parse(src)?)
}

/// Parses into the localized algebra.
pub fn parse_loc(loc: &Localization, src: &str) -> Result<LocElement> {
    eval(loc, &parse(src)?)
}

/// One term of the canonical JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JsonTerm {
    pub word: Vec<[usize; 2]>,
    pub coeff: String,
    #[serde(skip_serializing_if = "is_zero_u32")]
    pub dm_inv: u32,
    #[serde(skip_serializing_if = "is_zero_u32")]
    pub dn_inv: u32,
}

fn is_zero_u32(v: &u32) -> bool {
    *v == 0
}

fn json_term(p: &Presentation, k: &LocKey, c: &Laurent) -> JsonTerm {
    JsonTerm {
        word: k
            .word
            .iter()
            .map(|l| {
                let g = p.generator(*l);
                [g.row, g.col]
            })
            .collect(),
        coeff: c.to_string(),
        dm_inv: k.dm,
        dn_inv: k.dn,
    }
}

pub fn element_json(p: &Presentation, e: &Element) -> Vec<JsonTerm> {
    e.terms()
        .map(|(w, c)| json_term(p, &LocKey::new(w.clone(), 0, 0), c))
        .collect()
}

pub fn loc_json(loc: &Localization, x: &LocElement) -> Vec<JsonTerm> {
    x.terms()
        .map(|(k, c)| json_term(loc.presentation(), k, c))
        .collect()
}
