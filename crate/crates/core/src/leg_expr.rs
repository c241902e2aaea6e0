//! A small language for leg-numbered operator words such as
//! `W[1,3] U[2,3] V*[3,4] F[2,4] V[3,4]`.
//!
//! Grammar: `word := term+`, `term := NAME '*'? '[' INT (',' INT)* ']' '*'?`.
//! The star may precede or follow the bracket; printing always puts it
//! before. Textual order is composition order: the leftmost factor acts last.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::report::{CheckReport, DEFAULT_TOL};
use crate::tensor::{embed, is_unitary, residual, ComplexMatrix, SpaceSignature};

#[derive(Clone, Debug)]
pub struct Binding {
    pub op: ComplexMatrix,
    /// Leg dimensions the operator expects.
    pub arity: Vec<usize>,
}

/// Named unitaries with their leg arities.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    bindings: BTreeMap<String, Binding>,
    tol: f64,
}

impl Default for SymbolTable {
    fn default() -> Self {
        SymbolTable::new(DEFAULT_TOL)
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SymbolTable {
    /// An empty table whose unitarity check uses `tol`.
    pub fn new(tol: f64) -> Self {
        SymbolTable {
            bindings: BTreeMap::new(),
            tol,
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Binds `name`, replacing any earlier binding.
    pub fn insert(&mut self, name: &str, op: ComplexMatrix, arity: &[usize]) -> Result<()> {
        if !valid_name(name) {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("invalid symbol name `{name}`"),
            });
        }
        let sig = SpaceSignature::new(arity.to_vec())?;
        if !op.is_square() || op.rows() != sig.total() {
            return Err(Error::mismatch(
                format!("binding `{name}` on {sig}"),
                sig.total(),
                op.rows(),
            ));
        }
        let (ok, r) = is_unitary(&op, self.tol);
        if !ok {
            return Err(Error::NotUnitary {
                what: format!("binding `{name}`"),
                residual: r,
            });
        }
        self.bindings.insert(
            name.to_string(),
            Binding {
                op,
                arity: arity.to_vec(),
            },
        );
        Ok(())
    }

    /// Builder form of [`SymbolTable::insert`].
    pub fn with(mut self, name: &str, op: ComplexMatrix, arity: &[usize]) -> Result<Self> {
        self.insert(name, op, arity)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub name: String,
    pub star: bool,
    pub legs: Vec<usize>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}[", self.name, if self.star { "*" } else { "" })?;
        for (i, l) in self.legs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// A validated product of placed operators on a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegWord {
    terms: Vec<Term>,
    signature: SpaceSignature,
}

impl LegWord {
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    /// The word `self · other`.
    pub fn concat(&self, other: &LegWord) -> Result<LegWord> {
        if self.signature != other.signature {
            return Err(Error::InvalidSignature(format!(
                "cannot concatenate words on {} and {}",
                self.signature, other.signature
            )));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(LegWord {
            terms,
            signature: self.signature.clone(),
        })
    }
}

impl fmt::Display for LegWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn name(&mut self) -> Result<&'a str> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => Ok(self.take_while(|c| c.is_ascii_alphanumeric() || c == '_')),
            Some(c) => self.err(format!("unexpected character `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            self.pos = start;
            return self.err("expected a leg number");
        }
        digits.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("leg number `{digits}` too large"),
        })
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

/// Parses `text` into a word validated against `table` and `sig`.
pub fn parse(text: &str, table: &SymbolTable, sig: &SpaceSignature) -> Result<LegWord> {
    let mut lx = Lexer { src: text, pos: 0 };
    let mut terms = Vec::new();
    while !lx.at_end() {
        let start = lx.pos;
        let name = lx.name()?;
        let mut star = lx.eat('*');
        lx.expect('[')?;
        let mut legs = vec![lx.int()?];
        while lx.eat(',') {
            legs.push(lx.int()?);
        }
        lx.expect(']')?;
        if lx.eat('*') {
            if star {
                return lx.err("duplicate `*`");
            }
            star = true;
        }
        let binding = table.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        validate_term(name, &legs, binding, sig).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { pos: start, msg },
            other => other,
        })?;
        terms.push(Term {
            name: name.to_string(),
            star,
            legs,
        });
    }
    if terms.is_empty() {
        return lx.err("empty word");
    }
    Ok(LegWord {
        terms,
        signature: sig.clone(),
    })
}

fn validate_term(name: &str, legs: &[usize], binding: &Binding, sig: &SpaceSignature) -> Result<()> {
    if legs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("legs of `{name}` must be strictly increasing: {legs:?}"),
        });
    }
    if let Some(&bad) = legs.iter().find(|&&l| l == 0 || l > sig.num_legs()) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("leg {bad} of `{name}` outside signature {sig}"),
        });
    }
    if legs.len() != binding.arity.len() {
        return Err(Error::mismatch(
            format!("number of legs of `{name}`"),
            binding.arity.len(),
            legs.len(),
        ));
    }
    for (&l, &d) in legs.iter().zip(&binding.arity) {
        if sig.dim(l) != d {
            return Err(Error::mismatch(format!("leg {l} of `{name}`"), d, sig.dim(l)));
        }
    }
    Ok(())
}

/// The product of the embedded terms, leftmost factor leftmost.
pub fn evaluate(w: &LegWord, table: &SymbolTable) -> Result<ComplexMatrix> {
    let mut acc: Option<ComplexMatrix> = None;
    for t in &w.terms {
        let binding = table.get(&t.name).ok_or_else(|| Error::UnknownSymbol(t.name.clone()))?;
        validate_term(&t.name, &t.legs, binding, &w.signature)?;
        let op = if t.star {
            binding.op.adjoint()
        } else {
            binding.op.clone()
        };
        let placed = embed(&op, &t.legs, &w.signature)?;
        acc = Some(match acc {
            None => placed,
            Some(a) => &a * &placed,
        });
    }
    acc.ok_or_else(|| Error::Parse {
        pos: 0,
        msg: "empty word".into(),
    })
}

/// Compares two words on the same signature.
pub fn check_equation(lhs: &LegWord, rhs: &LegWord, table: &SymbolTable, tol: f64) -> Result<CheckReport> {
    if lhs.signature != rhs.signature {
        return Err(Error::InvalidSignature(format!(
            "equation sides live on {} and {}",
            lhs.signature, rhs.signature
        )));
    }
    let r = residual(&evaluate(lhs, table)?, &evaluate(rhs, table)?)?;
    Ok(CheckReport::leaf(format!("{lhs} = {rhs}"), r, tol))
}

/// Parses and checks `lhs = rhs` in one step.
pub fn check_str(lhs: &str, rhs: &str, table: &SymbolTable, sig: &SpaceSignature, tol: f64) -> Result<CheckReport> {
    check_equation(&parse(lhs, table, sig)?, &parse(rhs, table, sig)?, table, tol)
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str, table: &SymbolTable, sig: &SpaceSignature) -> Result<ComplexMatrix> {
    evaluate(&parse(text, table, sig)?, table)
}
