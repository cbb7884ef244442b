//! Tropical polynomials in three variables, max-plus convention.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::{in_gamma, parse_rat, LatticePoint3, Perm4, QPoint3, Rat};

/// `max_a (λ_a + ⟨a, x⟩)` over a finite support in N₀³.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalPolynomial {
    terms: BTreeMap<LatticePoint3, Rat>,
    degree: u32,
}

/// Value of a polynomial at a point together with every maximizing exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rat,
    pub argmax: BTreeSet<LatticePoint3>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub allow_degree_zero: bool,
}

impl TropicalPolynomial {
    /// Builds a polynomial from its terms. The degree is the largest total
    /// exponent.
    pub fn new(terms: BTreeMap<LatticePoint3, Rat>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Invalid("polynomial has no terms".into()));
        }
        if let Some(a) = terms.keys().find(|a| a.x < 0 || a.y < 0 || a.z < 0) {
            return Err(Error::NegativeExponent(a.to_string()));
        }
        let degree = terms.keys().map(|a| a.total()).max().unwrap_or(0) as u32;
        Ok(Self { terms, degree })
    }

    pub fn from_terms<I: IntoIterator<Item = (LatticePoint3, Rat)>>(it: I) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (a, c) in it {
            if terms.insert(a, c).is_some() {
                return Err(Error::DuplicateExponent(a.to_string()));
            }
        }
        Self::new(terms)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, ParseOptions::default())
    }

    pub fn parse_with(text: &str, opts: ParseOptions) -> Result<Self> {
        let f = Parser::new(text).polynomial()?;
        if f.degree == 0 && !opts.allow_degree_zero {
            return Err(Error::DegreeZero);
        }
        Ok(f)
    }

    pub fn terms(&self) -> &BTreeMap<LatticePoint3, Rat> {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficient(&self, a: LatticePoint3) -> Option<&Rat> {
        self.terms.get(&a)
    }

    pub fn support(&self) -> Vec<LatticePoint3> {
        self.terms.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, p: &QPoint3) -> Evaluation {
        let mut best: Option<Rat> = None;
        let mut argmax = BTreeSet::new();
        for (a, c) in &self.terms {
            let v = c + a.pair(p);
            match &best {
                Some(b) if v < *b => {}
                Some(b) if v == *b => {
                    argmax.insert(*a);
                }
                _ => {
                    best = Some(v);
                    argmax.clear();
                    argmax.insert(*a);
                }
            }
        }
        Evaluation { value: best.expect("polynomial has terms"), argmax }
    }

    /// Whether the maximum at `p` is attained at least twice.
    pub fn vanishes_at(&self, p: &QPoint3) -> bool {
        self.evaluate(p).argmax.len() >= 2
    }

    /// Homogenize in degree `δ`, permute the four variables, dehomogenize.
    pub fn s4_action(&self, sigma: Perm4) -> TropicalPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (sigma.act_on_point(*a, self.degree), c.clone()))
            .collect();
        TropicalPolynomial { terms, degree: self.degree }
    }

    /// Whether every exponent lies in the simplex of degree `δ` and its four
    /// corners all occur.
    pub fn has_full_simplex_newton_polytope(&self) -> bool {
        let d = self.degree;
        self.terms.keys().all(|a| in_gamma(*a, d))
            && crate::lattice::gamma_vertices(d).iter().all(|v| self.terms.contains_key(v))
    }

    /// Canonical text, terms in descending total degree then descending
    /// lexicographic exponent order.
    pub fn render(&self) -> String {
        let mut keys: Vec<&LatticePoint3> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.total().cmp(&a.total()).then(b.cmp(a)));
        let mut out = String::new();
        for (i, a) in keys.into_iter().enumerate() {
            let c = &self.terms[a];
            let cs = if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            if i > 0 {
                out.push_str(if c.is_negative() { " " } else { " + " });
            }
            out.push_str(&cs);
            for (v, e) in [('x', a.x), ('y', a.y), ('z', a.z)] {
                match e {
                    0 => {}
                    1 => {
                        out.push('*');
                        out.push(v);
                    }
                    _ => out.push_str(&format!("*{v}^{e}")),
                }
            }
        }
        out
    }
}

impl fmt::Display for TropicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for TropicalPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Recursive-descent parser.
///
/// A term is an optional sign, an optional coefficient, then variables with
/// optional `^k`, with `*` between factors optional. A signed term without a
/// coefficient (`-z`) has coefficient `±1`, which is how printed examples
/// abbreviate unit coefficients. A `-` between terms starts a new term with a
/// negative coefficient.
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self { src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn polynomial(&mut self) -> Result<TropicalPolynomial> {
        let mut terms = BTreeMap::new();
        let mut first = true;
        loop {
            let start = self.pos;
            let neg = match self.peek() {
                Some(b'+') if !first => {
                    self.pos += 1;
                    match self.peek() {
                        Some(b'-') => {
                            self.pos += 1;
                            true
                        }
                        _ => false,
                    }
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                None if first => return self.err("empty polynomial"),
                None => return self.err("dangling operator"),
                _ if first => false,
                _ => return self.err("expected '+' or '-' between terms"),
            };
            let (a, c) = self.term(neg)?;
            if terms.insert(a, c).is_some() {
                self.pos = start;
                return Err(Error::DuplicateExponent(a.to_string()));
            }
            first = false;
            if self.peek().is_none() {
                break;
            }
        }
        TropicalPolynomial::new(terms)
    }

    fn term(&mut self, neg: bool) -> Result<(LatticePoint3, Rat)> {
        let coef = self.coefficient()?;
        let had_coef = coef.is_some();
        let mut exps = [None::<i64>; 3];
        let mut any_var = false;
        loop {
            match self.peek() {
                Some(b'*') => {
                    if !had_coef && !any_var {
                        return self.err("'*' without a preceding factor");
                    }
                    self.pos += 1;
                    match self.peek() {
                        Some(b'x' | b'y' | b'z') => {}
                        _ => return self.err("expected a variable after '*'"),
                    }
                }
                Some(v @ (b'x' | b'y' | b'z')) => {
                    let var_pos = self.pos;
                    self.pos += 1;
                    let e = self.exponent()?;
                    let k = (v - b'x') as usize;
                    if exps[k].is_some() {
                        self.pos = var_pos;
                        return self.err(format!("variable '{}' repeated in one term", v as char));
                    }
                    exps[k] = Some(e);
                    any_var = true;
                }
                _ => break,
            }
        }
        if !had_coef && !any_var {
            return self.err("expected a coefficient or a variable");
        }
        let mut c = coef.unwrap_or_else(Rat::one);
        if neg {
            c = -c;
        }
        let a = LatticePoint3::new(exps[0].unwrap_or(0), exps[1].unwrap_or(0), exps[2].unwrap_or(0));
        Ok((a, c))
    }

    fn coefficient(&mut self) -> Result<Option<Rat>> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        let digits = |s: &[u8], mut i: usize| {
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        end = digits(self.src, end);
        if end == start {
            if self.src.get(start) == Some(&b'.') {
                return self.err("coefficient must start with a digit");
            }
            return Ok(None);
        }
        if self.src.get(end) == Some(&b'.') {
            let e2 = digits(self.src, end + 1);
            if e2 == end + 1 {
                self.pos = end;
                return self.err("expected digits after decimal point");
            }
            end = e2;
        } else if self.src.get(end) == Some(&b'/') {
            let e2 = digits(self.src, end + 1);
            if e2 == end + 1 {
                self.pos = end + 1;
                return self.err("expected denominator");
            }
            end = e2;
        }
        let text = std::str::from_utf8(&self.src[start..end]).expect("ascii");
        match parse_rat(text) {
            Some(r) => {
                self.pos = end;
                Ok(Some(r))
            }
            None => self.err(format!("invalid coefficient '{text}'")),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'-') {
            return Err(Error::NegativeExponent(format!("at byte {}", self.pos)));
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected exponent after '^'");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<i64>().or_else(|_| {
            self.pos = start;
            self.err("exponent too large")
        })
    }
}
