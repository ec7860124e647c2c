//! Noncommutative polynomials over ℚ: elements of the free algebra ℚ⟨x₁,…,x_g⟩.
//!
//! Letters are stored 0-based (`x1` is letter 0). Terms iterate in
//! degree-lexicographic order of words.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::rational::{fmt_rational, parse_rational, Rational};

/// A word in the free monoid; letters are 0-based variable indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(j: usize) -> Self {
        Word(vec![j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn ends_with(&self, o: &Word) -> bool {
        self.0.ends_with(&o.0)
    }

    /// `self` without its last `k` letters.
    pub fn truncate_right(&self, k: usize) -> Word {
        Word(self.0[..self.0.len() - k].to_vec())
    }

    /// Text form in the polynomial grammar, e.g. `x1^2*x2`; the empty word is `1`.
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let j = self.0[i];
            let mut k = i;
            while k < self.0.len() && self.0[k] == j {
                k += 1;
            }
            let run = k - i;
            if run == 1 {
                parts.push(format!("x{}", j + 1));
            } else {
                parts.push(format!("x{}^{}", j + 1, run));
            }
            i = k;
        }
        parts.join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Noncommutative polynomial in `g` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NCPoly {
    g: usize,
    terms: BTreeMap<Word, Rational>,
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (g={})", self, self.g)
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if w.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", w.render())?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), w.render())?;
            }
        }
        Ok(())
    }
}

impl NCPoly {
    pub fn zero(g: usize) -> Self {
        NCPoly { g, terms: BTreeMap::new() }
    }

    pub fn constant(g: usize, c: Rational) -> Self {
        Self::monomial(g, Word::empty(), c)
    }

    pub fn one(g: usize) -> Self {
        Self::constant(g, Rational::one())
    }

    /// The variable `x_{j+1}` (0-based index `j`).
    pub fn var(g: usize, j: usize) -> Self {
        assert!(j < g, "variable index out of range");
        Self::monomial(g, Word::letter(j), Rational::one())
    }

    pub fn monomial(g: usize, w: Word, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { g, terms }
    }

    /// Builds from (word, coefficient) pairs, summing repeats and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(g: usize, it: I) -> Self {
        let mut p = NCPoly::zero(g);
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// The same polynomial viewed in `g ≥ self.g` variables.
    pub fn with_g(&self, g: usize) -> Result<Self> {
        if g < self.g && self.support_vars().iter().any(|&j| j >= g) {
            return Err(Error::VariableCount(self.g, g));
        }
        Ok(NCPoly { g, terms: self.terms.clone() })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(w.0.iter().all(|&j| j < self.g), "letter out of range");
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|w| w.len())
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Word::empty())
    }

    /// 0-based indices of letters occurring in some term.
    pub fn support_vars(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }

    /// Leading (deglex-largest) word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Homogeneous component of degree `k`.
    pub fn homogeneous(&self, k: usize) -> NCPoly {
        NCPoly {
            g: self.g,
            terms: self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    fn check_g(&self, o: &Self) -> Result<()> {
        if self.g != o.g {
            return Err(Error::VariableCount(self.g, o.g));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_g(o)?;
        let mut p = self.clone();
        for (w, c) in &o.terms {
            p.add_term(w.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_g(o)?;
        let mut p = self.clone();
        for (w, c) in &o.terms {
            p.add_term(w.clone(), -c.clone());
        }
        Ok(p)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_g(o)?;
        let mut p = NCPoly::zero(self.g);
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                p.add_term(u.concat(v), a * b);
            }
        }
        Ok(p)
    }

    pub fn scalar_mul(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return NCPoly::zero(self.g);
        }
        NCPoly { g: self.g, terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect() }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = NCPoly::one(self.g);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact right division: returns `q` with `self = q · d`, if it exists.
    /// Uses that degree-lexicographic order is compatible with concatenation,
    /// so the leading word of `q·d` is `lead(q)·lead(d)`.
    pub fn div_right_exact(&self, d: &NCPoly) -> Option<NCPoly> {
        if self.g != d.g {
            return None;
        }
        let (lw, lc) = d.leading()?;
        let (lw, lc) = (lw.clone(), lc.clone());
        let mut r = self.clone();
        let mut quo = NCPoly::zero(self.g);
        while let Some((w, c)) = r.leading() {
            if !w.ends_with(&lw) {
                return None;
            }
            let u = w.truncate_right(lw.len());
            let coef = c / &lc;
            let step = NCPoly::monomial(self.g, u, coef);
            r = &r - &(&step * d);
            quo = &quo + &step;
        }
        Some(quo)
    }

    /// Substitution homomorphism at a tuple of equal-size square matrices.
    pub fn eval(&self, xs: &[QMatrix]) -> Result<QMatrix> {
        if xs.len() != self.g {
            return Err(Error::dim(format!("expected {} matrices, got {}", self.g, xs.len())));
        }
        let n = match xs.first() {
            Some(x) => x.rows(),
            None => {
                return Ok(QMatrix::scalar(1, &self.constant_term()));
            }
        };
        if xs.iter().any(|x| x.rows() != n || x.cols() != n) {
            return Err(Error::dim("evaluation point must be square matrices of equal size"));
        }
        let mut cache: HashMap<Vec<usize>, QMatrix> = HashMap::new();
        let mut acc = QMatrix::zeros(n, n);
        for (w, c) in &self.terms {
            let m = word_product(&w.0, xs, n, &mut cache);
            acc = &acc + &m.scale(c);
        }
        Ok(acc)
    }

    /// Parses a polynomial, taking `g` as the largest variable index used.
    pub fn parse(s: &str) -> Result<Self> {
        let p = Parser::new(s)?.parse_all()?;
        let g = p.support_vars().iter().max().map_or(0, |&j| j + 1);
        Ok(NCPoly { g, terms: p.terms })
    }

    /// Parses a polynomial in exactly `g` variables.
    pub fn parse_with_g(s: &str, g: usize) -> Result<Self> {
        let p = Self::parse(s)?;
        if p.g > g {
            return Err(Error::Parse(format!("`{s}` uses x{} but g = {g}", p.g)));
        }
        Ok(NCPoly { g, terms: p.terms })
    }
}

fn word_product(
    w: &[usize],
    xs: &[QMatrix],
    n: usize,
    cache: &mut HashMap<Vec<usize>, QMatrix>,
) -> QMatrix {
    if w.is_empty() {
        return QMatrix::identity(n);
    }
    if w.len() == 1 {
        return xs[w[0]].clone();
    }
    if let Some(m) = cache.get(w) {
        return m.clone();
    }
    let head = word_product(&w[..w.len() - 1], xs, n, cache);
    let m = &head * &xs[w[w.len() - 1]];
    cache.insert(w.to_vec(), m.clone());
    m
}

/// Product of two matrices over the free algebra.
pub fn nc_matmul(a: &[Vec<NCPoly>], b: &[Vec<NCPoly>]) -> Result<Vec<Vec<NCPoly>>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let g = a.first().and_then(|r| r.first()).map_or(0, |p| p.g());
    let mut out = Vec::with_capacity(a.len());
    for row in a {
        if row.len() != inner {
            return Err(Error::dim("inner dimensions of polynomial matrices differ"));
        }
        let mut orow = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut acc = NCPoly::zero(g);
            for (k, p) in row.iter().enumerate() {
                acc = acc.try_add(&p.try_mul(&b[k][j])?)?;
            }
            orow.push(acc);
        }
        out.push(orow);
    }
    Ok(out)
}

impl<'a> Add<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, o: &NCPoly) -> NCPoly {
        self.try_add(o).expect("variable counts must agree")
    }
}

impl<'a> Sub<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, o: &NCPoly) -> NCPoly {
        self.try_sub(o).expect("variable counts must agree")
    }
}

impl<'a> Mul<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, o: &NCPoly) -> NCPoly {
        self.try_mul(o).expect("variable counts must agree")
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scalar_mul(&-Rational::one())
    }
}

// ---- parser ---------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    src: String,
}

/// Internal polynomial with a generous letter bound; `g` is fixed afterwards.
const PARSE_G: usize = usize::MAX;

impl Parser {
    fn new(s: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let cs: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            let ch = cs[i];
            match ch {
                ' ' | '\t' | '\n' | '\r' => {
                    i += 1;
                }
                '0'..='9' => {
                    let st = i;
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                    toks.push(Tok::Num(cs[st..i].iter().collect()));
                }
                'x' => {
                    i += 1;
                    let st = i;
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                    let idx: usize = cs[st..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| Error::Parse(format!("variable without index at offset {st} in `{s}`")))?;
                    if idx == 0 {
                        return Err(Error::Parse(format!("variables are numbered from x1 in `{s}`")));
                    }
                    toks.push(Tok::Var(idx - 1));
                }
                '+' => {
                    toks.push(Tok::Plus);
                    i += 1;
                }
                '-' => {
                    toks.push(Tok::Minus);
                    i += 1;
                }
                '*' => {
                    toks.push(Tok::Star);
                    i += 1;
                }
                '/' => {
                    toks.push(Tok::Slash);
                    i += 1;
                }
                '^' => {
                    toks.push(Tok::Caret);
                    i += 1;
                }
                '(' => {
                    toks.push(Tok::LParen);
                    i += 1;
                }
                ')' => {
                    toks.push(Tok::RParen);
                    i += 1;
                }
                other => {
                    return Err(Error::Parse(format!("unexpected character `{other}` in `{s}`")));
                }
            }
        }
        if toks.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        Ok(Parser { toks, pos: 0, src: s.to_string() })
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn parse_all(mut self) -> Result<NCPoly> {
        let p = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<NCPoly> {
        let mut acc = NCPoly::zero(PARSE_G);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NCPoly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NCPoly> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(e)) => {
                    let e: usize = e.parse().map_err(|_| self.err("bad exponent"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected exponent")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<NCPoly> {
        match self.next() {
            Some(Tok::Num(n)) => {
                let mut text = n;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Num(d)) => {
                            text = format!("{text}/{d}");
                        }
                        _ => return Err(self.err("expected denominator")),
                    }
                }
                Ok(NCPoly::constant(PARSE_G, parse_rational(&text)?))
            }
            Some(Tok::Var(j)) => Ok(NCPoly::monomial(PARSE_G, Word::letter(j), Rational::one())),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(self.err("expected `)`")),
                }
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}
