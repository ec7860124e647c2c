//! Commutative multivariate polynomials over ℚ, used for determinants of
//! pencils at generic matrices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Rational};

type Exps = Vec<u16>;

/// Polynomial in named commuting variables.
#[derive(Clone, PartialEq, Eq)]
pub struct CPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Exps, Rational>,
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // constant first, then by total degree
        let mut items: Vec<(&Exps, &Rational)> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            let da: u32 = a.0.iter().map(|&e| e as u32).sum();
            let db: u32 = b.0.iter().map(|&e| e as u32).sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        for (i, (e, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { self.vars[v].clone() } else { format!("{}^{}", self.vars[v], k) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl CPoly {
    pub fn zero_in(vars: Arc<Vec<String>>) -> Self {
        CPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant_in(vars: Arc<Vec<String>>, c: Rational) -> Self {
        let mut p = Self::zero_in(vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c);
        p
    }

    /// The `i`-th variable.
    pub fn var_in(vars: Arc<Vec<String>>, i: usize) -> Self {
        let n = vars.len();
        assert!(i < n);
        let mut e = vec![0; n];
        e[i] = 1;
        let mut p = Self::zero_in(vars);
        p.add_term(e, Rational::one());
        p
    }

    /// Variables named `v1, …, vk` given as a list.
    pub fn variables(names: &[&str]) -> Arc<Vec<String>> {
        Arc::new(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&k| k as usize).sum()).max()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&vec![0; self.vars.len()]).cloned().unwrap_or_else(Rational::zero)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.vars, &o.vars) && self.vars != o.vars {
            return Err(Error::VariableCount(self.vars.len(), o.vars.len()));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), -c.clone());
        }
        Ok(p)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut acc: HashMap<Exps, Rational> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                acc.entry(e).and_modify(|v| *v += &c).or_insert(c);
            }
        }
        Ok(CPoly {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero_in(self.vars.clone());
        }
        CPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    /// `self += s * o` in place (same variables assumed).
    fn add_scaled_product(&mut self, s: &Rational, a: &CPoly, b: &CPoly) {
        for (ea, ca) in &a.terms {
            let sa = s * ca;
            for (eb, cb) in &b.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                self.add_term(e, &sa * cb);
            }
        }
    }

    /// Value at a rational point (one coordinate per variable).
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::dim(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

/// Determinant of a square matrix of polynomials, by division-free expansion
/// over row prefixes memoized on the set of used columns (n·2ⁿ products, sparse
/// entries skipped). Sizes above 20 are refused.
pub fn det_cpoly(m: &[Vec<CPoly>]) -> Result<CPoly> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::dim("det_cpoly needs a square matrix"));
    }
    if n > 20 {
        return Err(Error::SizeCap { size: n, cap: 20 });
    }
    let Some(first) = m.first().and_then(|r| r.first()) else {
        return Err(Error::dim("det_cpoly of an empty matrix needs a variable set"));
    };
    let vars = first.vars.clone();
    for r in m {
        for p in r {
            first.check(p)?;
        }
    }
    let mut layer: HashMap<u32, CPoly> = HashMap::new();
    layer.insert(0, CPoly::constant_in(vars.clone(), Rational::one()));
    for row in m.iter() {
        let mut next: HashMap<u32, CPoly> = HashMap::new();
        let mut masks: Vec<u32> = layer.keys().copied().collect();
        masks.sort_unstable();
        for mask in masks {
            let minor = &layer[&mask];
            for (col, entry) in row.iter().enumerate() {
                if mask & (1 << col) != 0 || entry.is_zero() {
                    continue;
                }
                let inversions = (mask >> (col + 1)).count_ones();
                let sign = if inversions % 2 == 0 { Rational::one() } else { -Rational::one() };
                let slot = next
                    .entry(mask | (1 << col))
                    .or_insert_with(|| CPoly::zero_in(vars.clone()));
                slot.add_scaled_product(&sign, minor, entry);
            }
        }
        next.retain(|_, p| !p.is_zero());
        layer = next;
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    Ok(layer.remove(&full).unwrap_or_else(|| CPoly::zero_in(vars)))
}
