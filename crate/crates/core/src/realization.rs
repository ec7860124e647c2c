//! Fornasini–Marchesini realizations `r = δ + cᵀ(I − Σ A_j x_j)⁻¹ Σ b_j x_j`.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::is_jointly_nilpotent;
use crate::error::{Error, Result};
use crate::matrix::{serde_mat, QMatrix};
use crate::ncpoly::{NCPoly, Word};
use crate::rational::{fmt_rational, serde_q, vecops, QVector, Rational};
use crate::subspace::EchelonBasis;
use crate::tuple::{MatrixTuple, MonicPencil};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RealizationJson", into = "RealizationJson")]
pub struct Realization {
    g: usize,
    delta: Rational,
    c: QVector,
    a: MatrixTuple,
    b: Vec<QVector>,
}

#[derive(Serialize, Deserialize)]
struct RealizationJson {
    g: usize,
    d: usize,
    #[serde(with = "serde_q")]
    delta: Rational,
    #[serde(with = "serde_q::vec")]
    c: QVector,
    #[serde(rename = "A", with = "serde_mat::list")]
    a: Vec<QMatrix>,
    #[serde(with = "serde_q::vecvec")]
    b: Vec<QVector>,
}

impl TryFrom<RealizationJson> for Realization {
    type Error = Error;
    fn try_from(j: RealizationJson) -> Result<Self> {
        if j.a.len() != j.g {
            return Err(Error::dim(format!("g = {} but {} matrices in A", j.g, j.a.len())));
        }
        Realization::new(j.delta, j.c, MatrixTuple::with_size(j.d, j.a)?, j.b)
    }
}

impl From<Realization> for RealizationJson {
    fn from(r: Realization) -> Self {
        RealizationJson { g: r.g, d: r.d(), delta: r.delta, c: r.c, a: r.a.into_mats(), b: r.b }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub controllable_dim: usize,
    pub observable_dim: usize,
    pub minimal: bool,
}

/// Breadth-first Krylov closure: start vectors, then `A_i v` for every new `v`,
/// letters ascending. Each accepted vector remembers how it was reached.
pub(crate) struct Krylov {
    pub basis: EchelonBasis,
    /// `(start index, letters applied in order)` per accepted vector
    pub paths: Vec<(usize, Vec<usize>)>,
    pub raw: Vec<QVector>,
}

pub(crate) fn krylov(a: &MatrixTuple, starts: &[QVector]) -> Krylov {
    let n = a.n();
    let mut basis = EchelonBasis::new(n);
    let mut paths = Vec::new();
    let mut raw = Vec::new();
    for (i, v) in starts.iter().enumerate() {
        if basis.dim() < n && basis.insert(v) {
            paths.push((i, Vec::new()));
            raw.push(v.clone());
        }
    }
    let mut head = 0;
    while head < raw.len() && basis.dim() < n {
        let v = raw[head].clone();
        let path = paths[head].clone();
        head += 1;
        for (i, m) in a.mats().iter().enumerate() {
            let w = m.mul_vec(&v);
            if basis.insert(&w) {
                let mut p = path.clone();
                p.1.push(i);
                paths.push(p);
                raw.push(w);
            }
        }
    }
    Krylov { basis, paths, raw }
}

impl Realization {
    pub fn new(delta: Rational, c: QVector, a: MatrixTuple, b: Vec<QVector>) -> Result<Self> {
        let d = a.n();
        let g = a.g();
        if c.len() != d {
            return Err(Error::dim(format!("c has length {} but the state size is {d}", c.len())));
        }
        if b.len() != g {
            return Err(Error::dim(format!("expected {g} input vectors, got {}", b.len())));
        }
        if b.iter().any(|v| v.len() != d) {
            return Err(Error::dim("input vectors must have the state size"));
        }
        Ok(Realization { g, delta, c, a, b })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn d(&self) -> usize {
        self.a.n()
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn c(&self) -> &QVector {
        &self.c
    }

    pub fn a(&self) -> &MatrixTuple {
        &self.a
    }

    pub fn b(&self) -> &[QVector] {
        &self.b
    }

    /// The pencil `I − Σ A_j x_j`; `None` for size 0.
    pub fn pencil(&self) -> Option<MonicPencil> {
        (self.d() > 0).then(|| MonicPencil::new(self.a.clone()).unwrap())
    }

    /// `T` acting on the state: `(δ, T⁻ᵀc, T A T⁻¹, T b)`.
    pub fn conjugate(&self, t: &QMatrix) -> Result<Realization> {
        let t_inv = t.inverse().ok_or_else(|| Error::pre("similarity must be invertible"))?;
        Ok(Realization {
            g: self.g,
            delta: self.delta.clone(),
            c: t_inv.vec_mul(&self.c),
            a: self.a.conjugate(t, &t_inv),
            b: self.b.iter().map(|v| t.mul_vec(v)).collect(),
        })
    }

    /// Value at a matrix point; fails when `L(X)` is singular.
    pub fn eval(&self, xs: &[QMatrix]) -> Result<QMatrix> {
        if xs.len() != self.g {
            return Err(Error::dim(format!("expected {} matrices, got {}", self.g, xs.len())));
        }
        let n = xs.first().map(|x| x.rows()).unwrap_or(1);
        let d = self.d();
        let mut out = QMatrix::scalar(n, &self.delta);
        if d == 0 {
            return Ok(out);
        }
        let l = MonicPencil::new(self.a.clone())?.eval(xs)?;
        let mut bx = QMatrix::zeros(d * n, n);
        for (bj, x) in self.b.iter().zip(xs) {
            bx = &bx + &QMatrix::from_cols(d, std::slice::from_ref(bj)).kron(x);
        }
        let y = l.solve(&bx).filter(|_| !l.det().is_zero()).ok_or_else(|| {
            Error::pre("the point lies in the free locus of the realization's pencil")
        })?;
        let cx = QMatrix::new(1, d, self.c.clone()).kron(&QMatrix::identity(n));
        out = &out + &(&cx * &y);
        Ok(out)
    }

    pub fn controllability(&self) -> EchelonBasis {
        krylov(&self.a, &self.b).basis
    }

    pub fn observability(&self) -> EchelonBasis {
        krylov(&self.a.transpose(), std::slice::from_ref(&self.c)).basis
    }

    pub fn report(&self) -> RealizationReport {
        let controllable_dim = self.controllability().dim();
        let observable_dim = self.observability().dim();
        let d = self.d();
        RealizationReport {
            controllable_dim,
            observable_dim,
            minimal: controllable_dim == d && observable_dim == d,
        }
    }
}

pub fn is_minimal(r: &Realization) -> RealizationReport {
    r.report()
}

pub fn realize_scalar(g: usize, alpha: Rational) -> Realization {
    Realization { g, delta: alpha, c: vec![], a: MatrixTuple::zeros(0, g), b: vec![vec![]; g] }
}

/// `x_j` with `j` 0-based.
pub fn realize_variable(g: usize, j: usize) -> Result<Realization> {
    if j >= g {
        return Err(Error::dim(format!("variable x{} out of range for g = {g}", j + 1)));
    }
    let b = (0..g).map(|i| vec![if i == j { Rational::one() } else { Rational::zero() }]).collect();
    Ok(Realization { g, delta: Rational::zero(), c: vec![Rational::one()], a: MatrixTuple::zeros(1, g), b })
}

fn check_g(r1: &Realization, r2: &Realization) -> Result<()> {
    if r1.g != r2.g {
        return Err(Error::VariableCount(r1.g, r2.g));
    }
    Ok(())
}

pub fn realize_scaled(r: &Realization, alpha: &Rational) -> Realization {
    Realization {
        g: r.g,
        delta: &r.delta * alpha,
        c: vecops::scale(&r.c, alpha),
        a: r.a.clone(),
        b: r.b.clone(),
    }
}

pub fn realize_sum(r1: &Realization, r2: &Realization) -> Result<Realization> {
    check_g(r1, r2)?;
    let mut c = r1.c.clone();
    c.extend(r2.c.iter().cloned());
    let b = r1.b.iter().zip(&r2.b).map(|(x, y)| [x.clone(), y.clone()].concat()).collect();
    Ok(Realization { g: r1.g, delta: &r1.delta + &r2.delta, c, a: r1.a.direct_sum(&r2.a)?, b })
}

/// `r₁·r₂`: `c = (c₁; δ₁c₂)`, `A_j = [[A₁_j, b₁_j c₂ᵀ], [0, A₂_j]]`, `b_j = (δ₂b₁_j; b₂_j)`.
pub fn realize_product(r1: &Realization, r2: &Realization) -> Result<Realization> {
    check_g(r1, r2)?;
    let (d1, d2) = (r1.d(), r2.d());
    let mut c = r1.c.clone();
    c.extend(vecops::scale(&r2.c, &r1.delta));
    let mut mats = Vec::with_capacity(r1.g);
    for j in 0..r1.g {
        let mut m = QMatrix::zeros(d1 + d2, d1 + d2);
        m.set_block(0, 0, r1.a.get(j));
        m.set_block(d1, d1, r2.a.get(j));
        m.set_block(0, d1, &QMatrix::outer(&r1.b[j], &r2.c));
        mats.push(m);
    }
    let b = (0..r1.g)
        .map(|j| [vecops::scale(&r1.b[j], &r2.delta), r2.b[j].clone()].concat())
        .collect();
    Ok(Realization { g: r1.g, delta: &r1.delta * &r2.delta, c, a: MatrixTuple::with_size(d1 + d2, mats)?, b })
}

/// `(δ⁻¹, −δ⁻¹c, A_j − δ⁻¹ b_j cᵀ, δ⁻¹ b)`.
pub fn invert_realization(r: &Realization) -> Result<Realization> {
    if r.delta.is_zero() {
        return Err(Error::pre("cannot invert a realization with zero constant term"));
    }
    let di = r.delta.recip();
    let c = vecops::scale(&r.c, &-di.clone());
    let a = MatrixTuple::with_size(
        r.d(),
        r.a.mats()
            .iter()
            .zip(&r.b)
            .map(|(m, bj)| m - &QMatrix::outer(bj, &r.c).scale(&di))
            .collect(),
    )?;
    let b = r.b.iter().map(|v| vecops::scale(v, &di)).collect();
    Ok(Realization { g: r.g, delta: di, c, a, b })
}

/// Restrict to the controllability space, then to the observability space of
/// the result.
pub fn minimize(r: &Realization) -> Realization {
    let r1 = restrict_controllable(r);
    restrict_observable(&r1)
}

fn restrict_controllable(r: &Realization) -> Realization {
    let d = r.d();
    let k = krylov(&r.a, &r.b).basis;
    if k.dim() == d {
        return r.clone();
    }
    let basis = k.vectors().to_vec();
    let m = basis.len();
    let mats = r
        .a
        .mats()
        .iter()
        .map(|a| {
            let cols: Vec<QVector> = basis.iter().map(|v| k.coords(&a.mul_vec(v))).collect();
            QMatrix::from_cols(m, &cols)
        })
        .collect();
    Realization {
        g: r.g,
        delta: r.delta.clone(),
        c: basis.iter().map(|v| vecops::dot(&r.c, v)).collect(),
        a: MatrixTuple::with_size(m, mats).unwrap(),
        b: r.b.iter().map(|v| k.coords(v)).collect(),
    }
}

fn restrict_observable(r: &Realization) -> Realization {
    let d = r.d();
    let at = r.a.transpose();
    let k = krylov(&at, std::slice::from_ref(&r.c)).basis;
    if k.dim() == d {
        return r.clone();
    }
    // new state is W x, where the rows of W span the observability space
    let rows = k.vectors().to_vec();
    let m = rows.len();
    let mats = at
        .mats()
        .iter()
        .map(|a_t| {
            let new_rows: Vec<QVector> = rows.iter().map(|w| k.coords(&a_t.mul_vec(w))).collect();
            QMatrix::from_rows(new_rows)
        })
        .collect();
    Realization {
        g: r.g,
        delta: r.delta.clone(),
        c: k.coords(&r.c),
        a: MatrixTuple::with_size(m, mats).unwrap(),
        b: r.b.iter().map(|v| rows.iter().map(|w| vecops::dot(w, v)).collect()).collect(),
    }
}

/// Realization of a polynomial on the suffix trie of its support: states are
/// the nonempty suffixes `s`, `b_j = e_{x_j}`, `A_i e_s = e_{x_i s}`, `cᵀe_s = f_s`.
/// Controllable by construction.
pub fn realize_poly(f: &NCPoly) -> Realization {
    let g = f.g();
    let mut states: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (w, _) in f.terms() {
        for start in 0..w.len() {
            let s = w.letters()[start..].to_vec();
            let next = states.len();
            states.entry(s).or_insert(next);
        }
    }
    // re-index in deglex order for reproducibility
    let mut order: Vec<Vec<usize>> = states.keys().cloned().collect();
    order.sort_by_key(|x| Word(x.clone()));
    let index: BTreeMap<Vec<usize>, usize> = order.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let d = order.len();
    let mut mats = vec![QMatrix::zeros(d, d); g];
    for (s, &col) in &index {
        for (i, m) in mats.iter_mut().enumerate() {
            let mut t = vec![i];
            t.extend_from_slice(s);
            if let Some(&row) = index.get(&t) {
                m.set(row, col, Rational::one());
            }
        }
    }
    let c = order.iter().map(|s| f.coeff(&Word(s.clone()))).collect();
    let b = (0..g)
        .map(|j| {
            let mut v = vec![Rational::zero(); d];
            if let Some(&i) = index.get(&vec![j]) {
                v[i] = Rational::one();
            }
            v
        })
        .collect();
    Realization { g, delta: f.constant_term(), c, a: MatrixTuple::with_size(d, mats).unwrap(), b }
}

/// The same polynomial assembled from constructors: each monomial as a product
/// of variables, scaled, then summed. Size equals the total length of the
/// support words.
pub fn realize_poly_by_terms(f: &NCPoly) -> Result<Realization> {
    let g = f.g();
    let mut acc = realize_scalar(g, f.constant_term());
    for (w, coef) in f.terms() {
        if w.is_empty() {
            continue;
        }
        let mut m = realize_variable(g, w.letters()[0])?;
        for &l in &w.letters()[1..] {
            m = realize_product(&m, &realize_variable(g, l)?)?;
        }
        acc = realize_sum(&acc, &realize_scaled(&m, coef))?;
    }
    Ok(acc)
}

fn check_regular(f: &NCPoly) -> Result<()> {
    let c = f.constant_term();
    if c.is_zero() {
        return Err(Error::not_regular());
    }
    if !c.is_one() {
        return Err(Error::pre(format!(
            "expected constant term 1, found {}; divide by it first",
            fmt_rational(&c)
        )));
    }
    Ok(())
}

/// Minimal realization of `f⁻¹` for `f(0) = 1`.
pub fn realize_inverse_of_poly(f: &NCPoly) -> Result<Realization> {
    check_regular(f)?;
    let r = minimize(&realize_poly(f));
    invert_realization(&r)
}

/// Expands `δ + cᵀ Σ_k (ΣA_j x_j)ᵏ (Σ b_j x_j)` for jointly nilpotent `A`.
pub fn realization_to_poly(r: &Realization) -> Result<NCPoly> {
    if !is_jointly_nilpotent(&r.a) {
        return Err(Error::pre("realization coefficients are not jointly nilpotent"));
    }
    let mut f = NCPoly::constant(r.g, r.delta.clone());
    // rows cᵀ w(A), extended on the right
    let mut frontier: Vec<(Vec<usize>, QVector)> = vec![(vec![], r.c.clone())];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, row) in frontier {
            for j in 0..r.g {
                let coef = vecops::dot(&row, &r.b[j]);
                if !coef.is_zero() {
                    let mut word = w.clone();
                    word.push(j);
                    f.add_term(Word(word), coef);
                }
            }
            for (i, m) in r.a.mats().iter().enumerate() {
                let nr = m.vec_mul(&row);
                if !vecops::is_zero(&nr) {
                    let mut word = w.clone();
                    word.push(i);
                    next.push((word, nr));
                }
            }
        }
        frontier = next;
    }
    Ok(f)
}

/// `T` with `T A⁽¹⁾ T⁻¹ = A⁽²⁾`, `T b⁽¹⁾ = b⁽²⁾`, `c⁽¹⁾ᵀ T⁻¹ = c⁽²⁾ᵀ`, read off
/// from matching controllability matrices.
pub fn similarity_between(r1: &Realization, r2: &Realization) -> Result<QMatrix> {
    if r1.g != r2.g || r1.d() != r2.d() {
        return Err(Error::pre("realizations differ in size or variable count"));
    }
    if r1.delta != r2.delta {
        return Err(Error::pre("realizations have different constant terms"));
    }
    let d = r1.d();
    let k = krylov(&r1.a, &r1.b);
    if k.basis.dim() != d {
        return Err(Error::pre("first realization is not controllable"));
    }
    let replay = |start: usize, path: &[usize]| -> QVector {
        let mut v = r2.b[start].clone();
        for &i in path {
            v = r2.a.get(i).mul_vec(&v);
        }
        v
    };
    let c1 = QMatrix::from_cols(d, &k.raw);
    let cols2: Vec<QVector> = k.paths.iter().map(|(s, p)| replay(*s, p)).collect();
    let c2 = QMatrix::from_cols(d, &cols2);
    let c1_inv = c1.inverse().expect("controllability basis is invertible");
    let t = &c2 * &c1_inv;
    let t_inv = t.inverse().ok_or_else(|| Error::pre("no similarity: realizations differ"))?;
    let ok = (0..r1.g).all(|j| (&t * r1.a.get(j)) == (r2.a.get(j) * &t) && t.mul_vec(&r1.b[j]) == r2.b[j])
        && t_inv.vec_mul(&r1.c) == r2.c;
    if !ok {
        return Err(Error::pre("no similarity: realizations differ"));
    }
    Ok(t)
}
